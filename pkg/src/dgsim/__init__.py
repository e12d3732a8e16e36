"""Doebner-Goldin dynamics through the gauge map ``N_D`` and the observables it induces."""

from .dynamics import (
    DgCoefficients,
    evolve_dg,
    evolve_dg_direct,
    evolve_dg_two_particle,
    free_dg_evolve,
    hamiltonian_conjugation_gap,
)
from .errors import DgsimError
from .gauge import GaugeParam, apply_gauge, gauge_inverse_check
from .gpvm import (
    Gpvm,
    apply_effect,
    check_gpvm_axioms,
    conservation_residual,
    expectation,
    measure_prob,
    momentum_observable,
    position_observable,
    sequential_prob,
    vector_additivity_probe,
)
from .grid import (
    DensityCurrent,
    Grid1D,
    WaveFn,
    WaveFn2,
    density_current,
    inner_product,
    make_grid,
    norm,
    normalize,
    partial_statistic,
    tensor_product,
)
from .intervals import IntervalSet
from .propagators import (
    Potential,
    StepConfig,
    free_evolve,
    momentum_projection,
    position_projection,
    split_step_evolve,
)

__version__ = "0.1.0"
