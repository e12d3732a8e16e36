"""Generalized projection-valued measures built from position and momentum.

A :class:`Gpvm` realizes the family of effects

    E_B = N_D o chi_B(A) o N_{-D}

for ``A`` the position or momentum operator.  The effects are nonlinear
for momentum when ``D != 0``, yet their squared-norm ratios
``mu(B) = ||E_B psi||^2 / ||psi||^2`` still form a probability measure,
``E_B1 o E_B2 = E_{B1 & B2}``, and ``mu(B) = 1`` forces ``E_B psi = psi``.
For position the gauge factors cancel and ``E_B`` is multiplication by
the indicator of ``B``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .dynamics import evolve_dg, free_dg_evolve
from .errors import IntervalError, ZeroStateError
from .gauge import apply_gauge, gauge_array
from .grid import WaveFn, fourier_coefficients, inner_product, norm
from .intervals import IntervalSet, lattice_partition, validate_partition
from .propagators import Potential, StepConfig, momentum_projection, position_projection

BASES = ("position", "momentum")


@dataclass(frozen=True)
class Gpvm:
    """Effects ``N_D o chi_B(base) o N_{-D_inner}``.

    ``D_inner`` defaults to ``D``.  Setting it to anything else breaks the
    conjugation and gives a family that is *not* a GPVM; it exists only as
    a negative control for the axiom checks.
    """

    base: str
    D: float = 0.0
    D_inner: float | None = None

    def __post_init__(self):
        if self.base not in BASES:
            raise ValueError(f"base must be one of {BASES}, got {self.base!r}")

    @property
    def inner(self) -> float:
        return self.D if self.D_inner is None else self.D_inner

    @property
    def matched(self) -> bool:
        return self.inner == self.D

    def effect(self, region, psi: WaveFn) -> WaveFn:
        region = IntervalSet.coerce(region)
        if self.base == "position" and self.matched:
            return position_projection(psi, region)
        project = position_projection if self.base == "position" else momentum_projection
        return apply_gauge(project(apply_gauge(psi, -self.inner), region), self.D)

    def lattice(self, psi: WaveFn) -> np.ndarray:
        return psi.grid.x if self.base == "position" else psi.grid.p

    def distribution(self, psi: WaveFn) -> tuple[np.ndarray, np.ndarray]:
        """Lattice points and the probability carried by each (natural order).

        Summing the weights over the points inside ``B`` gives ``mu(B)``.
        """
        total = norm(psi) ** 2
        if total == 0:
            raise ZeroStateError("distribution of the zero state")
        if self.base == "position":
            weights = psi.grid.dx * np.abs(psi.amps) ** 2 / total
            return psi.grid.x, weights
        phi = psi.with_amps(gauge_array(psi.amps, -self.inner))
        weights = np.abs(fourier_coefficients(phi)) ** 2 / total
        return psi.grid.p, weights


def position_observable(D: float = 0.0) -> Gpvm:
    return Gpvm("position", D)


def momentum_observable(D: float = 0.0) -> Gpvm:
    return Gpvm("momentum", D)


def apply_effect(a: Gpvm, region, psi: WaveFn) -> WaveFn:
    """``E_B(psi)``: the Lüders collapse for a positive test of ``B``."""
    return a.effect(region, psi)


def _require_nonzero(psi: WaveFn) -> float:
    total = norm(psi) ** 2
    if total == 0:
        raise ZeroStateError("probability of the zero state is undefined")
    return total


def measure_prob(a: Gpvm, region, psi: WaveFn) -> float:
    """``mu(B) = ||E_B psi||^2 / ||psi||^2``."""
    total = _require_nonzero(psi)
    return norm(a.effect(region, psi)) ** 2 / total


@dataclass(frozen=True)
class ProbabilityMeasureReport:
    partition: list[IntervalSet]
    probs: np.ndarray
    total: float

    def to_dict(self) -> dict:
        return {
            "partition": [c.to_list() for c in self.partition],
            "probs": self.probs.tolist(),
            "total": self.total,
        }


def _cell_probs(a: Gpvm, psi: WaveFn, cells: Sequence[IntervalSet]) -> np.ndarray:
    points, weights = a.distribution(psi)
    return np.array([weights[c.contains(points)].sum() for c in cells])


def measure_report(a: Gpvm, psi: WaveFn, partition=None) -> ProbabilityMeasureReport:
    cells = validate_partition(partition) if partition is not None else lattice_partition(a.lattice(psi))
    probs = _cell_probs(a, psi, cells)
    return ProbabilityMeasureReport(cells, probs, float(probs.sum()))


def expectation(a: Gpvm, psi: WaveFn, partition=None, *, coverage_tol: float = 1e-10) -> float:
    """``sum_k mid(B_k) mu(B_k)`` over a partition of bounded cells.

    The default partition has one cell per lattice point, centred on it,
    which makes the sum the exact lattice expectation value.
    """
    _require_nonzero(psi)
    cells = validate_partition(partition) if partition is not None else lattice_partition(a.lattice(psi))
    mids = np.array([c.midpoint() for c in cells])
    probs = _cell_probs(a, psi, cells)
    if abs(probs.sum() - 1.0) > coverage_tol:
        raise IntervalError(f"partition covers only {probs.sum():.12g} of the probability")
    return float(mids @ probs)


def _evolve(psi: WaveFn, D: float, potential: Potential | None, t0: float, t: float,
            dt: float) -> WaveFn:
    if t == 0:
        return psi
    if potential is None or potential.is_zero:
        return free_dg_evolve(psi, D, t)
    return evolve_dg(psi, D, potential, StepConfig(dt=min(dt, t), t_final=t, t0=t0))


def sequential_prob(a1: Gpvm, b1, t1: float, a2: Gpvm, b2, t2: float, psi: WaveFn,
                    D: float, potential: Potential | None = None, *, dt: float = 1e-3,
                    check_tol: float = 1e-12) -> float:
    """Probability of passing a test of ``b1`` at ``t1`` and then of ``b2`` at ``t2``.

    Computes ``||(E2 o beta_{t2,t1} o E1 o beta_{t1})(psi)||^2 / ||psi||^2``
    and checks it against the product of the two conditional probabilities.
    """
    if not 0 <= t1 <= t2:
        raise ValueError(f"need 0 <= t1 <= t2, got t1={t1}, t2={t2}")
    total = _require_nonzero(psi)
    at_t1 = _evolve(psi, D, potential, 0.0, t1, dt)
    collapsed = a1.effect(b1, at_t1)
    at_t2 = _evolve(collapsed, D, potential, t1, t2 - t1, dt)
    final = a2.effect(b2, at_t2)
    joint = norm(final) ** 2 / total

    first = norm(collapsed) ** 2 / norm(at_t1) ** 2
    mid = norm(at_t2) ** 2
    chained = first * (norm(final) ** 2 / mid) if mid > 0 else 0.0
    if abs(chained - joint) > check_tol:
        raise RuntimeError(f"conditional chain {chained!r} disagrees with joint {joint!r}")
    return joint


@dataclass
class AxiomReport:
    additivity: float = 0.0
    normalization: float = 0.0
    composition: float = 0.0
    certainty: float = 0.0
    certainty_cases: int = 0
    details: dict = field(default_factory=dict)

    @property
    def max_residual(self) -> float:
        return max(self.additivity, self.normalization, self.composition, self.certainty)

    def to_dict(self) -> dict:
        return {
            "additivity": self.additivity,
            "normalization": self.normalization,
            "composition": self.composition,
            "certainty": self.certainty,
            "certainty_cases": self.certainty_cases,
            "max_residual": self.max_residual,
        }


def random_interval(rng: np.random.Generator, lo: float, hi: float) -> IntervalSet:
    a, b = np.sort(rng.uniform(lo, hi, size=2))
    if a == b:
        b = a + 1e-3 * (hi - lo)
    return IntervalSet.of((a, b))


def check_gpvm_axioms(a: Gpvm, samples: Sequence[WaveFn], partition, *,
                      rng: np.random.Generator | None = None, n_pairs: int = 10,
                      span: tuple[float, float] | None = None) -> AxiomReport:
    """Max residuals of the three GPVM axioms over ``samples``.

    (i) cell probabilities add up to the probability of the union (and to
    one when the partition covers the line); (ii) ``E_B1 o E_B2`` equals
    ``E_{B1 & B2}`` on random interval pairs; (iii) for ``phi = E_B psi``,
    which has ``mu_phi(B) = 1``, ``E_B phi = phi``.  Residuals of vectors
    are relative to the sample norm.
    """
    rng = rng or np.random.default_rng(0)
    cells = validate_partition(partition)
    union = cells[0]
    for c in cells[1:]:
        union = union.union(c)
    covers = union == IntervalSet.real_line()
    if span is None:
        lo, hi = union.bounds
        lo = lo if math.isfinite(lo) else -10.0
        hi = hi if math.isfinite(hi) else 10.0
        span = (lo, hi)

    report = AxiomReport()
    for psi in samples:
        nrm = norm(psi)
        if nrm == 0:
            raise ZeroStateError("axiom check needs nonzero samples")
        probs = np.array([measure_prob(a, c, psi) for c in cells])
        whole = measure_prob(a, union, psi)
        report.additivity = max(report.additivity, abs(probs.sum() - whole))
        if covers:
            report.normalization = max(report.normalization, abs(probs.sum() - 1.0))

        for _ in range(n_pairs):
            b1 = random_interval(rng, *span)
            b2 = random_interval(rng, *span)
            lhs = a.effect(b1, a.effect(b2, psi))
            rhs = a.effect(b1.intersect(b2), psi)
            report.composition = max(report.composition, norm(lhs - rhs) / nrm)

            phi = a.effect(b1, psi)
            if norm(phi) > 1e-6 * nrm:
                mu = measure_prob(a, b1, phi)
                if abs(mu - 1.0) <= 1e-10:
                    report.certainty_cases += 1
                    report.certainty = max(report.certainty, norm(a.effect(b1, phi) - phi) / norm(phi))
        full = a.effect(IntervalSet.real_line(), psi)
        report.certainty = max(report.certainty, norm(full - psi) / nrm)
        report.certainty_cases += 1
    return report


def conservation_residual(a: Gpvm, region, psi: WaveFn, D: float, t: float) -> float:
    """``||E_B(beta_{D,t} psi) - beta_{D,t}(E_B psi)|| / ||psi||`` for free dynamics."""
    nrm = math.sqrt(_require_nonzero(psi))
    lhs = a.effect(region, free_dg_evolve(psi, D, t))
    rhs = free_dg_evolve(a.effect(region, psi), D, t)
    return norm(lhs - rhs) / nrm


def vector_additivity_probe(a: Gpvm, b1, b2, psi: WaveFn) -> tuple[float, float, complex]:
    """Compare ``E_{B1 | B2}`` with ``E_B1 + E_B2`` for disjoint ``B1``, ``B2``.

    Returns the (relative) norm-additivity gap, the vector-additivity gap
    ``||E_{B1|B2} psi - E_B1 psi - E_B2 psi|| / ||psi||`` and the cross
    overlap ``<E_B1 psi | E_B2 psi> / ||psi||^2``.
    """
    b1, b2 = IntervalSet.coerce(b1), IntervalSet.coerce(b2)
    if not b1.is_disjoint(b2):
        raise IntervalError("vector additivity probe needs disjoint sets")
    total = _require_nonzero(psi)
    e1, e2 = a.effect(b1, psi), a.effect(b2, psi)
    e12 = a.effect(b1.union(b2), psi)
    norm_gap = abs(norm(e12) ** 2 - norm(e1) ** 2 - norm(e2) ** 2) / total
    vec_gap = norm(e12 - e1 - e2) / math.sqrt(total)
    cross = inner_product(e1, e2) / total
    return norm_gap, vec_gap, cross
