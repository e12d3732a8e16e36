"""Nonlinear Doebner-Goldin dynamics.

The definitional implementation conjugates the linear propagator with the
gauge intertwiner::

    beta_{D,t} = N_D o beta_{0,t} o N_{-D}

An independent check integrates the nonlinear Schrödinger equation
directly (classical RK4, spectral derivatives).  With hbar = m = 1 its
Hamiltonian is

    H(psi) = (-1/2 Laplacian + V) psi + i (D/2) (Lap rho / rho) psi
             + D (c1 div J / rho + c2 Lap rho / rho + c3 J^2 / rho^2
                  + c4 J . grad rho / rho^2 + c5 (grad rho)^2 / rho^2) psi

and the member of this family generated by ``N_D`` has
``c = (1, -D, 0, -1, D/2)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BlowUpError, NodeDetectedError
from .gauge import apply_gauge, gauge_array
from .grid import Grid1D, WaveFn, WaveFn2, inner_product, norm, spectral_derivative
from .propagators import Potential, StepConfig, free_axis, split_step_evolve, split_step_evolve2


@dataclass(frozen=True)
class DgCoefficients:
    """The five real coefficients of the generalized Doebner-Goldin functional."""

    c1: float
    c2: float
    c3: float
    c4: float
    c5: float

    @classmethod
    def linearizable(cls, D: float) -> "DgCoefficients":
        return cls(1.0, -D, 0.0, -1.0, 0.5 * D)

    def is_linearizable(self, D: float, tol: float = 1e-12) -> bool:
        return (
            abs(self.c1 - 1) <= tol
            and abs(self.c4 + 1) <= tol
            and abs(self.c3) <= tol
            and abs(self.c2 + 2 * self.c5) <= tol
            and abs(self.c2 + D) <= tol
        )

    def as_tuple(self) -> tuple[float, ...]:
        return (self.c1, self.c2, self.c3, self.c4, self.c5)


def evolve_dg(psi: WaveFn, D: float, potential: Potential | None = None,
              cfg: StepConfig | None = None) -> WaveFn:
    """``N_D(U_t(N_{-D} psi))`` with ``U_t`` the split-step linear propagator."""
    linear = split_step_evolve(apply_gauge(psi, -D), potential, cfg)
    return apply_gauge(linear, D)


def free_dg_evolve(psi: WaveFn, D: float, t: float) -> WaveFn:
    """Free (V = 0) nonlinear evolution by any real ``t``, exact on the lattice."""
    linear = free_axis(gauge_array(psi.amps, -D), psi.grid, t)
    return psi.with_amps(gauge_array(linear, D))


def evolve_dg_two_particle(state: WaveFn2, D: float, v1: Potential | None = None,
                           v2: Potential | None = None,
                           cfg: StepConfig | None = None) -> WaveFn2:
    """``N_D o (U1 (x) U2) o N_{-D}``; ``N_D`` acts on the joint density."""
    cfg = cfg or StepConfig()
    linear = split_step_evolve2(apply_gauge(state, -D), v1, v2, cfg)
    return apply_gauge(linear, D)


def _essential_arcs(rho: np.ndarray, floor: float) -> int:
    """Number of periodic runs of lattice points with ``rho >= floor * max``."""
    above = rho >= floor * rho.max()
    if above.all():
        return 1
    rises = np.count_nonzero(above & ~np.roll(above, 1))
    return int(rises)


def check_nodes(amps: np.ndarray, node_floor: float = 1e-8) -> None:
    """Raise :class:`NodeDetectedError` on exact zeros or a fragmented density.

    Gaussian tails that decay towards the periodic boundary are allowed;
    what is rejected is density vanishing exactly anywhere, or the region
    ``rho >= node_floor * max(rho)`` splitting into several pieces (an
    interior near-node).
    """
    rho = np.abs(amps) ** 2
    if not np.all(np.isfinite(rho)) or rho.max() == 0:
        raise NodeDetectedError("density is zero or non-finite")
    if np.any(rho == 0):
        raise NodeDetectedError(f"density vanishes at {np.count_nonzero(rho == 0)} lattice points")
    if _essential_arcs(rho, node_floor) != 1:
        raise NodeDetectedError(f"density dips below {node_floor:g} x max inside its support")


def dg_hamiltonian(amps: np.ndarray, grid: Grid1D, D: float, coeffs: DgCoefficients,
                   v: np.ndarray | None = None, tail_floor: float = 1e-24) -> np.ndarray:
    """Apply the generalized Doebner-Goldin Hamiltonian to lattice amplitudes.

    The density-quotient terms are dropped where ``rho < tail_floor * max``:
    there the spectral quotients are dominated by roundoff, and the
    amplitude is too small to matter.
    """
    d1 = spectral_derivative(amps, grid, 1)
    d2 = spectral_derivative(amps, grid, 2)
    conj = np.conj(amps)
    rho = np.abs(amps) ** 2
    grad_rho = 2.0 * np.real(conj * d1)
    lap_rho = 2.0 * np.real(conj * d2) + 2.0 * np.abs(d1) ** 2
    current = np.imag(conj * d1)
    div_current = np.imag(conj * d2)

    keep = rho > tail_floor * rho.max()
    r = np.where(keep, rho, 1.0)
    c1, c2, c3, c4, c5 = coeffs.as_tuple()
    real_part = D * (
        c1 * div_current / r
        + c2 * lap_rho / r
        + c3 * current**2 / r**2
        + c4 * current * grad_rho / r**2
        + c5 * grad_rho**2 / r**2
    )
    imag_part = 0.5 * D * lap_rho / r
    nonlinear = np.where(keep, real_part + 1j * imag_part, 0.0)
    out = -0.5 * d2 + nonlinear * amps
    if v is not None:
        out = out + v * amps
    return out


def evolve_dg_direct(psi: WaveFn, coeffs: DgCoefficients, D: float,
                     potential: Potential | None = None, cfg: StepConfig | None = None,
                     *, node_floor: float = 1e-8, tail_floor: float = 1e-24,
                     max_drift: float = 0.01) -> WaveFn:
    """Integrate ``i d/dt psi = H(psi)`` directly with classical RK4.

    Intended only as an oracle for :func:`evolve_dg` on smooth node-free
    data over short horizons.

    Raises
    ------
    NodeDetectedError
        If the density has exact zeros or splits into pieces, initially or mid-run.
    BlowUpError
        If the norm drifts by more than ``max_drift`` (relative) or turns non-finite.
    """
    if not coeffs.is_linearizable(D):
        raise ValueError(f"coefficients {coeffs.as_tuple()} are not the N_D family for D={D}")
    potential = potential or Potential.zero()
    cfg = cfg or StepConfig()
    grid = psi.grid
    amps = np.array(psi.amps, dtype=np.complex128)
    check_nodes(amps, node_floor)
    norm0 = np.linalg.norm(amps)
    h = cfg.step
    shape = potential.shape(grid.x)
    zero = np.zeros(grid.n)

    def rate(a, t):
        v = shape if potential.active(t) else zero
        return -1j * dg_hamiltonian(a, grid, D, coeffs, v, tail_floor)

    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(cfg.n_steps):
            t = cfg.t0 + k * h
            k1 = rate(amps, t)
            k2 = rate(amps + 0.5 * h * k1, t + 0.5 * h)
            k3 = rate(amps + 0.5 * h * k2, t + 0.5 * h)
            k4 = rate(amps + h * k3, t + h)
            amps = amps + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            drift = abs(np.linalg.norm(amps) / norm0 - 1.0)
            if not np.isfinite(drift) or drift > max_drift:
                raise BlowUpError(f"norm drift {drift:.3g} at t={t + h:.6g}")
            check_nodes(amps, node_floor)
    return psi.with_amps(amps)


def hamiltonian_conjugation_gap(psi: WaveFn, D: float, delta: float = 1e-5) -> tuple[float, float]:
    """Compare the generator of ``beta_{D,t}`` at ``t = 0`` with ``N_D H0 N_{-D}``.

    The generator ``H_D(psi) = i d/dt beta_{D,t}(psi)`` is taken by a
    Richardson-extrapolated central difference of the free nonlinear flow.

    Returns
    -------
    gap_vector_norm : float
        ``||H_D(psi) - N_D(H0(N_{-D} psi))||``.
    gap_expectation : float
        ``|<psi|H_D(psi)> - <N_{-D} psi|H0 N_{-D} psi>|``.
    """
    if np.any(np.abs(psi.amps) == 0):
        raise NodeDetectedError("hamiltonian gap needs a strictly positive density")

    def central(step):
        fwd = free_dg_evolve(psi, D, step).amps
        bwd = free_dg_evolve(psi, D, -step).amps
        return 1j * (fwd - bwd) / (2.0 * step)

    generator = psi.with_amps((4.0 * central(delta) - central(2.0 * delta)) / 3.0)
    phi = apply_gauge(psi, -D)
    h0_phi = phi.with_amps(-0.5 * spectral_derivative(phi.amps, psi.grid, 2))
    conjugated = apply_gauge(h0_phi, D)
    gap_vector = norm(generator - conjugated)
    gap_expect = abs(inner_product(psi, generator) - inner_product(phi, h0_phi))
    return gap_vector, gap_expect
