"""The nonlinear momentum observable: scattering limit, conservation, expectations.

Momentum is identified operationally: a packet whose momentum lies in
``B`` ends up, after free flight for a long time ``t``, inside ``t B``.
Pulling the position test back along the flow,

    beta_{D,-t} o chi_{tB}(x) o beta_{D,t}  ->  N_D o chi_B(p) o N_{-D},

which is the momentum GPVM ``p_D``.  It is conserved by the ``D`` flow;
the linear momentum projections ``p_0`` are not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..dynamics import free_dg_evolve
from ..errors import DomainOverflowError
from ..gauge import apply_gauge
from ..grid import WaveFn, norm
from ..gpvm import conservation_residual, expectation, measure_prob, momentum_observable
from ..intervals import IntervalSet
from ..propagators import position_projection


def _edge_mass(psi: WaveFn, fraction: float = 0.05) -> float:
    """Fraction of the norm in the outer ``fraction`` of the domain on either side."""
    x, g = psi.grid.x, psi.grid
    width = fraction * g.length
    edge = (x < g.x_min + width) | (x >= g.x_max - width)
    return float(g.dx * np.sum(np.abs(psi.amps[edge]) ** 2) / norm(psi) ** 2)


def scattering_effect(psi: WaveFn, D: float, region: IntervalSet, t: float) -> WaveFn:
    """``beta_{D,-t}(chi_{tB}(beta_{D,t} psi))`` for the free flow."""
    out = position_projection(free_dg_evolve(psi, D, t), region.scaled(t))
    return free_dg_evolve(out, D, -t)


@dataclass
class ConvergenceReport:
    D: float
    times: list[float]
    errors: list[float]
    edge_mass: list[float]
    boundary_dominated: list[bool]
    strictly_decreasing: bool
    final_over_first: float
    conjugation_residuals: list[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def momentum_convergence(D: float, region, psi: WaveFn, times: Sequence[float], *,
                         boundary_tol: float = 1e-10, overflow_tol: float = 1e-3,
                         check_conjugation: bool = True) -> ConvergenceReport:
    """Distance between the scattering effect at each ``t`` and the ``p_D`` effect.

    A time is flagged boundary-dominated when the freely evolved packet
    carries more than ``boundary_tol`` of its norm near the periodic edge;
    more than ``overflow_tol`` raises :class:`DomainOverflowError`, as does
    a scaled set ``tB`` with a finite endpoint outside the domain.

    ``conjugation_residuals`` holds, per time, the residual of the exact
    vector identity ``scatter_D(N_D psi) = N_D(scatter_0(psi))``.
    """
    region = IntervalSet.coerce(region)
    grid = psi.grid
    times = [float(t) for t in times]
    if any(t <= 0 for t in times) or times != sorted(times):
        raise ValueError("times must be positive and increasing")
    target = momentum_observable(D).effect(region, psi)
    errors, edges, flags, conj = [], [], [], []
    for t in times:
        for end in region.scaled(t).bounds:
            if math.isfinite(end) and not grid.x_min <= end <= grid.x_max:
                raise DomainOverflowError(f"scaled set endpoint {end} lies outside the domain at t={t}")
        moved = free_dg_evolve(psi, D, t)
        edge = _edge_mass(moved)
        if edge > overflow_tol:
            raise DomainOverflowError(f"packet carries {edge:.3g} of its norm at the boundary at t={t}")
        edges.append(edge)
        flags.append(edge > boundary_tol)
        errors.append(norm(scattering_effect(psi, D, region, t) - target))
        if check_conjugation:
            lhs = scattering_effect(apply_gauge(psi, D), D, region, t)
            rhs = apply_gauge(scattering_effect(psi, 0.0, region, t), D)
            conj.append(norm(lhs - rhs) / norm(psi))
    clean = [e for e, f in zip(errors, flags) if not f]
    decreasing = all(b < a for a, b in zip(clean, clean[1:]))
    return ConvergenceReport(D, times, errors, edges, flags, decreasing,
                             errors[-1] / errors[0], conj)


@dataclass
class ConservationReport:
    D: float
    times: list[float]
    residual_pD: list[float]
    residual_p0: list[float]
    prob_pD: list[float]
    prob_p0: list[float]

    @property
    def drift_pD(self) -> float:
        return max(self.prob_pD) - min(self.prob_pD)

    @property
    def drift_p0(self) -> float:
        return max(self.prob_p0) - min(self.prob_p0)

    def to_dict(self) -> dict:
        return {**self.__dict__, "drift_pD": self.drift_pD, "drift_p0": self.drift_p0}


def conservation_experiment(D: float, psi: WaveFn, region, times: Sequence[float]) -> ConservationReport:
    """Tabulate commutation residuals and probabilities of ``p_D`` and ``p_0`` along the free ``D`` flow."""
    region = IntervalSet.coerce(region)
    p_d, p_0 = momentum_observable(D), momentum_observable(0.0)
    res_d, res_0, prob_d, prob_0 = [], [], [], []
    for t in times:
        res_d.append(conservation_residual(p_d, region, psi, D, t))
        res_0.append(conservation_residual(p_0, region, psi, D, t))
        moved = free_dg_evolve(psi, D, t)
        prob_d.append(measure_prob(p_d, region, moved))
        prob_0.append(measure_prob(p_0, region, moved))
    return ConservationReport(D, [float(t) for t in times], res_d, res_0, prob_d, prob_0)


def position_mean(psi: WaveFn) -> float:
    rho = np.abs(psi.amps) ** 2
    return float(np.sum(psi.grid.x * rho) / np.sum(rho))


@dataclass
class ExpectationAgreement:
    times: list[float]
    mean_pD: list[float]
    mean_p0: list[float]
    velocity: list[float]

    @property
    def max_spread(self) -> float:
        rows = np.array([self.mean_pD, self.mean_p0, self.velocity])
        return float(np.max(rows.max(axis=0) - rows.min(axis=0)))

    def to_dict(self) -> dict:
        return {**self.__dict__, "max_spread": self.max_spread}


def momentum_expectation_agreement(D: float, psi: WaveFn, times: Sequence[float],
                                   h: float = 1e-3) -> ExpectationAgreement:
    """``E(p_D)``, ``E(p_0)`` and ``d<x>/dt`` along the free ``D`` flow."""
    p_d, p_0 = momentum_observable(D), momentum_observable(0.0)
    m_d, m_0, vel = [], [], []
    for t in times:
        moved = free_dg_evolve(psi, D, t)
        m_d.append(expectation(p_d, moved))
        m_0.append(expectation(p_0, moved))
        ahead = position_mean(free_dg_evolve(psi, D, t + h))
        behind = position_mean(free_dg_evolve(psi, D, t - h))
        vel.append((ahead - behind) / (2.0 * h))
    return ExpectationAgreement([float(t) for t in times], m_d, m_0, vel)
