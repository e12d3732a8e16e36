"""Two ensembles with the same density matrix, evolved by the nonlinear flow.

``A = {1/2: psi1, 1/2: psi2}`` and ``B = {1/2: (psi1+psi2)/sqrt2, 1/2: (psi1-psi2)/sqrt2}``
give identical statistics for every projection at ``t = 0``.  A linear
flow keeps them indistinguishable; the gauged flow with ``D != 0`` does not.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..dynamics import free_dg_evolve
from ..grid import Grid1D, WaveFn, make_grid, norm
from ..intervals import IntervalSet
from ..propagators import position_projection
from .states import gaussian, orthonormal_pair


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Classical mixture ``{weight: state}``; weights are nonnegative and sum to one."""

    members: tuple[tuple[float, WaveFn], ...]

    def __post_init__(self):
        weights = np.array([w for w, _ in self.members], dtype=float)
        if np.any(weights < 0):
            raise ValueError("ensemble weights must be nonnegative")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise ValueError(f"ensemble weights sum to {weights.sum()!r}, not 1")
        if any(norm(s) == 0 for _, s in self.members):
            raise ValueError("ensemble members must be nonzero")

    def statistic(self, region: IntervalSet) -> float:
        return sum(w * norm(position_projection(s, region)) ** 2 / norm(s) ** 2
                   for w, s in self.members)

    def evolved(self, D: float, t: float) -> "Ensemble":
        return Ensemble(tuple((w, free_dg_evolve(s, D, t)) for w, s in self.members))


def default_probes(count: int = 16, lo: float = -4.0, hi: float = 4.0) -> list[IntervalSet]:
    return [IntervalSet.of((-np.inf, float(b))) for b in np.linspace(lo, hi, count)]


def mixture_ensembles(grid: Grid1D, centers=(-0.75, 0.75), sigma: float = 1.0) -> tuple[Ensemble, Ensemble]:
    psi1, psi2 = orthonormal_pair(gaussian(grid, centers[0], sigma), gaussian(grid, centers[1], sigma))
    s = 1.0 / np.sqrt(2.0)
    a = Ensemble(((0.5, psi1), (0.5, psi2)))
    b = Ensemble(((0.5, (psi1 + psi2) * s), (0.5, (psi1 - psi2) * s)))
    return a, b


@dataclass
class MixtureReport:
    D: float
    t: float
    delta: float
    delta_initial: float
    probes: list[list[list[float]]]
    stats_a: list[float] = field(default_factory=list)
    stats_b: list[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def mixture_delta(a: Ensemble, b: Ensemble, probes: Sequence[IntervalSet]) -> tuple[float, list, list]:
    sa = [a.statistic(p) for p in probes]
    sb = [b.statistic(p) for p in probes]
    return float(np.max(np.abs(np.subtract(sa, sb)))), sa, sb


def mixture_experiment(D: float, t: float, probes: Sequence[IntervalSet] | None = None,
                       grid: Grid1D | None = None, *, centers=(-0.75, 0.75), sigma: float = 1.0,
                       initial_tol: float = 1e-10) -> MixtureReport:
    """``delta(t) = max_probe |stat_A - stat_B|`` after free nonlinear evolution by ``t``."""
    grid = grid or make_grid(4096, -8.0, 8.0)
    probes = list(probes) if probes is not None else default_probes()
    a, b = mixture_ensembles(grid, centers, sigma)
    delta0, _, _ = mixture_delta(a, b, probes)
    if delta0 > initial_tol:
        raise RuntimeError(f"ensembles differ already at t=0: {delta0:.3g}")
    delta, sa, sb = mixture_delta(a.evolved(D, t), b.evolved(D, t), probes)
    return MixtureReport(D, t, delta, delta0, [p.to_list() for p in probes], sa, sb)
