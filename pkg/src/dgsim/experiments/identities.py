"""Randomized checks of the algebra of the gauge map ``N_D``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..gauge import apply_gauge, gauge_inverse_check
from ..grid import Grid1D, WaveFn, make_grid, norm, tensor_product
from ..intervals import IntervalSet
from ..propagators import position_projection
from .states import random_state


@dataclass
class IdentityReport:
    D: float
    n_states: int
    inverse: float = 0.0
    norm: float = 0.0
    separability: float = 0.0
    pseudolinearity: float = 0.0

    @property
    def max_residual(self) -> float:
        return max(self.inverse, self.norm, self.separability, self.pseudolinearity)

    def to_dict(self) -> dict:
        return {**self.__dict__, "max_residual": self.max_residual}


def intertwiner_identities(grid: Grid1D, D: float, n_states: int, rng: np.random.Generator,
                           pair_n: int = 128) -> IdentityReport:
    """Max relative residuals over ``n_states`` random states.

    * inverse: ``||N_{-D} N_D psi - psi||``
    * norm: ``| ||N_D psi|| - ||psi|| |``
    * separability: ``N_D(phi (x) psi) = N_D phi (x) N_D psi`` on a coarser
      ``pair_n``-point copy of the domain (the product grid is ``pair_n**2``)
    * pseudolinearity: ``N_D(sum c_k psi_k) = sum c_k N_D psi_k`` for the
      pieces of ``psi`` on the two halves of the domain and ``|c_k| = 1``
    """
    rep = IdentityReport(D, n_states)
    small = make_grid(min(pair_n, grid.n), grid.x_min, grid.x_max)
    mid = 0.5 * (grid.x_min + grid.x_max)
    halves = (IntervalSet.of((-np.inf, mid)), IntervalSet.of((mid, np.inf)))
    for _ in range(n_states):
        psi = random_state(grid, rng, grid.length / 8.0)
        nrm = norm(psi)
        rep.inverse = max(rep.inverse, gauge_inverse_check(psi, D) / nrm)
        rep.norm = max(rep.norm, abs(norm(apply_gauge(psi, D)) - nrm) / nrm)

        phi, chi = random_state(small, rng), random_state(small, rng)
        joint = apply_gauge(tensor_product(phi, chi), D)
        split = tensor_product(apply_gauge(phi, D), apply_gauge(chi, D))
        rep.separability = max(rep.separability, norm(joint - split) / (norm(phi) * norm(chi)))

        pieces = [position_projection(psi, h) for h in halves]
        phases = np.exp(2j * np.pi * rng.uniform(size=len(pieces)))
        combined = WaveFn.zeros(grid)
        gauged = WaveFn.zeros(grid)
        for c, piece in zip(phases, pieces):
            combined = combined + piece * c
            gauged = gauged + apply_gauge(piece, D) * c
        rep.pseudolinearity = max(rep.pseudolinearity, norm(apply_gauge(combined, D) - gauged) / nrm)
    return rep
