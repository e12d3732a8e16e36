"""Initial states shared by the experiments."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import MisalignedGridError
from ..grid import Grid1D, WaveFn, inner_product, normalize


def gaussian(grid: Grid1D, center: float = 0.0, sigma: float = 1.0, k0: float = 0.0,
             normalized: bool = True) -> WaveFn:
    """``exp(-(x - c)^2 / (2 sigma^2) + i k0 x)``; freely it spreads as ``sigma sqrt(1 + t^2/sigma^4)``."""
    x = grid.x
    psi = WaveFn(grid, np.exp(-((x - center) ** 2) / (2.0 * sigma**2) + 1j * k0 * (x - center)))
    return normalize(psi) if normalized else psi


@dataclass(frozen=True, eq=False)
class FootnotePair:
    """Two orthogonal step functions whose gauged images are far from orthogonal.

    Both equal 1 on ``(-1, 0)``; on ``(0, 1)`` the ``plus`` state is
    ``e^a`` and the ``minus`` state is ``-e^{-a}``, with ``a = pi / (4 D)``.
    Elsewhere both vanish.
    """

    D: float
    plus: WaveFn
    minus: WaveFn

    @property
    def a(self) -> float:
        return math.pi / (4.0 * self.D)

    def analytic_overlap(self) -> float:
        """``|<N_D minus | N_D plus>| / (||minus|| ||plus||) = sqrt(2 / (1 + cosh(2a)))``."""
        return math.sqrt(2.0 / (1.0 + math.cosh(math.pi / (2.0 * self.D))))


def check_alignment(grid: Grid1D, points=(-1.0, 0.0, 1.0)) -> None:
    for p in points:
        if not grid.is_boundary(p):
            raise MisalignedGridError(
                f"point {p} is not a cell boundary of the grid [{grid.x_min}, {grid.x_max}) n={grid.n}"
            )


def footnote_pair(grid: Grid1D, D: float, *, aligned: bool = True) -> FootnotePair:
    if not D > 0:
        raise ValueError(f"footnote pair needs D > 0, got {D}")
    if aligned:
        check_alignment(grid)
    a = math.pi / (4.0 * D)
    x = grid.x
    left = (x > -1.0) & (x < 0.0)
    right = (x > 0.0) & (x < 1.0)
    plus = np.where(left, 1.0, 0.0) + np.where(right, math.exp(a), 0.0)
    minus = np.where(left, 1.0, 0.0) - np.where(right, math.exp(-a), 0.0)
    return FootnotePair(D, WaveFn(grid, plus), WaveFn(grid, minus))


def two_plateau(grid: Grid1D, D: float = 1.0) -> WaveFn:
    """The ``plus`` member of the footnote pair: plateaus 1 and ``e^{pi/(4D)}``."""
    return footnote_pair(grid, D, aligned=False).plus


def orthonormal_pair(first: WaveFn, second: WaveFn) -> tuple[WaveFn, WaveFn]:
    """Gram-Schmidt on the lattice."""
    u = normalize(first)
    v = second - inner_product(u, second) * u
    return u, normalize(v)


def random_state(grid: Grid1D, rng: np.random.Generator, spread: float | None = None) -> WaveFn:
    """A normalized superposition of two random Gaussian packets with random phases."""
    spread = spread if spread is not None else grid.length / 8.0
    amps = np.zeros(grid.n, dtype=np.complex128)
    for _ in range(2):
        c = rng.uniform(-spread, spread)
        s = rng.uniform(0.5, 1.5)
        k = rng.uniform(-2.0, 2.0)
        w = rng.normal() + 1j * rng.normal()
        amps += w * gaussian(grid, c, s, k).amps
    return normalize(WaveFn(grid, amps))


def exp_gaussian(grid: Grid1D, center: float = 0.0, sigma: float = 4.0, decay: float = 1.0) -> WaveFn:
    """``e^{-decay (x - c)}`` tamed by a wide Gaussian envelope so it fits on a periodic grid."""
    y = grid.x - center
    return normalize(WaveFn(grid, np.exp(-decay * y - y**2 / (2.0 * sigma**2))))
