"""Discretized one- and two-particle Hilbert spaces on periodic lattices.

Units are natural throughout (hbar = m = 1).  A :class:`Grid1D` with ``n``
cells on ``[x_min, x_max)`` samples functions at the cell midpoints
``x_i = x_min + (i + 1/2) dx``, so piecewise-constant data whose jumps sit
on cell boundaries is integrated exactly by the Riemann sum ``dx * sum``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

from . import _fft
from .errors import GridMismatchError, InvalidGridError, ZeroStateError


@dataclass(frozen=True)
class Grid1D:
    """Uniform periodic lattice with ``n`` points and its momentum lattice.

    Attributes
    ----------
    n : int
        Number of points, a power of two no smaller than 16.
    x_min, x_max : float
        Domain endpoints; the domain is periodic with length ``x_max - x_min``.
    """

    n: int
    x_min: float
    x_max: float

    def __post_init__(self):
        n = self.n
        if isinstance(n, bool) or int(n) != n or n < 16 or (int(n) & (int(n) - 1)):
            raise InvalidGridError(f"n must be a power of two >= 16, got {n!r}")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "x_min", float(self.x_min))
        object.__setattr__(self, "x_max", float(self.x_max))
        if not self.x_max > self.x_min:
            raise InvalidGridError(f"x_max must exceed x_min, got [{self.x_min}, {self.x_max}]")

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def dx(self) -> float:
        return self.length / self.n

    @property
    def dp(self) -> float:
        return 2.0 * np.pi / self.length

    @cached_property
    def x(self) -> np.ndarray:
        x = self.x_min + (np.arange(self.n) + 0.5) * self.dx
        x.setflags(write=False)
        return x

    @cached_property
    def p_fft(self) -> np.ndarray:
        """Momentum lattice in FFT order (matching ``scipy.fft.fft`` output)."""
        p = 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)
        p.setflags(write=False)
        return p

    @cached_property
    def p(self) -> np.ndarray:
        """Momentum lattice in natural ascending order, ``p_k = k * dp`` for ``k in [-n/2, n/2)``."""
        p = np.fft.fftshift(self.p_fft)
        p.setflags(write=False)
        return p

    def is_boundary(self, point: float, tol: float = 1e-9) -> bool:
        """True when ``point`` lies on a cell boundary inside the closed domain."""
        k = (point - self.x_min) / self.dx
        return -tol <= k <= self.n + tol and abs(k - round(k)) <= tol


def make_grid(n: int, x_min: float, x_max: float) -> Grid1D:
    return Grid1D(n, x_min, x_max)


def _as_amps(amps, shape) -> np.ndarray:
    arr = np.array(amps, dtype=np.complex128, copy=True)
    if arr.shape != shape:
        raise ValueError(f"amplitude array has shape {arr.shape}, expected {shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("amplitudes must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class WaveFn:
    """One-particle wavefunction sampled at the midpoints of ``grid``."""

    grid: Grid1D
    amps: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amps", _as_amps(self.amps, (self.grid.n,)))

    @classmethod
    def from_function(cls, grid: Grid1D, f: Callable[[np.ndarray], np.ndarray]) -> "WaveFn":
        return cls(grid, f(grid.x))

    @classmethod
    def zeros(cls, grid: Grid1D) -> "WaveFn":
        return cls(grid, np.zeros(grid.n))

    def with_amps(self, amps) -> "WaveFn":
        return WaveFn(self.grid, amps)

    def _check(self, other: "WaveFn") -> None:
        if self.grid != other.grid:
            raise GridMismatchError("wavefunctions live on different grids")

    def __add__(self, other: "WaveFn") -> "WaveFn":
        self._check(other)
        return self.with_amps(self.amps + other.amps)

    def __sub__(self, other: "WaveFn") -> "WaveFn":
        self._check(other)
        return self.with_amps(self.amps - other.amps)

    def __mul__(self, c) -> "WaveFn":
        return self.with_amps(c * self.amps)

    __rmul__ = __mul__

    def __truediv__(self, c) -> "WaveFn":
        return self.with_amps(self.amps / c)

    def __neg__(self) -> "WaveFn":
        return self.with_amps(-self.amps)


@dataclass(frozen=True, eq=False)
class WaveFn2:
    """Two-particle wavefunction; ``amps[i, j]`` is the amplitude at ``(x1_i, x2_j)``."""

    grid1: Grid1D
    grid2: Grid1D
    amps: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amps", _as_amps(self.amps, (self.grid1.n, self.grid2.n)))

    @property
    def cell(self) -> float:
        return self.grid1.dx * self.grid2.dx

    def with_amps(self, amps) -> "WaveFn2":
        return WaveFn2(self.grid1, self.grid2, amps)

    def _check(self, other: "WaveFn2") -> None:
        if self.grid1 != other.grid1 or self.grid2 != other.grid2:
            raise GridMismatchError("two-particle states live on different grids")

    def __add__(self, other: "WaveFn2") -> "WaveFn2":
        self._check(other)
        return self.with_amps(self.amps + other.amps)

    def __sub__(self, other: "WaveFn2") -> "WaveFn2":
        self._check(other)
        return self.with_amps(self.amps - other.amps)

    def __mul__(self, c) -> "WaveFn2":
        return self.with_amps(c * self.amps)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class DensityCurrent:
    """Probability density ``rho = |psi|^2`` and current ``j = Im(conj(psi) dpsi/dx)``."""

    rho: np.ndarray
    j: np.ndarray


def inner_product(phi: WaveFn | WaveFn2, psi: WaveFn | WaveFn2) -> complex:
    """``<phi|psi>``, conjugate-linear in ``phi``, by Riemann sum over the lattice."""
    phi._check(psi)
    cell = phi.cell if isinstance(phi, WaveFn2) else phi.grid.dx
    return complex(cell * np.vdot(phi.amps, psi.amps))


def norm(psi: WaveFn | WaveFn2) -> float:
    cell = psi.cell if isinstance(psi, WaveFn2) else psi.grid.dx
    return float(np.sqrt(cell) * np.linalg.norm(psi.amps))


def normalize(psi):
    nrm = norm(psi)
    if nrm == 0.0:
        raise ZeroStateError("cannot normalize the zero vector")
    return psi.with_amps(psi.amps / nrm)


def spectral_derivative(amps: np.ndarray, grid: Grid1D, order: int = 1, axis: int = -1) -> np.ndarray:
    """d^order/dx^order along ``axis`` by FFT.

    For odd orders the Nyquist coefficient is dropped so real input gives
    real output.
    """
    k = grid.p_fft
    factor = (1j * k) ** order
    if order % 2 == 1:
        factor = factor.copy()
        factor[grid.n // 2] = 0.0
    shape = [1] * np.ndim(amps)
    shape[axis] = grid.n
    return _fft.ifft(factor.reshape(shape) * _fft.fft(amps, axis=axis), axis=axis)


def density_current(psi: WaveFn) -> DensityCurrent:
    rho = np.abs(psi.amps) ** 2
    dpsi = spectral_derivative(psi.amps, psi.grid)
    j = np.imag(np.conj(psi.amps) * dpsi)
    return DensityCurrent(rho, j)


def tensor_product(phi: WaveFn, psi: WaveFn) -> WaveFn2:
    return WaveFn2(phi.grid, psi.grid, np.outer(phi.amps, psi.amps))


def partial_statistic(state: WaveFn2, effect: Callable[[WaveFn], WaveFn]) -> float:
    """``||(E x 1) Psi||^2 / ||Psi||^2`` with ``E`` applied to every first-particle slice.

    ``effect`` may be nonlinear; it is applied independently to each column
    ``Psi[:, j]`` (a one-particle function of ``x1`` at fixed ``x2_j``).
    """
    total = norm(state) ** 2
    if total == 0.0:
        raise ZeroStateError("partial statistic of the zero state")
    out = np.empty_like(state.amps)
    for j in range(state.grid2.n):
        out[:, j] = effect(WaveFn(state.grid1, state.amps[:, j])).amps
    return float(state.cell * np.sum(np.abs(out) ** 2) / total)


def fourier_coefficients(psi: WaveFn) -> np.ndarray:
    """Coefficients ``c_k`` in natural momentum order with ``sum |c_k|^2 = ||psi||^2``."""
    c = _fft.fft(psi.amps) * np.sqrt(psi.grid.dx / psi.grid.n)
    return np.fft.fftshift(c)
