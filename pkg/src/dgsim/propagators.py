"""Linear Schrödinger propagation and spectral projections.

The free propagator is exact on the lattice (a phase per Fourier mode).
External potentials are handled by Strang splitting

    exp(-i V dt/2) exp(-i T dt) exp(-i V dt/2)

with the potential sampled at the midpoint time of each step.  All
propagators act along a chosen array axis so the same code evolves
two-particle states as ``U1 (x) U2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import _fft
from .grid import Grid1D, WaveFn, WaveFn2
from .intervals import IntervalSet

_REQUIRED = {
    "zero": (),
    "harmonic": ("omega",),
    "gaussian": ("height", "width"),
    "barrier": ("height", "a", "b"),
}
_OPTIONAL = {
    "zero": (),
    "harmonic": ("center",),
    "gaussian": ("center",),
    "barrier": (),
}
POTENTIAL_PARAMS = {k: _REQUIRED[k] + _OPTIONAL[k] for k in _REQUIRED}


@dataclass(frozen=True)
class Potential:
    """External potential ``V(x, t)`` of a fixed shape switched on for ``t_on <= t < t_off``.

    ``kind`` is one of ``zero``, ``harmonic`` (``omega``, ``center``),
    ``gaussian`` (``height``, ``width``, ``center``) or ``barrier``
    (``height``, ``a``, ``b``).  ``support``, when given, restricts the
    shape to ``[lo, hi)``.
    """

    kind: str = "zero"
    params: Mapping[str, float] = field(default_factory=dict)
    t_on: float = -math.inf
    t_off: float = math.inf
    support: tuple[float, float] | None = None

    def __post_init__(self):
        if self.kind not in _REQUIRED:
            raise ValueError(f"unknown potential kind {self.kind!r}")
        params = {k: float(v) for k, v in dict(self.params).items()}
        allowed = set(_REQUIRED[self.kind]) | set(_OPTIONAL[self.kind])
        missing = set(_REQUIRED[self.kind]) - set(params)
        extra = set(params) - allowed
        if missing:
            raise ValueError(f"{self.kind} potential is missing {sorted(missing)}")
        if extra:
            raise ValueError(f"{self.kind} potential does not take {sorted(extra)}")
        object.__setattr__(self, "params", params)
        if not self.t_on <= self.t_off:
            raise ValueError(f"t_on={self.t_on} must not exceed t_off={self.t_off}")
        if self.kind == "gaussian" and not params["width"] > 0:
            raise ValueError("gaussian width must be positive")
        if self.kind == "barrier" and not params["a"] < params["b"]:
            raise ValueError("barrier needs a < b")
        if self.support is not None:
            lo, hi = self.support
            if not lo < hi:
                raise ValueError("support needs lo < hi")
            object.__setattr__(self, "support", (float(lo), float(hi)))

    @classmethod
    def zero(cls) -> "Potential":
        return cls()

    @classmethod
    def harmonic(cls, omega: float, center: float = 0.0, **window) -> "Potential":
        return cls("harmonic", {"omega": omega, "center": center}, **window)

    @classmethod
    def gaussian(cls, height: float, width: float, center: float = 0.0, **window) -> "Potential":
        return cls("gaussian", {"height": height, "width": width, "center": center}, **window)

    @classmethod
    def barrier(cls, height: float, a: float, b: float, **window) -> "Potential":
        return cls("barrier", {"height": height, "a": a, "b": b}, **window)

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero"

    def active(self, t: float) -> bool:
        return self.t_on <= t < self.t_off

    def shape(self, x: np.ndarray) -> np.ndarray:
        """Spatial profile, ignoring the time window."""
        x = np.asarray(x, dtype=float)
        p = self.params
        if self.kind == "zero":
            v = np.zeros_like(x)
        elif self.kind == "harmonic":
            v = 0.5 * p["omega"] ** 2 * (x - p.get("center", 0.0)) ** 2
        elif self.kind == "gaussian":
            v = p["height"] * np.exp(-((x - p.get("center", 0.0)) ** 2) / (2.0 * p["width"] ** 2))
        else:
            v = np.where((x >= p["a"]) & (x < p["b"]), p["height"], 0.0)
        if self.support is not None:
            lo, hi = self.support
            v = np.where((x >= lo) & (x < hi), v, 0.0)
        return v

    def __call__(self, x, t: float) -> np.ndarray:
        return self.shape(x) if self.active(t) else np.zeros_like(np.asarray(x, dtype=float))

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "parameters": dict(self.params),
            "t_on": self.t_on,
            "t_off": self.t_off,
            "support": list(self.support) if self.support else None,
        }


SCHEMES = ("strang-split", "exact-free")


@dataclass(frozen=True)
class StepConfig:
    """Time stepping: step size ``dt``, horizon ``t_final``, start time ``t0``.

    The horizon is split into ``ceil(t_final / dt)`` equal steps, so the
    step actually taken may be slightly smaller than ``dt``.
    """

    dt: float = 1e-3
    t_final: float = 0.0
    scheme: str = "strang-split"
    t0: float = 0.0

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}")
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not self.t_final >= 0:
            raise ValueError(f"t_final must be >= 0, got {self.t_final}")
        if self.t_final != 0 and self.dt > self.t_final:
            raise ValueError(f"dt={self.dt} exceeds t_final={self.t_final}")

    @property
    def n_steps(self) -> int:
        if self.t_final == 0:
            return 0
        return max(1, math.ceil(self.t_final / self.dt - 1e-9))

    @property
    def step(self) -> float:
        return self.t_final / self.n_steps if self.n_steps else 0.0


def _along(vec: np.ndarray, ndim: int, axis: int) -> np.ndarray:
    shape = [1] * ndim
    shape[axis] = vec.size
    return vec.reshape(shape)


def free_axis(amps: np.ndarray, grid: Grid1D, t: float, axis: int = -1) -> np.ndarray:
    """Exact free evolution by ``t`` (any sign) along one axis."""
    if t == 0:
        return np.array(amps, dtype=np.complex128)
    phase = _along(np.exp(-0.5j * grid.p_fft**2 * t), np.ndim(amps), axis)
    return _fft.ifft(phase * _fft.fft(amps, axis=axis), axis=axis)


def strang_axis(amps: np.ndarray, grid: Grid1D, potential: Potential, cfg: StepConfig,
                axis: int = -1) -> np.ndarray:
    """Evolve ``amps`` along ``axis`` over ``[cfg.t0, cfg.t0 + cfg.t_final]``."""
    if cfg.scheme == "exact-free" or potential.is_zero:
        if cfg.scheme == "exact-free" and not potential.is_zero:
            raise ValueError("exact-free scheme needs a zero potential")
        return free_axis(amps, grid, cfg.t_final, axis)
    ndim = np.ndim(amps)
    h = cfg.step
    half_v = _along(np.exp(-0.5j * h * potential.shape(grid.x)), ndim, axis)
    kinetic = _along(np.exp(-0.5j * h * grid.p_fft**2), ndim, axis)
    out = np.array(amps, dtype=np.complex128)
    for k in range(cfg.n_steps):
        on = potential.active(cfg.t0 + (k + 0.5) * h)
        if on:
            out *= half_v
        out = _fft.ifft(kinetic * _fft.fft(out, axis=axis), axis=axis)
        if on:
            out *= half_v
    return out


def free_evolve(psi: WaveFn, t: float) -> WaveFn:
    """``exp(-i T t) psi`` with ``T = p^2/2``, exact on the lattice for any real ``t``."""
    return psi.with_amps(free_axis(psi.amps, psi.grid, t))


def split_step_evolve(psi: WaveFn, potential: Potential | None = None,
                      cfg: StepConfig | None = None) -> WaveFn:
    potential = potential or Potential.zero()
    cfg = cfg or StepConfig()
    return psi.with_amps(strang_axis(psi.amps, psi.grid, potential, cfg))


def split_step_evolve2(state: WaveFn2, v1: Potential | None, v2: Potential | None,
                       cfg: StepConfig) -> WaveFn2:
    """``(U1 (x) U2) Psi``; each factor uses its own potential on its own axis."""
    amps = strang_axis(state.amps, state.grid1, v1 or Potential.zero(), cfg, axis=0)
    amps = strang_axis(amps, state.grid2, v2 or Potential.zero(), cfg, axis=1)
    return state.with_amps(amps)


def momentum_mask(grid: Grid1D, region) -> np.ndarray:
    """Boolean mask over ``grid.p_fft`` selecting lattice momenta in ``region``."""
    return IntervalSet.coerce(region).contains(grid.p_fft)


def momentum_projection_axis(amps: np.ndarray, grid: Grid1D, region, axis: int = -1) -> np.ndarray:
    mask = _along(momentum_mask(grid, region), np.ndim(amps), axis)
    return _fft.ifft(mask * _fft.fft(amps, axis=axis), axis=axis)


def momentum_projection(psi: WaveFn, region) -> WaveFn:
    """Zero every Fourier coefficient whose lattice momentum lies outside ``region``."""
    return psi.with_amps(momentum_projection_axis(psi.amps, psi.grid, region))


def position_projection(psi: WaveFn, region) -> WaveFn:
    """Multiply by the indicator of ``region`` evaluated at the lattice points."""
    return psi.with_amps(IntervalSet.coerce(region).indicator(psi.grid.x) * psi.amps)
