"""The nonlinear gauge intertwiner ``N_D``.

``N_D`` multiplies a wavefunction pointwise by ``exp(i D ln rho)`` where
``rho = |psi|^2`` is the local density (hbar = m = 1).  Points where the
density vanishes are mapped to zero.  The multiplier is unimodular, so
``N_D`` preserves norms, and ``N_{-D}`` is its exact inverse.

``N_D`` is not linear, but it is compatible with the structure that the
nonlinear dynamics needs:

* it commutes with multiplication by indicator functions of position sets;
* it factorizes on product states, ``N_D(phi x psi) = N_D(phi) x N_D(psi)``;
* on sums of functions with disjoint supports it acts term by term.

Scaling picks up a phase: ``N_D(c psi) = c exp(2 i D ln|c|) N_D(psi)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import WaveFn, WaveFn2, norm


@dataclass(frozen=True)
class GaugeParam:
    """Gauge strength ``D`` and the density floor below which amplitudes are zeroed."""

    D: float
    rho_floor: float = 0.0

    def __post_init__(self):
        if not self.rho_floor >= 0:
            raise ValueError(f"rho_floor must be >= 0, got {self.rho_floor}")


def gauge_array(amps: np.ndarray, D: float, rho_floor: float = 0.0) -> np.ndarray:
    amps = np.asarray(amps, dtype=np.complex128)
    if D == 0 and rho_floor == 0:
        return amps.copy()
    rho = amps.real**2 + amps.imag**2
    keep = rho > rho_floor
    out = np.zeros_like(amps)
    # the logarithm is only taken where rho is positive
    out[keep] = amps[keep] * np.exp(1j * D * np.log(rho[keep]))
    return out


def _param(g) -> GaugeParam:
    return g if isinstance(g, GaugeParam) else GaugeParam(float(g))


def apply_gauge(psi: WaveFn | WaveFn2, g: GaugeParam | float) -> WaveFn | WaveFn2:
    """``N_D(psi)``; for a two-particle state the joint density is used."""
    g = _param(g)
    return psi.with_amps(gauge_array(psi.amps, g.D, g.rho_floor))


def gauge_inverse_check(psi: WaveFn | WaveFn2, g: GaugeParam | float) -> float:
    """``||N_{-D}(N_D psi) - psi||``."""
    g = _param(g)
    back = gauge_array(gauge_array(psi.amps, g.D, g.rho_floor), -g.D, g.rho_floor)
    return norm(psi.with_amps(back - psi.amps))
