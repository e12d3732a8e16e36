"""The map ``gamma(P) = N_D o P o N_{-D}`` transports every linear statistic.

Pairing states ``N_D psi`` with effects ``gamma(P)`` reproduces the linear
theory exactly: probabilities, expectations, complements and the order of
nested tests all carry over.  Pairing ``N_D psi`` with the bare ``P``
does not, which is the negative control.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..dynamics import free_dg_evolve
from ..gauge import apply_gauge
from ..grid import WaveFn, norm
from ..gpvm import Gpvm, expectation, measure_prob, random_interval
from ..intervals import IntervalSet


@dataclass
class LogicReport:
    D: float
    n_states: int
    n_projections: int
    transport: float = 0.0
    expectation: float = 0.0
    complement: float = 0.0
    order: float = 0.0
    heisenberg: float = 0.0
    negative_control: float = 0.0
    per_base: dict = field(default_factory=dict)

    @property
    def max_residual(self) -> float:
        return max(self.transport, self.expectation, self.complement, self.order, self.heisenberg)

    def to_dict(self) -> dict:
        return {**self.__dict__, "max_residual": self.max_residual}


def _spans(psi: WaveFn, momentum_span: float) -> dict[str, tuple[float, float]]:
    g = psi.grid
    return {"position": (g.x_min, g.x_max), "momentum": (-momentum_span, momentum_span)}


def logic_isomorphism_check(D: float, samples: Sequence[WaveFn], n_projections: int = 20, *,
                            rng: np.random.Generator | None = None, momentum_span: float = 4.0,
                            heisenberg_t: float = 0.5) -> LogicReport:
    """Max residuals of the transported identities over ``samples`` and random intervals.

    For every sample ``psi`` and random interval ``B`` (position and
    momentum) this checks

    * transport:   ``omega_{N_D psi}(gamma(P_B)) = omega_psi(P_B)``
    * expectation: ``E_{N_D psi}(A_D) = E_psi(A)``
    * complement:  ``omega(gamma(P_{not B})) = 1 - omega(gamma(P_B))``
    * order:       for ``B1`` inside ``B2``, ``gamma(P_B1) o gamma(P_B2) = gamma(P_B1)``
      and ``omega(gamma(P_B1)) <= omega(gamma(P_B2))``
    * heisenberg:  ``omega_{beta_t phi}(E) = omega_phi(beta_{-t} o E o beta_t)``

    ``negative_control`` is the largest ``|omega_{N_D psi}(P_B) - omega_psi(P_B)|``,
    which should be far from zero for ``D != 0``.
    """
    rng = rng or np.random.default_rng(0)
    rep = LogicReport(D, len(samples), n_projections)
    for base in ("position", "momentum"):
        linear, gauged = Gpvm(base, 0.0), Gpvm(base, D)
        worst = 0.0
        for psi in samples:
            phi = apply_gauge(psi, D)
            nrm = norm(psi)
            span = _spans(psi, momentum_span)[base]
            e_lin = expectation(linear, psi)
            e_nl = expectation(gauged, phi)
            rep.expectation = max(rep.expectation, abs(e_lin - e_nl))
            for _ in range(n_projections):
                b = random_interval(rng, *span)
                p_lin = measure_prob(linear, b, psi)
                p_nl = measure_prob(gauged, b, phi)
                rep.transport = max(rep.transport, abs(p_lin - p_nl))
                worst = max(worst, abs(p_lin - p_nl))
                rep.negative_control = max(rep.negative_control, abs(measure_prob(linear, b, phi) - p_lin))

                p_not = measure_prob(gauged, b.complement(), phi)
                rep.complement = max(rep.complement, abs(p_not - (1.0 - p_nl)))

                lo, hi = b.bounds
                inner = IntervalSet.of((lo, lo + rng.uniform(0.0, 1.0) * (hi - lo)))
                nested = gauged.effect(inner, gauged.effect(b, phi))
                rep.order = max(rep.order, norm(nested - gauged.effect(inner, phi)) / nrm,
                                measure_prob(gauged, inner, phi) - p_nl)

                moved = free_dg_evolve(phi, D, heisenberg_t)
                schroedinger = measure_prob(gauged, b, moved)
                pulled = free_dg_evolve(gauged.effect(b, moved), D, -heisenberg_t)
                rep.heisenberg = max(rep.heisenberg, abs(schroedinger - norm(pulled) ** 2 / nrm**2))
        rep.per_base[base] = worst
    return rep
