"""Remote control of a lab partial state through the gauged two-particle flow.

Two lab packets ``Phi_j`` near the origin are entangled with two moon
packets ``Phi^_j`` a distance ``L`` away,

    Psi_0 = N_D((Phi_1 (x) Phi^_1 + Phi_2 (x) Phi^_2) / sqrt2).

While the lab packets stay disjoint the evolved state factorizes term by
term, ``Psi_t = sum_j N_D(U_t Phi_j) (x) N_D(U_t Phi^_j)``, and every lab
statistic is fixed by the moon overlap matrix

    lambda_jk(t) = <N_D(U_t Phi^_j) | N_D(U_t Phi^_k)>.

A linear flow keeps ``lambda`` constant whatever happens on the moon.  With
``D != 0`` a beam-splitter pulse behind the moon, which makes the moon
packets overlap, changes ``lambda_12`` and with it the lab statistics.
Nothing in the lab depends on ``L``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from ..dynamics import evolve_dg_two_particle
from ..errors import SupportCollisionError
from ..gauge import apply_gauge
from ..grid import Grid1D, WaveFn, WaveFn2, inner_product, make_grid, norm, tensor_product
from ..propagators import Potential, StepConfig, free_evolve, split_step_evolve
from .states import gaussian

SUPPORT_MASS = 0.9999


@dataclass(frozen=True)
class FtlConfig:
    """Geometry and controls of the two-particle run.

    The moon grid is the interval ``[L - moon_half_width, L + moon_half_width)``
    and every moon-side object (packets, pulse) is placed relative to ``L``.
    """

    D: float = 1.0
    t_final: float = 4.0
    dt: float = 2e-3
    distance: float = 100.0
    lab_n: int = 128
    lab_half_width: float = 32.0
    lab_centers: tuple[float, float] = (-14.0, 14.0)
    lab_sigma: float = 1.5
    moon_n: int = 512
    moon_half_width: float = 32.0
    moon_offsets: tuple[float, float] = (-10.0, 10.0)
    moon_sigma: float = 2.0
    moon_kick: float = 5.0
    pulse_height: float = 10.0
    pulse_width: float = 0.25
    pulse_t_on: float = 0.0
    pulse_t_off: float = math.inf
    pulse: bool = True

    def lab_grid(self) -> Grid1D:
        return make_grid(self.lab_n, -self.lab_half_width, self.lab_half_width)

    def moon_grid(self) -> Grid1D:
        L = self.distance
        return make_grid(self.moon_n, L - self.moon_half_width, L + self.moon_half_width)

    def moon_potential(self) -> Potential:
        if not self.pulse:
            return Potential.zero()
        return Potential.gaussian(self.pulse_height, self.pulse_width, self.distance,
                                  t_on=self.pulse_t_on, t_off=self.pulse_t_off)

    def step_config(self) -> StepConfig:
        return StepConfig(dt=self.dt, t_final=self.t_final)


def essential_support(psi: WaveFn, mass: float = SUPPORT_MASS) -> tuple[float, float]:
    """Smallest cell-aligned interval around the peak holding ``mass`` of the norm."""
    w = psi.grid.dx * np.abs(psi.amps) ** 2
    total = w.sum()
    lo = hi = int(np.argmax(w))
    held = w[lo]
    while held < mass * total:
        left = w[lo - 1] if lo > 0 else -1.0
        right = w[hi + 1] if hi < len(w) - 1 else -1.0
        if left < 0 and right < 0:
            break
        if left >= right:
            lo -= 1
            held += left
        else:
            hi += 1
            held += right
    g = psi.grid
    return g.x_min + lo * g.dx, g.x_min + (hi + 1) * g.dx


def check_disjoint_supports(packets, mass: float = SUPPORT_MASS) -> list[tuple[float, float]]:
    """Raise :class:`SupportCollisionError` if essential supports of ``packets`` intersect."""
    spans = [essential_support(p, mass) for p in packets]
    order = sorted(range(len(spans)), key=lambda i: spans[i][0])
    for a, b in zip(order, order[1:]):
        if spans[b][0] < spans[a][1]:
            raise SupportCollisionError(
                f"lab packets {a} and {b} share support: {spans[a]} and {spans[b]}")
    return spans


@dataclass(frozen=True, eq=False)
class FtlPackets:
    lab: tuple[WaveFn, WaveFn]
    moon: tuple[WaveFn, WaveFn]


def ftl_packets(cfg: FtlConfig) -> FtlPackets:
    lab_grid, moon_grid = cfg.lab_grid(), cfg.moon_grid()
    lab = tuple(gaussian(lab_grid, c, cfg.lab_sigma) for c in cfg.lab_centers)
    kicks = (cfg.moon_kick, -cfg.moon_kick)
    moon = tuple(gaussian(moon_grid, cfg.distance + o, cfg.moon_sigma, k)
                 for o, k in zip(cfg.moon_offsets, kicks))
    return FtlPackets(lab, moon)


def initial_state(packets: FtlPackets, D: float) -> WaveFn2:
    (a1, a2), (b1, b2) = packets.lab, packets.moon
    linear = (tensor_product(a1, b1) + tensor_product(a2, b2)) * (1.0 / math.sqrt(2.0))
    return apply_gauge(linear, D)


def overlap_matrix(vectors) -> np.ndarray:
    """``lambda_jk = <v_j | v_k>``."""
    k = len(vectors)
    lam = np.empty((k, k), dtype=np.complex128)
    for j in range(k):
        for m in range(k):
            lam[j, m] = inner_product(vectors[j], vectors[m])
    return lam


def lab_test_vectors(lab_t) -> dict[str, WaveFn]:
    """Unit vectors spanning the evolved gauged lab packets, and two superpositions."""
    u1, u2 = (v / norm(v) for v in lab_t)
    s = 1.0 / math.sqrt(2.0)
    return {"chi1": u1, "chi2": u2, "plus": (u1 + u2) * s, "plus_i": (u1 + u2 * 1j) * s}


def rank_one_statistic(state: WaveFn2, chi: WaveFn) -> float:
    """``omega_Psi(|chi><chi| (x) 1)`` for a unit vector ``chi``."""
    reduced = state.grid1.dx * (chi.amps.conj() @ state.amps)
    return float(state.grid2.dx * np.sum(np.abs(reduced) ** 2) / norm(state) ** 2)


def factorized_statistic(lab_t, lam: np.ndarray, chi: WaveFn) -> float:
    """``sum_jk <chi|a_j>^* <chi|a_k> lambda_jk / sum_j ||a_j||^2 lambda_jj``."""
    c = np.array([inner_product(chi, a) for a in lab_t])
    w = np.array([norm(a) ** 2 for a in lab_t])
    return float(np.real(c.conj() @ lam @ c) / np.real(w @ np.diag(lam)))


def mixture_statistic(lab_t, lam: np.ndarray, chi: WaveFn) -> float:
    """The diagonal part alone: the lab mixture ``sum_j lambda_jj omega_j``."""
    c = np.array([inner_product(chi, a) for a in lab_t])
    w = np.array([norm(a) ** 2 for a in lab_t])
    diag = np.real(np.diag(lam))
    return float(np.sum(np.abs(c) ** 2 * diag) / np.sum(w * diag))


@dataclass
class FtlScenario:
    pulse: bool
    statistics: dict[str, float]
    factorized: dict[str, float]
    mixture: dict[str, float]
    overlap: np.ndarray
    factorization_gap: float
    norm_drift: float
    final_state: WaveFn2 | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if k != "final_state"}


def run_scenario(cfg: FtlConfig, packets: FtlPackets | None = None) -> FtlScenario:
    packets = packets or ftl_packets(cfg)
    step = cfg.step_config()
    lab_t = [apply_gauge(free_evolve(p, cfg.t_final), cfg.D) for p in packets.lab]
    check_disjoint_supports(packets.lab)
    check_disjoint_supports(lab_t)

    v_moon = cfg.moon_potential()
    moon_t = [apply_gauge(split_step_evolve(p, v_moon, step), cfg.D) for p in packets.moon]
    lam = overlap_matrix(moon_t)

    psi0 = initial_state(packets, cfg.D)
    psi_t = evolve_dg_two_particle(psi0, cfg.D, Potential.zero(), v_moon, step)
    tests = lab_test_vectors(lab_t)
    stats = {k: rank_one_statistic(psi_t, chi) for k, chi in tests.items()}
    fact = {k: factorized_statistic(lab_t, lam, chi) for k, chi in tests.items()}
    mix = {k: mixture_statistic(lab_t, lam, chi) for k, chi in tests.items()}
    gap = max(abs(stats[k] - fact[k]) for k in tests)
    drift = abs(norm(psi_t) - norm(psi0))
    return FtlScenario(cfg.pulse, stats, fact, mix, lam, gap, drift, psi_t)


@dataclass
class FtlReport:
    D: float
    distance: float
    support_mass: float
    lab_supports: list
    off: FtlScenario
    on: FtlScenario
    delta: float
    mixture_gap_off: float
    lambda12_normalized: float
    far: FtlScenario | None = None
    delta_far: float | None = None
    extra: dict = field(default_factory=dict)

    @property
    def distance_shift(self) -> float | None:
        return None if self.delta_far is None else abs(self.delta_far - self.delta)

    def to_dict(self) -> dict:
        out = dict(self.__dict__)
        for key in ("off", "on", "far"):
            if out[key] is not None:
                out[key] = out[key].to_dict()
        out["distance_shift"] = self.distance_shift
        return out


def _delta(on: FtlScenario, off: FtlScenario) -> float:
    return max(abs(on.statistics[k] - off.statistics[k]) for k in on.statistics)


def ftl_experiment(cfg: FtlConfig | None = None, *, far_factor: float | None = 2.0) -> FtlReport:
    """Lab statistics with the remote pulse on and off, at distance ``L`` and ``far_factor * L``.

    ``delta`` is the largest change over the lab test family that the pulse
    causes; ``mixture_gap_off`` compares the pulse-off statistics with the
    diagonal (mixture) expansion.
    """
    cfg = cfg or FtlConfig()
    packets = ftl_packets(cfg)
    spans = check_disjoint_supports(packets.lab)
    off = run_scenario(replace(cfg, pulse=False), packets)
    on = run_scenario(replace(cfg, pulse=True), packets)
    delta = _delta(on, off)
    mix_gap = max(abs(off.statistics[k] - off.mixture[k]) for k in off.statistics)
    lam = on.overlap
    lam12 = abs(lam[0, 1]) / math.sqrt(abs(lam[0, 0] * lam[1, 1]))
    report = FtlReport(cfg.D, cfg.distance, SUPPORT_MASS, [list(s) for s in spans],
                       off, on, delta, mix_gap, lam12)
    if far_factor is not None:
        far_cfg = replace(cfg, distance=cfg.distance * far_factor)
        far_packets = ftl_packets(far_cfg)
        far_off = run_scenario(replace(far_cfg, pulse=False), far_packets)
        far_on = run_scenario(replace(far_cfg, pulse=True), far_packets)
        report.far = far_on
        report.delta_far = _delta(far_on, far_off)
        report.extra["far_distance"] = far_cfg.distance
    return report
