import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dgsim.experiments.states import footnote_pair, gaussian, random_state
from dgsim.gauge import GaugeParam, apply_gauge, gauge_inverse_check
from dgsim.grid import WaveFn, inner_product, make_grid, norm, tensor_product
from dgsim.intervals import IntervalSet
from dgsim.propagators import position_projection


def test_zero_strength_is_identity(grid):
    psi = gaussian(grid, 0.0, 1.0, 2.0)
    assert np.array_equal(apply_gauge(psi, 0.0).amps, psi.amps)


def test_constant_modulus_gets_a_global_phase():
    g = make_grid(128, 0.0, 10.0)
    psi = WaveFn(g, 0.3 * np.exp(2j * np.pi * 4 * g.x / g.length))
    out = apply_gauge(psi, 1.7)
    assert abs(inner_product(out, psi)) == pytest.approx(norm(psi) ** 2, rel=1e-14)
    ratio = out.amps / psi.amps
    assert np.allclose(ratio, ratio[0], atol=1e-14)


def test_footnote_plateaus():
    g = make_grid(4096, -2.0, 2.0)
    plus = footnote_pair(g, 1.0).plus
    out = apply_gauge(plus, 1.0).amps
    left = (g.x > -1) & (g.x < 0)
    right = (g.x > 0) & (g.x < 1)
    assert np.allclose(out[left], 1.0, atol=1e-15)
    assert np.allclose(out[right], 1j * math.exp(math.pi / 4), atol=1e-13)
    assert np.all(out[~(left | right)] == 0)


class TestInverse:
    def test_smooth_random_states(self, grid, rng):
        for _ in range(10):
            psi = random_state(grid, rng)
            assert gauge_inverse_check(psi, 1.3) < 1e-12 * norm(psi)

    def test_states_with_exact_zeros(self):
        pair = footnote_pair(make_grid(256, -2.0, 2.0), 0.7)
        assert gauge_inverse_check(pair.minus, 0.7) < 1e-12 * norm(pair.minus)

    def test_zero_strength(self, grid):
        assert gauge_inverse_check(gaussian(grid), 0.0) == 0.0


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), D=st.floats(-3, 3, allow_nan=False))
def test_norm_is_conserved(seed, D):
    g = make_grid(256, -8.0, 8.0)
    psi = random_state(g, np.random.default_rng(seed))
    assert abs(norm(apply_gauge(psi, D)) - norm(psi)) < 1e-14


def test_separability(rng):
    g1, g2 = make_grid(64, -6.0, 6.0), make_grid(128, -3.0, 9.0)
    for D in (0.5, 1.0, -2.0):
        phi, chi = random_state(g1, rng), random_state(g2, rng)
        lhs = apply_gauge(tensor_product(phi, chi), D)
        rhs = tensor_product(apply_gauge(phi, D), apply_gauge(chi, D))
        assert norm(lhs - rhs) < 1e-12


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), phases=st.lists(st.floats(0, 2 * math.pi), min_size=3, max_size=3))
def test_pseudolinearity_with_unimodular_weights(seed, phases):
    g = make_grid(256, -8.0, 8.0)
    psi = random_state(g, np.random.default_rng(seed))
    cuts = [IntervalSet.of((-np.inf, -2.0)), IntervalSet.of((-2.0, 1.5)), IntervalSet.of((1.5, np.inf))]
    pieces = [position_projection(psi, c) for c in cuts]
    coeffs = [complex(math.cos(p), math.sin(p)) for p in phases]
    combo = WaveFn.zeros(g)
    expected = WaveFn.zeros(g)
    for c, piece in zip(coeffs, pieces):
        combo = combo + piece * c
        expected = expected + apply_gauge(piece, 1.1) * c
    assert norm(apply_gauge(combo, 1.1) - expected) < 1e-12


def test_homogeneity_carries_a_log_phase(grid):
    psi = gaussian(grid, 0.0, 1.0)
    c, D = 2.0 * np.exp(0.4j), 0.8
    lhs = apply_gauge(psi * c, D)
    rhs = apply_gauge(psi, D) * (c * np.exp(2j * D * math.log(abs(c))))
    assert norm(lhs - rhs) < 1e-13


def test_commutes_with_position_indicators(grid, rng):
    psi = random_state(grid, rng)
    for b in [IntervalSet.of((-1.0, 2.0)), IntervalSet.of((-8.0, -3.0), (0.0, 0.25))]:
        lhs = apply_gauge(position_projection(psi, b), 1.0)
        rhs = position_projection(apply_gauge(psi, 1.0), b)
        assert norm(lhs - rhs) < 1e-14


def test_support_does_not_grow():
    pair = footnote_pair(make_grid(512, -2.0, 2.0), 1.0)
    out = apply_gauge(pair.plus, 1.0)
    assert np.all(out.amps[pair.plus.amps == 0] == 0)


def test_density_floor_zeroes_small_amplitudes(grid):
    psi = gaussian(grid, 0.0, 1.0)
    out = apply_gauge(psi, GaugeParam(1.0, rho_floor=1e-6))
    small = np.abs(psi.amps) ** 2 <= 1e-6
    assert small.any() and np.all(out.amps[small] == 0)
    assert np.allclose(np.abs(out.amps[~small]), np.abs(psi.amps[~small]))


def test_negative_floor_rejected():
    with pytest.raises(ValueError):
        GaugeParam(1.0, rho_floor=-1.0)
