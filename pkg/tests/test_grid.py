import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dgsim.errors import GridMismatchError, InvalidGridError, ZeroStateError
from dgsim.experiments.states import footnote_pair, gaussian
from dgsim.grid import (
    WaveFn,
    WaveFn2,
    density_current,
    fourier_coefficients,
    inner_product,
    make_grid,
    norm,
    normalize,
    partial_statistic,
    tensor_product,
)
from dgsim.intervals import IntervalSet
from dgsim.propagators import position_projection


class TestMakeGrid:
    def test_small_grid_spacings(self):
        g = make_grid(16, -1.0, 1.0)
        assert g.dx == 0.125
        assert np.allclose(np.diff(g.p), math.pi)
        assert g.p[0] == pytest.approx(-8 * math.pi)

    def test_large_grid_dx(self):
        assert make_grid(4096, -2.0, 2.0).dx == pytest.approx(9.765625e-4, rel=1e-15)

    @pytest.mark.parametrize("n", [17, 8, 1000, 0, -16])
    def test_rejects_bad_n(self, n):
        with pytest.raises(InvalidGridError):
            make_grid(n, -1.0, 1.0)

    @pytest.mark.parametrize("lo, hi", [(1.0, 1.0), (2.0, -2.0)])
    def test_rejects_bad_domain(self, lo, hi):
        with pytest.raises(InvalidGridError):
            make_grid(16, lo, hi)

    def test_midpoint_samples_and_natural_momentum_order(self):
        g = make_grid(32, -2.0, 2.0)
        assert g.x[0] == pytest.approx(-2.0 + 0.5 * g.dx)
        assert g.x[-1] == pytest.approx(2.0 - 0.5 * g.dx)
        k = np.arange(-16, 16)
        assert np.allclose(g.p, 2 * np.pi * k / (g.n * g.dx))

    def test_lattice_arrays_are_read_only(self):
        g = make_grid(16, 0.0, 1.0)
        with pytest.raises(ValueError):
            g.x[0] = 5.0

    def test_boundaries_of_footnote_grid(self):
        g = make_grid(4096, -2.0, 2.0)
        assert all(g.is_boundary(p) for p in (-1.0, 0.0, 1.0))
        assert not make_grid(4096, -2.0 - g.dx / 2, 2.0 - g.dx / 2).is_boundary(0.0)


class TestWaveFn:
    def test_rejects_nan_and_wrong_shape(self):
        g = make_grid(16, -1.0, 1.0)
        with pytest.raises(ValueError):
            WaveFn(g, np.full(16, np.nan))
        with pytest.raises(ValueError):
            WaveFn(g, np.ones(8))

    def test_amps_are_an_immutable_copy(self):
        g = make_grid(16, -1.0, 1.0)
        src = np.ones(16, dtype=complex)
        psi = WaveFn(g, src)
        src[0] = 7.0
        assert psi.amps[0] == 1.0
        with pytest.raises(ValueError):
            psi.amps[1] = 2.0

    def test_grid_mismatch(self):
        a = WaveFn(make_grid(16, -1.0, 1.0), np.ones(16))
        b = WaveFn(make_grid(16, -2.0, 2.0), np.ones(16))
        with pytest.raises(GridMismatchError):
            inner_product(a, b)
        with pytest.raises(GridMismatchError):
            a + b


class TestInnerProductAndNorm:
    def test_normalized_self_overlap(self, grid):
        psi = gaussian(grid, 1.0, 0.7, 1.3)
        assert inner_product(psi, psi) == pytest.approx(1.0 + 0.0j, abs=1e-14)

    def test_footnote_pair_is_orthogonal(self):
        pair = footnote_pair(make_grid(4096, -2.0, 2.0), 1.0)
        assert abs(inner_product(pair.minus, pair.plus)) < 1e-12

    def test_separated_gaussians(self):
        g = make_grid(4096, -32.0, 32.0)
        ov = inner_product(gaussian(g, -5.0, 1.0), gaussian(g, 5.0, 1.0))
        assert ov.real == pytest.approx(math.exp(-25.0), rel=1e-10)
        assert abs(ov.imag) < 1e-25

    def test_constant_norm(self):
        assert norm(WaveFn(make_grid(64, -1.0, 1.0), np.ones(64))) == pytest.approx(math.sqrt(2.0), abs=1e-15)

    def test_footnote_plus_norm(self):
        plus = footnote_pair(make_grid(4096, -2.0, 2.0), 1.0).plus
        assert norm(plus) ** 2 == pytest.approx(1.0 + math.exp(math.pi / 2.0), rel=1e-12)

    def test_normalize_zero(self, grid):
        with pytest.raises(ZeroStateError):
            normalize(WaveFn.zeros(grid))

    def test_parseval(self, grid, rng):
        psi = WaveFn(grid, rng.normal(size=grid.n) + 1j * rng.normal(size=grid.n))
        coeff = np.sum(np.abs(fourier_coefficients(psi)) ** 2)
        assert coeff == pytest.approx(norm(psi) ** 2, rel=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False))
    def test_sesquilinear(self, seed, c):
        g = make_grid(64, -4.0, 4.0)
        r = np.random.default_rng(seed)
        a, b, d = (WaveFn(g, r.normal(size=64) + 1j * r.normal(size=64)) for _ in range(3))
        scale = 1.0 + abs(c)
        lin = inner_product(a, b * c + d) - (c * inner_product(a, b) + inner_product(a, d))
        anti = inner_product(a * c, b) - np.conj(c) * inner_product(a, b)
        assert abs(lin) < 1e-12 * scale * 100
        assert abs(anti) < 1e-12 * scale * 100
        assert inner_product(a, b) == pytest.approx(np.conj(inner_product(b, a)), abs=1e-12)


class TestDensityCurrent:
    def test_plane_wave(self):
        g = make_grid(128, 0.0, 8.0)
        k = 2 * np.pi / g.length * 5
        psi = WaveFn(g, np.exp(1j * k * g.x) / math.sqrt(g.length))
        dc = density_current(psi)
        assert np.allclose(dc.rho, 1.0 / g.length, atol=1e-15)
        assert np.allclose(dc.j, k / g.length, atol=1e-12)

    def test_real_gaussian_has_no_current(self, grid):
        assert np.max(np.abs(density_current(gaussian(grid, 0.3, 1.2)).j)) < 1e-12

    def test_chirped_gaussian(self, grid):
        c = 0.35
        base = gaussian(grid, 0.0, 1.0)
        psi = base.with_amps(base.amps * np.exp(1j * c * grid.x**2))
        dc = density_current(psi)
        assert np.max(np.abs(dc.j - 2 * c * grid.x * dc.rho)) < 1e-6

    def test_density_integrates_to_norm(self, grid, rng):
        psi = WaveFn(grid, rng.normal(size=grid.n) + 1j * rng.normal(size=grid.n))
        total = grid.dx * density_current(psi).rho.sum()
        assert abs(total - norm(psi) ** 2) < 1e-12 * norm(psi) ** 2


class TestTensorProduct:
    def test_norm_is_multiplicative(self, rng):
        g1, g2 = make_grid(32, -2.0, 2.0), make_grid(64, 0.0, 3.0)
        a = WaveFn(g1, rng.normal(size=32) + 1j * rng.normal(size=32))
        b = WaveFn(g2, rng.normal(size=64))
        assert norm(tensor_product(a, b)) == pytest.approx(norm(a) * norm(b), rel=1e-12)
        assert norm(tensor_product(normalize(a), normalize(b))) == pytest.approx(1.0, abs=1e-12)

    def test_zero_factor(self, grid):
        out = tensor_product(gaussian(grid), WaveFn.zeros(grid))
        assert not np.any(out.amps)

    def test_step_function_entries(self):
        g = make_grid(64, -2.0, 2.0)
        pair = footnote_pair(g, 1.0)
        out = tensor_product(pair.plus, pair.minus)
        for i, j in [(10, 20), (40, 20), (40, 40), (0, 63), (20, 45)]:
            assert out.amps[i, j] == pair.plus.amps[i] * pair.minus.amps[j]


class TestPartialStatistic:
    def test_identity_effect(self, rng):
        g = make_grid(32, -2.0, 2.0)
        state = WaveFn2(g, g, rng.normal(size=(32, 32)) + 1j * rng.normal(size=(32, 32)))
        assert partial_statistic(state, lambda w: w) == pytest.approx(1.0, abs=1e-14)

    def test_product_state(self):
        g = make_grid(64, -8.0, 8.0)
        phi, psi = gaussian(g, -1.0, 1.5), gaussian(g, 2.0, 0.5)
        b = IntervalSet.of((-0.5, 3.0))
        expected = norm(position_projection(phi, b)) ** 2 / norm(phi) ** 2
        got = partial_statistic(tensor_product(phi, psi), lambda w: position_projection(w, b))
        assert got == pytest.approx(expected, abs=1e-13)

    def test_entangled_two_term_state(self):
        g = make_grid(64, -8.0, 8.0)
        phis = [gaussian(g, -2.0, 1.0), gaussian(g, 1.0, 0.8)]
        # orthonormal second factors: disjoint supports
        left = WaveFn(g, (g.x < 0).astype(float))
        right = WaveFn(g, (g.x >= 0).astype(float))
        chis = [normalize(left), normalize(right)]
        weights = [0.3, 0.7]
        state = (tensor_product(phis[0], chis[0]) * math.sqrt(weights[0])
                 + tensor_product(phis[1], chis[1]) * math.sqrt(weights[1]))
        b = IntervalSet.of((-1.0, 0.5))
        omegas = [norm(position_projection(p, b)) ** 2 for p in phis]
        expected = sum(w * o for w, o in zip(weights, omegas)) / sum(weights)
        got = partial_statistic(state, lambda w: position_projection(w, b))
        assert got == pytest.approx(expected, abs=1e-13)

    def test_zero_state(self):
        g = make_grid(16, -1.0, 1.0)
        with pytest.raises(ZeroStateError):
            partial_statistic(WaveFn2(g, g, np.zeros((16, 16))), lambda w: w)
