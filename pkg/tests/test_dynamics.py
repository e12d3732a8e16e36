import math

import numpy as np
import pytest

from dgsim.dynamics import (
    DgCoefficients,
    check_nodes,
    evolve_dg,
    evolve_dg_direct,
    evolve_dg_two_particle,
    free_dg_evolve,
    hamiltonian_conjugation_gap,
)
from dgsim.errors import BlowUpError, NodeDetectedError
from dgsim.experiments.states import exp_gaussian, footnote_pair, gaussian
from dgsim.gauge import apply_gauge
from dgsim.grid import WaveFn, make_grid, norm, tensor_product
from dgsim.propagators import Potential, StepConfig, free_evolve, split_step_evolve


@pytest.fixture
def g8():
    return make_grid(1024, -8.0, 8.0)


class TestCoefficients:
    def test_family_relations(self):
        c = DgCoefficients.linearizable(0.7)
        assert c.as_tuple() == (1.0, -0.7, 0.0, -1.0, 0.35)
        assert c.c2 + 2 * c.c5 == 0
        assert c.is_linearizable(0.7) and not c.is_linearizable(0.8)

    def test_direct_rejects_other_coefficients(self, g8):
        with pytest.raises(ValueError):
            evolve_dg_direct(gaussian(g8), DgCoefficients(-1.0, -0.5, 0.0, -1.0, 0.25), 0.5)


class TestConjugatedFlow:
    def test_zero_time(self, g8):
        psi = gaussian(g8, 0.0, 1.0, 1.0)
        out = evolve_dg(psi, 0.9, Potential.harmonic(1.0), StepConfig(dt=1e-3, t_final=0.0))
        assert norm(out - psi) < 1e-14

    def test_zero_strength_is_the_linear_flow_bit_for_bit(self, g8):
        psi = gaussian(g8, 1.0, 1.0, -0.5)
        pot, cfg = Potential.harmonic(1.0), StepConfig(dt=1e-3, t_final=0.5)
        assert np.array_equal(evolve_dg(psi, 0.0, pot, cfg).amps, split_step_evolve(psi, pot, cfg).amps)

    def test_intertwining(self, g8):
        phi = gaussian(g8, 0.5, 0.8, 1.0)
        pot, cfg = Potential.gaussian(2.0, 1.0), StepConfig(dt=1e-3, t_final=0.3)
        lhs = evolve_dg(apply_gauge(phi, 1.2), 1.2, pot, cfg)
        rhs = apply_gauge(split_step_evolve(phi, pot, cfg), 1.2)
        assert norm(lhs - rhs) < 1e-12

    def test_sign_reversal(self, g8):
        psi = gaussian(g8, -0.5, 1.1, 0.3)
        lhs = free_dg_evolve(psi, -0.8, 0.6)
        rhs = apply_gauge(free_evolve(apply_gauge(psi, 0.8), 0.6), -0.8)
        assert norm(lhs - rhs) < 1e-12

    def test_norm_and_group_law(self, g8):
        psi = gaussian(g8, 0.0, 1.0, 2.0)
        pot = Potential.harmonic(0.7)
        a = evolve_dg(psi, 0.5, pot, StepConfig(dt=1e-2, t_final=0.4))
        ab = evolve_dg(a, 0.5, pot, StepConfig(dt=1e-2, t_final=0.6, t0=0.4))
        whole = evolve_dg(psi, 0.5, pot, StepConfig(dt=1e-2, t_final=1.0))
        assert abs(norm(whole) - 1.0) < 1e-12
        assert norm(ab - whole) < 1e-10

    def test_free_flow_runs_backwards(self, g8):
        psi = gaussian(g8, 0.0, 1.0, 1.0)
        assert norm(free_dg_evolve(free_dg_evolve(psi, 1.0, 0.8), 1.0, -0.8) - psi) < 1e-12


class TestDirectIntegrator:
    def test_linear_limit(self, g8):
        psi = gaussian(g8, 0.0, 1.0, 0.5)
        out = evolve_dg_direct(psi, DgCoefficients.linearizable(0.0), 0.0, None, StepConfig(dt=1e-4, t_final=0.1))
        assert norm(out - free_evolve(psi, 0.1)) < 1e-6

    def test_matches_conjugated_flow_at_half_time_unit(self, g8):
        psi = gaussian(g8, 0.0, 1.0)
        cfg = StepConfig(dt=1e-4, t_final=0.5)
        direct = evolve_dg_direct(psi, DgCoefficients.linearizable(0.5), 0.5, None, cfg)
        assert norm(direct - free_dg_evolve(psi, 0.5, 0.5)) < 1e-3

    def test_matches_conjugated_flow_in_a_trap(self):
        g = make_grid(512, -8.0, 8.0)
        psi = gaussian(g, 0.5, 1.0, 0.5)
        pot, cfg = Potential.harmonic(1.0), StepConfig(dt=1e-4, t_final=0.1)
        direct = evolve_dg_direct(psi, DgCoefficients.linearizable(0.5), 0.5, pot, cfg)
        assert norm(direct - evolve_dg(psi, 0.5, pot, cfg)) < 1e-8

    def test_step_function_has_nodes(self):
        pair = footnote_pair(make_grid(256, -2.0, 2.0), 1.0)
        with pytest.raises(NodeDetectedError):
            evolve_dg_direct(pair.plus, DgCoefficients.linearizable(1.0), 1.0)

    def test_fragmented_density_is_a_node(self, g8):
        two = gaussian(g8, -4.0, 0.5) + gaussian(g8, 4.0, 0.5)
        with pytest.raises(NodeDetectedError):
            check_nodes(two.amps)
        check_nodes(gaussian(g8).amps)

    def test_unpadded_domain_blows_up(self):
        g = make_grid(256, -4.0, 4.0)
        with pytest.raises(BlowUpError):
            evolve_dg_direct(gaussian(g), DgCoefficients.linearizable(1.0), 1.0, None,
                             StepConfig(dt=1e-4, t_final=0.2))


class TestTwoParticle:
    def test_product_state_separates(self):
        g1, g2 = make_grid(128, -10.0, 10.0), make_grid(64, -6.0, 6.0)
        phi, chi = gaussian(g1, 1.0, 1.0, 1.0), gaussian(g2, -0.5, 0.8)
        v1, v2 = Potential.harmonic(1.0), Potential.gaussian(1.5, 0.5)
        cfg = StepConfig(dt=1e-2, t_final=0.5)
        joint = evolve_dg_two_particle(tensor_product(phi, chi), 0.8, v1, v2, cfg)
        split = tensor_product(evolve_dg(phi, 0.8, v1, cfg), evolve_dg(chi, 0.8, v2, cfg))
        assert norm(joint - split) < 1e-10
        assert abs(norm(joint) - 1.0) < 1e-12

    def test_linear_limit(self):
        g = make_grid(64, -8.0, 8.0)
        state = tensor_product(gaussian(g, 1.0), gaussian(g, -1.0, 1.0, 1.0)) \
            + tensor_product(gaussian(g, -2.0), gaussian(g, 2.0))
        cfg = StepConfig(dt=1e-2, t_final=0.3)
        out = evolve_dg_two_particle(state, 0.0, Potential.harmonic(1.0), None, cfg)
        lin = np.array(state.amps)
        for i in range(g.n):
            lin[i, :] = free_evolve(WaveFn(g, lin[i, :]), 0.3).amps
        for j in range(g.n):
            lin[:, j] = split_step_evolve(WaveFn(g, lin[:, j]), Potential.harmonic(1.0), cfg).amps
        assert np.max(np.abs(out.amps - lin)) < 1e-12

    def test_disjoint_first_factors_expand_term_by_term(self):
        g1, g2 = make_grid(128, -32.0, 32.0), make_grid(128, -16.0, 16.0)
        phis = [gaussian(g1, -14.0, 1.5), gaussian(g1, 14.0, 1.5)]
        chis = [gaussian(g2, -3.0, 1.0, 1.0), gaussian(g2, 3.0, 1.0, -1.0)]
        D, t = 1.0, 1.0
        state = apply_gauge((tensor_product(phis[0], chis[0]) + tensor_product(phis[1], chis[1]))
                            * (1 / math.sqrt(2)), D)
        out = evolve_dg_two_particle(state, D, None, None, StepConfig(dt=1e-2, t_final=t))
        terms = [tensor_product(apply_gauge(free_evolve(p, t), D), apply_gauge(free_evolve(c, t), D))
                 for p, c in zip(phis, chis)]
        expected = terms[0] + terms[1]
        # N_D(c Psi) = c e^{2iD ln|c|} N_D(Psi): the 1/sqrt2 weight carries a known phase
        c = 1 / math.sqrt(2)
        expected = expected * (c * np.exp(2j * D * math.log(c)))
        assert norm(out - expected) < 1e-10


class TestHamiltonianGap:
    def test_linear_case(self, g8):
        vec, exp = hamiltonian_conjugation_gap(gaussian(g8, 0.0, 1.0, 0.5), 0.0)
        assert vec < 1e-8 and exp < 1e-8

    def test_gaussian(self, g8):
        vec, exp = hamiltonian_conjugation_gap(gaussian(g8), 0.5)
        assert exp < 1e-6
        assert vec > 1e-3

    def test_exponential_profile(self):
        vec, exp = hamiltonian_conjugation_gap(exp_gaussian(make_grid(2048, -24.0, 24.0), sigma=2.0), 1.0)
        assert vec > 1e-3 and exp < 1e-6

    def test_nodes_rejected(self):
        with pytest.raises(NodeDetectedError):
            hamiltonian_conjugation_gap(footnote_pair(make_grid(256, -2.0, 2.0), 1.0).plus, 1.0)
