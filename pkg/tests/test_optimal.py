import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linmeas.dynamics import ERROR_FREE, VON_NEUMANN, InteractionParams
from linmeas.gaussian import GaussianState
from linmeas.measurement import LinearPositionMeasurement, edr_report
from linmeas.optimal import (
    Family,
    InfeasibleError,
    Regime,
    SolverInput,
    bisect_alpha,
    classify,
    family,
    family_params,
    is_minimum_error_disturbance,
    optimal_alpha,
    probe_xi_c,
    saturation_conditions,
    solve_params,
    solver_residuals,
    theorem_conditions,
    u_plus,
)

from conftest import min_states, mus


class TestProbe:
    def test_half(self, psi_offset):
        xi = probe_xi_c(0.5, psi_offset)
        assert (xi.mean_q, xi.mean_p, xi.sigma_q, xi.sigma_p) == (2.0, -1.0, 1.0, 0.5)
        assert xi.is_minimum_uncertainty()

    def test_ninety(self, psi_unit):
        assert probe_xi_c(0.9, psi_unit).sigma_q == pytest.approx(3.0, rel=1e-15)

    def test_no_negative_zero(self, psi_unit):
        assert math.copysign(1.0, probe_xi_c(0.5, psi_unit).mean_p) == 1.0

    @pytest.mark.parametrize("c", [0.0, 1.0, -0.1, 1.5, math.nan])
    def test_bad_c(self, psi_unit, c):
        with pytest.raises(ValueError):
            probe_xi_c(c, psi_unit)

    def test_keeps_hbar(self):
        psi = GaussianState.minimum_uncertainty(0, 0, 1, hbar=2.0)
        xi = probe_xi_c(0.3, psi)
        assert xi.hbar == 2.0 and xi.is_minimum_uncertainty()


class TestCharacterization:
    def test_family_member(self, psi_offset):
        assert is_minimum_error_disturbance(family("A", 0.3, psi_offset), psi_offset)

    def test_flipped_momentum(self, psi_offset):
        m = family("A", 0.3, psi_offset)
        bad = dataclasses.replace(m, probe=dataclasses.replace(m.probe, mean_p=psi_offset.mean_p))
        assert not is_minimum_error_disturbance(bad, psi_offset)
        assert not theorem_conditions(bad, psi_offset)["probe"]
        assert not saturation_conditions(bad, psi_offset)["centered"]

    @pytest.mark.parametrize("tau", [0.5, 1.0, 2.0])
    def test_von_neumann(self, psi_offset, tau):
        for probe in (probe_xi_c(0.5, psi_offset), GaussianState(0, 0, 1, 0.5)):
            assert not is_minimum_error_disturbance(LinearPositionMeasurement(VON_NEUMANN, tau, probe), psi_offset)

    def test_requires_minimum_state(self, psi_unit):
        with pytest.raises(ValueError):
            is_minimum_error_disturbance(family("A", 0.3, psi_unit), GaussianState(0, 0, 1, 1))

    def test_boundary_rejected(self, psi_unit):
        # alpha = gamma = 0 gives c = 0, d = 1 exactly: sum rule holds, strict positivity fails
        m = LinearPositionMeasurement(InteractionParams(0.0, -1.0, 0.0), 1.0, probe_xi_c(0.5, psi_unit))
        cond = theorem_conditions(m, psi_unit)
        assert cond["sum_rule"] and not cond["positive"]
        assert not is_minimum_error_disturbance(m, psi_unit)

    def test_error_free_rejected(self, psi_unit):
        m = LinearPositionMeasurement(ERROR_FREE, math.pi, GaussianState(0, 0, 1, 0.5))
        assert not is_minimum_error_disturbance(m, psi_unit)

    @settings(max_examples=300, deadline=None)
    @given(st.integers(0, 2**63 - 1))
    def test_two_forms_agree(self, seed):
        """Theorem conditions and the moment conditions classify identically."""
        rng = np.random.default_rng(seed)
        psi = GaussianState.minimum_uncertainty(*rng.uniform(-3, 3, 2), rng.uniform(0.2, 3))
        mu = rng.uniform(0.02, 0.98)
        m = family(rng.choice(list("ABC")), mu, psi)
        # perturb one ingredient at random, or nothing
        kind = rng.integers(0, 5)
        if kind == 1:
            m = dataclasses.replace(m, tau=m.tau * rng.uniform(0.5, 1.5))
        elif kind == 2:
            m = dataclasses.replace(m, probe=dataclasses.replace(m.probe, mean_q=m.probe.mean_q + rng.uniform(0.1, 1)))
        elif kind == 3:
            lam = rng.uniform(1.2, 2)
            m = dataclasses.replace(m, probe=GaussianState.minimum_uncertainty(
                m.probe.mean_q, m.probe.mean_p, m.probe.sigma_q * lam, psi.hbar))
        elif kind == 4:
            m = dataclasses.replace(m, probe=dataclasses.replace(m.probe, sigma_p=m.probe.sigma_p * 1.5))
        thm = all(theorem_conditions(m, psi).values())
        sat = all(saturation_conditions(m, psi).values())
        assert thm == sat
        assert thm == (kind == 0)
        assert edr_report(m, psi).saturated == thm


class TestFamilies:
    def test_a(self):
        p, tau = family_params("A", 0.5)
        assert tau == pytest.approx(math.pi / 3, rel=1e-15)
        assert (p.alpha, p.beta, p.gamma) == pytest.approx((1 / math.sqrt(3), -math.sqrt(3), 0.0), rel=1e-15)

    def test_b(self):
        p, tau = family_params(Family.B, 0.5)
        assert (p.alpha, p.beta, p.gamma, tau) == (1.0, -1.0, 1.0, 0.5)

    def test_c(self):
        p, tau = family_params("C", 0.5)
        assert tau == pytest.approx(math.log(2), rel=1e-15)
        assert (p.alpha, p.beta, p.gamma) == pytest.approx((2 / 3, 0.0, 1.0), rel=1e-15)

    @pytest.mark.parametrize("mu", [0.0, 1.0, 1.5, -0.2])
    def test_bad_mu(self, psi_unit, mu):
        with pytest.raises(ValueError):
            family("A", mu, psi_unit)

    def test_bad_kind(self, psi_unit):
        with pytest.raises(ValueError):
            family("Z", 0.5, psi_unit)

    @pytest.mark.parametrize("kind, D", [("A", 1.0), ("B", 0.0), ("C", -1.0)])
    def test_discriminants(self, kind, D):
        assert family_params(kind, 0.37)[0].discriminant() == pytest.approx(D, abs=1e-15)

    @settings(max_examples=200, deadline=None)
    @given(st.sampled_from("ABC"), mus, min_states())
    def test_minimum_error_disturbance(self, kind, mu, psi):
        m = family(kind, mu, psi)
        t = m.transfer()
        assert t.c == pytest.approx(mu, rel=1e-12)
        assert t.d == pytest.approx(1 - mu, rel=1e-12)
        assert is_minimum_error_disturbance(m, psi)


class TestSolver:
    def test_positive(self):
        out = solve_params(SolverInput(0.5, 0.0, 1.0))
        assert out.regime is Regime.POSITIVE
        assert out.alpha == pytest.approx(1 / math.sqrt(3), rel=1e-14)
        assert out.beta == pytest.approx(-math.sqrt(3), rel=1e-14)
        assert out.tau == pytest.approx(math.pi / 3, rel=1e-14)

    def test_zero(self):
        out = solve_params(SolverInput(0.5, 1, 0.0))
        assert out.regime is Regime.ZERO
        assert (out.alpha, out.beta, out.tau) == (1.0, -1.0, 0.5)
        assert isinstance(out.alpha, float)

    def test_negative(self):
        out = solve_params(SolverInput(0.5, 1.0, -1.0))
        assert out.regime is Regime.NEGATIVE
        assert out.alpha == pytest.approx(2 / 3, rel=1e-14)
        assert out.beta == 0.0 and math.copysign(1, out.beta) == 1
        assert out.tau == pytest.approx(math.log(2), rel=1e-14)

    def test_infeasible(self):
        with pytest.raises(InfeasibleError, match="gamma < sqrt"):
            solve_params(SolverInput(0.5, 0.5, -1.0))

    def test_preconditions(self):
        with pytest.raises(ValueError):
            solve_params(SolverInput(0.5, -1.0, 1.0))
        with pytest.raises(ValueError):
            solve_params(SolverInput(0.5, 0.0, 0.0))
        with pytest.raises(ValueError):
            SolverInput(1.0, 1.0, 1.0)

    def test_classify_threshold(self):
        assert classify(1e-13, 0.0) is Regime.ZERO
        assert classify(-1.5e-12, 1.0) is Regime.ZERO
        assert classify(3e-12, 1.0) is Regime.POSITIVE
        assert classify(-3e-12, 1.0) is Regime.NEGATIVE

    def test_deterministic(self):
        inp = SolverInput(0.321, 0.77, -0.4)
        assert solve_params(inp) == solve_params(inp)

    def test_tau_range_positive(self):
        rng = np.random.default_rng(5)
        for _ in range(500):
            D = rng.uniform(0.01, 5)
            out = solve_params(SolverInput(rng.uniform(0.01, 0.99), rng.uniform(0, 3), D))
            assert 0 < out.tau < math.pi / (2 * math.sqrt(D))

    def test_residuals(self):
        for inp in (SolverInput(0.3, 0.4, 2.0), SolverInput(0.3, 2.0, 0.0), SolverInput(0.3, 2.0, -3.0)):
            res = solver_residuals(inp, solve_params(inp))
            assert max(abs(v) for v in res.values()) < 1e-12

    def test_round_trip(self):
        rng = np.random.default_rng(77)
        for i in range(1000):
            mu = rng.uniform(0.01, 0.99)
            regime = i % 3
            if regime == 0:
                gamma, D = rng.uniform(0, 3), rng.uniform(0.01, 5)
            elif regime == 1:
                gamma, D = rng.uniform(0.05, 3), 0.0
            else:
                D = -rng.uniform(0.01, 5)
                gamma = math.sqrt(-D) * rng.uniform(1, 3)
            psi = GaussianState.minimum_uncertainty(*rng.uniform(-3, 3, 2), rng.uniform(0.2, 3))
            out = solve_params(SolverInput(mu, gamma, D))
            m = LinearPositionMeasurement(out.params(gamma), out.tau, probe_xi_c(mu, psi))
            t = m.transfer()
            assert abs(t.c - mu) < 1e-9 and abs(t.d - (1 - mu)) < 1e-9
            assert is_minimum_error_disturbance(m, psi)
            rep = edr_report(m, psi)
            assert rep.saturated
            assert rep.epsilon_q**2 == pytest.approx((1 - mu) * psi.sigma_q**2, rel=1e-9)
            assert rep.eta_p**2 == pytest.approx(mu * psi.sigma_p**2, rel=1e-9)

    @settings(max_examples=300, deadline=None)
    @given(mus, st.floats(0, 5), st.floats(1e-3, 10))
    def test_bisection_agrees(self, mu, gamma, D):
        alpha = optimal_alpha(mu, gamma, D)
        assert bisect_alpha(mu, gamma, D) == pytest.approx(alpha, rel=1e-10)
        assert u_plus(alpha, mu, gamma, D) == pytest.approx(1.0, abs=1e-12)

    def test_u_plus_decreasing(self):
        a = np.linspace(0.1, 5, 50)
        vals = [u_plus(x, 0.4, 0.7, 1.3) for x in a]
        assert np.all(np.diff(vals) < 0)

    def test_bisection_domain(self):
        with pytest.raises(ValueError):
            bisect_alpha(0.5, 1.0, -1.0)
