import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pdmosc import states
from pdmosc.errors import DomainError, NumericalError, ParameterError
from pdmosc.gridops import build_grid, default_grid
from pdmosc.params import OscParams, lowest_weights

Ls = st.sampled_from([-1.0, 0.0, 0.5, 1.0, 1.5, 2.0, 3.0])


def _p(omega, alpha, L):
    mode = {-1.0: "even"}.get(L)
    return OscParams(omega, alpha, L, one_dim=mode)


class TestEnergies:
    def test_constant_mass_examples(self):
        assert states.energy_const(OscParams(1, 0, 0), 0) == 1.5
        assert states.energy_const(OscParams(1, 0, 0), 2) == 5.5
        assert states.energy_const(OscParams(2, 0, 1.5), 1) == 10.0

    def test_pdm_examples(self):
        p = OscParams(1, 1, 0)
        assert states.energy_pdm(p, 0) == pytest.approx(4.62132034, abs=1e-8)
        assert states.energy_pdm(p, 1) == pytest.approx(17.44974747, abs=1e-8)
        assert states.energy_pdm(OscParams(1, 1e-6, 0), 0) == pytest.approx(1.5, abs=5e-6)
        with pytest.raises(ParameterError):
            states.energy_pdm(OscParams(1, 0, 0), 0)

    @given(st.floats(0.2, 5.0), st.floats(0.01, 5.0), Ls, st.integers(0, 15))
    def test_quadratic_spacing(self, omega, alpha, L, n):
        p = _p(omega, alpha, L)
        gap = states.energy_pdm(p, n + 1) - states.energy_pdm(p, n)
        assert gap == pytest.approx(alpha * (8 * n + 4 * L + 8 + 4 * p.s), rel=1e-12)

    @pytest.mark.parametrize("n", [0, 1, 3])
    def test_k0_eigenvalue_limit(self, n):
        base = OscParams(1.0, 0.0, 0.5)
        k, _ = lowest_weights(base)
        errs = [abs(states.energy_pdm(base.with_alpha(a), n) / (4 * base.with_alpha(a).lam) - (n + k)) for a in (1e-2, 1e-3, 1e-4)]
        for e, a in zip(errs, (1e-2, 1e-3, 1e-4)):
            assert e <= 10 * (n + 1) ** 2 * a
        assert errs[2] < errs[1] < errs[0]

    def test_dispatch(self):
        assert states.energy(OscParams(1, 1, 0), 0) == states.energy_pdm(OscParams(1, 1, 0), 0)
        assert states.energy(OscParams(1, 1, 0), 0, "const") == 1.5
        with pytest.raises(ValueError):
            states.energy(OscParams(1, 1, 0), 0, "other")


class TestProfiles:
    def test_map_t(self):
        p = OscParams(1, 1, 0)
        assert states.map_t(p, 0.0) == -1.0
        assert states.map_t(p, 1.0) == 0.0
        assert states.map_t(p, 3.0) == pytest.approx(0.8, abs=1e-15)
        with pytest.raises(ParameterError):
            states.map_t(OscParams(1, 0, 0), 1.0)

    def test_examples(self):
        pr = states.profiles(OscParams(1, 1, 0), 1.0)
        assert (pr.f, pr.M) == (2.0, 0.25)
        assert pr.Veff == pytest.approx(-2.75, abs=1e-15)
        r = np.array([0.3, 1.0, 4.0])
        pr = states.profiles(OscParams(2, 0, 1.0), r)
        np.testing.assert_array_equal(pr.f, 1.0)
        np.testing.assert_allclose(pr.Veff, 2 / r ** 2 + r ** 2, rtol=1e-15)

    @given(st.floats(0.0, 10.0), st.floats(1e-3, 1e3))
    def test_mass_invariants(self, alpha, r):
        pr = states.profiles(OscParams(1, alpha, 0), r)
        assert pr.f >= 1 and 0 < pr.M <= 1
        assert pr.M * pr.f ** 2 == pytest.approx(1.0, rel=1e-15)

    def test_radius_domain(self):
        with pytest.raises(DomainError):
            states.profiles(OscParams(1, 1, 0), 0.0)
        with pytest.raises(DomainError):
            states.eval_psi(OscParams(1, 0, 0), 0, -1.0)


class TestWavefunctions:
    def test_constant_mass_example(self):
        p = OscParams(1, 0, 0)
        r = math.sqrt(2)
        assert states.eval_psi_const(p, 1, r) == pytest.approx(0.5 * r * math.exp(-0.5), rel=1e-14)

    @pytest.mark.parametrize("model", ["const", "pdm"])
    def test_ground_state_envelope(self, model):
        p = OscParams(1.0, 0.7, 1.5)
        r = np.array([0.1, 0.8, 3.0, 12.0])
        if model == "const":
            env = r ** 2.5 * np.exp(-0.25 * r * r)
        else:
            env = r ** 2.5 * (1 + 0.7 * r * r) ** (-(p.s + 3.5) / 2)
        ratio = states.eval_psi(p, 0, r, model) / env
        np.testing.assert_allclose(ratio, 1.0, rtol=1e-13)

    @pytest.mark.parametrize("alpha,L", [(1.0, 0.0), (0.3, 1.5), (0.05, 2.0)])
    def test_power_law_tail(self, alpha, L):
        p = OscParams(1.0, alpha, L)
        c = [states.eval_psi_pdm(p, 2, r) * r ** (p.s + 1) for r in (1e3, 1e4)]
        assert c[0] != 0 and abs(c[1] / c[0] - 1) < 0.01

    def test_no_overflow_in_log_space(self):
        p = OscParams(1.0, 0.001, 2.0)
        v = states.eval_psi_pdm(p, 30, np.array([1e-3, 1.0, 1e3, 1e8]))
        assert np.all(np.isfinite(v))

    @pytest.mark.parametrize("model,alpha", [("const", 0.0), ("pdm", 0.5)])
    def test_node_count_and_interlacing(self, model, alpha):
        p = OscParams(1.0, alpha, 0.5)
        r = np.linspace(1e-3, 40.0, 200001)
        zeros = []
        for n in range(6):
            v = states.eval_psi(p, n, r, model)
            idx = np.nonzero(np.sign(v[1:]) != np.sign(v[:-1]))[0]
            assert len(idx) == n
            zeros.append(r[idx])
        for a, b in zip(zeros[:-1], zeros[1:]):
            # exactly one zero of psi_{n+1} between consecutive zeros of psi_n
            edges = np.concatenate([[0.0], a, [np.inf]])
            counts = np.histogram(b, bins=edges)[0]
            assert np.all(counts == 1)

    @given(st.floats(0.3, 3.0), st.floats(0.05, 2.0), Ls, st.integers(0, 8))
    def test_pdm_eigen_equation(self, omega, alpha, L, n):
        # -(f^2 psi')' + Veff psi = E psi, checked pointwise with the analytic derivatives
        p = _p(omega, alpha, L)
        r = np.geomspace(0.05, 20.0, 25) / math.sqrt(alpha)
        psi, d1, d2 = states.psi_with_derivatives(p, n, r, "pdm")
        f = 1 + alpha * r * r
        lhs = -(f * f * d2 + 4 * alpha * r * f * d1) + states.profiles(p, r).Veff * psi
        E = states.energy_pdm(p, n)
        scale = np.max(np.abs(E * psi)) + np.max(np.abs(f * f * d2))
        assert np.max(np.abs(lhs - E * psi)) <= 1e-9 * scale

    @given(st.floats(0.3, 3.0), Ls, st.integers(0, 8))
    def test_const_eigen_equation(self, omega, L, n):
        p = _p(omega, 0.0, L)
        r = np.linspace(0.05, 6.0, 25) * math.sqrt(2 * (2 * n + 2) / omega)
        psi, _, d2 = states.psi_with_derivatives(p, n, r, "const")
        lhs = -d2 + states.profiles(p, r).Veff * psi
        E = states.energy_const(p, n)
        scale = np.max(np.abs(E * psi)) + np.max(np.abs(d2))
        assert np.max(np.abs(lhs - E * psi)) <= 1e-9 * scale

    @pytest.mark.parametrize("model,alpha", [("const", 0.0), ("pdm", 0.4)])
    def test_derivatives_match_finite_differences(self, model, alpha):
        p = OscParams(1.2, alpha, 1.0)
        r = np.array([0.5, 1.3, 2.7])
        h = 1e-5
        _, d1, d2 = states.psi_with_derivatives(p, 3, r, model)
        f = lambda x: states.eval_psi(p, 3, x, model)
        np.testing.assert_allclose(d1, (f(r + h) - f(r - h)) / (2 * h), rtol=1e-6, atol=1e-9)
        h = 1e-3
        np.testing.assert_allclose(d2, (f(r + h) - 2 * f(r) + f(r - h)) / h ** 2, rtol=0, atol=1e-5 * np.max(np.abs(d2)))


class TestNormalization:
    @pytest.mark.parametrize("model,alpha,L,n", [("const", 0.0, 0.0, 0), ("const", 0.0, 1.5, 3), ("pdm", 1.0, 0.0, 0), ("pdm", 0.5, 1.0, 2), ("pdm", 0.2, -1.0, 3)])
    def test_closed_form_against_mpmath(self, model, alpha, L, n):
        p = _p(1.0, alpha, L)
        c = states.norm_closed_form(p, n, model)
        mp.mp.dps = 30
        integrand = lambda r: states.eval_psi(p, n, float(r), model) ** 2
        ref = mp.quad(integrand, [0, 0.5, 2, 8, 40, mp.inf])
        assert c * c * float(ref) == pytest.approx(1.0, rel=1e-9)

    def test_sign_convention(self):
        for p, model in ((OscParams(1, 0, 0.5), "const"), (OscParams(1, 0.6, 0.5), "pdm")):
            g = default_grid(p, 8)
            for n in range(6):
                st_ = states.sample_state(p, n, g, model)
                # (-1)^n psi_n > 0 at small r, i.e. psi_n > 0 in its outermost lobe
                assert (-1) ** n * st_.values[0] > 0
                assert st_.values[-1] > 0 or abs(st_.values[-1]) < 1e-300

    def test_idempotent(self):
        p = OscParams(1, 0.6, 0.0)
        g = default_grid(p, 6)
        once = states.sample_state(p, 4, g)
        twice = states.normalize(once, g)
        assert twice.norm_constant / once.norm_constant == pytest.approx(1.0, abs=1e-12)
        assert float(np.dot(g.weights, twice.values ** 2)) == pytest.approx(1.0, abs=1e-12)

    def test_gram_first_eight_pdm(self):
        p = OscParams(1, 0.5, 1.0)
        g = default_grid(p, 8)
        psi = np.array([states.sample_state(p, n, g).values for n in range(8)])
        np.testing.assert_allclose((psi * g.weights) @ psi.T, np.eye(8), atol=1e-10)

    def test_zero_norm_diagnostic(self):
        p = OscParams(1, 0, 0)
        g = build_grid(p, 16, "truncated_uniform", R=1.0)
        zero = states.StateSample(0, 0.0, np.zeros(g.size), model="const")
        with pytest.raises(NumericalError, match="cannot normalise"):
            states.normalize(zero, g)

    def test_samples_are_read_only(self):
        p = OscParams(1, 0, 0)
        st_ = states.sample_state(p, 0, default_grid(p, 2))
        with pytest.raises(ValueError):
            st_.values[0] = 1.0
        with pytest.raises(NumericalError):
            states.StateSample(0, 0.0, [np.nan])


class TestCasimir:
    def test_const(self):
        assert states.casimir_value_const(OscParams(1, 0, 0)) == -0.1875
        assert states.casimir_value_const(OscParams(1, 0, 0.5)) == 0.0
        k, _ = lowest_weights(OscParams(1, 0, 2.0))
        assert states.casimir_value_const(OscParams(1, 0, 2.0)) == pytest.approx(k * (k - 1), rel=1e-15)

    def test_pdm(self):
        p = OscParams(1, 0.8, 0.5)
        assert states.casimir_value_pdm(p) == pytest.approx(-3 * 0.64 / (16 * p.lam ** 2) * 0.75, rel=1e-14)
        # (1/4)(1 - 1/lam)(3/2)(-1/2) with lam = (1 + sqrt 2)/2, in extended precision
        mp.mp.dps = 30
        lam = (1 + mp.sqrt(2)) / 2
        ref = float((1 - 1 / lam) * mp.mpf(1.5) * mp.mpf(-0.5) / 4)
        assert ref == pytest.approx(-0.0321699141, abs=1e-10)
        assert states.casimir_value_pdm(OscParams(1, 1, 0)) == pytest.approx(ref, abs=1e-15)

    @pytest.mark.parametrize("L", [0.0, 1.0, 2.5])
    def test_limit(self, L):
        base = OscParams(1, 0, L)
        for a in (1e-2, 1e-3, 1e-4):
            assert abs(states.casimir_value_pdm(base.with_alpha(a)) - states.casimir_value_const(base)) <= 10 * (L + 1) ** 2 * a
