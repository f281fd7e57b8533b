import ast
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import pdmosc.oracle as oracle_mod
from pdmosc.errors import NumericalError, ParameterError
from pdmosc.oracle import (
    compare_to_analytic,
    discretize,
    extrapolate,
    extrapolation_exponents,
    line_spectrum,
    required_radius,
    solve_spectrum,
)
from pdmosc.params import OscParams
from pdmosc.states import energy_const, energy_pdm, eval_psi, profiles


def test_dependency_audit():
    """The eigensolver may use only profiles and the closed-form energies from the package."""
    tree = ast.parse(Path(oracle_mod.__file__).read_text())
    allowed_pkg = {"errors": None, "params": None, "report": None, "states": {"energy_const", "energy_pdm", "profiles"}}
    allowed_ext = {"__future__", "math", "dataclasses", "numpy", "scipy.linalg", "scipy.optimize"}
    for node in ast.walk(tree):
        if isinstance(node, ast.Import):
            for a in node.names:
                assert a.name in allowed_ext, a.name
        elif isinstance(node, ast.ImportFrom):
            if node.level:
                assert node.module in allowed_pkg, node.module
                names = allowed_pkg[node.module]
                if names is not None:
                    assert {a.name for a in node.names} <= names
            else:
                assert node.module in allowed_ext, node.module
    assert "gridops" not in Path(oracle_mod.__file__).read_text()


class TestDiscretize:
    def test_constant_mass_stencil(self):
        p = OscParams(1, 0, 0)
        H = discretize(p, "const", 400, R=10.0)
        h2 = H.h * H.h
        np.testing.assert_allclose(H.offdiag, -1.0 / h2, rtol=1e-15)
        np.testing.assert_allclose(H.diag[1:], 2.0 / h2 + H.nodes[1:] ** 2 / 4, rtol=1e-14)
        # ghost node psi_0 = -psi_1 at the origin
        assert H.diag[0] == pytest.approx(3.0 / h2 + H.nodes[0] ** 2 / 4, rel=1e-14)

    @pytest.mark.parametrize("alpha,mapping", [(0.0, None), (0.5, "geodesic"), (0.5, "uniform")])
    def test_symmetric_and_finite(self, alpha, mapping):
        p = OscParams(1, alpha, 1.0)
        H = discretize(p, "pdm" if alpha else "const", 300, mapping=mapping)
        A = H.matrix
        assert np.array_equal(A, A.T)
        assert np.all(np.isfinite(H.diag))

    def test_potential_matches_profiles(self):
        p = OscParams(1, 0.5, 1.0)
        H = discretize(p, "pdm", 500)
        np.testing.assert_array_equal(H.veff, profiles(p, H.nodes).Veff)

    def test_warnings(self):
        p = OscParams(1, 0.5, 0.0)
        assert any("coarse" in w for w in discretize(p, "pdm", 300).warnings)
        assert any("tail radius" in w for w in discretize(p, "pdm", 1000, R=5.0, mapping="uniform").warnings)

    @pytest.mark.parametrize(
        "p,model,M,field",
        [
            (OscParams(1, 0, 0), "const", 100, "M"),
            (OscParams(1, 0, 0), "quantum", 300, "model"),
            (OscParams(1, 0, -0.5), "const", 300, "L"),
            (OscParams(1, 0.5, 0), "pdm", 300, "mapping"),
        ],
    )
    def test_errors(self, p, model, M, field):
        with pytest.raises(ParameterError) as exc:
            discretize(p, model, M, mapping="spiral" if field == "mapping" else None)
        assert exc.value.field == field

    def test_pdm_needs_alpha(self):
        with pytest.raises(ParameterError):
            discretize(OscParams(1, 0, 0), "pdm", 300)


class TestSolve:
    def test_constant_mass_levels(self):
        p = OscParams(1, 0, 0)
        e = solve_spectrum(discretize(p, "const", 2000, R=15.0), 3)
        np.testing.assert_allclose(e, [1.5, 3.5, 5.5], atol=2e-4)
        e2 = solve_spectrum(discretize(p, "const", 4000, R=15.0), 3)
        ratio = np.abs(e - [1.5, 3.5, 5.5]) / np.abs(e2 - [1.5, 3.5, 5.5])
        assert np.all((ratio > 3.2) & (ratio < 4.8))

    def test_pdm_levels(self):
        e = solve_spectrum(discretize(OscParams(1, 1, 0), "pdm", 2000), 2)
        np.testing.assert_allclose(e, [4.62132034, 17.44974747], rtol=1e-4)

    def test_strictly_increasing(self):
        e = solve_spectrum(discretize(OscParams(1, 0.3, 2.0), "pdm", 1000), 10)
        assert np.all(np.diff(e) > 0)

    @pytest.mark.parametrize("count", [0, 11])
    def test_count_range(self, count):
        with pytest.raises(ParameterError):
            solve_spectrum(discretize(OscParams(1, 0, 0), "const", 300), count)

    def test_residual_contract(self, monkeypatch):
        H = discretize(OscParams(1, 0, 0), "const", 300)

        def bad(d, e, **kw):
            return np.arange(1.0, 3.0), np.eye(len(d))[:, :2]

        monkeypatch.setattr(oracle_mod, "eigh_tridiagonal", bad)
        with pytest.raises(NumericalError) as exc:
            solve_spectrum(H, 2)
        assert exc.value.residual > 0


class TestExtrapolation:
    @given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5))
    def test_recovers_manufactured_limit(self, E, c1, c2):
        hs = np.array([0.1, 0.05, 0.025])
        vals = E + c1 * hs ** 2 + c2 * hs ** 4
        assert extrapolate(hs, vals, (2.0, 4.0)) == pytest.approx(E, abs=1e-10)
        vals = E + c1 * hs ** 1.4 + c2 * hs ** 2
        assert extrapolate(hs, vals, (1.4, 2.0)) == pytest.approx(E, abs=1e-10)

    def test_two_levels(self):
        hs = np.array([0.1, 0.05])
        assert extrapolate(hs, 3.0 + 7 * hs ** 2, (2.0, 4.0)) == pytest.approx(3.0, abs=1e-13)

    def test_exponents(self):
        assert extrapolation_exponents(OscParams(1, 0, 0), "const") == (2.0, 4.0)
        assert extrapolation_exponents(OscParams(1, 0, 1.5), "const") == (2.0, 4.0)
        e1, e2 = extrapolation_exponents(OscParams(1, 0.5, 0), "pdm")
        assert e1 == 2.0 and e2 == pytest.approx(2 * OscParams(1, 0.5, 0).s - 1)
        s = OscParams(1, 1, 0).s
        assert extrapolation_exponents(OscParams(1, 1, 0), "pdm") == pytest.approx((2 * s - 1, 2.0))
        assert extrapolation_exponents(OscParams(1, 0, 0.25), "const") == (1.5, 2.0)

    @pytest.mark.parametrize("model,alpha,L,n", [("const", 0.0, 0.0, 4), ("const", 0.0, 2.0, 9), ("pdm", 0.5, 0.0, 3), ("pdm", 1.0, 1.0, 0)])
    def test_required_radius(self, model, alpha, L, n):
        p = OscParams(1, alpha, L)
        R = required_radius(p, model, n)
        r = np.geomspace(1e-3, R, 20000)
        psi = np.abs(eval_psi(p, n, r, model))
        assert psi[-1] <= 1e-8 * psi.max()
        # and not absurdly far out: at R/2 the tail is still above the threshold
        assert np.abs(eval_psi(p, n, R / 2, model)) > 1e-10 * psi.max()


class TestCompare:
    def test_constant_mass(self):
        rep = compare_to_analytic(OscParams(1, 0, 0), "const", count=5)
        assert rep.passed, rep.failures()
        orders = [rep[f"E{n}_observed_order"].value for n in range(5)]
        assert all(1.8 <= o <= 2.2 for o in orders)

    def test_pdm_example(self):
        rep = compare_to_analytic(OscParams(1, 0.5, 1.0), "pdm", count=4)
        assert rep.passed, rep.failures()
        assert all(rep[f"E{n}_extrapolated_rel_error"].residual <= 1e-6 for n in range(4))

    def test_strong_deformation_order_follows_endpoint(self):
        # s < 3/2: the far-end singularity of the Liouville form sets the order 2s - 1
        p = OscParams(1, 1, 0)
        rep = compare_to_analytic(p, "pdm", count=5)
        assert rep.passed, rep.failures()
        assert rep.details["expected_order"] == pytest.approx(2 * p.s - 1)
        assert all(rep[f"E{n}_extrapolated_rel_error"].residual <= 1e-6 for n in range(5))

    def test_uniform_r_grid_is_worse(self):
        p = OscParams(1, 0.5, 1.0)
        geo = compare_to_analytic(p, "pdm", count=2)
        uni = compare_to_analytic(p, "pdm", count=2, mapping="uniform")
        assert uni.details["rel_errors"][-1][0] > geo.details["rel_errors"][-1][0]

    def test_needs_two_refinements(self):
        with pytest.raises(ParameterError):
            compare_to_analytic(OscParams(1, 0, 0), "const", refinements=(1000,))

    def test_report_contents(self):
        rep = compare_to_analytic(OscParams(1, 0, 1.0), "const", count=2, refinements=(400, 800, 1600))
        assert rep.details["refinements"] == [400, 800, 1600]
        assert len(rep.details["levels"]) == 3 and len(rep.residuals) == 4


class TestLine:
    @pytest.mark.parametrize("alpha", [0.0, 0.5])
    def test_interleaving(self, alpha):
        e, parity = line_spectrum(1.0, alpha, levels=6)
        assert parity == ["even", "odd"] * 3
        assert np.all(np.diff(e) > 0)

    def test_constant_mass_line_levels(self):
        e, _ = line_spectrum(1.0, 0.0, levels=6, M=4000)
        np.testing.assert_allclose(e, np.arange(6) + 0.5, rtol=1e-5)

    def test_pdm_line_levels(self):
        e, parity = line_spectrum(1.0, 0.5, levels=4, M=4000)
        even = OscParams(1, 0.5, -1.0, one_dim="even")
        odd = OscParams(1, 0.5, 0.0, one_dim="odd")
        ref = sorted([energy_pdm(even, n) for n in range(2)] + [energy_pdm(odd, n) for n in range(2)])
        np.testing.assert_allclose(e, ref, rtol=1e-5)
