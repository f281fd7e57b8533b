"""Numerical verification of the su(1,1), QJ(3) and deformed su(1,1) relations.

All relations are checked on matrices in the truncated eigenbasis.  A
relation whose longest word multiplies ``j`` banded operators is compared on
the leading ``(N - j - 1)`` block; residuals are relative Frobenius norms,
see :func:`pdmosc.report.relative_residual`.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ParameterError, SingularityError
from .gridops import OperatorMatrix, build_grid, build_matrix, default_grid, deformed_ladder_orderings
from .params import OscParams, lowest_weights
from .report import RelationResidual, VerificationReport, relative_residual
from .states import casimir_value_const, casimir_value_pdm, energy_const, energy_pdm

__all__ = [
    "commutator",
    "anticommutator",
    "verify_su11",
    "verify_qj3",
    "verify_deformed",
    "verify_limit",
    "verify",
    "make_grid",
    "ladder_coefficients_const",
    "ladder_coefficients_pdm",
    "default_parameter_sets",
    "SU11_TOL",
    "QJ3_TOL",
    "DEFORMED_TOL",
    "COEFF_TOL",
    "MIN_DEFORMED_BASIS",
]

SU11_TOL = 1e-8
QJ3_TOL = 1e-7
DEFORMED_TOL = 1e-7
COEFF_TOL = 1e-8
MIN_DEFORMED_BASIS = 6


def _product_meta(A, B):
    # Banded factors contaminate the last `bandwidth` rows and columns of a
    # product; a dense factor leaves no trusted block when paired with another.
    if A.basis_size != B.basis_size:
        raise ValueError(f"basis sizes differ: {A.basis_size} vs {B.basis_size}")
    bws = (A.bandwidth, B.bandwidth)
    base = min(A.trusted, B.trusted)
    if None in bws:
        other = bws[1] if bws[0] is None else bws[0]
        return (0 if other is None else max(0, base - other)), None
    margin = max(bws) if all(bws) else 0
    return max(0, base - margin), bws[0] + bws[1]


def commutator(A: OperatorMatrix, B: OperatorMatrix) -> OperatorMatrix:
    """[A, B] = AB - BA, with the trusted block shrunk by the product margin."""
    trusted, bw = _product_meta(A, B)
    a, b = A.entries, B.entries
    return OperatorMatrix(a @ b - b @ a, f"[{A.label},{B.label}]", trusted=trusted, bandwidth=bw, model=A.model)


def anticommutator(A: OperatorMatrix, B: OperatorMatrix) -> OperatorMatrix:
    """{A, B} = AB + BA, with the same trusted-block rule as :func:`commutator`."""
    trusted, bw = _product_meta(A, B)
    a, b = A.entries, B.entries
    return OperatorMatrix(a @ b + b @ a, f"{{{A.label},{B.label}}}", trusted=trusted, bandwidth=bw, model=A.model)


def _comm(a, b):
    return a @ b - b @ a


def _block(x, t):
    return np.asarray(x)[:t, :t]


def _check(rid, lhs, rhs, t, tol):
    return RelationResidual(rid, relative_residual(_block(lhs, t), _block(rhs, t)), tol)


def _check_basis(N):
    if isinstance(N, bool) or int(N) != N or N < 4:
        raise ParameterError("N", f"basis size must be an integer >= 4, got {N!r}")
    return int(N)


def _trusted(N, j):
    # j banded factors in the longest word of the relation
    return N - j - 1


def ladder_coefficients_const(p: OscParams, N: int):
    """Expected matrices of K+ and K- from their actions on psi_n."""
    L = p.L
    up = np.zeros((N, N))
    for n in range(N - 1):
        up[n + 1, n] = math.sqrt((n + 1) * (n + L + 1.5))
    down = np.zeros((N, N))
    for n in range(1, N):
        down[n - 1, n] = math.sqrt(n * (n + L + 0.5))
    return up, down


def ladder_coefficients_pdm(p: OscParams, N: int):
    """Expected matrices of the deformed K+ and K- from their actions on psi_n."""
    L, s = p.L, p.s
    r = p.alpha / p.lam
    up = np.zeros((N, N))
    for n in range(N - 1):
        up[n + 1, n] = r * math.sqrt((n + 1) * (n + L + 1.5) * (n + s + L + 1) * (n + s + 0.5))
    down = np.zeros((N, N))
    for n in range(1, N):
        down[n - 1, n] = r * math.sqrt(n * (n + L + 0.5) * (n + s + L) * (n + s - 0.5))
    return up, down


def _grid_info(grid):
    return grid.descriptor() if grid is not None else None


def _const_matrices(p, N, grid=None):
    q = p.with_alpha(0.0) if p.deformed else p
    grid = grid or default_grid(q, N)
    K0 = build_matrix("K0_const", q, N, grid).entries
    Kp = build_matrix("Kplus_const", q, N, grid).entries
    Km = build_matrix("Kminus_const", q, N, grid).entries
    return q, grid, K0, Kp, Km


def verify_su11(p: OscParams, N: int = 20, tol=None, grid=None) -> VerificationReport:
    """su(1,1) relations of the constant-mass oscillator.

    ``p`` may carry alpha > 0; only omega and L are used.
    """
    N = _check_basis(N)
    tol = SU11_TOL if tol is None else tol
    coeff_tol = COEFF_TOL if tol is None else tol
    q, grid, K0, Kp, Km = _const_matrices(p, N, grid)
    I = np.eye(N)
    k, _ = lowest_weights(q)
    up, down = ladder_coefficients_const(q, N)
    res = [
        _check("su11: [K0,K+] = +K+", _comm(K0, Kp), Kp, _trusted(N, 1), tol),
        _check("su11: [K0,K-] = -K-", _comm(K0, Km), -Km, _trusted(N, 1), tol),
        _check("su11: [K+,K-] = -2 K0", _comm(Kp, Km), -2.0 * K0, _trusted(N, 2), tol),
        _check("su11: K0 hermitian", K0, K0.T, _trusted(N, 0), tol),
        _check("su11: K+^T = K-", Kp.T, Km, _trusted(N, 0), tol),
        _check("su11: K0 psi_n = (k + n) psi_n", K0, np.diag(k + np.arange(N)), N, tol),
        _check("su11: K0 = H/(2 omega)", K0, np.diag([energy_const(q, n) / (2 * q.omega) for n in range(N)]), N, tol),
    ]
    C = -Kp @ Km + K0 @ (K0 - I)
    cval = casimir_value_const(q)
    res.append(_check("su11: C = k(k-1) on every psi_n", C, cval * I, _trusted(N, 2), tol))
    res.append(RelationResidual("su11: k(k-1) = (L+3/2)(L-1/2)/4", abs(k * (k - 1) - cval), 1e-14, value=cval))
    res.append(_check("su11: K+ ladder coefficients", Kp, up, _trusted(N, 0), coeff_tol))
    res.append(_check("su11: K- ladder coefficients", Km, down, _trusted(N, 0), coeff_tol))
    res.append(RelationResidual("su11: K- annihilates psi_0", float(np.linalg.norm(Km[:, 0])), coeff_tol))
    return VerificationReport(q.as_dict(), N, _trusted(N, 2), res, grid=_grid_info(grid))


def _s_sq_minus_s(p):
    # s(s - 1) = lam (lam - alpha) / alpha^2 = omega^2 / (4 alpha^2)
    return p.omega ** 2 / (4.0 * p.alpha ** 2)


def verify_qj3(p: OscParams, N: int = 24, tol=None, grid=None) -> VerificationReport:
    """Quadratic (quantum Jacobi) algebra of (Ktilde1, Ktilde2, Ktilde3).

    Ktilde3 = -4 i alpha (2 (r/f) pi_r + i t) is the real operator
    -4 alpha (2 r d/dr + 1), so its matrix is real antisymmetric and the
    relations are checked without complex arithmetic.
    """
    p.require_deformed("QJ(3) verification")
    N = _check_basis(N)
    tol = QJ3_TOL if tol is None else tol
    grid = grid or default_grid(p, N)
    K1 = build_matrix("Ktilde1", p, N, grid).entries
    K2 = build_matrix("Ktilde2", p, N, grid).entries
    K3 = build_matrix("Ktilde3", p, N, grid).entries
    I = np.eye(N)
    al, L = p.alpha, p.L
    ss = _s_sq_minus_s(p)
    c1 = 16.0 * al * al * (ss + L * (L + 1.0) - 1.0)
    c2 = 16.0 * al * al * (ss - L * (L + 1.0))
    rhs3 = -8.0 * al * (K1 @ K2 + K2 @ K1) - c1 * K2 - c2 * I
    res = [
        _check("qj3: [K1,K2] = K3", _comm(K1, K2), K3, _trusted(N, 1), tol),
        _check("qj3: [K2,K3] = 8 alpha (1 - K2^2)", _comm(K2, K3), 8.0 * al * (I - K2 @ K2), _trusted(N, 2), tol),
        _check("qj3: [K3,K1] = -8 alpha {K1,K2} - c1 K2 - c2", _comm(K3, K1), rhs3, _trusted(N, 1), tol),
        _check("qj3: K1 hermitian", K1, K1.T, _trusted(N, 0), tol),
        _check("qj3: K2 hermitian", K2, K2.T, _trusted(N, 0), tol),
        _check("qj3: K3 anti-hermitian", K3, -K3.T, _trusted(N, 0), tol),
        _check("qj3: K1 psi_n = E_n psi_n", K1, np.diag([energy_pdm(p, n) for n in range(N)]), N, tol),
    ]
    t = _trusted(N, 0)
    rho = float(np.max(np.abs(np.linalg.eigvalsh(_block(K2, t)))))
    res.append(RelationResidual("qj3: spectrum of K2 inside (-1, 1)", rho, 1.0 - 1e-12, value=rho))
    details = {"c1": c1, "c2": c2, "p0": lowest_weights(p)[1]}
    return VerificationReport(p.as_dict(), N, _trusted(N, 2), res, grid=_grid_info(grid), details=details)


_DEFORMED_IDS = (
    "deformed: ladder orderings agree (K+)",
    "deformed: ladder orderings agree (K-)",
    "deformed: [K0,K+] = (alpha/lam) K+ (delta+1)",
    "deformed: [K0,K+] = (alpha/lam) (delta-1) K+",
    "deformed: [K0,K-] = -(alpha/lam) K- (delta-1)",
    "deformed: [K0,K-] = -(alpha/lam) (delta+1) K-",
    "deformed: [K+,K-] = -(alpha delta/lam)(2 K0 + alpha/(4 lam))",
    "deformed: K0 hermitian",
    "deformed: K+^T = K-",
    "deformed: K0 psi_n = E_n/(4 lam) psi_n",
    "deformed: C diagonal",
    "deformed: C = Casimir value on every psi_n",
    "deformed: C n-independence spread",
    "deformed: K+ ladder coefficients",
    "deformed: K- ladder coefficients",
    "deformed: K- annihilates psi_0",
)


def verify_deformed(p: OscParams, N: int = 24, tol=None, grid=None) -> VerificationReport:
    """Deformed su(1,1) generators: orderings, commutators, Casimir and ladder actions."""
    p.require_deformed("deformed su(1,1) verification")
    N = _check_basis(N)
    tol_rel = DEFORMED_TOL if tol is None else tol
    tol_c = COEFF_TOL if tol is None else tol
    grid = grid or default_grid(p, N)
    al, lam = p.alpha, p.lam
    if N < MIN_DEFORMED_BASIS:
        res = [RelationResidual.skipped(rid, tol_rel, f"basis N={N} below {MIN_DEFORMED_BASIS}") for rid in _DEFORMED_IDS]
        return VerificationReport(p.as_dict(), N, max(0, _trusted(N, 2)), res, grid=_grid_info(grid))
    try:
        parts = deformed_ladder_orderings(p, N, grid)
    except SingularityError as exc:
        res = [RelationResidual.skipped(rid, tol_rel, f"singular ({exc})") for rid in _DEFORMED_IDS]
        return VerificationReport(p.as_dict(), N, _trusted(N, 2), res, grid=_grid_info(grid))
    K0, Kp, Km = parts["K0"], parts["Kplus_right"], parts["Kminus_right"]
    D = parts["delta"]
    I = np.eye(N)
    r = al / lam
    t1 = _trusted(N, 0)
    res = [
        _check(_DEFORMED_IDS[0], parts["Kplus_right"], parts["Kplus_left"], t1, tol_c),
        _check(_DEFORMED_IDS[1], parts["Kminus_right"], parts["Kminus_left"], t1, tol_c),
        _check(_DEFORMED_IDS[2], _comm(K0, Kp), r * Kp @ (D + I), _trusted(N, 1), tol_rel),
        _check(_DEFORMED_IDS[3], _comm(K0, Kp), r * (D - I) @ Kp, _trusted(N, 1), tol_rel),
        _check(_DEFORMED_IDS[4], _comm(K0, Km), -r * Km @ (D - I), _trusted(N, 1), tol_rel),
        _check(_DEFORMED_IDS[5], _comm(K0, Km), -r * (D + I) @ Km, _trusted(N, 1), tol_rel),
        _check(_DEFORMED_IDS[6], _comm(Kp, Km), -(r * D) @ (2.0 * K0 + (al / (4.0 * lam)) * I), _trusted(N, 2), tol_rel),
        _check(_DEFORMED_IDS[7], K0, K0.T, t1, tol_rel),
        _check(_DEFORMED_IDS[8], Kp.T, Km, t1, tol_c),
        _check(_DEFORMED_IDS[9], K0, np.diag([energy_pdm(p, n) / (4.0 * lam) for n in range(N)]), N, tol_rel),
    ]
    C = -Kp @ Km + K0 @ K0 - r * (D - 1.25 * I) @ K0 - (al * al / (8.0 * lam * lam)) * D
    tc = _trusted(N, 2)
    Cb = _block(C, tc)
    cval = casimir_value_pdm(p)
    diag = np.diag(Cb)
    res.append(_check(_DEFORMED_IDS[10], Cb - np.diag(diag), np.zeros_like(Cb), tc, tol_rel))
    res.append(_check(_DEFORMED_IDS[11], Cb, cval * np.eye(tc), tc, tol_rel))
    spread = float(np.max(diag) - np.min(diag)) / max(1.0, abs(cval))
    res.append(RelationResidual(_DEFORMED_IDS[12], spread, tol_rel, value=float(np.mean(diag))))
    up, down = ladder_coefficients_pdm(p, N)
    res.append(_check(_DEFORMED_IDS[13], Kp, up, t1, tol_c))
    res.append(_check(_DEFORMED_IDS[14], Km, down, t1, tol_c))
    res.append(RelationResidual(_DEFORMED_IDS[15], float(np.linalg.norm(Km[:, 0])), tol_c))
    details = {"casimir_value": cval, "casimir_diagonal": diag.tolist(), "delta": np.diag(D).tolist()}
    return VerificationReport(p.as_dict(), N, tc, res, grid=_grid_info(grid), details=details)


def verify_limit(p: OscParams, alphas=(0.1, 0.01, 0.001), N: int = 20, ratio_tol=10.0) -> VerificationReport:
    """Deformed generators approach the su(1,1) ones as alpha -> 0.

    D(alpha) is the largest trusted-entry deviation of (K0, K+, K-) from
    their constant-mass counterparts.  The report requires D to decrease
    strictly along ``alphas`` (sorted descending) and D(alpha)/alpha to vary
    by at most ``ratio_tol``.
    """
    alphas = sorted((float(a) for a in alphas), reverse=True)
    if len(alphas) < 2 or alphas[-1] <= 0:
        raise ValueError("need at least two positive alphas")
    _, _, K0c, Kpc, Kmc = _const_matrices(p, N)
    t = _trusted(N, 0)
    Ds, per = [], {}
    for a in alphas:
        q = p.with_alpha(a)
        parts = deformed_ladder_orderings(q, N)
        dev = max(
            float(np.max(np.abs(_block(parts["K0"] - K0c, t)))),
            float(np.max(np.abs(_block(parts["Kplus_right"] - Kpc, t)))),
            float(np.max(np.abs(_block(parts["Kminus_right"] - Kmc, t)))),
        )
        Ds.append(dev)
        per[repr(a)] = {"D": dev, "D_over_alpha": dev / a, "K0_00": float(parts["K0"][0, 0])}
    ratios = [Ds[i + 1] / Ds[i] for i in range(len(Ds) - 1)]
    scaled = [d / a for d, a in zip(Ds, alphas)]
    spread = max(scaled) / min(scaled)
    res = [
        RelationResidual("limit: D(alpha) strictly decreasing (max successive ratio)", max(ratios), 1.0 - 1e-12, value=max(ratios)),
        RelationResidual("limit: D(alpha)/alpha spread (first-order convergence)", spread, ratio_tol, value=spread),
    ]
    floor = min(scaled)
    for a, sc in zip(alphas, scaled):
        res.append(RelationResidual(f"limit: D(alpha={a:g})/alpha bounded", sc, ratio_tol * floor, value=sc * a))
    # Deformed ladder coefficients tend to the constant-mass ones at rate O(alpha)
    a_min = alphas[-1]
    q = p.with_alpha(a_min)
    up_a, _ = ladder_coefficients_pdm(q, 4)
    up_0, _ = ladder_coefficients_const(p.with_alpha(0.0), 4)
    rel = max(abs(up_a[n + 1, n] - up_0[n + 1, n]) / up_0[n + 1, n] for n in range(3))
    res.append(RelationResidual(f"limit: ladder coefficients n<=2 at alpha={a_min:g} (relative deviation / alpha)", float(rel / a_min), ratio_tol, value=float(rel)))
    details = {"alphas": alphas, "D": Ds, "per_alpha": per, "k": lowest_weights(p)[0]}
    base = p.with_alpha(0.0).as_dict()
    return VerificationReport(base, N, t, res, details=details)


def make_grid(p: OscParams, N: int, scheme=None, size=None, R=None):
    """Quadrature grid for the basis of ``p``; the exact default when ``scheme`` is omitted."""
    if scheme is None and size is None:
        return default_grid(p, N)
    return build_grid(p, size or max(64, 3 * N + 16), scheme or "t_mapped_gauss", R=R)


def verify(p: OscParams, N: int = 24, tol=None, scheme=None, grid_size=None, R=None):
    """Run the relation suites that apply to ``p``; returns a list of reports."""
    if p.deformed:
        grid = make_grid(p, N, scheme, grid_size, R)
        return [verify_qj3(p, N, tol, grid), verify_deformed(p, N, tol, grid)]
    return [verify_su11(p, N, tol, make_grid(p, N, scheme, grid_size, R))]


def default_parameter_sets():
    """omega = 1, alpha in {0, 0.1, 0.5, 1}, L in {0, 1, 1.5, 2}, plus both line modes."""
    out = []
    for a in (0.0, 0.1, 0.5, 1.0):
        for L in (0.0, 1.0, 1.5, 2.0):
            out.append(OscParams(1.0, a, L))
        out.append(OscParams(1.0, a, -1.0, one_dim="even"))
        out.append(OscParams(1.0, a, 0.0, one_dim="odd"))
    return out
