"""Finite-difference eigensolver for the radial equations.

This module is an independent check of the closed-form spectra: it uses only
the mass and effective-potential profiles and never the eigenfunction code.

Constant mass
    Uniform cell-centred grid on (0, R) for -psi'' + Veff psi = E psi.
PDM
    The operator -d/dr f^2 d/dr + Veff turns into a plain Schroedinger
    operator in the geodesic coordinate u = arctan(sqrt(alpha) r)/sqrt(alpha),
    which maps the half-line onto the finite interval (0, pi/(2 sqrt(alpha))).
    With phi = sqrt(f) psi the equation reads -phi'' + Q phi = E phi with
    Q = Veff + f_uu/(2f) - (f_u/f)^2/4 = Veff + alpha + 2 alpha^2 r^2.
    A uniform u grid resolves both the core and the algebraic r^(-s-1) tail
    with Dirichlet data at the far end.  ``mapping="uniform"`` keeps the plain
    flux-form stencil in r with a = 1/M = f^2 at half nodes.

Both discretisations are three-point, symmetric by construction, and use a
ghost node at r = 0: psi_0 = -psi_1 (Dirichlet) or, for the even line mode
L = -1, psi_0 = psi_1 (Neumann).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq

from .errors import NumericalError, ParameterError
from .params import OscParams
from .report import RelationResidual, VerificationReport
from .states import energy_const, energy_pdm, profiles

__all__ = [
    "DiscreteHamiltonian",
    "discretize",
    "solve_spectrum",
    "required_radius",
    "extrapolation_exponents",
    "extrapolate",
    "compare_to_analytic",
    "line_spectrum",
]


@dataclass(frozen=True)
class DiscreteHamiltonian:
    """Symmetric tridiagonal discretisation (stored as its two diagonals)."""

    diag: np.ndarray
    offdiag: np.ndarray
    h: float
    R: float
    model: str
    mapping: str
    nodes: np.ndarray
    veff: np.ndarray
    warnings: tuple = field(default=())

    @property
    def size(self):
        return len(self.diag)

    @property
    def matrix(self):
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)

    def norm(self):
        """Infinity norm (max absolute row sum)."""
        a = np.abs(self.offdiag)
        rows = np.abs(self.diag).copy()
        rows[:-1] += a
        rows[1:] += a
        return float(rows.max())


def required_radius(p: OscParams, model, n_max, rel=1e-8):
    """Radius beyond which psi_{n_max} stays below ``rel`` of its peak.

    The normalised leading large-r term, c r^(L+1+2n) exp(-omega r^2/4)
    (constant mass) or c r^(-s-1) (PDM), is required to fall below
    rel / sqrt(R); a unit-norm function supported on [0, R] has a peak of at
    least 1/sqrt(R).  Only Gamma-function constants enter, no eigenfunction
    evaluation.
    """
    n, L = int(n_max), p.L
    lg = math.lgamma
    if model == "const":
        w = p.omega
        m = L + 1.0 + 2 * n
        log_norm = (L + 1.5) * math.log(2.0 / w) + lg(n + L + 1.5) - lg(n + 1) - math.log(2.0)
        log_c = -0.5 * log_norm + n * math.log(0.5 * w) - lg(n + 1)
        r_turn = 2.0 * math.sqrt((2 * n + L + 1.5) / w)

        def excess(r):
            return log_c + m * math.log(r) - 0.25 * w * r * r + 0.5 * math.log(r) - math.log(rel)

        hi = r_turn
        while excess(hi) > 0:
            hi *= 1.5
        return brentq(excess, r_turn, hi) if excess(r_turn) > 0 else r_turn
    s, al = p.s, p.alpha
    a, b = s - 0.5, L + 0.5
    log_h = (a + b + 1) * math.log(2.0) + lg(n + a + 1) + lg(n + b + 1) - lg(n + 1) - lg(n + a + b + 1) - math.log(2 * n + a + b + 1)
    log_norm = -(L + 1.5) * math.log(al) - (s + L + 2.0) * math.log(2.0) + log_h
    log_binom = lg(n + a + 1) - lg(a + 1) - lg(n + 1)
    log_c = -0.5 * log_norm + log_binom - 0.5 * (s + L + 2.0) * math.log(al)
    r_scale = math.sqrt((2 * n + L + 2.0) / al)
    return max(r_scale, math.exp((log_c - math.log(rel)) / (s + 0.5)))


def discretize(p: OscParams, model, M: int, R=None, mapping=None) -> DiscreteHamiltonian:
    """Three-point discretisation of the radial Hamiltonian.

    Parameters
    ----------
    model : {'const', 'pdm'}
    M : int
        Number of interior nodes, >= 200.
    R : float, optional
        Truncation radius for the uniform-r grids; chosen from
        :func:`required_radius` for n <= 9 when omitted.
    mapping : {'geodesic', 'uniform'}, optional
        PDM only; defaults to ``'geodesic'``.
    """
    if M < 200:
        raise ParameterError("M", f"need at least 200 grid points, got {M}")
    if model not in ("const", "pdm"):
        raise ParameterError("model", f"unknown model {model!r}")
    if p.L == -0.5:
        raise ParameterError("L", "L = -1/2 makes the centrifugal term singular on the grid")
    parity = 1.0 if p.L == -1.0 else -1.0
    warnings = []
    if model == "const":
        q = p.with_alpha(0.0)
        mapping = "uniform"
    else:
        p.require_deformed("pdm discretisation")
        q = p
        mapping = mapping or "geodesic"

    if mapping == "geodesic":
        sa = math.sqrt(p.alpha)
        U = 0.5 * math.pi / sa
        h = U / (M + 0.5)
        u = (np.arange(1, M + 1) - 0.5) * h
        r = np.tan(sa * u) / sa
        prof = profiles(q, r)
        # Liouville term f_uu/(2f) - (f_u/f)^2/4 = alpha (2 f - 1)
        Q = prof.Veff + p.alpha * (2.0 * prof.f - 1.0)
        a_half = np.ones(M + 1)
        R_used = math.inf
    elif mapping == "uniform":
        if R is None:
            R = required_radius(q, model, 9)
        h = R / (M + 0.5)
        r = (np.arange(1, M + 1) - 0.5) * h
        prof = profiles(q, r)
        Q = prof.Veff
        r_half = np.arange(0, M + 1) * h
        a_half = (1.0 + q.alpha * r_half * r_half) ** 2
        R_used = float(R)
        tail_R = required_radius(q, model, 4)
        if R < tail_R:
            warnings.append(f"R={R:.4g} below the tail radius {tail_R:.4g} for n<=4; expect truncation error")
    else:
        raise ParameterError("mapping", f"unknown mapping {mapping!r}")

    diag = (a_half[1:] + a_half[:-1]) / (h * h) + Q
    # ghost psi_0 = parity * psi_1 folds the left flux into node 1
    diag[0] = (a_half[1] + a_half[0] * (1.0 - parity)) / (h * h) + Q[0]
    off = -a_half[1:-1] / (h * h)
    if M < 1000:
        warnings.append(f"M={M} is coarse; eigenvalues carry O(h^2) = O({h * h:.1e}) relative error")
    return DiscreteHamiltonian(diag, off, h, R_used, model, mapping, r, prof.Veff, tuple(warnings))


def solve_spectrum(H: DiscreteHamiltonian, count: int):
    """Lowest ``count`` eigenvalues, ascending, with residual ||Hv - Ev|| <= 1e-10 ||H||."""
    if not 1 <= count <= 10:
        raise ParameterError("count", f"count must be in 1..10, got {count}")
    w, v = eigh_tridiagonal(H.diag, H.offdiag, select="i", select_range=(0, count - 1))
    Hv = H.diag[:, None] * v
    Hv[:-1] += H.offdiag[:, None] * v[1:]
    Hv[1:] += H.offdiag[:, None] * v[:-1]
    res = float(np.max(np.linalg.norm(Hv - v * w, axis=0)))
    bound = 1e-10 * H.norm()
    if res > bound:
        raise NumericalError(f"eigenvector residual {res:.3e} exceeds {bound:.3e}", residual=res)
    return w


def extrapolation_exponents(p: OscParams, model):
    """Leading error exponents (e1, e2) in powers of h for the three-point scheme.

    Beyond the regular h^2, h^4 terms, a singular endpoint where the
    Liouville-form solution behaves like x^nu adds h^(2 nu - 1): nu = s at
    the far end of the geodesic grid and nu = L + 1 at the origin when L is
    not an integer.
    """
    cand = {2.0, 4.0}
    if model == "pdm":
        cand.add(2.0 * p.s - 1.0)
    if p.L != round(p.L):
        cand.add(2.0 * p.L + 1.0)
    cand = sorted(c for c in cand if 0 < c <= 4.0)
    e1 = cand[0]
    rest = [c for c in cand if c - e1 >= 0.2]
    return e1, (rest[0] if rest else e1 + 2.0)


def extrapolate(hs, values, exponents):
    """Richardson extrapolation to h -> 0.

    With two spacings only the leading exponent is removed; with three or
    more the finest three fit ``E + c1 h^e1 + c2 h^e2``.
    """
    hs = np.asarray(hs, dtype=float)
    values = np.asarray(values, dtype=float)
    order = np.argsort(hs)[::-1]
    hs, values = hs[order], values[order]
    e1, e2 = exponents
    if len(hs) == 2:
        rho = (hs[0] / hs[1]) ** e1
        return values[1] + (values[1] - values[0]) / (rho - 1.0)
    hs, values = hs[-3:], values[-3:]
    A = np.column_stack([np.ones(3), hs ** e1, hs ** e2])
    return np.linalg.solve(A, values)[0]


def _analytic(p, model, n):
    return energy_pdm(p, n) if model == "pdm" else energy_const(p, n)


def compare_to_analytic(p: OscParams, model, count=5, refinements=(1000, 2000, 4000), tol=1e-6, order_tol=0.2, mapping=None, R=None):
    """Finite-difference levels against the closed-form spectrum.

    Each level contributes two relations: the Richardson-extrapolated
    relative error (tolerance ``tol``), and the observed order on the finest
    pair of grids compared with the expected leading exponent
    (tolerance ``order_tol``).
    """
    refinements = sorted(int(m) for m in refinements)
    if len(refinements) < 2:
        raise ParameterError("refinements", "need at least two grid sizes")
    exact = np.array([_analytic(p, model, n) for n in range(count)])
    hs, levels = [], []
    notes = []
    for m in refinements:
        H = discretize(p, model, m, R=R, mapping=mapping)
        hs.append(H.h)
        levels.append(solve_spectrum(H, count))
        notes.extend(H.warnings)
    levels = np.array(levels)
    errs = np.abs(levels - exact) / np.abs(exact)
    exps = extrapolation_exponents(p, model)
    expected_order = exps[0]
    residuals = []
    extrap_errs, orders = [], []
    for n in range(count):
        e_star = extrapolate(hs, levels[:, n], exps)
        x_err = abs(e_star - exact[n]) / abs(exact[n])
        pord = math.log(errs[-2, n] / errs[-1, n]) / math.log(hs[-2] / hs[-1])
        extrap_errs.append(x_err)
        orders.append(pord)
        residuals.append(RelationResidual(f"E{n}_extrapolated_rel_error", x_err, tol, value=float(e_star)))
        residuals.append(RelationResidual(f"E{n}_observed_order", abs(pord - expected_order), order_tol, value=pord))
    details = {
        "model": model,
        "mapping": mapping or ("geodesic" if model == "pdm" else "uniform"),
        "refinements": refinements,
        "h": hs,
        "analytic": exact.tolist(),
        "levels": levels.tolist(),
        "rel_errors": errs.tolist(),
        "extrapolation_exponents": list(exps),
        "expected_order": expected_order,
        "warnings": sorted(set(notes)),
    }
    pdict = p.as_dict()
    return VerificationReport(pdict, count, count, residuals, grid={"scheme": "finite_difference", "sizes": refinements}, details=details)


def line_spectrum(omega, alpha, levels=6, M=2000):
    """Lowest levels of the oscillator on the full line from the two parity sectors.

    Returns ``(energies, parities)`` sorted ascending, with parities
    ``'even'`` (L = -1) and ``'odd'`` (L = 0).
    """
    model = "pdm" if alpha > 0 else "const"
    per_sector = (levels + 1) // 2 + 1
    out = []
    for parity, L in (("even", -1.0), ("odd", 0.0)):
        q = OscParams(omega, alpha, L, one_dim=parity)
        for e in solve_spectrum(discretize(q, model, M), per_sector):
            out.append((float(e), parity))
    out.sort()
    out = out[:levels]
    return np.array([e for e, _ in out]), [par for _, par in out]
