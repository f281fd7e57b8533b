"""Quadrature grids, operator application and truncated generator matrices.

Every operator is represented in the orthonormal eigenbasis of its model,
``O[m, n] = <psi_m | O psi_n>``, with ``O psi_n`` evaluated pointwise from the
closed forms by the chain rule.  On the default grid each integrand is a
polynomial times the Gauss weight, so matrix elements are exact to roundoff.

Grid schemes
------------
``t_mapped_gauss``
    alpha > 0: Gauss-Jacobi nodes in t with exponents (s - 1/2, L + 1/2),
    pulled back through r = sqrt((1 + t) / (alpha (1 - t))).
    alpha = 0: generalised Gauss-Laguerre nodes in y = omega r^2 / 2 with
    exponent L + 1/2.
``t_mapped_legendre``
    Plain Gauss-Legendre nodes in t (alpha > 0).  Converges only
    algebraically because of the endpoint factors; kept for comparison.
``truncated_uniform``
    Trapezoid rule on (0, R].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import special as sps

from .errors import NumericalError, ParameterError, SingularityError
from .params import OscParams, delta_eigenvalue
from .states import StateSample, energy_pdm, psi_with_derivatives, sample_state, eval_psi

__all__ = [
    "RadialGrid",
    "OperatorMatrix",
    "SCHEMES",
    "OPERATORS",
    "build_grid",
    "default_grid",
    "grid_gram_residual",
    "inner_product",
    "apply_operator",
    "build_matrix",
    "delta_matrix",
    "build_deformed_ladders",
    "deformed_ladder_orderings",
]

SCHEMES = ("t_mapped_gauss", "t_mapped_legendre", "truncated_uniform")

# label -> (basis model, bandwidth in n; None for a dense matrix)
OPERATORS = {
    "pi_r_sq": ("pdm", None),
    "Ktilde1": ("pdm", 0),
    "Ktilde2": ("pdm", 1),
    "Ktilde3": ("pdm", 1),
    "Aplus": ("pdm", 1),
    "Aminus": ("pdm", 1),
    "K0_const": ("const", 0),
    "Kplus_const": ("const", 1),
    "Kminus_const": ("const", 1),
}

# Gauss nodes whose dr-weight would overflow carry integrand contributions
# far below double precision; they are dropped.
_LOG_WEIGHT_CAP = 690.0


@dataclass(frozen=True)
class RadialGrid:
    """Quadrature rule for integrals over 0 < r < inf.

    ``mapping`` names the scheme; ``info`` holds its parameters (Gauss
    exponents, truncation radius, dropped node count).
    """

    nodes: np.ndarray
    weights: np.ndarray
    mapping: str
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        weights = np.array(self.weights, dtype=float)
        if nodes.shape != weights.shape or nodes.ndim != 1:
            raise ValueError("nodes and weights must be 1-D arrays of equal length")
        if np.any(np.diff(nodes) <= 0) or nodes[0] <= 0:
            raise ValueError("nodes must be positive and strictly increasing")
        if np.any(weights <= 0) or not np.all(np.isfinite(weights)):
            raise ValueError("weights must be finite and positive")
        nodes.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def size(self):
        return len(self.nodes)

    def descriptor(self) -> dict:
        return {"scheme": self.mapping, "size": self.size, **self.info}

    def integrate(self, values):
        return float(np.dot(self.weights, values))


@dataclass(frozen=True)
class OperatorMatrix:
    """Truncated matrix of an operator in an orthonormal eigenbasis.

    Indices ``0 .. trusted - 1`` are free of basis-truncation effects.
    ``bandwidth`` is the largest |m - n| of a structurally nonzero entry, or
    ``None`` when the operator couples all levels.
    """

    entries: np.ndarray
    label: str
    trusted: int
    bandwidth: Optional[int] = 0
    model: str = "pdm"

    def __post_init__(self):
        e = np.array(self.entries, dtype=float)
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise ValueError("operator matrix must be square")
        if not np.all(np.isfinite(e)):
            raise NumericalError(f"non-finite entries in matrix of {self.label}")
        if not 0 <= self.trusted <= e.shape[0]:
            raise ValueError("trusted block larger than basis")
        e.flags.writeable = False
        object.__setattr__(self, "entries", e)

    @property
    def basis_size(self):
        return self.entries.shape[0]

    @property
    def block(self):
        t = self.trusted
        return self.entries[:t, :t]

    def band_leakage(self):
        """Largest |entry| outside the declared band (0 for a dense matrix)."""
        if self.bandwidth is None:
            return 0.0
        n = self.basis_size
        i, j = np.indices((n, n))
        outside = np.abs(i - j) > self.bandwidth
        return float(np.max(np.abs(self.entries[outside]), initial=0.0))


def _gauss_jacobi_grid(p, size):
    s, L, al = p.s, p.L, p.alpha
    a, b = s - 0.5, L + 0.5
    t, wt = sps.roots_jacobi(size, a, b)
    r = np.sqrt((1.0 + t) / (al * (1.0 - t)))
    # dr/dt = 1 / (sqrt(alpha) (1 - t)^(3/2) (1 + t)^(1/2))
    log_w = (
        np.log(wt)
        - a * np.log1p(-t)
        - b * np.log1p(t)
        - 0.5 * math.log(al)
        - 1.5 * np.log1p(-t)
        - 0.5 * np.log1p(t)
    )
    return r, log_w, {"rule": "gauss_jacobi", "a": a, "b": b}


def _gauss_laguerre_grid(p, size):
    a = p.L + 0.5
    y, wy = sps.roots_genlaguerre(size, a)
    # large-y weights underflow to zero; those nodes carry nothing and are dropped
    y, wy = y[wy > 0], wy[wy > 0]
    r = np.sqrt(2.0 * y / p.omega)
    # dr/dy = 1 / (omega r)
    log_w = np.log(wy) + y - a * np.log(y) - np.log(p.omega * r)
    return r, log_w, {"rule": "gauss_laguerre", "a": a}


def _gauss_legendre_grid(p, size):
    t, wt = np.polynomial.legendre.leggauss(size)
    al = p.alpha
    r = np.sqrt((1.0 + t) / (al * (1.0 - t)))
    log_w = np.log(wt) - 0.5 * math.log(al) - 1.5 * np.log1p(-t) - 0.5 * np.log1p(t)
    return r, log_w, {"rule": "gauss_legendre"}


def build_grid(p: OscParams, size: int, scheme="t_mapped_gauss", R=None, check=None) -> RadialGrid:
    """Build a radial quadrature grid.

    Parameters
    ----------
    p : OscParams
    size : int
        Number of nodes, >= 16.
    scheme : str
        One of :data:`SCHEMES`.
    R : float, optional
        Truncation radius for ``truncated_uniform``.
    check : int, optional
        If given, verify that the Gram matrix of the first ``check`` states is
        the identity within 1e-10 and raise :class:`NumericalError` otherwise.
    """
    if isinstance(size, bool) or int(size) != size or size < 16:
        raise ParameterError("size", f"grid needs at least 16 nodes, got {size!r}")
    size = int(size)
    if scheme == "t_mapped_gauss":
        r, log_w, info = _gauss_jacobi_grid(p, size) if p.deformed else _gauss_laguerre_grid(p, size)
    elif scheme == "t_mapped_legendre":
        p.require_deformed("t_mapped_legendre grid")
        r, log_w, info = _gauss_legendre_grid(p, size)
    elif scheme == "truncated_uniform":
        if R is None or not R > 0:
            raise ParameterError("R", "truncated_uniform needs a positive truncation radius")
        h = R / size
        r = h * np.arange(1, size + 1)
        w = np.full(size, h)
        w[-1] = 0.5 * h
        grid = RadialGrid(r, w, scheme, {"R": float(R), "h": h})
    else:
        raise ParameterError("scheme", f"unknown grid scheme {scheme!r}; choose from {SCHEMES}")
    if scheme != "truncated_uniform":
        keep = (log_w < _LOG_WEIGHT_CAP) & np.isfinite(r) & (r > 0)
        info["dropped"] = int(size - keep.sum())
        grid = RadialGrid(r[keep], np.exp(log_w[keep]), scheme, info)
    if check:
        res = grid_gram_residual(p, grid, check)
        if res > 1e-10:
            raise NumericalError(
                f"grid '{scheme}' with {size} nodes integrates the first {check} states "
                f"to max Gram deviation {res:.3e} (> 1e-10)",
                residual=res,
            )
    return grid


def default_grid(p: OscParams, N: int) -> RadialGrid:
    """Exact-for-this-basis grid used by the matrix builders."""
    return build_grid(p, max(64, 3 * N + 16))


def grid_gram_residual(p: OscParams, grid: RadialGrid, count: int, model=None) -> float:
    """Max |G - I| over the Gram matrix of the first ``count`` normalised states."""
    psi = np.array([sample_state(p, n, grid, model).values for n in range(count)])
    gram = (psi * grid.weights) @ psi.T
    return float(np.max(np.abs(gram - np.eye(count))))


def inner_product(f: StateSample, g: StateSample, grid: RadialGrid) -> float:
    """Quadrature inner product sum_i w_i f(r_i) g(r_i)."""
    for st in (f, g):
        if st.grid is not None and st.grid is not grid:
            raise ValueError("state sampled on a different grid")
        if len(st.values) != grid.size:
            raise ValueError("state length does not match grid")
    return float(np.dot(grid.weights, f.values * g.values))


def _image_values(label, p, n, r, model, norm, method, fd_step):
    """Pointwise image of eigenfunction n under operator ``label``."""
    L = p.L
    if method == "analytic":
        psi, d1, d2 = psi_with_derivatives(p, n, r, model, norm)
    elif method == "fd":
        h = fd_step * np.maximum(r, 1.0)
        f_p = eval_psi(p, n, r + h, model, norm)
        f_m = eval_psi(p, n, r - h, model, norm)
        psi = eval_psi(p, n, r, model, norm)
        d1 = (f_p - f_m) / (2 * h)
        d2 = (f_p - 2 * psi + f_m) / (h * h)
    else:
        raise ValueError(f"method must be 'analytic' or 'fd', got {method!r}")

    centrifugal = L * (L + 1.0) / (r * r)
    if model == "const":
        w = p.omega
        H = -d2 + (centrifugal + 0.25 * w * w * r * r) * psi
        if label == "K0_const":
            return H / (2.0 * w)
        sym = d2 + (-centrifugal + 0.25 * w * w * r * r) * psi
        dil = r * d1 + 0.5 * psi
        if label == "Kplus_const":
            return (sym - w * dil) / (2.0 * w)
        return (sym + w * dil) / (2.0 * w)

    al = p.alpha
    f = 1.0 + al * r * r
    pi_sq = -(f * f * d2 + 4.0 * al * r * f * d1 + (al + 2.0 * al * al * r * r) * psi)
    if label == "pi_r_sq":
        return pi_sq
    if label == "Ktilde1":
        return pi_sq + (centrifugal + 0.25 * p.omega ** 2 * r * r) * psi
    t = (al * r * r - 1.0) / (al * r * r + 1.0)
    if label == "Ktilde2":
        return t * psi
    # -4 i alpha (2 (r/f) pi_r + i t) reduces to the real operator -4 alpha (2 r d/dr + 1)
    k3 = -4.0 * al * (2.0 * r * d1 + psi)
    if label == "Ktilde3":
        return k3
    # A+- act on eigenfunctions, where delta is the scalar delta_n
    sign = 1.0 if label == "Aplus" else -1.0
    dn = delta_eigenvalue(p, n)
    s = p.s
    const = 4.0 * al * (s - L - 1.0) * (s + L) / (1.0 + sign * dn)
    return k3 - 4.0 * al * (1.0 - sign * dn) * t * psi + const * psi


def apply_operator(op_label, p: OscParams, state: StateSample, grid: RadialGrid, method="analytic", fd_step=1e-4) -> StateSample:
    """Sample the image of an eigenfunction under a differential operator.

    ``method="fd"`` replaces the analytic derivatives by central differences
    of the closed form; it exists for cross-checking.
    """
    if op_label not in OPERATORS:
        raise ValueError(f"unknown operator {op_label!r}; choose from {sorted(OPERATORS)}")
    model, _ = OPERATORS[op_label]
    if model == "pdm":
        p.require_deformed(op_label)
    if state.model != model:
        raise ValueError(f"{op_label} acts on '{model}' states, got a '{state.model}' state")
    if state.label != "psi":
        raise ValueError("operators are applied to eigenfunction samples only")
    vals = _image_values(op_label, p, state.n, grid.nodes, model, state.norm_constant, method, fd_step)
    return StateSample(
        n=state.n,
        L=state.L,
        values=vals,
        normalized=False,
        norm_constant=state.norm_constant,
        model=model,
        params=p,
        grid=grid,
        label=op_label,
    )


def _basis(p, N, grid, model):
    return [sample_state(p, n, grid, model) for n in range(N)]


def build_matrix(op_label, p: OscParams, N: int, grid: RadialGrid = None) -> OperatorMatrix:
    """Matrix elements <psi_m | O psi_n> for m, n < N by quadrature."""
    if op_label not in OPERATORS:
        raise ValueError(f"unknown operator {op_label!r}; choose from {sorted(OPERATORS)}")
    model, bw = OPERATORS[op_label]
    if model == "const" and p.deformed:
        p = p.with_alpha(0.0)
    if model == "pdm":
        p.require_deformed(op_label)
    if grid is None:
        grid = default_grid(p, N)
    basis = _basis(p, N, grid, model)
    psi = np.array([b.values for b in basis])
    images = np.array([apply_operator(op_label, p, b, grid).values for b in basis])
    entries = (psi * grid.weights) @ images.T
    return OperatorMatrix(entries, op_label, trusted=N - (bw or 0), bandwidth=bw, model=model)


def delta_matrix(p: OscParams, N: int) -> OperatorMatrix:
    """Diagonal matrix of the delta operator, defined spectrally on the PDM eigenbasis."""
    p.require_deformed("delta")
    d = np.array([delta_eigenvalue(p, n) for n in range(N)])
    return OperatorMatrix(np.diag(d), "delta", trusted=N, bandwidth=0)


def _diag_fn(values, fn, name, operand, side):
    """Apply ``fn`` to delta eigenvalues, tolerating poles on unused entries.

    An entry whose argument is singular is accepted only when the row
    (``side="left"``) or column (``side="right"``) of ``operand`` it multiplies
    vanishes; otherwise :class:`SingularityError` names the entry.
    """
    out = np.zeros_like(values)
    scale = max(1.0, float(np.max(np.abs(operand))))
    for i, v in enumerate(values):
        try:
            out[i] = fn(v)
        except (ValueError, ZeroDivisionError) as exc:
            line = operand[i, :] if side == "left" else operand[:, i]
            if np.max(np.abs(line)) > 1e-10 * scale:
                raise SingularityError(f"{name} singular at n={i} (delta={v:.6g}): {exc}", entry=(name, i)) from None
            out[i] = 0.0
    return out


def _safe_sqrt(x):
    if x < 0:
        raise ValueError(f"negative square-root argument {x:.6g}")
    return math.sqrt(x)


def _inv(x):
    if abs(x) < 1e-12:
        raise ZeroDivisionError(f"denominator {x:.3e} within 1e-12 of zero")
    return 1.0 / x


def deformed_ladder_orderings(p: OscParams, N: int, grid: RadialGrid = None) -> dict:
    """Both printed orderings of the deformed ladder operators, plus the ingredients.

    Returns a dict with keys ``K1, K2, K3, delta, Aplus, Aminus, K0,
    Kplus_right, Kplus_left, Kminus_right, Kminus_left`` (numpy arrays).
    ``right`` is A(delta +- 1) sqrt((delta +- 2)/delta) and ``left`` is
    (delta -+ 1) sqrt(delta/(delta -+ 2)) A.
    """
    p.require_deformed("deformed ladders")
    if N < 6:
        raise ParameterError("N", f"deformed ladders need N >= 6, got {N}")
    if grid is None:
        grid = default_grid(p, N)
    al, lam, s, L = p.alpha, p.lam, p.s, p.L
    K1 = build_matrix("Ktilde1", p, N, grid).entries
    K2 = build_matrix("Ktilde2", p, N, grid).entries
    K3 = build_matrix("Ktilde3", p, N, grid).entries
    dv = np.diag(delta_matrix(p, N).entries).copy()
    I = np.eye(N)
    c = 4.0 * al * (s - L - 1.0) * (s + L)
    out = {"K1": K1, "K2": K2, "K3": K3, "delta": np.diag(dv), "K0": K1 / (4.0 * lam)}
    for sign, tag in ((1.0, "plus"), (-1.0, "minus")):
        name = "Aplus" if sign > 0 else "Aminus"
        res = _diag_fn(dv, lambda v: _inv(1.0 + sign * v), f"1/(1{'+' if sign > 0 else '-'}delta)", I, "right")
        A = K3 - 4.0 * al * K2 @ np.diag(1.0 - sign * dv) + c * np.diag(res)
        right = _diag_fn(
            dv, lambda v: (v + sign) * _safe_sqrt((v + 2 * sign) / v), f"K{tag} right ordering", A, "right"
        )
        left = _diag_fn(
            dv, lambda v: (v - sign) * _safe_sqrt(v / _nonzero(v - 2 * sign)), f"K{tag} left ordering", A, "left"
        )
        out[name] = A
        out[f"K{tag}_right"] = sign / (16.0 * lam) * A @ np.diag(right)
        out[f"K{tag}_left"] = sign / (16.0 * lam) * np.diag(left) @ A
    return out


def _nonzero(x):
    if abs(x) < 1e-12:
        raise ZeroDivisionError(f"denominator {x:.3e} within 1e-12 of zero")
    return x


def build_deformed_ladders(p: OscParams, N: int, grid: RadialGrid = None, rtol=1e-8):
    """Deformed generators ``(K0a, Kpa, Kma)`` as :class:`OperatorMatrix` objects.

    Both orderings are built; they must agree on the trusted block to
    ``rtol`` relative or :class:`NumericalError` is raised.  The returned
    ladders use the right ordering A(delta +- 1) sqrt((delta +- 2)/delta).
    """
    parts = deformed_ladder_orderings(p, N, grid)
    t = N - 1
    for tag in ("plus", "minus"):
        a, b = parts[f"K{tag}_right"][:t, :t], parts[f"K{tag}_left"][:t, :t]
        scale = max(1.0, np.linalg.norm(a), np.linalg.norm(b))
        res = np.linalg.norm(a - b) / scale
        if res > rtol:
            raise NumericalError(f"orderings of K{tag} disagree: relative residual {res:.3e}", residual=res)
    return (
        OperatorMatrix(parts["K0"], "K0_alpha", trusted=N, bandwidth=0),
        OperatorMatrix(parts["Kplus_right"], "Kplus_alpha", trusted=t, bandwidth=1),
        OperatorMatrix(parts["Kminus_right"], "Kminus_alpha", trusted=t, bandwidth=1),
    )
