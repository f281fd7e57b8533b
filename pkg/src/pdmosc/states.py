"""Closed-form spectra, eigenfunctions and Casimir values.

Two models share one parameter type: the constant-mass radial oscillator
(``model="const"``) and the position-dependent-mass oscillator with
M(r) = (1 + alpha r**2)**-2 (``model="pdm"``).  Raw wavefunctions carry unit
normalisation constant; :func:`normalize` fixes the constant by quadrature
and the sign so that every state is positive in its outermost lobe, i.e.
(-1)**n psi_n > 0 next to the origin.  With this choice every ladder
coefficient of both oscillators comes out positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Any, Optional

import numpy as np

from . import specfun
from .errors import DomainError, NumericalError
from .params import OscParams

__all__ = [
    "StateSample",
    "Profiles",
    "energy_const",
    "energy_pdm",
    "energy",
    "eval_psi_const",
    "eval_psi_pdm",
    "eval_psi",
    "psi_with_derivatives",
    "map_t",
    "profiles",
    "normalize",
    "sample_state",
    "norm_closed_form",
    "casimir_value_const",
    "casimir_value_pdm",
    "MODELS",
]

MODELS = ("const", "pdm")


@dataclass(frozen=True)
class StateSample:
    """A wavefunction (or the image of one under an operator) sampled on a grid.

    ``norm_constant`` is the signed factor applied to the raw closed form,
    1.0 for a raw sample.  ``label`` is ``"psi"`` for an eigenfunction and the
    operator label for images built by :func:`pdmosc.gridops.apply_operator`.
    """

    n: int
    L: float
    values: np.ndarray
    normalized: bool = False
    norm_constant: float = 1.0
    model: str = "pdm"
    params: Optional[OscParams] = None
    grid: Any = field(default=None, repr=False, compare=False)
    label: str = "psi"

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if not np.all(np.isfinite(values)):
            raise NumericalError(f"non-finite wavefunction values for n={self.n}, label={self.label}")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class Profiles:
    """Deformation function, mass and effective potential at radius ``r``."""

    r: Any
    f: Any
    M: Any
    Veff: Any


def _check_model(model):
    if model not in MODELS:
        raise ValueError(f"model must be one of {MODELS}, got {model!r}")


def _default_model(p):
    return "pdm" if p.deformed else "const"


def energy_const(p: OscParams, n: int) -> float:
    """Constant-mass level omega (2n + L + 3/2)."""
    return p.omega * (2 * n + p.L + 1.5)


def energy_pdm(p: OscParams, n: int) -> float:
    """PDM level alpha(4n^2 + 4n(L+1) + L + 1 + (4n + 2L + 3) s)."""
    p.require_deformed("energy_pdm")
    L = p.L
    # alpha * s == lam; written with lam to avoid the round trip through s
    return p.alpha * (4 * n * n + 4 * n * (L + 1) + L + 1) + (4 * n + 2 * L + 3) * p.lam


def energy(p: OscParams, n: int, model=None) -> float:
    model = model or _default_model(p)
    _check_model(model)
    return energy_pdm(p, n) if model == "pdm" else energy_const(p, n)


def _radius(r):
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0) or not np.all(np.isfinite(r)):
        raise DomainError("radius must be finite and > 0")
    return r


def map_t(p: OscParams, r):
    """Jacobi variable t = 1 - 2/f = (alpha r^2 - 1)/(alpha r^2 + 1), in [-1, 1)."""
    p.require_deformed("map_t")
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("radius must be >= 0")
    ar2 = p.alpha * r * r
    t1 = 1.0 - 2.0 / (1.0 + ar2)
    t2 = (ar2 - 1.0) / (ar2 + 1.0)
    if np.any(np.abs(t1 - t2) > 1e-15):
        raise NumericalError("t-map formulas disagree beyond 1e-15")
    return float(t1) if np.ndim(r) == 0 else t1


def profiles(p: OscParams, r) -> Profiles:
    """f = 1 + alpha r^2, M = 1/f^2 and Veff = L(L+1)/r^2 + (omega^2 - 8 alpha^2) r^2/4 - alpha."""
    r = _radius(r)
    a = p.alpha
    f = 1.0 + a * r * r
    M = 1.0 / (f * f)
    Veff = p.L * (p.L + 1.0) / (r * r) + 0.25 * (p.omega ** 2 - 8.0 * a * a) * r * r - a
    if np.ndim(r) == 0:
        return Profiles(float(r), float(f), float(M), float(Veff))
    return Profiles(r, f, M, Veff)


def _log_envelope(p, r, model):
    # log of r^(L+1) * exp(-omega r^2/4)  or  r^(L+1) * f^(-(s+L+2)/2)
    if model == "const":
        return (p.L + 1.0) * np.log(r) - 0.25 * p.omega * r * r
    gamma = 0.5 * (p.s + p.L + 2.0)
    return (p.L + 1.0) * np.log(r) - gamma * np.log1p(p.alpha * r * r)


def _scale(log_env, norm):
    sign = 1.0 if norm >= 0 else -1.0
    return sign * np.exp(log_env + math.log(abs(norm)))


def eval_psi_const(p: OscParams, n: int, r, norm=1.0):
    """r^(L+1) L_n^(L+1/2)(omega r^2/2) exp(-omega r^2/4), times ``norm``."""
    r = _radius(r)
    y = 0.5 * p.omega * r * r
    out = _scale(_log_envelope(p, r, "const"), norm) * specfun.laguerre(n, p.L + 0.5, y)
    return float(out) if np.ndim(r) == 0 else out


def eval_psi_pdm(p: OscParams, n: int, r, norm=1.0):
    """r^(L+1) P_n^(s-1/2, L+1/2)(t) f^(-(s+L+2)/2), times ``norm``."""
    p.require_deformed("eval_psi_pdm")
    r = _radius(r)
    t = map_t(p, r)
    out = _scale(_log_envelope(p, r, "pdm"), norm) * specfun.jacobi(n, p.s - 0.5, p.L + 0.5, t)
    return float(out) if np.ndim(r) == 0 else out


def eval_psi(p: OscParams, n: int, r, model=None, norm=1.0):
    model = model or _default_model(p)
    _check_model(model)
    fn = eval_psi_pdm if model == "pdm" else eval_psi_const
    return fn(p, n, r, norm)


def psi_with_derivatives(p: OscParams, n: int, r, model=None, norm=1.0):
    """Return (psi, psi', psi'') in r from the closed forms, by the chain rule.

    With psi = g(r) Q(r), g the envelope and Q the polynomial factor,
    psi' = g (G Q + Q') and psi'' = g ((G^2 + G') Q + 2 G Q' + Q'') where
    G = g'/g.
    """
    model = model or _default_model(p)
    _check_model(model)
    r = _radius(np.atleast_1d(r))
    L = p.L
    g = _scale(_log_envelope(p, r, model), norm)
    if model == "const":
        w = p.omega
        a = L + 0.5
        y = 0.5 * w * r * r
        dy, d2y = w * r, w
        P0 = specfun.laguerre(n, a, y)
        P1 = specfun.laguerre_derivative(n, a, y, 1)
        P2 = specfun.laguerre_derivative(n, a, y, 2)
        G = (L + 1.0) / r - 0.5 * w * r
        dG = -(L + 1.0) / (r * r) - 0.5 * w
    else:
        p.require_deformed("pdm derivatives")
        al = p.alpha
        s = p.s
        f = 1.0 + al * r * r
        t = map_t(p, r)
        dy = 4.0 * al * r / (f * f)
        d2y = 4.0 * al / (f * f) - 16.0 * al * al * r * r / f ** 3
        args = (s - 0.5, L + 0.5, t)
        P0 = specfun.jacobi(n, *args)
        P1 = specfun.jacobi_derivative(n, *args, k=1)
        P2 = specfun.jacobi_derivative(n, *args, k=2)
        gamma = 0.5 * (s + L + 2.0)
        G = (L + 1.0) / r - 2.0 * gamma * al * r / f
        dG = -(L + 1.0) / (r * r) - 2.0 * gamma * al * (1.0 - al * r * r) / (f * f)
    Q1 = P1 * dy
    Q2 = P2 * dy * dy + P1 * d2y
    psi = g * P0
    dpsi = g * (G * P0 + Q1)
    d2psi = g * ((G * G + dG) * P0 + 2.0 * G * Q1 + Q2)
    return psi, dpsi, d2psi


def norm_closed_form(p: OscParams, n: int, model=None) -> float:
    """Signed normalisation constant from the orthogonality integrals.

    Constant mass: int psi_raw^2 dr = (2/omega)^(L+3/2) Gamma(n+L+3/2) / (2 n!).
    PDM: int psi_raw^2 dr = alpha^-(L+3/2) 2^-(s+L+2) h_n(s-1/2, L+1/2) with
    h_n the Jacobi norm.  The sign makes the state positive at large r: the
    raw PDM form already is (P_n(1) > 0), the raw Laguerre form has sign
    (-1)^n there.
    """
    model = model or _default_model(p)
    _check_model(model)
    L = p.L
    if model == "const":
        log_i = (L + 1.5) * math.log(2.0 / p.omega) + specfun.log_gamma(n + L + 1.5) - specfun.log_gamma(n + 1) - math.log(2.0)
        sign = -1.0 if n % 2 else 1.0
    else:
        s = p.s
        h = specfun.jacobi_norm_sq(n, s - 0.5, L + 0.5)
        log_i = -(L + 1.5) * math.log(p.alpha) - (s + L + 2.0) * math.log(2.0) + math.log(h)
        sign = 1.0
    return sign * math.exp(-0.5 * log_i)


def normalize(state: StateSample, grid) -> StateSample:
    """Rescale ``state`` to unit norm on ``grid``.

    The sign is fixed so that (-1)**n times the value at the first node is
    positive.
    """
    vals = state.values
    norm_sq = float(np.dot(grid.weights, vals * vals))
    if not math.isfinite(norm_sq) or norm_sq <= 0:
        raise NumericalError(
            f"cannot normalise state n={state.n}: quadrature norm^2 = {norm_sq!r} "
            f"on {len(vals)} nodes (max |psi| = {np.max(np.abs(vals)):.3e})"
        )
    c = 1.0 / math.sqrt(norm_sq)
    if (vals[0] < 0) != (state.n % 2 == 1):
        c = -c
    return replace(
        state,
        values=vals * c,
        normalized=True,
        norm_constant=state.norm_constant * c,
        grid=state.grid if state.grid is not None else grid,
    )


def sample_state(p: OscParams, n: int, grid, model=None, normalized=True) -> StateSample:
    """Sample eigenfunction ``n`` on ``grid`` nodes, normalised by quadrature by default."""
    model = model or _default_model(p)
    _check_model(model)
    # Start from the closed-form constant so the quadrature correction is O(1).
    c0 = norm_closed_form(p, n, model)
    vals = eval_psi(p, n, grid.nodes, model, norm=c0)
    st = StateSample(n=n, L=p.L, values=vals, norm_constant=c0, model=model, params=p, grid=grid)
    return normalize(st, grid) if normalized else st


def casimir_value_const(p: OscParams) -> float:
    """su(1,1) Casimir eigenvalue (L + 3/2)(L - 1/2)/4 = k(k - 1)."""
    return 0.25 * (p.L + 1.5) * (p.L - 0.5)


def casimir_value_pdm(p: OscParams) -> float:
    """Deformed Casimir eigenvalue (1 - alpha/lam)(L+3/2)(L-1/2)/4 - 3 alpha^2 L(L+1)/(16 lam^2)."""
    p.require_deformed("casimir_value_pdm")
    L = p.L
    r = p.alpha / p.lam
    return 0.25 * (1.0 - r) * (L + 1.5) * (L - 0.5) - 3.0 * r * r * L * (L + 1.0) / 16.0
