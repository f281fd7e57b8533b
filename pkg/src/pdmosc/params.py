"""Oscillator parameters and the scalar quantities derived from them.

Units are hbar = 1 and constant mass m0 = 1/2.  A parameter set is fixed by
the frequency ``omega``, the deformation ``alpha`` of f(r) = 1 + alpha r**2
and the effective angular momentum ``L = l + (d - 3)/2``.  The line problem
is reached through ``one_dim``: even parity uses L = -1, odd parity L = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import NumericalError, ParameterError

__all__ = [
    "OscParams",
    "derive_params",
    "delta_eigenvalue",
    "lowest_weights",
]

ONE_DIM_L = {"even": -1.0, "odd": 0.0}


@dataclass(frozen=True)
class OscParams:
    """Immutable parameter set of one oscillator.

    Only ``omega``, ``alpha``, ``L`` and ``one_dim`` are inputs; ``Delta``,
    ``lam`` and ``lam_minus_alpha`` are filled in on construction.  ``l`` and
    ``d`` are kept for reporting when the set came from :func:`derive_params`.
    """

    omega: float
    alpha: float
    L: float
    one_dim: Optional[str] = None
    l: Optional[int] = None
    d: Optional[int] = None
    Delta: float = field(init=False)
    lam: float = field(init=False)
    lam_minus_alpha: float = field(init=False)

    def __post_init__(self):
        omega, alpha, L = float(self.omega), float(self.alpha), float(self.L)
        if not math.isfinite(omega) or omega <= 0:
            raise ParameterError("omega", f"must be a finite positive number, got {self.omega!r}")
        if not math.isfinite(alpha) or alpha < 0:
            raise ParameterError("alpha", f"must be finite and non-negative, got {self.alpha!r}")
        if not math.isfinite(L):
            raise ParameterError("L", f"must be finite, got {self.L!r}")
        if self.one_dim is not None:
            if self.one_dim not in ONE_DIM_L:
                raise ParameterError("one_dim", f"must be 'even' or 'odd', got {self.one_dim!r}")
            if L != ONE_DIM_L[self.one_dim]:
                raise ParameterError("L", f"{self.one_dim} line mode requires L = {ONE_DIM_L[self.one_dim]:g}")
        elif L < -0.5:
            raise ParameterError("L", f"radial mode requires L >= -1/2, got {L:g}")

        Delta = math.hypot(omega, alpha)
        # lam - alpha = (Delta - alpha)/2 written without cancellation
        lma = omega * omega / (2.0 * (Delta + alpha))
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "Delta", Delta)
        object.__setattr__(self, "lam", 0.5 * (alpha + Delta))
        object.__setattr__(self, "lam_minus_alpha", lma)

    @property
    def s(self) -> float:
        """Ratio lam/alpha; only defined for alpha > 0."""
        self.require_deformed("s")
        return self.lam / self.alpha

    @property
    def deformed(self) -> bool:
        return self.alpha > 0

    def require_deformed(self, what="this quantity"):
        if self.alpha <= 0:
            raise ParameterError("alpha", f"{what} needs alpha > 0 (alpha = 0 is the constant-mass branch)")

    def with_alpha(self, alpha) -> "OscParams":
        """Same oscillator with a different deformation."""
        return OscParams(self.omega, alpha, self.L, one_dim=self.one_dim, l=self.l, d=self.d)

    def as_dict(self) -> dict:
        out = {
            "omega": self.omega,
            "alpha": self.alpha,
            "L": self.L,
            "l": self.l,
            "d": self.d,
            "one_dim": self.one_dim,
            "Delta": self.Delta,
            "lambda": self.lam,
        }
        out["s"] = self.s if self.deformed else None
        return out


def derive_params(omega, alpha, l=0, d=3, one_dim_mode=None) -> OscParams:
    """Build an :class:`OscParams` from physical inputs.

    Parameters
    ----------
    omega : float
        Angular frequency, > 0.
    alpha : float
        Deformation parameter, >= 0.
    l : int
        Angular momentum quantum number, ignored in line mode.
    d : int
        Space dimension (>= 2), ignored in line mode.
    one_dim_mode : {None, 'even', 'odd'}
        Select the oscillator on the full line; even parity maps to L = -1 and
        odd parity to L = 0.
    """
    if one_dim_mode is not None:
        if one_dim_mode not in ONE_DIM_L:
            raise ParameterError("one_dim", f"must be 'even' or 'odd', got {one_dim_mode!r}")
        return OscParams(omega, alpha, ONE_DIM_L[one_dim_mode], one_dim=one_dim_mode)
    if isinstance(l, bool) or int(l) != l or l < 0:
        raise ParameterError("l", f"must be a non-negative integer, got {l!r}")
    if isinstance(d, bool) or int(d) != d or d < 2:
        raise ParameterError("d", f"must be an integer >= 2, got {d!r}")
    l, d = int(l), int(d)
    return OscParams(omega, alpha, l + (d - 3) / 2.0, l=l, d=d)


def delta_eigenvalue(p: OscParams, n: int) -> float:
    """Eigenvalue of the delta operator on the PDM state of quantum number n.

    The square-root argument is the perfect square (s + 2n + L + 1)**2; both
    the closed form and the square root of the energy combination are
    evaluated and must agree to 1e-12 relative.
    """
    p.require_deformed("delta")
    from .states import energy_pdm

    s = p.s
    closed = s + 2 * n + p.L + 1.0
    via_energy = math.sqrt(energy_pdm(p, n) / p.alpha + s * (s - 1.0) + p.L * (p.L + 1.0))
    if abs(closed - via_energy) > 1e-12 * abs(closed):
        raise NumericalError(
            f"delta eigenvalue routes disagree at n={n}: {closed!r} vs {via_energy!r}",
            residual=abs(closed - via_energy) / abs(closed),
        )
    return closed


def lowest_weights(p: OscParams):
    """Lowest weights ``(k, p0)`` of the two discrete-series representations.

    ``p0`` is ``None`` on the constant-mass branch.
    """
    k = 0.5 * (p.L + 1.5)
    p0 = 0.5 * (p.s + p.L) if p.deformed else None
    return k, p0
