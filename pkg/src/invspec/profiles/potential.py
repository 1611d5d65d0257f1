"""Kahler potential profiles F(u) and the transforms between F, its
Legendre-Fenchel dual, the moment inverse G and the profile gamma.

Conventions: ``F`` is strictly concave on the real line with ``F'`` running
from 1 (at -inf) down to 0 (at +inf).  The dual is
``Fcheck(x) = inf_u (x u - F(u))`` on [0, 1], attained at ``u = G(x)`` where
``F'(G(x)) = x``, and ``gamma(x) = -F''(G(x))``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.special import expit

from ..errors import ConvergenceError, NonConcaveError

TRUNCATION_RADIUS = 20.0
_GOLDEN = 0.5 * (np.sqrt(5.0) - 1.0)


@dataclass(frozen=True)
class KahlerPotential:
    """A concave profile F with first and second derivatives.

    ``d1c`` is ``1 - F'`` computed without cancellation; it defaults to
    ``1 - d1``.  ``sup_value`` is ``F(+inf)`` and ``minus_offset`` is
    ``lim_{u -> -inf} F(u) - u``; when left as ``None`` they are estimated
    from the exponential tails at ``+-truncation_radius``.
    """

    value: Callable
    d1: Callable
    d2: Callable
    d1c: Optional[Callable] = None
    slope_minus_inf: float = 1.0
    slope_plus_inf: float = 0.0
    truncation_radius: float = TRUNCATION_RADIUS
    sup_value: Optional[float] = None
    minus_offset: Optional[float] = None
    name: str = "potential"

    def __call__(self, u):
        return self.value(u)

    def complement(self, u):
        if self.d1c is not None:
            return self.d1c(u)
        return 1.0 - self.d1(u)

    def upper_limit(self):
        """F(+inf)."""
        if self.sup_value is not None:
            return float(self.sup_value)
        U = self.truncation_radius
        return float(self.value(U) + 0.5 * self.d1(U))

    def lower_offset(self):
        """lim F(u) - u as u -> -inf."""
        if self.minus_offset is not None:
            return float(self.minus_offset)
        U = self.truncation_radius
        return float(self.value(-U) + U + 0.5 * self.complement(-U))

    @property
    def slope_gap(self):
        return self.slope_minus_inf - self.slope_plus_inf


def _f0(u):
    return -0.5 * np.logaddexp(0.0, -2.0 * np.asarray(u, dtype=float))


def _f0_d1(u):
    return expit(-2.0 * np.asarray(u, dtype=float))


def _f0_d1c(u):
    return expit(2.0 * np.asarray(u, dtype=float))


def _f0_d2(u):
    u = np.asarray(u, dtype=float)
    return -2.0 * expit(-2.0 * u) * expit(2.0 * u)


def fubini_study_potential():
    """F_0(u) = -1/2 log(1 + e^{-2u})."""
    return KahlerPotential(_f0, _f0_d1, _f0_d2, d1c=_f0_d1c, sup_value=0.0,
                           minus_offset=0.0, name="fubini-study")


def _fcan(u):
    u = np.asarray(u, dtype=float)
    return np.minimum(0.0, u) - 0.25 * np.exp(-2.0 * np.abs(u))


def _fcan_d1(u):
    u = np.asarray(u, dtype=float)
    e = 0.5 * np.exp(-2.0 * np.abs(u))
    return np.where(u >= 0, e, 1.0 - e)


def _fcan_d1c(u):
    u = np.asarray(u, dtype=float)
    e = 0.5 * np.exp(-2.0 * np.abs(u))
    return np.where(u >= 0, 1.0 - e, e)


def _fcan_d2(u):
    return -np.exp(-2.0 * np.abs(np.asarray(u, dtype=float)))


def canonical_potential():
    """F_can(u) = min(0, u) - 1/4 exp(-2|u|), the potential dual to F̌_can."""
    return KahlerPotential(_fcan, _fcan_d1, _fcan_d2, d1c=_fcan_d1c, sup_value=0.0,
                           minus_offset=0.0, name="canonical")


def reflect_potential(F):
    """Potential of the pulled-back form under z -> 1/z: F*(u) = u + F(-u)."""
    return KahlerPotential(
        value=lambda u: np.asarray(u, dtype=float) + F.value(-np.asarray(u, dtype=float)),
        d1=lambda u: F.complement(-np.asarray(u, dtype=float)),
        d2=lambda u: F.d2(-np.asarray(u, dtype=float)),
        d1c=lambda u: F.d1(-np.asarray(u, dtype=float)),
        slope_minus_inf=1.0 - F.slope_plus_inf,
        slope_plus_inf=1.0 - F.slope_minus_inf,
        truncation_radius=F.truncation_radius,
        sup_value=F.lower_offset(),
        minus_offset=F.upper_limit(),
        name=f"reflected({F.name})",
    )


def moment_inverse(F, x, tol=1e-12, max_radius=700.0):
    """G(x): the solution of F'(G) = x, for x in (0, 1).

    Bracketed bisection down to width 0.1, then Newton steps kept inside
    the bracket until the step is below ``tol``.  Vectorized over ``x``.
    """
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    if np.any(~((x > 0) & (x < 1))):
        raise ValueError("moment_inverse is defined for x in the open interval (0, 1)")
    lo = np.full_like(x, -F.truncation_radius)
    hi = np.full_like(x, F.truncation_radius)
    # F' decreases: need F'(lo) > x > F'(hi)
    while True:
        bad = F.d1(lo) <= x
        if not bad.any():
            break
        if np.min(lo) < -max_radius:
            raise ConvergenceError("moment_inverse: derivative does not bracket x from below")
        lo = np.where(bad, 2.0 * lo, lo)
    while True:
        bad = F.d1(hi) >= x
        if not bad.any():
            break
        if np.max(hi) > max_radius:
            raise ConvergenceError("moment_inverse: derivative does not bracket x from above")
        hi = np.where(bad, 2.0 * hi, hi)
    # coarse bisection, then Newton kept inside the bracket
    for _ in range(200):
        if np.all(hi - lo <= 0.1):
            break
        mid = 0.5 * (lo + hi)
        above = F.d1(mid) > x
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
    u = 0.5 * (lo + hi)
    # residual F'(u) - x, through 1 - F' on the upper half to avoid cancellation
    upper = x > 0.5
    xc = 1.0 - x

    def residual(v):
        r = np.empty_like(v)
        if (~upper).any():
            r[~upper] = F.d1(v[~upper]) - x[~upper]
        if upper.any():
            r[upper] = xc[upper] - F.complement(v[upper])
        return r

    noise = 4.0 * np.finfo(float).eps * np.minimum(x, xc)
    for _ in range(100):
        r = residual(u)
        above = r > 0
        lo = np.where(above, u, lo)
        hi = np.where(above, hi, u)
        slope = F.d2(u)
        ok = slope < 0
        cand = u - np.where(ok, r / np.where(ok, slope, -1.0), np.inf)
        cand = np.where((cand >= lo) & (cand <= hi), cand, 0.5 * (lo + hi))
        settled = np.abs(r) <= noise
        done = settled | (np.abs(cand - u) <= tol * np.maximum(1.0, np.abs(u)))
        u = np.where(settled, u, cand)
        if done.all():
            break
    else:
        raise ConvergenceError("moment_inverse: root solve did not converge")
    return float(u[0]) if scalar else u


def legendre_fenchel(F, x):
    """F̌(x) = inf_u (x u - F(u)) on [0, 1].

    Interior values come from the minimizer u = G(x); the endpoint values are
    the limits -F(+inf) and -lim (F(u) - u).
    """
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    if np.any((x < 0) | (x > 1)):
        raise ValueError("the dual is finite only on [0, 1]")
    out = np.empty_like(x)
    out[x == 0] = -F.upper_limit()
    out[x == 1] = -F.lower_offset()
    inner = (x > 0) & (x < 1)
    if inner.any():
        xi = x[inner]
        u = moment_inverse(F, xi)
        curv = F.d2(u)
        if np.any(curv >= 0):
            bad = xi[np.argmax(curv >= 0)]
            raise NonConcaveError(f"second derivative is not negative at the minimizer for x={bad:g}")
        out[inner] = xi * u - F.value(u)
    return float(out[0]) if scalar else out


def gamma_from_potential(F, x):
    """gamma(x) = -F''(G(x)) for x in (0, 1)."""
    return -F.d2(moment_inverse(F, x))


def density_from_potential(F, u):
    """Density -F''(u) e^{2u} / (4 pi) of the volume form against the affine area element."""
    u = np.asarray(u, dtype=float)
    return -F.d2(u) * np.exp(2.0 * u) / (4.0 * np.pi)


def moment_limits(F, radius=None):
    """The limits (l, l*) with l = lim (e^{2u} F'(u))^-1 at +inf and l* its mirror at -inf.

    The density tends to 2 / (4 pi l) as u -> +inf.
    """
    U = F.truncation_radius if radius is None else radius
    left = 1.0 / (np.exp(2.0 * U) * F.d1(U))
    right = 1.0 / (np.exp(2.0 * U) * F.complement(-U))
    return float(left), float(right)


def concave_conjugate(f, u, span=50.0, tol=1e-10):
    """inf over x in [0, 1] of (u x - f(x)) for a concave ``f`` on [0, 1].

    Golden-section search in the logit coordinate, vectorized over ``u``; it
    uses values of ``f`` only, so it is independent of any derivative-based
    inversion of ``f``.
    """
    u = np.asarray(u, dtype=float)
    scalar = u.ndim == 0
    u = np.atleast_1d(u)

    def objective(s):
        x = expit(s)
        return u * x - f(x)

    a = np.full_like(u, -span)
    b = np.full_like(u, span)
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = objective(c), objective(d)
    while np.max(b - a) > tol:
        left = fc < fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        nc = np.where(left, b - _GOLDEN * (b - a), d)
        nd = np.where(left, c, a + _GOLDEN * (b - a))
        c, d = nc, nd
        fnew = objective(np.where(left, c, d))
        fc, fd = np.where(left, fnew, fd), np.where(left, fc, fnew)
    best = np.minimum(np.minimum(fc, fd), np.minimum(objective(a), objective(b)))
    # endpoints x = 0 and x = 1 are limits of the logit range
    best = np.minimum(best, np.minimum(-f(np.zeros_like(u)), u - f(np.ones_like(u))))
    return float(best[0]) if scalar else best
