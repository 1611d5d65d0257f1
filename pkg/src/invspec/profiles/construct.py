"""Build the potential F_g of a profile gamma in class G.

With g = 1/gamma, G_g(x) = -int_{1/2}^x g and L_g(x) = int_{1/2}^x G_g, the
potential is F_g(u) = inf_x (u x - L_g(x)).  Writing g = g_can + r with
g_can = 1/gamma_can, the remainder r is bounded for gamma in class G, so

    G_g = G_can - I1,             I1(x) = int_{1/2}^x r
    L_g = F̌_can - 1/4 - (x I1 - I2),  I2(x) = int_{1/2}^x s r(s) ds

and only I1, I2 need quadrature.  Quadrature runs in the distance d to the
nearest endpoint on Gauss-Legendre panels that are geometric near d = 0 and
at most ``max_panel`` wide elsewhere.
"""
from __future__ import annotations

import numpy as np

from ..errors import ConvergenceError, ProfileError, QuadratureError
from .potential import TRUNCATION_RADIUS, KahlerPotential
from .symplectic import DEFAULT_C, gamma_can, validate_class_g

_LOG_HALF = np.log(0.5)
D_LINEAR = 1e-7


def _panel_edges(d_min, max_panel):
    edges = [0.5]
    while edges[-1] > d_min:
        a = edges[-1]
        b = 0.5 * a
        n = max(1, int(np.ceil((a - b) / max_panel)))
        edges.extend(a - (a - b) * np.arange(1, n + 1) / n)
    return np.array(edges)  # decreasing from 1/2 down to about d_min


class _Side:
    """Cumulative integrals of r and s r on one half, as functions of d."""

    def __init__(self, gamma, right, edges, order):
        self.gamma = gamma
        self.right = right
        self.edges = edges
        t, w = np.polynomial.legendre.leggauss(order)
        self.t = 0.5 * (t + 1.0)
        self.w = 0.5 * w
        a, b = edges[1:], edges[:-1]  # panel k covers d in [a_k, b_k]
        d = a[:, None] + (b - a)[:, None] * self.t[None, :]
        r, sr = self._integrands(d)
        p1 = ((b - a)[:, None] * self.w * r).sum(axis=1)
        p2 = ((b - a)[:, None] * self.w * sr).sum(axis=1)
        # cumulative from d = 1/2 down to each edge
        self.c1 = np.concatenate([[0.0], np.cumsum(p1)])
        self.c2 = np.concatenate([[0.0], np.cumsum(p2)])
        self.d_min = edges[-1]
        self.r_min, self.sr_min = (v[0] for v in self._integrands(np.array([self.d_min])))
        if not (np.all(np.isfinite(self.c1)) and np.all(np.isfinite(self.c2))
                and np.isfinite(self.r_min)):
            raise QuadratureError("remainder of 1/gamma is not integrable near an endpoint")
        # int_0^{1/2}
        self.total1 = self.c1[-1] + self.r_min * self.d_min
        self.total2 = self.c2[-1] + self.sr_min * self.d_min

    def _integrands(self, d):
        s = 1.0 - d if self.right else d
        with np.errstate(all="ignore"):
            r = 1.0 / self.gamma(s) - 1.0 / gamma_can(s)
        return r, s * r

    def r(self, d):
        return self._integrands(d)[0]

    def tail(self, d):
        """(int_d^{1/2} r, int_d^{1/2} s r) in the distance variable."""
        d = np.asarray(d, dtype=float)
        out1 = np.empty_like(d)
        out2 = np.empty_like(d)
        deep = d < self.d_min
        if deep.any():
            dd = d[deep]
            out1[deep] = self.c1[-1] + self.r_min * (self.d_min - dd)
            out2[deep] = self.c2[-1] + self.sr_min * (self.d_min - dd)
        inner = ~deep
        if inner.any():
            di = d[inner]
            # panel k with edges[k+1] <= d <= edges[k]
            k = np.searchsorted(-self.edges, -di, side="right") - 1
            k = np.clip(k, 0, len(self.edges) - 2)
            top = self.edges[k]
            nodes = di[:, None] + (top - di)[:, None] * self.t[None, :]
            r, sr = self._integrands(nodes)
            width = (top - di)[:, None]
            out1[inner] = self.c1[k] + (width * self.w * r).sum(axis=1)
            out2[inner] = self.c2[k] + (width * self.w * sr).sum(axis=1)
        return out1, out2


class ConstructedPotential:
    """F_g for a class-G profile; see :func:`potential_from_gamma`."""

    def __init__(self, gamma, d_min=1e-10, max_panel=1.0 / 512, order=10,
                 truncation_radius=TRUNCATION_RADIUS):
        self.gamma = gamma
        edges = _panel_edges(d_min, max_panel)
        self.left = _Side(gamma, False, edges, order)
        self.right = _Side(gamma, True, edges, order)
        self.U = float(truncation_radius)

    # x in terms of (side, d): left x = d, right x = 1 - d
    def moment_G(self, x):
        """G_g(x) for x in (0, 1)."""
        x = np.asarray(x, dtype=float)
        out = np.empty_like(x)
        lm = x <= 0.5
        if lm.any():
            d = x[lm]
            out[lm] = -0.5 * np.log(2.0 * d) + self.left.tail(d)[0]
        if (~lm).any():
            d = 1.0 - x[~lm]
            out[~lm] = 0.5 * np.log(2.0 * d) - self.right.tail(d)[0]
        return out

    def _solve(self, u):
        """Distance d to the nearest endpoint of x = F_g'(u); u >= 0 is the left half."""
        u = np.asarray(u, dtype=float)
        d = np.empty_like(u)
        lm = u >= 0
        if lm.any():
            d[lm] = self._solve_side(u[lm], self.left)
        if (~lm).any():
            d[~lm] = self._solve_side(-u[~lm], self.right)
        return d, lm

    def _solve_side(self, v, side):
        # left:  -1/2 log(2d) + tail(d) = u       (v = u)
        # right:  1/2 log(2d) - tail(d) = u       (v = -u)
        # both read: f(t) = -1/2 log 2 - t/2 + tail(e^t) - v = 0, t = log d, f decreasing
        def f(t):
            return -0.5 * np.log(2.0) - 0.5 * t + side.tail(np.exp(t))[0] - v

        def fp(t):
            dd = np.exp(t)
            return -0.5 - dd * side.r(np.maximum(dd, side.d_min))

        t = np.minimum(2.0 * (side.total1 - v) - np.log(2.0), _LOG_HALF)
        hi = np.full_like(v, _LOG_HALF)
        lo = np.minimum(t, _LOG_HALF) - 1.0
        flo = f(lo)
        for _ in range(60):
            bad = flo <= 0
            if not bad.any():
                break
            lo = np.where(bad, lo - 2.0 * (1.0 + np.abs(lo)), lo)
            flo = f(lo)
        else:
            raise ConvergenceError("could not bracket the moment coordinate")
        t = np.clip(t, lo, hi)
        for _ in range(100):
            ft = f(t)
            lo = np.where(ft > 0, t, lo)
            hi = np.where(ft > 0, hi, t)
            step = ft / fp(t)
            cand = t - step
            cand = np.where((cand > lo) & (cand <= hi) & np.isfinite(cand), cand, 0.5 * (lo + hi))
            # stop on a tiny step or once f is at rounding level
            noise = 4.0 * np.finfo(float).eps * (1.0 + np.abs(v) + np.abs(t))
            settled = np.abs(ft) <= noise
            done = settled | (np.abs(cand - t) <= 1e-14 * np.maximum(1.0, np.abs(t)))
            t = np.where(settled, t, cand)
            if done.all():
                break
        else:
            raise ConvergenceError("moment coordinate solve did not converge")
        return np.exp(t)

    def _core(self, u):
        u = np.asarray(u, dtype=float)
        d, lm = self._solve(u)
        x = np.where(lm, d, 1.0 - d)
        i1 = np.empty_like(u)
        i2 = np.empty_like(u)
        if lm.any():
            a1, a2 = self.left.tail(d[lm])
            i1[lm], i2[lm] = -a1, -a2
        if (~lm).any():
            a1, a2 = self.right.tail(d[~lm])
            i1[~lm], i2[~lm] = a1, a2
        # F̌_can in the distance variable is symmetric
        fcan = -0.5 * d * np.log(2.0 * d) + 0.5 * d
        L = fcan - 0.25 - (x * i1 - i2)
        return u * x - L, x, d, lm

    def value(self, u):
        u = np.asarray(u, dtype=float)
        out = np.empty_like(u)
        U = self.U
        mid = np.abs(u) <= U
        if mid.any():
            out[mid] = self._core(u[mid])[0]
        hi = u > U
        if hi.any():
            FU, c = self._core(np.array([U]))[0][0], self.d1(np.array([U]))[0]
            out[hi] = FU + 0.5 * c * (1.0 - np.exp(-2.0 * (u[hi] - U)))
        lo = u < -U
        if lo.any():
            FU, c = self._core(np.array([-U]))[0][0], self.d1c(np.array([-U]))[0]
            out[lo] = FU + (u[lo] + U) + 0.5 * c * (1.0 - np.exp(2.0 * (u[lo] + U)))
        return out

    def _tails(self, u):
        """(d1, d1c) for any u, continued exponentially beyond +-U."""
        u = np.asarray(u, dtype=float)
        U = self.U
        uc = np.clip(u, -U, U)
        d, lm = self._solve(uc)
        d1 = np.where(lm, d, 1.0 - d)
        d1c = np.where(lm, 1.0 - d, d)
        hi, lo = u > U, u < -U
        d1 = np.where(hi, d1 * np.exp(-2.0 * (u - U)), d1)
        d1c = np.where(lo, d1c * np.exp(2.0 * (u + U)), d1c)
        d1 = np.where(lo, 1.0 - d1c, d1)
        d1c = np.where(hi, 1.0 - d1, d1c)
        return d1, d1c

    def d1(self, u):
        return self._tails(u)[0]

    def d1c(self, u):
        return self._tails(u)[1]

    def d2(self, u):
        u = np.asarray(u, dtype=float)
        U = self.U
        d1, d1c = self._tails(u)
        x = np.clip(d1, 0.0, 1.0)
        out = -self.gamma(x)
        # 1 - d is not resolved for tiny d: scale gamma linearly from D_LINEAR
        deep = (d1c < D_LINEAR) & (u <= U)
        if deep.any():
            edge = float(self.gamma(np.array([1.0 - D_LINEAR]))[0]) / D_LINEAR
            out = np.where(deep, -edge * d1c, out)
        out = np.where(u > U, -2.0 * d1, out)
        out = np.where(u < -U, -2.0 * d1c, out)
        return out


def potential_from_gamma(gamma, C=DEFAULT_C, validate=True, **kwargs):
    """The potential F_g with F_g'' = -gamma(F_g') and F_g(0) fixed by L_g(1/2) = 0."""
    if validate:
        report = validate_class_g(gamma, C=C)
        if not report.passed:
            raise ProfileError(
                f"profile is not in class G (worst ratio {report.worst_ratio:.3g} at "
                f"x={report.worst_location:.3g}, C={C})")
    c = ConstructedPotential(gamma, **kwargs)
    F = KahlerPotential(
        value=lambda u: _shape(c.value, u),
        d1=lambda u: _shape(c.d1, u),
        d2=lambda u: _shape(c.d2, u),
        d1c=lambda u: _shape(c.d1c, u),
        truncation_radius=c.U,
        name=f"constructed({gamma.kind})",
    )
    slope_minus = float(F.d1(-c.U))
    slope_plus = float(F.d1(c.U))
    if not (np.isfinite(slope_minus) and np.isfinite(slope_plus)):
        raise QuadratureError("constructed potential has non-finite slopes")
    upper = float(F.value(c.U) + 0.5 * F.d1(c.U))
    lower = float(F.value(-c.U) + c.U + 0.5 * F.d1c(-c.U))
    return KahlerPotential(
        value=F.value, d1=F.d1, d2=F.d2, d1c=F.d1c,
        slope_minus_inf=slope_minus, slope_plus_inf=slope_plus,
        truncation_radius=c.U, sup_value=upper, minus_offset=lower,
        name=F.name,
    )


def _shape(fn, u):
    u = np.asarray(u, dtype=float)
    out = fn(np.atleast_1d(u).ravel()).reshape(u.shape)
    return float(out) if u.ndim == 0 else out
