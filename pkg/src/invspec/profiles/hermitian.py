"""Hermitian profiles h(x) on [0, 1] for invariant metrics on O(m)."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import PchipInterpolator

from ..errors import ProfileError
from .symplectic import boundary_ladder, gamma_can


def canonical_hermitian(m, x):
    """min(1, 2(1 - x))^m."""
    if m < 0:
        raise ProfileError("m must be a nonnegative integer")
    x = np.asarray(x, dtype=float)
    return np.minimum(1.0, 2.0 * (1.0 - x)) ** int(m)


@dataclass(frozen=True)
class HermitianProfile:
    """h on [0, 1], positive on [0, 1), vanishing to order m at x = 1."""

    func: Callable
    m: int = 0
    kind: str = "custom"
    params: dict = field(default_factory=dict)
    right_limit_coeff: float | None = None

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 0:
            raise ProfileError("bundle degree m must be a nonnegative integer")

    def __call__(self, x):
        return np.asarray(self.func(np.asarray(x, dtype=float)), dtype=float)


def canonical_hermitian_profile(m):
    return HermitianProfile(lambda x: canonical_hermitian(m, x), m=m, kind="canonical",
                            right_limit_coeff=2.0 ** m)


def constant_hermitian_profile(value=1.0):
    return HermitianProfile(lambda x: np.full_like(np.asarray(x, dtype=float), value), m=0,
                            kind="constant", params={"value": float(value)}, right_limit_coeff=value)


def fubini_study_hermitian_profile(m):
    """(1 - x)^m, the Fubini-Study metric on O(m) in moment coordinates."""
    return HermitianProfile(lambda x: (1.0 - np.asarray(x, dtype=float)) ** m, m=m,
                            kind="fubini-study", right_limit_coeff=1.0)


def samples_hermitian_profile(m, xs, values):
    """Monotone-cubic interpolant of h / h_{m,inf}, times h_{m,inf}."""
    xs = np.asarray(xs, dtype=float)
    values = np.asarray(values, dtype=float)
    order = np.argsort(xs)
    xs, values = xs[order], values[order]
    keep = xs < 1
    if keep.sum() < 2:
        raise ProfileError("need at least two samples in [0, 1)")
    ref = canonical_hermitian(m, xs[keep])
    interp = PchipInterpolator(xs[keep], values[keep] / ref, extrapolate=True)

    def func(x):
        return canonical_hermitian(m, x) * interp(np.clip(x, 0.0, 1.0))

    samples = [[float(a), float(b)] for a, b in zip(xs, values)]
    return HermitianProfile(func, m=m, kind="samples", params={"samples": samples})


def between_hermitian_profile(m, gamma, t):
    """h = h_{m,inf} (1 + t (gamma_can / gamma - 1)) for t in [0, 1].

    For gamma <= gamma_can this satisfies h >= h_{m,inf} and
    h gamma <= h_{m,inf} gamma_can, the pair of comparisons used by the
    monotonicity argument.
    """
    if not 0 <= t <= 1:
        raise ProfileError("t must lie in [0, 1]")

    def func(x):
        x = np.asarray(x, dtype=float)
        g = gamma(x)
        gc = gamma_can(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            q = np.where(g > 0, gc / np.where(g > 0, g, 1.0), 1.0)
        return canonical_hermitian(m, x) * (1.0 + t * (q - 1.0))

    return HermitianProfile(func, m=m, kind="between", params={"t": float(t)})


def richardson(values, ratio=2.0):
    """Neville-Richardson tableau for samples at steps h, h/ratio, h/ratio^2, ...

    Assumes an error expansion in integer powers of the step; returns the
    final extrapolant and the difference to the previous one.
    """
    row = [float(v) for v in values]
    prev_best = row[-1]
    best = row[-1]
    p = 1
    while len(row) > 1:
        f = ratio ** p
        row = [(f * row[i + 1] - row[i]) / (f - 1.0) for i in range(len(row) - 1)]
        prev_best, best = best, row[-1]
        p += 1
    return best, abs(best - prev_best)


@dataclass(frozen=True)
class HermitianReport:
    passed: bool
    positive: bool
    limit_coeff: float
    limit_error: float
    limit_finite: bool
    limit_nonzero: bool
    m: int

    def to_dict(self):
        out = {}
        for k, v in self.__dict__.items():
            out[k] = bool(v) if isinstance(v, (bool, np.bool_)) else (int(v) if k == "m" else float(v))
        return out


def validate_hermitian(h, levels=8, first_step=2.0 ** -6, zero_tol=1e-8, finite_bound=1e8):
    """Positivity on [0, 1) and existence of a finite nonzero lim h(x)/(1-x)^m.

    The limit is extrapolated from the dyadic ladder 1 - x = first_step * 2^-k.
    """
    grid = np.linspace(0.0, 1.0, 2001)[:-1]
    grid = np.concatenate([grid, 1.0 - boundary_ladder(40)])
    with np.errstate(all="ignore"):
        vals = h(grid)
    positive = bool(np.all(np.isfinite(vals)) and np.all(vals > 0))

    d = first_step * 2.0 ** -np.arange(levels)
    with np.errstate(all="ignore"):
        q = h(1.0 - d) / d ** h.m
    if not np.all(np.isfinite(q)):
        return HermitianReport(False, positive, float("nan"), float("inf"), False, False, h.m)
    limit, err = richardson(q)
    finite = bool(np.isfinite(limit) and abs(limit) < finite_bound and err <= 1e-6 * max(1.0, abs(limit)))
    nonzero = bool(abs(limit) > zero_tol)
    return HermitianReport(
        passed=positive and finite and nonzero,
        positive=positive,
        limit_coeff=float(limit),
        limit_error=float(err),
        limit_finite=finite,
        limit_nonzero=nonzero,
        m=int(h.m),
    )


@dataclass(frozen=True)
class HypothesisReport:
    """Pointwise comparison of (gamma, h) with the canonical pair.

    ``lower_ok``: h >= h_{m,inf}; ``upper_ok``: h gamma <= h_{m,inf} gamma_can,
    both on a closed grid of [0, 1].  ``strict_interior`` is the strict double
    inequality 1 < h/h_{m,inf} < gamma_can/gamma on interior points only; it is
    informational, the operative pair is the verdict.
    """

    lower_ok: bool
    upper_ok: bool
    strict_interior: bool
    worst_margin_lower: float
    worst_margin_upper: float
    argmin_lower: float
    argmin_upper: float
    strict_margin: float
    argmin_strict: float
    atol: float

    @property
    def operative_ok(self):
        return self.lower_ok and self.upper_ok

    def to_dict(self):
        out = {k: (bool(v) if isinstance(v, (bool, np.bool_)) else float(v))
               for k, v in self.__dict__.items()}
        out["operative_ok"] = bool(self.operative_ok)
        return out


def hypothesis_grid(n=4001, ladder=40):
    d = boundary_ladder(ladder, nearest=1e-9)
    x = np.concatenate([np.linspace(0.0, 1.0, n), d, 1.0 - d])
    return np.unique(x)


def check_hypothesis(gamma, h, m=None, grid=None, atol=1e-12):
    """Compare (gamma, h) with (gamma_can, h_{m,inf}) pointwise."""
    m = h.m if m is None else m
    if m < 0:
        raise ProfileError("m must be a nonnegative integer")
    x = hypothesis_grid() if grid is None else np.asarray(grid, dtype=float)
    g, hv = gamma(x), h(x)
    gc, hm = gamma_can(x), canonical_hermitian(m, x)

    lower = hv - hm
    upper = hm * gc - hv * g
    il, iu = int(np.argmin(lower)), int(np.argmin(upper))

    inner = (x > 0) & (x < 1)
    xi = x[inner]
    with np.errstate(divide="ignore", invalid="ignore"):
        rh = hv[inner] / hm[inner]
        rg = gc[inner] / g[inner]
    strict = np.minimum(rh - 1.0, rg - rh)
    strict = np.where(np.isfinite(strict), strict, -np.inf)
    ist = int(np.argmin(strict)) if strict.size else 0

    return HypothesisReport(
        lower_ok=bool(lower[il] >= -atol),
        upper_ok=bool(upper[iu] >= -atol),
        strict_interior=bool(strict.size and strict[ist] > 0),
        worst_margin_lower=float(lower[il]),
        worst_margin_upper=float(upper[iu]),
        argmin_lower=float(x[il]),
        argmin_upper=float(x[iu]),
        strict_margin=float(strict[ist]) if strict.size else float("nan"),
        argmin_strict=float(xi[ist]) if strict.size else float("nan"),
        atol=float(atol),
    )
