"""Profiles gamma on [0, 1] and the class-G validator."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import PchipInterpolator

from ..errors import ProfileError

DEFAULT_C = 4.0


def gamma_can(x):
    """2 min(x, 1 - x)."""
    x = np.asarray(x, dtype=float)
    return 2.0 * np.minimum(x, 1.0 - x)


def gamma_fs(x):
    """2 x (1 - x)."""
    x = np.asarray(x, dtype=float)
    return 2.0 * x * (1.0 - x)


@dataclass(frozen=True)
class SymplecticProfile:
    """A profile gamma on [0, 1], positive inside, vanishing at both ends.

    ``kind`` and ``params`` describe how the profile was built; they are what
    the JSON writer emits.
    """

    func: Callable
    kind: str = "custom"
    params: dict = field(default_factory=dict)
    left_slope: float = 2.0
    right_slope: float = 2.0
    sample_grid: np.ndarray | None = None

    def __call__(self, x):
        return np.asarray(self.func(np.asarray(x, dtype=float)), dtype=float)

    def grid(self):
        if self.sample_grid is not None:
            return np.asarray(self.sample_grid, dtype=float)
        return np.linspace(0.0, 1.0, 2001)


def fubini_study_profile():
    return SymplecticProfile(gamma_fs, kind="fubini-study")


def canonical_gamma_profile():
    return SymplecticProfile(gamma_can, kind="canonical")


def constant_weight_profile(value=1.0):
    """A constant weight; not in class G, used to sanity check the assembler."""
    return SymplecticProfile(lambda x: np.full_like(x, value), kind="constant", params={"value": value},
                             left_slope=0.0, right_slope=0.0)


@dataclass(frozen=True)
class Mollifier:
    """height * exp(1 - 1 / (1 - s^2)) with s = (t - center) / half_width, zero for |s| >= 1."""

    height: float = 0.125
    center: float = 0.5
    half_width: float = 0.25

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        s = (t - self.center) / self.half_width
        inside = np.abs(s) < 1
        out = np.zeros_like(t)
        si = s[inside]
        out[inside] = self.height * np.exp(1.0 - 1.0 / (1.0 - si * si))
        return out

    def to_dict(self):
        return {"height": self.height, "center": self.center, "half_width": self.half_width}


def _check_bump(bump, n=20001):
    t = np.linspace(-0.5, 1.5, 2 * n - 1)
    v = np.asarray(bump(t), dtype=float)
    if not np.all(np.isfinite(v)):
        raise ProfileError("bump is not finite")
    outside = (t < 0.25) | (t > 0.75)
    if np.any(v[outside] != 0):
        raise ProfileError("bump support is not contained in [1/4, 3/4]")
    if np.any(v < 0) or np.any(v > 0.125):
        raise ProfileError("bump must take values in [0, 1/8]")


def bump_profile(A=1.0, bump=None):
    """gamma_A(x) = 2x(1-x) + bump(A (x - 1/2) + 1/2).

    For A >= 1 and a bump supported in [1/4, 3/4] with values in [0, 1/8],
    gamma_A lies in class G and below gamma_can; its slope grows like A.
    """
    if A < 1:
        raise ProfileError("the bump family needs A >= 1")
    bump = Mollifier() if bump is None else bump
    _check_bump(bump)

    def func(x):
        return gamma_fs(x) + bump(A * (x - 0.5) + 0.5)

    params = {"A": float(A)}
    if isinstance(bump, Mollifier):
        params.update(bump.to_dict())
    return SymplecticProfile(func, kind="bump", params=params)


def mixture_profile(epsilon):
    """(1 - eps) gamma_can + eps gamma_FS; approaches gamma_can as eps -> 0."""
    if not 0 <= epsilon <= 1:
        raise ProfileError("epsilon must lie in [0, 1]")

    def func(x):
        return (1.0 - epsilon) * gamma_can(x) + epsilon * gamma_fs(x)

    return SymplecticProfile(func, kind="mixture", params={"epsilon": float(epsilon)})


def samples_profile(xs, values):
    """Monotone-cubic interpolant of sampled gamma values.

    The ratio gamma / gamma_can is interpolated with endpoint value 1, so the
    result matches gamma_can to second order at both ends.
    """
    xs = np.asarray(xs, dtype=float)
    values = np.asarray(values, dtype=float)
    order = np.argsort(xs)
    xs, values = xs[order], values[order]
    inner = (xs > 0) & (xs < 1)
    if inner.sum() < 1:
        raise ProfileError("need at least one interior sample")
    if np.any(values[inner] <= 0):
        raise ProfileError("sampled gamma must be positive inside (0, 1)")
    qx = np.concatenate([[0.0], xs[inner], [1.0]])
    qv = np.concatenate([[1.0], values[inner] / gamma_can(xs[inner]), [1.0]])
    interp = PchipInterpolator(qx, qv, extrapolate=False)

    def func(x):
        return gamma_can(x) * interp(np.clip(x, 0.0, 1.0))

    samples = [[float(a), float(b)] for a, b in zip(xs, values)]
    return SymplecticProfile(func, kind="samples", params={"samples": samples})


def reflect(gamma):
    """gamma*(x) = gamma(1 - x)."""
    params = dict(gamma.params)
    params["reflected"] = not params.get("reflected", False)
    inner = gamma.func
    base = getattr(inner, "_reflection_of", None)
    if base is not None:
        # undo a previous reflection exactly instead of stacking another one
        params["reflected"] = False
        return SymplecticProfile(base, kind=gamma.kind, params=params,
                                 left_slope=gamma.right_slope, right_slope=gamma.left_slope,
                                 sample_grid=gamma.sample_grid)

    def func(x):
        return inner(1.0 - np.asarray(x, dtype=float))

    func._reflection_of = inner
    return SymplecticProfile(func, kind=gamma.kind, params=params,
                             left_slope=gamma.right_slope, right_slope=gamma.left_slope,
                             sample_grid=gamma.sample_grid)


@dataclass(frozen=True)
class ClassGReport:
    passed: bool
    positive_interior: bool
    endpoints_zero: bool
    bound_ok: bool
    C: float
    worst_ratio: float
    worst_location: float
    slope_left: float
    slope_right: float

    def to_dict(self):
        return {k: (bool(v) if isinstance(v, (bool, np.bool_)) else float(v))
                for k, v in self.__dict__.items()}


def boundary_ladder(n, nearest=1e-6, farthest=0.25):
    """Geometric distances from ``farthest`` down to ``nearest``."""
    return np.geomspace(farthest, nearest, n)


def validate_class_g(gamma, C=DEFAULT_C, n_boundary_samples=40):
    """Check gamma against the definition of class G.

    Positivity on an interior grid, zero endpoint values, and
    ``|gamma - gamma_can| <= C gamma_can^2`` on geometric ladders approaching
    both endpoints.  The report carries the verdict.
    """
    if C <= 0:
        raise ValueError("C must be positive")
    grid = gamma.grid()
    inner = grid[(grid > 0) & (grid < 1)]
    with np.errstate(all="ignore"):
        vals = gamma(inner)
        positive = bool(np.all(np.isfinite(vals)) and np.all(vals > 0))
        ends = gamma(np.array([0.0, 1.0]))
        endpoints_zero = bool(np.all(np.abs(ends) <= 1e-14))

        d = boundary_ladder(n_boundary_samples)
        x = np.concatenate([d, 1.0 - d])
        gc = gamma_can(x)
        ratio = np.abs(gamma(x) - gc) / gc ** 2
    ratio = np.where(np.isfinite(ratio), ratio, np.inf)
    k = int(np.argmax(ratio))
    worst = float(ratio[k])
    bound_ok = bool(worst <= C)
    near = d[-1]
    slope_left = float(gamma(np.array([near]))[0] / near)
    slope_right = float(gamma(np.array([1.0 - near]))[0] / near)
    return ClassGReport(
        passed=positive and endpoints_zero and bound_ok,
        positive_interior=positive,
        endpoints_zero=endpoints_zero,
        bound_ok=bound_ok,
        C=float(C),
        worst_ratio=worst,
        worst_location=float(x[k]),
        slope_left=slope_left,
        slope_right=slope_right,
    )
