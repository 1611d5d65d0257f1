"""Finite-element route to the invariant spectrum.

The weighted problem on [0, 1] has stiffness form ``int h gamma phi' psi'``
and mass form ``int h phi psi``.  Both weights degenerate at the endpoints,
so no boundary condition is imposed: the natural P1 space on the whole
interval is used.  The generalized tridiagonal problem K v = mu M v is
solved by spectrum slicing (Sylvester inertia of K - sigma M) and
bisection; the reported eigenvalues are ``lambda = mu / 2``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from .errors import ConvergenceError, ProfileError
from .spectrum import NORMALIZATION, SpectrumResult, fmt

DEFAULT_GRADING = 2.0
DEFAULT_TARGET_TOL = 1e-6
DEFAULT_N_MAX = 2 ** 15
MERGE_RTOL = 1e-9


@dataclass(frozen=True)
class Mesh:
    nodes: np.ndarray
    grading: float
    N: int

    @property
    def widths(self):
        return np.diff(self.nodes)


def build_mesh(N, grading=DEFAULT_GRADING):
    """Symmetric mesh with x_i = (1/2)(i/(N/2))^grading on the left half."""
    if int(N) != N or N < 16 or N % 2:
        raise ValueError(f"mesh size must be an even integer >= 16, got {N}")
    if grading < 1:
        raise ValueError("grading must be >= 1")
    N = int(N)
    half = N // 2
    left = 0.5 * (np.arange(half + 1) / half) ** grading
    nodes = np.concatenate([left, 1.0 - left[-2::-1]])
    nodes[half] = 0.5
    return Mesh(nodes=nodes, grading=float(grading), N=N)


@dataclass(frozen=True)
class DiscreteForms:
    """Tridiagonal stiffness and mass matrices (diagonal and off-diagonal)."""

    k_diag: np.ndarray
    k_off: np.ndarray
    m_diag: np.ndarray
    m_off: np.ndarray
    mesh: Mesh
    quadrature: dict = field(default_factory=dict)

    @property
    def size(self):
        return len(self.k_diag)

    def to_dense(self):
        K = np.diag(self.k_diag) + np.diag(self.k_off, 1) + np.diag(self.k_off, -1)
        M = np.diag(self.m_diag) + np.diag(self.m_off, 1) + np.diag(self.m_off, -1)
        return K, M


def _gauss(n):
    t, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (t + 1.0), 0.5 * w


def _element_integrals(gamma, h, a, width, points):
    t, w = _gauss(points)
    xq = a[:, None] + width[:, None] * t[None, :]
    with np.errstate(all="ignore"):
        hv = np.asarray(h(xq), dtype=float)
        gv = np.asarray(gamma(xq), dtype=float)
    if not (np.all(np.isfinite(hv)) and np.all(np.isfinite(gv))):
        bad = xq[~(np.isfinite(hv) & np.isfinite(gv))][0]
        raise ProfileError(f"profile evaluation failed at x={bad:.6g}")
    if np.any(hv < 0) or np.any(gv < 0):
        bad = xq[(hv < 0) | (gv < 0)][0]
        raise ProfileError(f"negative weight at x={bad:.6g}")
    ks = (hv * gv * w).sum(axis=1) / width
    m00 = width * (hv * w * (1.0 - t) ** 2).sum(axis=1)
    m11 = width * (hv * w * t ** 2).sum(axis=1)
    m01 = width * (hv * w * t * (1.0 - t)).sum(axis=1)
    return ks, m00, m11, m01


def assemble(gamma, h, mesh):
    """P1 stiffness and mass matrices with per-element Gauss quadrature.

    Two points per element; for m >= 1 the element touching x = 1 gets four
    points, since the weight there behaves like (1 - x)^(m + 1).
    """
    x = mesh.nodes
    a, width = x[:-1], np.diff(x)
    m = int(getattr(h, "m", 0))
    ks, m00, m11, m01 = _element_integrals(gamma, h, a, width, 2)
    last_points = 2
    if m >= 1:
        last_points = 4
        tail = _element_integrals(gamma, h, a[-1:], width[-1:], 4)
        for arr, v in zip((ks, m00, m11, m01), tail):
            arr[-1] = v[0]
    n = len(x)
    kd = np.zeros(n)
    md = np.zeros(n)
    kd[:-1] += ks
    kd[1:] += ks
    md[:-1] += m00
    md[1:] += m11
    return DiscreteForms(
        k_diag=kd, k_off=-ks, m_diag=md, m_off=m01.copy(), mesh=mesh,
        quadrature={"points": 2, "last_element_points": last_points},
    )


class _ZeroPivot(Exception):
    pass


def _inertia(a, b):
    """Number of negative pivots of the LDL^T factorization of tridiag(b, a, b)."""
    count = 0
    d = a[0]
    if d == 0.0:
        raise _ZeroPivot
    if d < 0:
        count += 1
    for i in range(1, len(a)):
        bb = b[i - 1]
        d = a[i] - bb * bb / d
        if d == 0.0:
            raise _ZeroPivot
        if d < 0:
            count += 1
    return count


def sturm_count(forms, sigma):
    """Number of eigenvalues of K v = mu M v strictly below ``sigma``."""
    shift = float(sigma)
    for attempt in range(8):
        a = (forms.k_diag - shift * forms.m_diag).tolist()
        b = (forms.k_off - shift * forms.m_off).tolist()
        try:
            return _inertia(a, b)
        except _ZeroPivot:
            # sigma sits on an eigenvalue of a leading block; nudge it
            ref = abs(shift) + float(np.max(np.abs(forms.k_diag)) / np.max(np.abs(forms.m_diag)))
            shift = shift + ref * 1e-14 * 4 ** attempt
    raise ConvergenceError(f"LDL factorization broke down repeatedly near shift {sigma:g}")


def _check_mass(forms):
    if np.any(forms.m_diag <= 0):
        raise ProfileError("mass matrix is not positive definite")
    try:
        if _inertia(forms.m_diag.tolist(), forms.m_off.tolist()) != 0:
            raise ProfileError("mass matrix is not positive definite")
    except _ZeroPivot:
        raise ProfileError("mass matrix is singular") from None


def _inverse_iteration(forms, mu, scale, iterations=4):
    n = forms.size
    sigma = mu - max(1e-10 * abs(mu), 1e-12 * scale)
    ab = np.zeros((3, n))
    ab[0, 1:] = forms.k_off - sigma * forms.m_off
    ab[1] = forms.k_diag - sigma * forms.m_diag
    ab[2, :-1] = forms.k_off - sigma * forms.m_off

    def mass(v):
        out = forms.m_diag * v
        out[:-1] += forms.m_off * v[1:]
        out[1:] += forms.m_off * v[:-1]
        return out

    v = np.linspace(1.0, 2.0, n)
    for _ in range(iterations):
        v = solve_banded((1, 1), ab, mass(v))
        v /= np.sqrt(v @ mass(v))
    k = int(np.argmax(np.abs(v)))
    if v[k] < 0:
        v = -v
    return v


def solve_generalized(forms, count, rtol=1e-12, vectors=True):
    """The ``count`` smallest eigenvalues (and M-orthonormal vectors).

    Bisection on Sturm counts brackets each eigenvalue to relative ``rtol``;
    every count computed along the way tightens the brackets of the others.
    """
    n = forms.size
    if count < 1 or count > n - 1:
        raise ValueError(f"count must lie in [1, {n - 1}]")
    _check_mass(forms)

    hi = 1.0
    while sturm_count(forms, hi) < count:
        hi *= 2.0
        if hi > 1e300:
            raise ConvergenceError("could not bound the requested eigenvalues")
    scale = hi
    lo = -1e-9 * scale
    while sturm_count(forms, lo) > 0:
        lo *= 2.0
        if lo < -1e300:
            raise ConvergenceError("stiffness form is not bounded below")
    # counts[s] = number of eigenvalues below s
    counts = {lo: 0, hi: sturm_count(forms, hi)}
    floor = 1e-13 * scale
    values = np.empty(count)
    for j in range(count):
        a = max(s for s, c in counts.items() if c <= j)
        b = min(s for s, c in counts.items() if c > j)
        while b - a > max(rtol * max(abs(a), abs(b)), floor):
            mid = 0.5 * (a + b)
            c = sturm_count(forms, mid)
            counts[mid] = c
            if c > j:
                b = mid
            else:
                a = mid
        values[j] = 0.5 * (a + b)
    if not vectors:
        return values, None
    vecs = np.column_stack([_inverse_iteration(forms, mu, scale) for mu in values])
    return values, vecs


def _distinct(values, rtol=MERGE_RTOL):
    out = []
    for v in values:
        if out and abs(v - out[-1]) <= rtol * max(abs(v), 1.0):
            continue
        out.append(v)
    return np.array(out)


def discrete_spectrum(gamma, h, N, count, grading=DEFAULT_GRADING):
    """Distinct raw values mu_0 < ... < mu_count on a single mesh."""
    mesh = build_mesh(N, grading)
    forms = assemble(gamma, h, mesh)
    extra = 0
    while True:
        mu, _ = solve_generalized(forms, count + 1 + extra, vectors=False)
        mu = _distinct(mu)
        if len(mu) >= count + 1:
            return mu[: count + 1]
        extra += count + 1 - len(mu)
        if count + 1 + extra > forms.size - 1:
            raise ConvergenceError("not enough distinct discrete eigenvalues on this mesh")


def invariant_spectrum(gamma, h, count, target_tol=DEFAULT_TARGET_TOL, n_start=64,
                       n_max=DEFAULT_N_MAX, grading=DEFAULT_GRADING):
    """lambda_0 = 0 < lambda_1 < ... < lambda_count on a doubling mesh ladder.

    Each level is Richardson-extrapolated against the previous one assuming
    O(N^-2) error; the ladder stops once two successive extrapolants agree to
    ``target_tol`` relative for every j >= 1.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    N = int(n_start)
    if N % 2 or N < 16:
        raise ValueError("n_start must be an even integer >= 16")
    m = int(getattr(h, "m", 0))
    levels, extrap = [], []
    sizes = []
    while N <= n_max:
        mu = discrete_spectrum(gamma, h, N, count, grading)
        levels.append(mu)
        sizes.append(N)
        if len(levels) >= 2:
            extrap.append((4.0 * levels[-1] - levels[-2]) / 3.0)
        if len(extrap) >= 2:
            diff = np.abs(extrap[-1] - extrap[-2])
            rel = diff[1:] / np.abs(extrap[-1][1:])
            if np.all(rel < target_tol):
                best = extrap[-1].copy()
                best[0] = levels[-1][0]
                err = diff.copy()
                err[0] = abs(levels[-1][0])
                return SpectrumResult.from_raw(
                    best, "fem", m,
                    error_estimates=err * NORMALIZATION,
                    mesh_sizes=tuple(sizes),
                    meta={"grading": float(grading), "target_tol": float(target_tol),
                          "finest_raw": [float(v) for v in levels[-1]]},
                )
        N *= 2
    worst = float(np.max(rel)) if len(extrap) >= 2 else float("nan")
    raise ConvergenceError(
        f"mesh ladder reached N={sizes[-1]} without meeting tolerance {target_tol:g} "
        f"(last relative change {worst:.3g})")


@dataclass(frozen=True)
class BoundRecord:
    j: int
    value: float
    bound: float
    gap: float
    ok: bool

    def to_dict(self):
        return {"j": self.j, "lambda": self.value, "bound": self.bound, "gap": self.gap, "ok": self.ok}


@dataclass(frozen=True)
class BoundReport:
    m: int
    tol: float
    records: tuple

    @property
    def all_ok(self):
        return all(r.ok for r in self.records)

    @property
    def violations(self):
        return [r.j for r in self.records if not r.ok]

    def to_dict(self):
        return {"m": self.m, "tol": self.tol, "all_ok": self.all_ok,
                "records": [r.to_dict() for r in self.records]}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        recs = tuple(BoundRecord(j=int(r["j"]), value=float(r["lambda"]), bound=float(r["bound"]),
                                 gap=float(r["gap"]), ok=bool(r["ok"])) for r in d["records"])
        return cls(m=int(d["m"]), tol=float(d["tol"]), records=recs)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_csv(self):
        lines = ["j,lambda,bound,gap,ok"]
        for r in self.records:
            lines.append(f"{r.j},{fmt(r.value)},{fmt(r.bound)},{fmt(r.gap)},{str(r.ok).lower()}")
        return "\n".join(lines) + "\n"


def verify_bound(result, m, j_max, tol=1e-6, bounds=None):
    """Compare lambda_j with xi_{m,j}^2 / 2 for j = 1..j_max."""
    if j_max < 1 or j_max > len(result.eigenvalues) - 1:
        raise ValueError(f"j_max must lie in [1, {len(result.eigenvalues) - 1}]")
    if bounds is None:
        from .bessel import canonical_spectrum

        bounds = canonical_spectrum(m, j_max).eigenvalues
    records = []
    for j in range(1, j_max + 1):
        lam, b = float(result.eigenvalues[j]), float(bounds[j])
        records.append(BoundRecord(j=j, value=lam, bound=b, gap=b - lam, ok=bool(lam <= b + tol)))
    return BoundReport(m=int(m), tol=float(tol), records=tuple(records))
