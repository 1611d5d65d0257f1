"""Integer-order Bessel functions, the functions L_{m,n} and their zero ladders.

``L_{m,n}(z) = -z^m d/dz (z^-m J_n(z) J_{n-m}(z))``.  The positive zeros of
``L_{m,0}`` are the numbers ``xi_{m,j}``; ``xi**2 / 2`` is the invariant
spectrum of the canonical pair on O(m).
"""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ._parallel import worker_count
from .errors import ConvergenceError
from .spectrum import SpectrumResult, fmt

# Below this argument the power series has no cancellation; Miller's
# backward recurrence is used above it.
Z_SWITCH = 1.0
# Below this argument L_{m,n} is summed from the series of the product.
Z_SERIES_L = 0.5

_RESCALE = 1e250


def _series_table(nmax, z):
    out = np.empty((nmax + 1,) + z.shape)
    half = 0.5 * z
    q = half * half
    lead = np.ones_like(z)
    for n in range(nmax + 1):
        term = lead.copy()
        total = term.copy()
        for k in range(1, 40):
            term = -term * q / (k * (k + n))
            total += term
            if not np.any(np.abs(term) > 1e-17 * np.abs(total)):
                break
        out[n] = total
        lead = lead * half / (n + 1)
    return out


def _miller_table(nmax, z):
    top = max(nmax, int(math.ceil(float(z.max()))))
    start = top + 20 + int(math.sqrt(40.0 * top + 1.0))
    start += start % 2
    out = np.zeros((nmax + 1,) + z.shape)
    j_next = np.zeros_like(z)
    j = np.full_like(z, 1e-300)
    norm = np.zeros_like(z)
    two_over_z = 2.0 / z
    for k in range(start, 0, -1):
        j_prev = k * two_over_z * j - j_next
        j_next, j = j, j_prev
        # j now holds J_{k-1} up to a common scale
        if k - 1 <= nmax:
            out[k - 1] = j
        if k - 1 > 0 and (k - 1) % 2 == 0:
            norm += 2.0 * j
        big = np.abs(j) > _RESCALE
        if big.any():
            scale = np.where(big, 1.0 / _RESCALE, 1.0)
            j *= scale
            j_next *= scale
            norm *= scale
            out *= scale
    norm += j
    return out / norm


def bessel_table(nmax, z):
    """``J_0 .. J_nmax`` at every ``z >= 0``; shape ``(nmax + 1,) + z.shape``."""
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise ValueError("bessel_table expects z >= 0")
    flat = np.atleast_1d(z).ravel()
    out = np.empty((nmax + 1, flat.size))
    small = flat <= Z_SWITCH
    if small.any():
        out[:, small] = _series_table(nmax, flat[small])
    if (~small).any():
        out[:, ~small] = _miller_table(nmax, flat[~small])
    return out.reshape((nmax + 1,) + z.shape)


def _signed(table, k):
    row = table[abs(k)]
    return -row if (k < 0 and k % 2) else row


def bessel_j(n, z):
    """J_n(z) for integer ``n`` (negative orders via ``J_-n = (-1)^n J_n``)."""
    n = int(n)
    return _signed(bessel_table(abs(n), z), n)


def bessel_jp(n, z):
    """Derivative J_n'(z) = (J_{n-1}(z) - J_{n+1}(z)) / 2."""
    n = int(n)
    table = bessel_table(abs(n) + 1, z)
    return 0.5 * (_signed(table, n - 1) - _signed(table, n + 1))


@dataclass(frozen=True)
class BesselEvaluator:
    """J_n as a callable; the scheme switches from series to Miller at ``z_switch``."""

    order: int
    z_switch: float = Z_SWITCH
    target_accuracy: float = 1e-13

    def __call__(self, z):
        return bessel_j(self.order, z)

    def derivative(self, z):
        return bessel_jp(self.order, z)


def _l_mn_series(m, n, z):
    a, b = abs(n), abs(n - m)
    sign = (-1.0 if (n < 0 and n % 2) else 1.0) * (-1.0 if (n - m < 0 and (n - m) % 2) else 1.0)
    logh = np.log(0.5 * z)
    total = np.zeros_like(z)
    for k in range(40):
        p = 2 * k + a + b
        if p == m:
            continue
        logc = (math.lgamma(p + 1) - math.lgamma(k + 1) - math.lgamma(k + a + 1)
                - math.lgamma(k + b + 1) - math.lgamma(k + a + b + 1))
        term = (-1.0) ** k * 0.5 * (p - m) * np.exp(logc + (p - 1) * logh)
        total += term
        if np.all(np.abs(term) <= 1e-18 * np.abs(total)):
            break
    return -sign * total


def l_mn(m, n, z):
    """L_{m,n}(z) = -[J_n' J_{n-m} + J_n J_{n-m}' - (m/z) J_n J_{n-m}](z) for z > 0."""
    m, n = int(m), int(n)
    if m < 0:
        raise ValueError("m must be a nonnegative integer")
    z = np.asarray(z, dtype=float)
    if np.any(~(z > 0)):
        raise ValueError("L_{m,n} is evaluated at z > 0 only")
    flat = np.atleast_1d(z).ravel()
    out = np.empty_like(flat)
    small = flat < Z_SERIES_L
    if small.any():
        out[small] = _l_mn_series(m, n, flat[small])
    big = ~small
    if big.any():
        zz = flat[big]
        k = n - m
        table = bessel_table(max(abs(n), abs(k)) + 1, zz)
        jn, jk = _signed(table, n), _signed(table, k)
        djn = 0.5 * (_signed(table, n - 1) - _signed(table, n + 1))
        djk = 0.5 * (_signed(table, k - 1) - _signed(table, k + 1))
        out[big] = -(djn * jk + jn * djk - (m / zz) * jn * jk)
    return out.reshape(z.shape) if z.ndim else float(out[0])


@dataclass(frozen=True)
class ZeroLadder:
    """The first ``count`` positive zeros of L_{m,n}, strictly increasing."""

    m: int
    n: int
    zeros: np.ndarray
    tol: float = 1e-12

    @property
    def count(self):
        return len(self.zeros)

    @property
    def eigenvalues(self):
        return 0.5 * self.zeros ** 2

    def rows(self):
        for j, xi in enumerate(self.zeros, start=1):
            yield self.m, self.n, j, xi, 0.5 * xi * xi


def zeros_l_mn(m, n, count, step=0.5, tol=1e-12, z_max=None):
    """Bracket the first ``count`` positive zeros of L_{m,n} and refine them.

    The scan evaluates each cell at both ends and its midpoint, so two sign
    changes inside one cell are still separated.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if m < 0:
        raise ValueError("m must be a nonnegative integer")
    if z_max is None:
        z_max = 4.0 * (count + abs(n) + m) + 60.0

    def f(z):
        return l_mn(m, n, z)

    zeros = []
    lo = 1e-3
    chunk = 128
    while len(zeros) < count:
        if lo >= z_max:
            raise ConvergenceError(
                f"scan budget exhausted for L_{{{m},{n}}}: found {len(zeros)} of {count} zeros below {z_max}")
        edges = lo + step * np.arange(chunk + 1)
        edges = np.append(edges[edges < z_max], z_max) if edges[-1] > z_max else edges
        chunk = len(edges) - 1
        pts = np.empty(2 * chunk + 1)
        pts[0::2] = edges
        pts[1::2] = 0.5 * (edges[:-1] + edges[1:])
        vals = f(pts)
        pos = vals >= 0
        for i in range(2 * chunk):
            if pos[i] != pos[i + 1]:
                a, b = pts[i], pts[i + 1]
                if vals[i] == 0.0:
                    root = a
                else:
                    root = brentq(f, a, b, xtol=tol * 1e-2, rtol=4 * np.finfo(float).eps, maxiter=200)
                zeros.append(root)
                if len(zeros) == count:
                    break
        lo = edges[-1]
    return ZeroLadder(m=m, n=n, zeros=np.array(zeros), tol=tol)


def xi(m, count):
    """``xi_{m,1} < ... < xi_{m,count}``: the invariant ladder (n = 0)."""
    return zeros_l_mn(m, 0, count).zeros


def canonical_spectrum(m, count, invariant_only=True):
    """Spectrum of the canonical pair on O(m) from the Bessel characterization.

    Returns ``count + 1`` values starting with 0.  With ``invariant_only`` the
    positive part is ``xi**2 / 2`` for the zeros of L_{m,0}; otherwise the
    ladders of every n >= 0 are merged and the smallest ``count`` distinct
    values kept, with multiplicities in ``meta["multiplicity"]``.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if m < 0:
        raise ValueError("m must be a nonnegative integer")
    if invariant_only:
        z = zeros_l_mn(m, 0, count).zeros
        raw = np.concatenate([[0.0], z * z])
        return SpectrumResult.from_raw(
            raw, "bessel", m, meta={"invariant_only": True, "multiplicity": [1] * (count + 1)})

    found = []
    n = 0
    above = 0
    batch = worker_count(4)
    with ThreadPoolExecutor(max_workers=batch) as pool:
        while above < 2:
            ns = list(range(n, n + batch))
            ladders = list(pool.map(lambda k: zeros_l_mn(m, k, count), ns))
            for lad in ladders:
                threshold = np.sort([z for z, _ in found])[count - 1] if len(found) >= count else np.inf
                if lad.zeros[0] > threshold:
                    above += 1
                else:
                    above = 0
                found.extend((z, lad.n) for z in lad.zeros)
                if above >= 2:
                    break
            n += batch
    values = np.sort(np.array([z for z, _ in found]))
    merged, mult = [], []
    for v in values:
        if merged and abs(v - merged[-1]) <= 1e-9 * v:
            mult[-1] += 1
        else:
            merged.append(v)
            mult.append(1)
    z = np.array(merged[:count])
    raw = np.concatenate([[0.0], z * z])
    return SpectrumResult.from_raw(
        raw, "bessel", m, meta={"invariant_only": False, "multiplicity": [1] + mult[:count]})


LADDER_COLUMNS = ("m", "n", "j", "xi", "lambda")


def ladders_to_csv(ladders):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(LADDER_COLUMNS)
    for lad in ladders:
        for m, n, j, z, lam in lad.rows():
            w.writerow([m, n, j, fmt(z), fmt(lam)])
    return buf.getvalue()


def read_ladders_csv(text):
    groups = {}
    for row in csv.DictReader(io.StringIO(text)):
        key = (int(row["m"]), int(row["n"]))
        groups.setdefault(key, []).append((int(row["j"]), float(row["xi"])))
    out = []
    for (m, n), items in groups.items():
        items.sort()
        out.append(ZeroLadder(m=m, n=n, zeros=np.array([z for _, z in items])))
    return out


def ladders_to_json(ladders):
    import json

    return json.dumps([{"m": lad.m, "n": lad.n, "tol": lad.tol, "zeros": [float(z) for z in lad.zeros],
                        "lambda": [float(v) for v in lad.eigenvalues]} for lad in ladders],
                      indent=2, sort_keys=True)


def read_ladders_json(text):
    import json

    return [ZeroLadder(m=int(d["m"]), n=int(d["n"]), zeros=np.array(d["zeros"], dtype=float),
                       tol=float(d.get("tol", 1e-12))) for d in json.loads(text)]
