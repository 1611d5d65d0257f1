"""Independent reference computations used by the tests.

None of these call into invspec: Bessel values come from mpmath, zeros are
located by bisection on mpmath's series, and closed forms are written out
directly.
"""
import math

import mpmath as mp
import numpy as np

mp.mp.dps = 30


def j0_series(z):
    z = mp.mpf(z)
    return mp.nsum(lambda k: (-1) ** k * (z / 2) ** (2 * k) / mp.factorial(k) ** 2, [0, mp.inf])


def bisect(f, a, b, tol=mp.mpf("1e-25")):
    a, b = mp.mpf(a), mp.mpf(b)
    fa = f(a)
    while b - a > tol:
        c = (a + b) / 2
        fc = f(c)
        if (fc > 0) == (fa > 0):
            a, fa = c, fc
        else:
            b = c
    return (a + b) / 2


def l_mn(m, n, z):
    """-z^m d/dz (z^-m J_n J_{n-m}) by mpmath differentiation."""
    z = mp.mpf(z)
    g = lambda t: t ** (-m) * mp.besselj(n, t) * mp.besselj(n - m, t)
    return float(-(z ** m) * mp.diff(g, z))


def l_mn_zeros(m, n, count, step=0.05):
    f = lambda t: -(t ** m) * mp.diff(lambda s: s ** (-m) * mp.besselj(n, s) * mp.besselj(n - m, s), t)
    out = []
    a = mp.mpf("0.01")
    fa = f(a)
    while len(out) < count:
        b = a + step
        fb = f(b)
        if (fa > 0) != (fb > 0):
            out.append(float(mp.findroot(f, (a, b), solver="anderson")))
        a, fa = b, fb
    return out


# values frozen from the oracles above (mpmath, 30 digits)
J0_FIRST_ZERO = 2.404825557695773
LADDER_00 = [2.404825557695773, 3.831705970207512, 5.520078110286311,
             7.015586669815619, 8.653727912911013]


def fcan_check(x):
    """-1/2 x log(2x) + 1/2 x on [0, 1/2], mirrored on [1/2, 1]."""
    x = np.asarray(x, dtype=float)
    d = np.minimum(x, 1.0 - x)
    with np.errstate(divide="ignore", invalid="ignore"):
        v = np.where(d > 0, -0.5 * d * np.log(2.0 * d) + 0.5 * d, 0.0)
    return v


def gcan(x):
    x = np.asarray(x, dtype=float)
    return np.where(x <= 0.5, -0.5 * np.log(2.0 * x), 0.5 * np.log(2.0 * (1.0 - x)))


def legendre_raw(k):
    """Rayleigh-quotient values of 2x(1-x) with unit weight: 2k(k+1)."""
    return 2.0 * k * (k + 1)


def neumann_raw(k):
    return (k * math.pi) ** 2
