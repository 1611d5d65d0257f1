"""JSON form of profiles.

``{"kind": ..., "m": int, "params": {...}, "samples": [[x, value], ...]}``.
Symplectic kinds: fubini-study, canonical, bump, mixture, samples.
Hermitian kinds: canonical, constant, fubini-study, samples.
"""
from __future__ import annotations

import json

from ..errors import ProfileError
from .hermitian import (
    HermitianProfile,
    canonical_hermitian_profile,
    constant_hermitian_profile,
    fubini_study_hermitian_profile,
    samples_hermitian_profile,
)
from .symplectic import (
    Mollifier,
    SymplecticProfile,
    bump_profile,
    canonical_gamma_profile,
    fubini_study_profile,
    mixture_profile,
    reflect,
    samples_profile,
)

GAMMA_KINDS = ("fubini-study", "canonical", "bump", "mixture", "samples")
HERMITIAN_KINDS = ("canonical", "constant", "fubini-study", "samples")


def _serializable_params(params):
    return {k: v for k, v in params.items() if k != "samples"}


def profile_to_dict(profile, m=0):
    if isinstance(profile, HermitianProfile):
        m = profile.m
        if profile.kind not in HERMITIAN_KINDS:
            raise ProfileError(f"hermitian profile of kind {profile.kind!r} has no JSON form; sample it first")
    elif profile.kind not in GAMMA_KINDS:
        raise ProfileError(f"profile of kind {profile.kind!r} has no JSON form; sample it first")
    out = {"kind": profile.kind, "m": int(m), "params": _serializable_params(profile.params)}
    if "samples" in profile.params:
        out["samples"] = profile.params["samples"]
    return out


def gamma_from_dict(d):
    kind = d.get("kind")
    params = d.get("params", {}) or {}
    if kind == "fubini-study":
        g = fubini_study_profile()
    elif kind == "canonical":
        g = canonical_gamma_profile()
    elif kind == "bump":
        bump = Mollifier(height=params.get("height", 0.125), center=params.get("center", 0.5),
                         half_width=params.get("half_width", 0.25))
        g = bump_profile(A=params.get("A", 1.0), bump=bump)
    elif kind == "mixture":
        g = mixture_profile(params["epsilon"])
    elif kind == "samples":
        pts = d.get("samples") or []
        if not pts:
            raise ProfileError("samples profile without samples")
        g = samples_profile([p[0] for p in pts], [p[1] for p in pts])
    else:
        raise ProfileError(f"unknown symplectic profile kind {kind!r}")
    if params.get("reflected"):
        g = reflect(g)
    return g


def hermitian_from_dict(d):
    kind = d.get("kind")
    m = int(d.get("m", 0))
    params = d.get("params", {}) or {}
    if kind == "canonical":
        return canonical_hermitian_profile(m)
    if kind == "constant":
        if m != 0:
            raise ProfileError("a constant hermitian profile needs m = 0")
        return constant_hermitian_profile(params.get("value", 1.0))
    if kind == "fubini-study":
        return fubini_study_hermitian_profile(m)
    if kind == "samples":
        pts = d.get("samples") or []
        return samples_hermitian_profile(m, [p[0] for p in pts], [p[1] for p in pts])
    raise ProfileError(f"unknown hermitian profile kind {kind!r}")


def sample(profile, n=257, m=None):
    """Convert any profile to the samples kind on a uniform grid."""
    import numpy as np

    x = np.linspace(0.0, 1.0, n)
    if isinstance(profile, HermitianProfile):
        x = x[:-1]
        return samples_hermitian_profile(profile.m, x, profile(x))
    x = x[1:-1]
    return samples_profile(x, profile(x))


def dumps(profile, m=0):
    return json.dumps(profile_to_dict(profile, m), indent=2, sort_keys=True)


def load_gamma(path):
    with open(path) as fh:
        d = json.load(fh)
    return gamma_from_dict(d.get("profile", d))


def load_hermitian(path):
    with open(path) as fh:
        d = json.load(fh)
    return hermitian_from_dict(d.get("hermitian", d))


__all__ = ["SymplecticProfile", "profile_to_dict", "gamma_from_dict", "hermitian_from_dict",
           "sample", "dumps", "load_gamma", "load_hermitian"]
