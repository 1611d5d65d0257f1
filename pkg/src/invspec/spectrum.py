"""Container for invariant spectra and its CSV/JSON forms.

Both the Bessel route and the finite-element route produce a
:class:`SpectrumResult`.  ``raw`` holds the min-max values of the Rayleigh
quotient as written (``mu``); ``eigenvalues`` holds the reported
``lambda = mu * normalization``.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

NORMALIZATION = 0.5

SPECTRUM_COLUMNS = ("j", "lambda", "mu_raw", "error_estimate", "method")


def fmt(value):
    """Deterministic 15-significant-digit formatting used by every writer."""
    return format(float(value), ".15g")


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: np.ndarray
    raw: np.ndarray
    method: str
    m: int
    normalization: float = NORMALIZATION
    error_estimates: np.ndarray | None = None
    mesh_sizes: tuple = ()
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues, dtype=float)
        raw = np.asarray(self.raw, dtype=float)
        if lam.shape != raw.shape:
            raise ValueError("eigenvalues and raw values differ in length")
        if self.method not in ("fem", "bessel"):
            raise ValueError(f"unknown method tag {self.method!r}")
        err = self.error_estimates
        err = np.zeros_like(lam) if err is None else np.asarray(err, dtype=float)
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "raw", raw)
        object.__setattr__(self, "error_estimates", err)

    def __len__(self):
        return len(self.eigenvalues)

    @classmethod
    def from_raw(cls, raw, method, m, **kwargs):
        raw = np.asarray(raw, dtype=float)
        return cls(eigenvalues=raw * NORMALIZATION, raw=raw, method=method, m=m, **kwargs)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(SPECTRUM_COLUMNS)
        for j, (lam, mu, err) in enumerate(zip(self.eigenvalues, self.raw, self.error_estimates)):
            w.writerow([j, fmt(lam), fmt(mu), fmt(err), self.method])
        return buf.getvalue()

    def to_dict(self):
        return {
            "method": self.method,
            "m": self.m,
            "normalization": self.normalization,
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "raw": [float(v) for v in self.raw],
            "error_estimates": [float(v) for v in self.error_estimates],
            "mesh_sizes": list(self.mesh_sizes),
            "meta": self.meta,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        return cls(
            eigenvalues=np.asarray(d["eigenvalues"], dtype=float),
            raw=np.asarray(d["raw"], dtype=float),
            method=d["method"],
            m=int(d["m"]),
            normalization=float(d.get("normalization", NORMALIZATION)),
            error_estimates=np.asarray(d.get("error_estimates", np.zeros(len(d["raw"]))), dtype=float),
            mesh_sizes=tuple(d.get("mesh_sizes", ())),
            meta=d.get("meta", {}),
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def read_spectrum_csv(text, m=0):
    """Parse the output of :meth:`SpectrumResult.to_csv`."""
    rows = list(csv.DictReader(io.StringIO(text)))
    if not rows:
        raise ValueError("empty spectrum CSV")
    methods = {r["method"] for r in rows}
    if len(methods) != 1:
        raise ValueError(f"mixed method tags {sorted(methods)}")
    rows.sort(key=lambda r: int(r["j"]))
    return SpectrumResult(
        eigenvalues=np.array([float(r["lambda"]) for r in rows]),
        raw=np.array([float(r["mu_raw"]) for r in rows]),
        error_estimates=np.array([float(r["error_estimate"]) for r in rows]),
        method=methods.pop(),
        m=m,
    )
