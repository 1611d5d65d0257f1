"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 validation failure, 3 numerical
non-convergence.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import bessel, sturm
from .errors import ConvergenceError, ProfileError
from .profiles import (
    Mollifier,
    between_hermitian_profile,
    bump_profile,
    canonical_gamma_profile,
    canonical_hermitian_profile,
    check_hypothesis,
    constant_hermitian_profile,
    fubini_study_hermitian_profile,
    fubini_study_profile,
    load_gamma,
    load_hermitian,
    mixture_profile,
    potential_from_gamma,
    profile_to_dict,
    random_admissible_pair,
    sample,
    validate_class_g,
    validate_hermitian,
)

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_NONCONVERGENCE = 0, 1, 2, 3

GAMMA_BUILTINS = ("fubini-study", "canonical", "bump", "mixture", "random")
H_BUILTINS = ("constant", "canonical", "fubini-study", "random")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


@dataclass
class RunConfig:
    subcommand: str
    gamma: str | None = None
    h: str | None = None
    m: int = 0
    n: int = 0
    count: int = 1
    invariant_only: bool = False
    target_tol: float = sturm.DEFAULT_TARGET_TOL
    n_max: int = sturm.DEFAULT_N_MAX
    bound_tol: float = 1e-6
    C: float = 4.0
    output: str | None = None
    fmt: str = "csv"
    seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.count < 1:
            raise UsageError("count must be >= 1")
        if self.m < 0:
            raise UsageError("m must be >= 0")
        if self.fmt not in ("csv", "json"):
            raise UsageError("format must be csv or json")


def _gamma_from_source(cfg):
    src = cfg.gamma
    p = cfg.params
    if src == "fubini-study":
        return fubini_study_profile()
    if src == "canonical":
        return canonical_gamma_profile()
    if src == "bump":
        bump = Mollifier(height=p["bump_height"], center=p["bump_center"], half_width=p["bump_half_width"])
        return bump_profile(A=p["A"], bump=bump)
    if src == "mixture":
        return mixture_profile(p["epsilon"])
    if src == "random":
        return _random_pair(cfg)[0]
    if src and (src.endswith(".json") or os.path.exists(src)):
        return load_gamma(src)
    raise UsageError(f"unknown gamma source {src!r}; use one of {', '.join(GAMMA_BUILTINS)} or a JSON path")


def _h_from_source(cfg, gamma):
    src = cfg.h
    if src == "constant":
        if cfg.m != 0:
            raise UsageError("--h constant needs --m 0")
        return constant_hermitian_profile(1.0)
    if src == "canonical":
        return canonical_hermitian_profile(cfg.m)
    if src == "fubini-study":
        return fubini_study_hermitian_profile(cfg.m)
    if src == "random":
        if cfg.gamma == "random":
            return _random_pair(cfg)[1]
        t = float(np.random.default_rng(cfg.seed).uniform())
        return between_hermitian_profile(cfg.m, gamma, t)
    if src and (src.endswith(".json") or os.path.exists(src)):
        h = load_hermitian(src)
        if h.m != cfg.m:
            raise UsageError(f"hermitian profile has m={h.m} but --m {cfg.m} was given")
        return h
    raise UsageError(f"unknown h source {src!r}; use one of {', '.join(H_BUILTINS)} or a JSON path")


def _random_pair(cfg):
    return random_admissible_pair(np.random.default_rng(cfg.seed), cfg.m)


def _json_profile(profile, m=0):
    try:
        return profile_to_dict(profile, m)
    except ProfileError:
        return profile_to_dict(sample(profile), m)


def _emit(cfg, text):
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_profile(cfg):
    gamma = _gamma_from_source(cfg)
    doc = {"profile": _json_profile(gamma, cfg.m)}
    ok = True
    if cfg.params.get("validate", False) or cfg.params.get("construct", False):
        report = validate_class_g(gamma, C=cfg.C)
        doc["class_g"] = report.to_dict()
        ok = report.passed
    if cfg.h:
        h = _h_from_source(cfg, gamma)
        doc["hermitian"] = _json_profile(h)
        if cfg.params.get("validate", False):
            hr = validate_hermitian(h)
            hyp = check_hypothesis(gamma, h, cfg.m)
            doc["hermitian_report"] = hr.to_dict()
            doc["hypothesis"] = hyp.to_dict()
            ok = ok and hr.passed
    if cfg.params.get("construct", False) and ok:
        F = potential_from_gamma(gamma, C=cfg.C)
        u = np.linspace(-5.0, 5.0, 21)
        doc["potential"] = {
            "slope_minus_inf": F.slope_minus_inf,
            "slope_plus_inf": F.slope_plus_inf,
            "slope_gap": F.slope_gap,
            "sup_value": F.upper_limit(),
            "minus_offset": F.lower_offset(),
            "samples": [[float(a), float(b)] for a, b in zip(u, F.value(u))],
        }
    _emit(cfg, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if ok else EXIT_INVALID


def _cmd_bessel_zeros(cfg):
    lad = bessel.zeros_l_mn(cfg.m, cfg.n, cfg.count)
    text = bessel.ladders_to_csv([lad]) if cfg.fmt == "csv" else bessel.ladders_to_json([lad]) + "\n"
    _emit(cfg, text)
    return EXIT_OK


def _spectrum_text(cfg, result):
    return result.to_csv() if cfg.fmt == "csv" else result.to_json() + "\n"


def _cmd_canonical(cfg):
    result = bessel.canonical_spectrum(cfg.m, cfg.count, invariant_only=cfg.invariant_only)
    _emit(cfg, _spectrum_text(cfg, result))
    return EXIT_OK


def _validated_pair(cfg):
    gamma = _gamma_from_source(cfg)
    h = _h_from_source(cfg, gamma)
    report = validate_class_g(gamma, C=cfg.C)
    if not report.passed:
        raise ProfileError(f"gamma is not in class G: worst ratio {report.worst_ratio:.4g} "
                           f"at x={report.worst_location:.4g}")
    hr = validate_hermitian(h)
    if not hr.passed:
        raise ProfileError("hermitian profile failed validation "
                           f"(positive={hr.positive}, limit={hr.limit_coeff:.4g})")
    return gamma, h


def _cmd_solve(cfg):
    gamma, h = _validated_pair(cfg)
    result = sturm.invariant_spectrum(gamma, h, cfg.count, target_tol=cfg.target_tol, n_max=cfg.n_max)
    _emit(cfg, _spectrum_text(cfg, result))
    return EXIT_OK


def _cmd_verify(cfg):
    gamma, h = _validated_pair(cfg)
    hyp = check_hypothesis(gamma, h, cfg.m)
    result = sturm.invariant_spectrum(gamma, h, cfg.count, target_tol=cfg.target_tol, n_max=cfg.n_max)
    report = sturm.verify_bound(result, cfg.m, cfg.count, tol=cfg.bound_tol)
    if cfg.fmt == "csv":
        text = report.to_csv()
    else:
        text = json.dumps({"hypothesis": hyp.to_dict(), "bounds": report.to_dict(),
                           "spectrum": result.to_dict()}, indent=2, sort_keys=True) + "\n"
    _emit(cfg, text)
    if not hyp.operative_ok:
        print(f"comparison hypothesis fails: lower margin {hyp.worst_margin_lower:.3g} at "
              f"x={hyp.argmin_lower:.4g}, upper margin {hyp.worst_margin_upper:.3g} at "
              f"x={hyp.argmin_upper:.4g}", file=sys.stderr)
        return EXIT_INVALID
    if not report.all_ok:
        print(f"bound violated for j in {report.violations}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def _add_profile_args(p, need_h):
    p.add_argument("--gamma", required=True, help="builtin name or JSON path")
    p.add_argument("--h", required=need_h, help="builtin hermitian profile or JSON path")
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--A", type=float, default=1.0, help="bump compression factor (>= 1)")
    p.add_argument("--bump-height", type=float, default=0.125)
    p.add_argument("--bump-center", type=float, default=0.5)
    p.add_argument("--bump-half-width", type=float, default=0.25)
    p.add_argument("--epsilon", type=float, default=0.5, help="mixture weight of gamma_FS")
    p.add_argument("--C", type=float, default=4.0, help="class-G endpoint constant")


def _add_output_args(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", help="write here instead of stdout")
    p.add_argument("--seed", type=int, default=0, help="seed for the 'random' sources")


def build_parser():
    parser = _Parser(prog="invspec", description="Invariant spectra of metrics on O(m) over the sphere.")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("profile", help="construct, validate or convert a profile")
    _add_profile_args(p, need_h=False)
    p.add_argument("--validate", action="store_true")
    p.add_argument("--construct", action="store_true", help="also build the Kahler potential")
    _add_output_args(p)

    p = sub.add_parser("bessel-zeros", help="first zeros of L_{m,n}")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("count", type=int)
    _add_output_args(p)

    p = sub.add_parser("canonical-spectrum", help="spectrum of the canonical pair")
    p.add_argument("m", type=int)
    p.add_argument("count", type=int)
    p.add_argument("--invariant-only", action="store_true")
    _add_output_args(p)

    for name, counter in (("solve", "--count"), ("verify", "--jmax")):
        p = sub.add_parser(name, help="finite-element spectrum" if name == "solve"
                           else "comparison hypothesis and eigenvalue bounds")
        _add_profile_args(p, need_h=True)
        p.add_argument(counter, dest="count", type=int, required=True)
        p.add_argument("--target-tol", type=float, default=sturm.DEFAULT_TARGET_TOL)
        p.add_argument("--n-max", type=int, default=sturm.DEFAULT_N_MAX)
        if name == "verify":
            p.add_argument("--bound-tol", type=float, default=1e-6)
        _add_output_args(p)
    return parser


def config_from_args(ns):
    params = {k: getattr(ns, k) for k in ("A", "bump_height", "bump_center", "bump_half_width",
                                          "epsilon", "validate", "construct") if hasattr(ns, k)}
    return RunConfig(
        subcommand=ns.subcommand,
        gamma=getattr(ns, "gamma", None),
        h=getattr(ns, "h", None),
        m=ns.m,
        n=getattr(ns, "n", 0),
        count=getattr(ns, "count", 1),
        invariant_only=getattr(ns, "invariant_only", False),
        target_tol=getattr(ns, "target_tol", sturm.DEFAULT_TARGET_TOL),
        n_max=getattr(ns, "n_max", sturm.DEFAULT_N_MAX),
        bound_tol=getattr(ns, "bound_tol", 1e-6),
        C=getattr(ns, "C", 4.0),
        output=ns.output,
        fmt=ns.format,
        seed=ns.seed,
        params=params,
    )


_COMMANDS = {
    "profile": _cmd_profile,
    "bessel-zeros": _cmd_bessel_zeros,
    "canonical-spectrum": _cmd_canonical,
    "solve": _cmd_solve,
    "verify": _cmd_verify,
}


def run(argv):
    try:
        ns = build_parser().parse_args(argv)
        cfg = config_from_args(ns)
        return _COMMANDS[cfg.subcommand](cfg)
    except UsageError as exc:
        print(f"invspec: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ProfileError as exc:
        print(f"invspec: validation failed: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ConvergenceError as exc:
        print(f"invspec: did not converge: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (ValueError, OSError) as exc:
        print(f"invspec: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None):
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
