"""Acceptance suite: eight criteria, each printed as one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or directly with ``python3 tests/test_acceptance.py``.
"""
import os
import sys
import time

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from invspec.bessel import bessel_table, canonical_spectrum, zeros_l_mn  # noqa: E402
from invspec.profiles import (  # noqa: E402
    Mollifier,
    bump_profile,
    canonical_gamma_profile,
    canonical_hermitian_profile,
    canonical_potential,
    check_hypothesis,
    concave_conjugate,
    constant_hermitian_profile,
    fubini_study_potential,
    fubini_study_profile,
    gamma_can,
    gamma_from_potential,
    gamma_fs,
    legendre_fenchel,
    mixture_profile,
    potential_from_gamma,
    reflect,
    samples_profile,
    seeded_pairs,
)
from invspec.sturm import assemble, build_mesh, invariant_spectrum, solve_generalized, verify_bound  # noqa: E402
from oracles import LADDER_00, fcan_check  # noqa: E402
from pairs import ordered_pair  # noqa: E402

ONE = constant_hermitian_profile()


def criterion_1():
    x = np.linspace(0, 1, 1000)
    err_dual = np.max(np.abs(legendre_fenchel(canonical_potential(), x) - fcan_check(x)))
    xi = x[1:-1]
    err_gamma = np.max(np.abs(gamma_from_potential(fubini_study_potential(), xi) - gamma_fs(xi)))
    ok = err_dual <= 1e-10 and err_gamma <= 1e-8
    return ok, f"dual err {err_dual:.2e}, gamma err {err_gamma:.2e}", 1.0


def criterion_2():
    u = np.linspace(-10, 10, 201)
    inv = []
    for F in (fubini_study_potential(), canonical_potential()):
        back = concave_conjugate(lambda s, F=F: legendre_fenchel(F, s), u)
        inv.append(np.max(np.abs(back - F(u))))
    x = np.linspace(1e-3, 1 - 1e-3, 999)
    rt = []
    for g, ref in ((canonical_gamma_profile(), gamma_can), (fubini_study_profile(), gamma_fs)):
        F = potential_from_gamma(g)
        rt.append(np.max(np.abs(gamma_from_potential(F, x) / ref(x) - 1)))
    ok = max(inv) <= 1e-8 and max(rt) <= 1e-6
    return ok, f"involution err {max(inv):.2e}, round-trip rel err {max(rt):.2e}", 5.0


def criterion_3():
    rng = np.random.default_rng(2024)
    n = rng.integers(-10, 11, size=10_000)
    z = rng.uniform(1e-3, 30.0, size=10_000)
    table = bessel_table(11, z)
    cols = np.arange(z.size)

    def J(k):
        sign = np.where((k < 0) & (k % 2 == 1), -1.0, 1.0)
        return sign * table[np.abs(k), cols]

    rec = np.max(np.abs(J(n - 1) + J(n + 1) - 2 * n / z * J(n)))
    dj = 0.5 * (J(n - 1) - J(n + 1))
    der = np.max(np.abs(dj - (J(n - 1) - n / z * J(n))))
    lad = np.max(np.abs(zeros_l_mn(0, 0, 3).zeros - np.array(LADDER_00[:3])))
    ok = rec <= 1e-12 and der <= 1e-12 and lad <= 1e-11
    return ok, f"recurrence {rec:.2e}, derivative {der:.2e}, ladder {lad:.2e}", 2.0


def criterion_4():
    worst, sizes = 0.0, []
    for m in range(4):
        r = invariant_spectrum(canonical_gamma_profile(), canonical_hermitian_profile(m), 5, n_max=8192)
        b = canonical_spectrum(m, 5).eigenvalues
        worst = max(worst, float(np.max(np.abs(r.eigenvalues[1:] / b[1:] - 1))))
        sizes.append(r.mesh_sizes[-1])
    return worst <= 1e-3, f"max rel err {worst:.2e}, finest meshes {sizes}", 60.0


def criterion_5():
    r = invariant_spectrum(fubini_study_profile(), ONE, 4)
    j = np.arange(1, 5)
    err = float(np.max(np.abs(r.eigenvalues[1:] / (j * (j + 1)) - 1)))
    return err <= 1e-3, f"max rel err {err:.2e}", 10.0


def criterion_6():
    cases = [(0, fubini_study_profile(), ONE)] + seeded_pairs(6, 10, ms=(0, 1, 2))
    problems = []
    min_gap = np.inf
    for m, g, h in cases:
        if not check_hypothesis(g, h, m).operative_ok:
            problems.append(f"hypothesis fails for {g.kind}, m={m}")
            continue
        rep = verify_bound(invariant_spectrum(g, h, 5), m, 5)
        gaps = np.array([rec.gap for rec in rep.records])
        min_gap = min(min_gap, gaps.min())
        if not rep.all_ok or np.any(gaps <= 0):
            problems.append(f"{g.kind} m={m} gaps {gaps}")
    mix = []
    for eps in (0.5, 0.1, 0.01):
        rep = verify_bound(invariant_spectrum(mixture_profile(eps), ONE, 5), 0, 5)
        mix.append([rec.gap for rec in rep.records])
    mix = np.array(mix)
    if not (np.all(mix > 0) and np.all(np.diff(mix, axis=0) < 0)):
        problems.append(f"mixture gaps not decreasing: {mix[:, 0]}")
    detail = f"{len(cases)} pairs, smallest gap {min_gap:.3e}, mixture gap_1 {np.round(mix[:, 0], 5).tolist()}"
    return not problems, detail + ("; " + "; ".join(problems) if problems else ""), 120.0


def criterion_7():
    rng = np.random.default_rng(77)
    mesh = build_mesh(1024)
    worst = -np.inf
    for i in range(100):
        m = i % 3
        (g1, h1), (g2, h2) = ordered_pair(rng, m)
        mu1, _ = solve_generalized(assemble(g1, h1, mesh), 6, vectors=False)
        mu2, _ = solve_generalized(assemble(g2, h2, mesh), 6, vectors=False)
        worst = max(worst, float(np.max(mu1 - mu2)))
    return worst <= 1e-9, f"100 pairs, max(mu_1 - mu_2) = {worst:.3e}", 60.0


def criterion_8():
    xs = np.linspace(0.05, 0.95, 19)
    asym = bump_profile(2.0, Mollifier(0.1, 0.4, 0.12))
    profiles = [canonical_gamma_profile(), fubini_study_profile(), bump_profile(5.0), asym,
                reflect(asym), mixture_profile(0.3), samples_profile(xs, gamma_fs(xs) * (1 + 0.1 * xs))]
    gap_err = max(abs(potential_from_gamma(g).slope_gap - 1.0) for g in profiles)
    refl = 0.0
    for g in (asym, samples_profile(xs, gamma_fs(xs) * (1 + 0.1 * xs))):
        a = invariant_spectrum(g, ONE, 5).eigenvalues[1:]
        b = invariant_spectrum(reflect(g), ONE, 5).eigenvalues[1:]
        refl = max(refl, float(np.max(np.abs(a / b - 1))))
    ok = gap_err <= 1e-8 and refl <= 1e-8
    return ok, f"slope gap err {gap_err:.2e}, reflection rel diff {refl:.2e}", None


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4,
            criterion_5, criterion_6, criterion_7, criterion_8]


def evaluate(k):
    t0 = time.perf_counter()
    ok, detail, budget = CRITERIA[k - 1]()
    elapsed = time.perf_counter() - t0
    in_time = budget is None or elapsed < budget
    verdict = "PASS" if ok and in_time else "FAIL"
    limit = f" < {budget:g} s" if budget is not None else ""
    line = f"criterion {k}: {verdict}  {detail}; {elapsed:.2f} s{limit}"
    return ok and in_time, line


@pytest.mark.parametrize("k", range(1, 9))
def test_criterion(k):
    from conftest import ACCEPTANCE_LINES

    ok, line = evaluate(k)
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(k) for k in range(1, 9)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
