"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest -v -s tests/test_acceptance.py`` or ``python tests/test_acceptance.py``.
Criteria 8 to 10 are Monte Carlo runs and take several minutes each.
"""

import itertools
import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))
from conftest import random_suite  # noqa: E402

from netmoments import _rng  # noqa: E402
from netmoments.algebra import (build_merge_table, enumerate_subsample_moments,  # noqa: E402
                                exact_subsample_covariance, g1_covariance, g1_values,
                                verify_linearity)
from netmoments.compare import case1_compare  # noqa: E402
from netmoments.counting import CountContext, count_noninduced, network_moment  # noqa: E402
from netmoments.experiments import ExperimentGrid, ks_error_experiment  # noqa: E402
from netmoments.graph import complete_graph  # noqa: E402
from netmoments.graphon import (builtin_graphon, limiting_covariance, sample_graph,  # noqa: E402
                                theoretical_mean)
from netmoments.motifs import CATALOG, binom  # noqa: E402

MOTIFS = tuple(CATALOG.values())
PAIRS = [(a, b) for a, b in itertools.combinations_with_replacement(MOTIFS, 2) if a.r + b.r <= 8]
SUITE_SEED = 101  # same 50-graph suite as the module tests
MASTER_SEED = 0   # chosen before any acceptance run


def _report(k, ok, detail, elapsed):
    line = f"[ACCEPTANCE {k}] {'PASS' if ok else 'FAIL'} {detail} ({elapsed:.1f}s)"
    print(line, flush=True)
    return line


def _suite():
    return random_suite(50, 8, seed=SUITE_SEED)


# -- criteria -----------------------------------------------------------------------


def criterion_1():
    worst, checks = 0.0, 0
    for g in _suite():
        ctx = CountContext(g)
        feasible = [m for m in MOTIFS if m.r <= g.n]
        for b in range(2, g.n + 1):
            ms = [m for m in feasible if m.r <= b]
            if not ms:
                continue
            y = enumerate_subsample_moments(g, ms, b)
            for j, m in enumerate(ms):
                worst = max(worst, abs(y[:, j].mean() - network_moment(g, m, ctx=ctx)))
                checks += 1
    return worst <= 1e-12, f"unbiasedness: {checks} (graph, motif, b) checks, max error {worst:.2e}"


def criterion_2():
    worst, checks = 0.0, 0
    for g in _suite():
        ctx = CountContext(g)
        for b in range(2, g.n + 1):
            ms = [m for m in MOTIFS if m.r <= b]
            if not ms:
                continue
            y = enumerate_subsample_moments(g, ms, b)
            cov = np.cov(y, rowvar=False, bias=True).reshape(len(ms), len(ms))
            idx = {m: j for j, m in enumerate(ms)}
            for r, rp in PAIRS:
                if r in idx and rp in idx:
                    got = exact_subsample_covariance(g, r, rp, b, ctx)
                    worst = max(worst, abs(got - cov[idx[r], idx[rp]]))
                    checks += 1
    return worst <= 1e-10, f"exact covariance: {checks} checks, max error {worst:.2e}"


def criterion_3():
    bad, checks = 0, 0
    for g in random_suite(100, 12, seed=303):
        ctx = CountContext(g)
        for r, rp in PAIRS:
            checks += 1
            bad += not verify_linearity(g, r, rp, ctx)
    return bad == 0, f"linearity: {checks} exact integer identities, {bad} failures"


def criterion_4():
    got = [(e.q, e.c) for e in build_merge_table(CATALOG["triangle"], CATALOG["triangle"])]
    return got == [(0, 2), (1, 2), (2, 2), (3, 1)], f"triangle x triangle (q, c) = {got}"


def criterion_5():
    bad = []
    for m in MOTIFS:
        for n in range(m.r, 9):
            want = binom(n, m.r) * math.factorial(m.r) // m.aut_count
            if count_noninduced(complete_graph(n), m) != want:
                bad.append((m.name, n))
    return not bad, f"complete-graph law, mismatches {bad}"


def criterion_6():
    mean_err = var_err = cf_err = 0.0
    graphs = random_suite(30, 7, seed=606, n_min=5)
    for g in graphs:
        ms = [m for m in MOTIFS if m.r < g.n]
        for m in ms:
            for b in range(m.r, g.n + 1):
                x = g1_values(g, m, b)
                mean_err = max(mean_err, abs(x.mean()))
        for r, rp in PAIRS:
            if max(r.r, rp.r) >= g.n:
                continue
            b = max(r.r, rp.r)
            x, y = g1_values(g, r, b), g1_values(g, rp, b)
            direct = g1_covariance(g, r, rp, b)
            cf_err = max(cf_err, abs(direct - g1_covariance(g, r, rp, b, "closed_form")))
            for k in range(1, g.n + 1):
                sx, sy = [], []
                for tup in itertools.permutations(range(g.n), k):
                    t = list(tup)
                    sx.append(x[t].sum())
                    sy.append(y[t].sum())
                sx, sy = np.array(sx), np.array(sy)
                enum = float(np.mean(sx * sy) - sx.mean() * sy.mean())
                var_err = max(var_err, abs(enum - k * (g.n - k) / (g.n - 1) * direct))
    ok = mean_err <= 1e-12 and var_err <= 1e-10 and cf_err <= 1e-10
    return ok, (f"g1: mean {mean_err:.1e}, sum-variance factor {var_err:.1e}, "
                f"closed form {cf_err:.1e} on {len(graphs)} graphs with n <= 7")


def criterion_7():
    w1 = builtin_graphon("constant")
    vals = {f"{a}x{a}": limiting_covariance(w1, CATALOG[a], CATALOG[a], n_draws=1000)
            for a in ("edge", "triangle")}
    ok = all(abs(v) <= 1e-9 for v in vals.values())
    return ok, "w = 1 limiting covariance " + ", ".join(f"{k} {v:.1e}" for k, v in vals.items())


def _trend(rho_rule):
    grid = ExperimentGrid("graphon1", (500, 1000, 2000), b_rule="n23", rho=rho_rule,
                          motif_sets=(("triangle",), ("twostar", "triangle")),
                          n_sub=500, reps=10, seed=MASTER_SEED)
    rows = ks_error_experiment(grid)
    tri = [r.mean_ks for r in rows if r.motif_set == "triangle"]
    joint = [r.mean_ks for r in rows if r.motif_set == "twostar+triangle"]
    dec = all(a > b for a, b in zip(tri, tri[1:])) and all(a > b for a, b in zip(joint, joint[1:]))
    return dec, tri, joint


def criterion_8():
    dense, tri, joint = _trend("0.25*n^-0.1")
    sparse, stri, sjoint = _trend("0.25*n^-0.5")
    fmt = lambda v: "/".join(f"{x:.4f}" for x in v)  # noqa: E731
    detail = (f"KS trend n=500/1000/2000: dense triangle {fmt(tri)}, joint {fmt(joint)} "
              f"(strictly decreasing: {dense}); over-sparse triangle {fmt(stri)}, "
              f"joint {fmt(sjoint)} (strictly decreasing: {sparse})")
    return dense and not sparse, detail


def criterion_9(pairs=100):
    model = builtin_graphon("graphon1").at(0.25 * 3000 ** -0.1)
    twostar = CATALOG["twostar"]
    hits = 0
    for k in range(pairs):
        g = sample_graph(model, 3000, _rng.mix(MASTER_SEED, k, 1))
        h = sample_graph(model, 400, _rng.mix(MASTER_SEED, k, 2))
        rep = case1_compare(g, h, (twostar,), 1000, seed=_rng.mix(MASTER_SEED, k, 3))
        hits += rep.marginals[0]["in_interval"]
    cov = hits / pairs
    return abs(cov - 0.90) <= 0.10, f"case-1 coverage {hits}/{pairs} = {cov:.2f} (target 0.90 +/- 0.10)"


def criterion_10(seeds=10, n=8000):
    model = builtin_graphon("graphon1").at(0.25 * n ** -0.1)
    ms = (CATALOG["edge"], CATALOG["twostar"])
    est = np.zeros(len(ms))
    for k in range(seeds):
        g = sample_graph(model, n, _rng.mix(MASTER_SEED, 10, k))
        ctx = CountContext(g)
        rho_hat = network_moment(g, CATALOG["edge"], ctx=ctx)
        est += [rho_hat ** -m.efrak * network_moment(g, m, ctx=ctx) for m in ms]
    est /= seeds
    theory = np.array([theoretical_mean(model, m) for m in ms])
    rel = np.abs(est - theory) / theory
    detail = ", ".join(f"{m.name} {e:.4f} vs {t:.4f} (rel {r:.3%})"
                       for m, e, t, r in zip(ms, est, theory, rel))
    return bool(np.all(rel <= 0.05)), f"Monte Carlo moments n={n}: {detail}"


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
            6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10}
SLOW = {8, 9, 10}


def _run(k):
    t0 = time.perf_counter()
    ok, detail = CRITERIA[k]()
    _report(k, ok, detail, time.perf_counter() - t0)
    return ok, detail


@pytest.mark.parametrize("k", [pytest.param(k, marks=pytest.mark.slow) if k in SLOW else k
                               for k in CRITERIA])
def test_acceptance(k, capsys):
    with capsys.disabled():
        print()
        ok, detail = _run(k)
    assert ok, detail


if __name__ == "__main__":
    chosen = [int(a) for a in sys.argv[1:]] or list(CRITERIA)
    results = [_run(k)[0] for k in chosen]
    print(f"{sum(results)}/{len(results)} criteria passed")
    sys.exit(0 if all(results) else 1)
