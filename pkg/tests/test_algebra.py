import itertools
import math

import networkx as nx
import numpy as np
import pytest

from conftest import random_suite, template_nx
from netmoments.algebra import (build_merge_table, enumerate_subsample_moments,
                                exact_subsample_covariance, exact_subsample_expectation,
                                g1_covariance, g1_sum_variance, g1_values, hoeffding_g1,
                                verify_linearity)
from netmoments.graph import complete_graph, empty_graph, erdos_renyi, path_graph
from netmoments.motifs import CATALOG, automorphism_count

T = CATALOG
PAIRS = [(a, b) for a, b in itertools.combinations_with_replacement(T.values(), 2)
         if a.r + b.r <= 8]


def _summary(table):
    return sorted((e.q, e.s, e.sfrak, e.c) for e in table)


def test_triangle_triangle_table():
    t = build_merge_table(T["triangle"], T["triangle"])
    assert [(e.q, e.c) for e in t] == [(0, 2), (1, 2), (2, 2), (3, 1)]
    names = [e.name for e in t]
    assert names[2:] == ["diamond", "triangle"]
    assert automorphism_count(t.entries[1].s, t.entries[1].edges) == 8  # bowtie


def test_edge_edge_table():
    t = build_merge_table(T["edge"], T["edge"])
    assert [(e.q, e.c, e.name) for e in t] == [(0, 2, t.entries[0].name), (1, 2, "twostar"),
                                                (2, 1, "edge")]
    assert t.entries[0].s == 4 and t.entries[0].sfrak == 2


def test_edge_triangle_q2_entries_and_k5_identity():
    t = build_merge_table(T["edge"], T["triangle"])
    assert [e.name for e in t.by_q(2)] == ["triangle"]
    assert [e.name for e in t.by_q(1)] == ["paw"]
    assert verify_linearity(complete_graph(5), T["edge"], T["triangle"])


def test_cycle4_cycle4_table_by_enumeration():
    t = build_merge_table(T["cycle4"], T["cycle4"])
    q3 = sorted(e.c for e in t.by_q(3))
    q4 = sorted((e.name, e.c) for e in t.by_q(4))
    assert q3 == [2, 6]
    assert q4 == [("cycle4", 1), ("k4", 6)]
    for g in random_suite(10, 10, seed=31, n_min=8):
        assert verify_linearity(g, T["cycle4"], T["cycle4"])


@pytest.mark.parametrize("r,rp", PAIRS, ids=[f"{a.name}-{b.name}" for a, b in PAIRS])
def test_table_invariants(r, rp):
    t = build_merge_table(r, rp)
    assert t.self_check()
    for e in t:
        assert e.s == r.r + rp.r - e.q
        assert e.c >= 1
        assert e.sfrak == len(e.edges)
    for a, b in itertools.combinations(t.entries, 2):
        assert not nx.is_isomorphic(template_nx(a.s, a.edges), template_nx(b.s, b.edges))
    assert [(e.q, e.key) for e in t] == sorted((e.q, e.key) for e in t)


def test_size_bound():
    with pytest.raises(ValueError):
        build_merge_table(T["k4"], Motif5())


def Motif5():
    from netmoments.motifs import Motif
    return Motif.from_edges([(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])


def test_linearity_examples():
    rep = verify_linearity(complete_graph(5), T["triangle"], T["triangle"])
    assert rep and rep.lhs == rep.rhs == 100
    terms = {q: x for _, q, c, x in rep.terms}
    assert terms[1] == 15 and terms[2] == 30 and terms[0] == 0
    assert verify_linearity(empty_graph(6), T["k4"], T["cycle4"])
    g = erdos_renyi(10, 0.4, np.random.default_rng(0))
    assert verify_linearity(g, T["edge"], T["edge"])


def test_linearity_random_graphs():
    for g in random_suite(20, 12, seed=32):
        for r, rp in PAIRS:
            rep = verify_linearity(g, r, rp)
            assert rep, (g, r.name, rp.name, rep.lhs, rep.rhs)


def test_expectation_examples():
    assert exact_subsample_expectation(complete_graph(5), T["triangle"], 3) == 1.0
    assert exact_subsample_expectation(path_graph(4), T["twostar"], 3) == 0.5
    with pytest.raises(ValueError):
        exact_subsample_expectation(path_graph(4), T["triangle"], 2)


def test_covariance_examples():
    assert exact_subsample_covariance(complete_graph(6), T["edge"], T["edge"], 3) == pytest.approx(0.0, abs=1e-15)
    assert exact_subsample_covariance(path_graph(4), T["edge"], T["edge"], 3) == pytest.approx(1 / 36, abs=1e-15)
    assert exact_subsample_covariance(empty_graph(6), T["triangle"], T["triangle"], 4) == 0.0


def test_covariance_matches_enumeration():
    motifs = list(T.values())
    for g in random_suite(8, 8, seed=33, n_min=5):
        for b in range(2, g.n + 1):
            feasible = [m for m in motifs if m.r <= b]
            y = enumerate_subsample_moments(g, feasible, b)
            cov = np.cov(y, rowvar=False, bias=True).reshape(len(feasible), len(feasible))
            assert np.allclose(y.mean(axis=0), [exact_subsample_expectation(g, m, b) for m in feasible],
                               atol=1e-12, rtol=0)
            for i, j in itertools.combinations_with_replacement(range(len(feasible)), 2):
                r, rp = feasible[i], feasible[j]
                if r.r + rp.r <= 8:
                    assert exact_subsample_covariance(g, r, rp, b) == pytest.approx(cov[i, j], abs=1e-10)


def test_g1_examples():
    for m in (T["edge"], T["triangle"], T["twostar"]):
        assert hoeffding_g1(complete_graph(6), m, 2, 3) == 0.0
    assert hoeffding_g1(path_graph(4), T["edge"], 0, 2) == pytest.approx(-0.25, abs=1e-15)
    with pytest.raises(ValueError):
        hoeffding_g1(complete_graph(3), T["triangle"], 0, 3)
    assert g1_sum_variance(complete_graph(6), T["triangle"], T["triangle"], 4) == 0.0


def test_g1_mean_zero_and_closed_form():
    for g in random_suite(20, 9, seed=34, n_min=6):
        for r, rp in [(T["edge"], T["twostar"]), (T["triangle"], T["triangle"]),
                      (T["twostar"], T["paw"]), (T["edge"], T["edge"])]:
            for b in (2, 4):
                assert abs(g1_values(g, r, b).mean()) < 1e-12
                d = g1_covariance(g, r, rp, b, "direct")
                c = g1_covariance(g, r, rp, b, "closed_form")
                assert c == pytest.approx(d, abs=1e-10)


def test_g1_sum_variance_p4_matches_direct():
    g = path_graph(4)
    x = g1_values(g, T["edge"], 3)
    direct = 3 * (4 - 3) / 3 * np.var(x)
    assert g1_sum_variance(g, T["edge"], T["edge"], 3) == pytest.approx(direct, abs=1e-12)


def test_g1_sum_variance_by_ordered_enumeration():
    g = erdos_renyi(7, 0.5, np.random.default_rng(35))
    r, rp = T["edge"], T["twostar"]
    for b in range(1, 7):
        x, y = g1_values(g, r, max(b, 1)), g1_values(g, rp, max(b, 1))
        sx, sy = [], []
        for tup in itertools.permutations(range(g.n), b):
            sx.append(x[list(tup)].sum())
            sy.append(y[list(tup)].sum())
        sx, sy = np.array(sx), np.array(sy)
        enum = np.mean(sx * sy) - sx.mean() * sy.mean()
        assert g1_sum_variance(g, r, rp, b) == pytest.approx(enum, abs=1e-10)
