"""Algebra of motif pairs and exact finite-sample moments under node subsampling.

A merge table for motifs ``R`` and ``R'`` lists every graph ``S`` that is
the union of one copy of each, together with ``c_S``, the number of ordered
pairs of copies inside ``S`` that cover it. With these, the product of two
counts is a linear combination of counts,

    X_R(G) X_R'(G) = sum_S c_S X_S(G),

which in turn gives closed forms for the mean and covariance of subsample
moments and of the linear Hoeffding term.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .counting import CountContext, network_moment, pattern_count
from .graph import Graph, complete_graph, induced_subgraph
from .motifs import Motif, automorphism_count, binom, canonical_form, canonical_key, catalog_name

__all__ = [
    "MergeEntry",
    "MergeTable",
    "build_merge_table",
    "verify_linearity",
    "LinearityReport",
    "exact_subsample_expectation",
    "exact_subsample_covariance",
    "hoeffding_g1",
    "g1_values",
    "g1_covariance",
    "g1_sum_variance",
    "enumerate_subsample_moments",
]


@dataclass(frozen=True)
class MergeEntry:
    """One merged graph ``S``: ``q`` shared nodes, ``s`` nodes, multiplicity ``c``."""

    key: str
    edges: tuple
    q: int
    s: int
    sfrak: int
    c: int

    @property
    def aut_count(self) -> int:
        return automorphism_count(self.s, self.edges)

    @property
    def name(self):
        return catalog_name(self.key) or self.key


@dataclass(frozen=True)
class MergeTable:
    r: Motif
    rp: Motif
    entries: tuple

    def by_q(self, q):
        return [e for e in self.entries if e.q == q]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def self_check(self) -> bool:
        """Linearity on ``K_{r+r'}``, where every count has a closed form."""
        k = self.r.r + self.rp.r
        def on_complete(s, aut):
            return binom(k, s) * math.factorial(s) // aut
        lhs = on_complete(self.r.r, self.r.aut_count) * on_complete(self.rp.r, self.rp.aut_count)
        rhs = sum(e.c * on_complete(e.s, e.aut_count) for e in self.entries)
        return lhs == rhs


def _copies(pattern_edges, p_nodes, host_s, host_edges):
    """Distinct subgraphs of the host isomorphic to the pattern, as (nodes, edges)."""
    hset = frozenset(host_edges)
    found = set()
    for img in itertools.permutations(range(host_s), p_nodes):
        mapped = []
        for u, v in pattern_edges:
            a, b = img[u], img[v]
            e = (a, b) if a < b else (b, a)
            if e not in hset:
                break
            mapped.append(e)
        else:
            found.add((frozenset(img), frozenset(mapped)))
    return found


def _cover_count(r: Motif, rp: Motif, s, edges) -> int:
    """``c_S``: ordered pairs (R1, R2) of copies whose union is all of S."""
    edges = frozenset(edges)
    all_nodes = frozenset(range(s))
    c1 = _copies(r.edges, r.r, s, edges)
    c2 = c1 if r == rp else _copies(rp.edges, rp.r, s, edges)
    total = 0
    for n1, e1 in c1:
        for n2, e2 in c2:
            if n1 | n2 == all_nodes and e1 | e2 == edges:
                total += 1
    return total


@lru_cache(maxsize=None)
def _build(r: Motif, rp: Motif) -> MergeTable:
    found = {}
    for q in range(min(r.r, rp.r) + 1):
        for shared in itertools.combinations(range(rp.r), q):
            for targets in itertools.permutations(range(r.r), q):
                ident = dict(zip(shared, targets))
                nxt = r.r
                mapping = {}
                for v in range(rp.r):
                    if v in ident:
                        mapping[v] = ident[v]
                    else:
                        mapping[v] = nxt
                        nxt += 1
                edges = set(r.edges)
                edges |= {tuple(sorted((mapping[u], mapping[v]))) for u, v in rp.edges}
                key = canonical_key(nxt, edges)
                if key not in found:
                    found[key] = (q, nxt, canonical_form(nxt, edges))
    entries = []
    for key, (q, s, cedges) in found.items():
        c = _cover_count(r, rp, s, cedges)
        entries.append(MergeEntry(key, cedges, q, s, len(cedges), c))
    entries.sort(key=lambda e: (e.q, e.key))
    return MergeTable(r, rp, tuple(entries))


def build_merge_table(r: Motif, rp: Motif) -> MergeTable:
    """Enumerate every gluing of ``R`` and ``R'`` and compute ``c_S`` by definition.

    Entries are sorted by ``q`` then canonical key. Results are memoized.
    """
    if r.r + rp.r > 8:
        raise ValueError("merged graphs are limited to 8 nodes")
    return _build(r, rp)


@dataclass
class LinearityReport:
    ok: bool
    lhs: int
    rhs: int
    terms: list

    def __bool__(self):
        return self.ok


def verify_linearity(g: Graph, r: Motif, rp: Motif, ctx: CountContext = None) -> LinearityReport:
    """Check ``X_R X_R' = sum_S c_S X_S`` exactly on ``g``.

    The report is truthy on success and lists every term for diagnosis.
    """
    ctx = CountContext(g) if ctx is None else ctx
    table = build_merge_table(r, rp)
    lhs = ctx.count(r) * ctx.count(rp)
    terms = []
    for e in table:
        x = ctx.count_key(e.key) if e.s <= g.n else 0
        terms.append((e.name, e.q, e.c, x))
    rhs = sum(c * x for _, _, c, x in terms)
    return LinearityReport(lhs == rhs, lhs, rhs, terms)


# -- subsample moments ----------------------------------------------------------


def _check_b(g, b, *motifs):
    need = max(m.r for m in motifs)
    if not need <= b <= g.n:
        raise ValueError(f"subsample size b={b} must satisfy {need} <= b <= n={g.n}")


def exact_subsample_expectation(g: Graph, r: Motif, b: int) -> float:
    """Mean of the subsample moment over all ``b``-subsets; equals ``U_R(g)``."""
    _check_b(g, b, r)
    return network_moment(g, r)


def exact_subsample_covariance(g: Graph, r: Motif, rp: Motif, b: int,
                               ctx: CountContext = None) -> float:
    """Covariance of ``U_R`` and ``U_R'`` over a uniform ``b``-node induced subgraph.

    Uses the merge table: ``sum_S c_S C(b,s)/C(n,s) X_S / (C(b,r) C(b,r'))``
    minus the product of the host moments. ``C(b, s)`` vanishes for
    ``s > b``, so the formula also holds when ``b < r + r'``.
    """
    _check_b(g, b, r, rp)
    ctx = CountContext(g) if ctx is None else ctx
    n = g.n
    acc = 0.0
    for e in build_merge_table(r, rp):
        if e.s > b:
            continue
        x = ctx.count_key(e.key)
        if x:
            acc += e.c * x * (binom(b, e.s) / binom(n, e.s))
    second = acc / (binom(b, r.r) * binom(b, rp.r))
    ur = ctx.count(r) / binom(n, r.r)
    urp = ctx.count(rp) / binom(n, rp.r)
    return second - ur * urp


def enumerate_subsample_moments(g: Graph, motifs, b: int, mode: str = "noninduced"):
    """Moments of every ``b``-node induced subgraph (rows in lexicographic subset order)."""
    rows = []
    for sub in itertools.combinations(range(g.n), b):
        h = induced_subgraph(g, sub)
        ctx = CountContext(h)
        rows.append([network_moment(h, m, mode, ctx) for m in motifs])
    return np.asarray(rows, dtype=float)


# -- linear Hoeffding term ---------------------------------------------------------


def _check_g1(g, r):
    if g.n <= r.r:
        raise ValueError(f"need n > r (n={g.n}, r={r.r})")


def hoeffding_g1(g: Graph, r: Motif, v: int, b: int) -> float:
    """Linear Hoeffding kernel ``((n-1)/b) [U_R(G) - U_R(G minus v)]``."""
    _check_g1(g, r)
    if not 0 <= v < g.n:
        raise IndexError("node index out of range")
    rest = induced_subgraph(g, [u for u in range(g.n) if u != v])
    return (g.n - 1) / b * (network_moment(g, r) - network_moment(rest, r))


def g1_values(g: Graph, r: Motif, b: int) -> np.ndarray:
    """``hoeffding_g1`` evaluated at every node."""
    _check_g1(g, r)
    u_full = network_moment(g, r)
    out = np.empty(g.n)
    for v in range(g.n):
        rest = induced_subgraph(g, [u for u in range(g.n) if u != v])
        out[v] = (g.n - 1) / b * (u_full - network_moment(rest, r))
    return out


def g1_covariance(g: Graph, r: Motif, rp: Motif, b: int, method: str = "direct",
                  ctx: CountContext = None) -> float:
    """Covariance of ``g1_R`` and ``g1_R'`` at a uniformly chosen node.

    ``method="direct"`` averages over the node values; ``"closed_form"``
    uses the merge table: ``K K' sum_S c_S (n q - r r') / n^2 X_S`` with
    ``K = r! (n-r-1)! / (b (n-2)!)``.
    """
    _check_g1(g, r)
    _check_g1(g, rp)
    if method == "direct":
        x = g1_values(g, r, b)
        y = x if rp == r else g1_values(g, rp, b)
        return float(np.mean(x * y) - x.mean() * y.mean())
    if method != "closed_form":
        raise ValueError("method must be 'direct' or 'closed_form'")
    ctx = CountContext(g) if ctx is None else ctx
    n = g.n
    def k(m):
        return math.factorial(m.r) * math.factorial(n - m.r - 1) / (b * math.factorial(n - 2))
    acc = 0
    for e in build_merge_table(r, rp):
        if e.s <= n:
            acc += e.c * (n * e.q - r.r * rp.r) * ctx.count_key(e.key)
    return k(r) * k(rp) * acc / n ** 2


def g1_sum_variance(g: Graph, r: Motif, rp: Motif, b: int, method: str = "direct") -> float:
    """Covariance of the sums of ``g1`` over a without-replacement sample of ``b`` nodes.

    Equals ``b (n - b) / (n - 1)`` times the single-node covariance.
    """
    if not 1 <= b <= g.n:
        raise ValueError("b must lie in 1..n")
    return b * (g.n - b) / (g.n - 1) * g1_covariance(g, r, rp, b, method)
