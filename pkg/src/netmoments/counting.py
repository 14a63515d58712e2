"""Exact motif counting: injective homomorphisms, induced and non-induced counts.

Counts are returned as Python ints. The generic path counts injective
homomorphisms with a compiled backtracking search and divides by the
automorphism count; the fast path uses degree and common-neighbour
identities for the 4-node-or-smaller catalog motifs.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numba
import numpy as np
import scipy.sparse as sp

from .graph import Graph
from .motifs import (
    CATALOG,
    Motif,
    automorphism_count,
    binom,
    canonical_key,
    connected_graphs,
    is_connected,
    parse_key,
    spanning_copies,
)

__all__ = [
    "injection_count",
    "pattern_count",
    "count_noninduced",
    "count_induced",
    "fast_count",
    "network_moment",
    "naive_injection_count",
    "naive_induced_count",
    "FAST_MOTIFS",
    "CountContext",
    "DenseView",
]

FAST_MOTIFS = ("edge", "twostar", "triangle", "threestar", "path4", "cycle4",
               "paw", "diamond", "k4")
_INT64_SAFE = 2 ** 62


# -- compiled backtracking -------------------------------------------------


@numba.njit(cache=True)
def _is_adj(indptr, indices, u, v):
    lo = indptr[u]
    hi = indptr[u + 1]
    while lo < hi:
        mid = (lo + hi) >> 1
        x = indices[mid]
        if x == v:
            return True
        if x < v:
            lo = mid + 1
        else:
            hi = mid
    return False


@numba.njit(cache=True)
def _inj_kernel(k, parent, chk_ptr, chk_idx, pdeg, indptr, indices, deg, n):
    img = np.full(k, -1, np.int64)
    used = np.zeros(n, np.bool_)
    cur = np.zeros(k + 1, np.int64)
    total = 0
    level = 0
    while level >= 0:
        p = parent[level]
        if p < 0:
            lo = 0
            size = n
        else:
            lo = indptr[img[p]]
            size = indptr[img[p] + 1] - lo
        found = -1
        while cur[level] < size:
            if p < 0:
                c = cur[level]
            else:
                c = indices[lo + cur[level]]
            cur[level] += 1
            if used[c] or deg[c] < pdeg[level]:
                continue
            ok = True
            for t in range(chk_ptr[level], chk_ptr[level + 1]):
                if not _is_adj(indptr, indices, img[chk_idx[t]], c):
                    ok = False
                    break
            if not ok:
                continue
            if level == k - 1:
                total += 1
                continue
            found = c
            break
        if found >= 0:
            img[level] = found
            used[found] = True
            level += 1
            cur[level] = 0
        else:
            level -= 1
            if level >= 0:
                used[img[level]] = False
                img[level] = -1
    return total


def _plan(s, edges):
    """Search order: BFS within each component, high-degree roots first."""
    adj = [set() for _ in range(s)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    order, seen = [], set()
    for root in sorted(range(s), key=lambda v: -len(adj[v])):
        if root in seen:
            continue
        seen.add(root)
        queue = [root]
        while queue:
            v = queue.pop(0)
            order.append(v)
            for w in sorted(adj[v], key=lambda x: -len(adj[x])):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    pos = {v: i for i, v in enumerate(order)}
    parent, chk_ptr, chk_idx = [], [0], []
    for i, v in enumerate(order):
        earlier = sorted(pos[w] for w in adj[v] if pos[w] < i)
        if earlier:
            parent.append(earlier[0])
            chk_idx.extend(earlier[1:])
        else:
            parent.append(-1)
        chk_ptr.append(len(chk_idx))
    pdeg = [len(adj[v]) for v in order]
    as_arr = lambda x: np.asarray(x, dtype=np.int64)
    return as_arr(parent), as_arr(chk_ptr), as_arr(chk_idx), as_arr(pdeg)


def _falling(n, k):
    return math.perm(n, k) if 0 <= k <= n else 0


def _direct_inj(s, edges, g: Graph) -> int:
    if s > g.n:
        return 0
    if s == 0:
        return 1
    if _falling(g.n, s) >= _INT64_SAFE:
        raise OverflowError("injection count may exceed the exact 64-bit kernel range")
    parent, chk_ptr, chk_idx, pdeg = _plan(s, edges)
    return int(_inj_kernel(s, parent, chk_ptr, chk_idx, pdeg,
                           g.indptr, g.indices, g.degrees, g.n))


def _components(s, edges):
    adj = {i: set() for i in range(s)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    comps, seen = [], set()
    for v in range(s):
        if v in seen:
            continue
        comp, stack = [], [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(sorted(comp))
    return comps


def _relabel(nodes, edges):
    idx = {v: i for i, v in enumerate(nodes)}
    return len(nodes), [(idx[u], idx[v]) for u, v in edges if u in idx and v in idx]


@lru_cache(maxsize=None)
def _split_plan(key):
    """Expansion of a disconnected pattern into a product minus overlaps.

    ``inj(A + B) = inj(A) inj(B) - sum over nonempty partial identifications
    of inj(merged graph)``. Returns ``(key_A, key_B, {merged_key: multiplicity})``.
    """
    s, edges = parse_key(key)
    comps = _components(s, edges)
    first = comps[0]
    rest = [v for c in comps[1:] for v in c]
    a_s, a_e = _relabel(first, edges)
    b_s, b_e = _relabel(rest, edges)
    overlaps = {}
    for q in range(1, min(a_s, b_s) + 1):
        for bsub in itertools.combinations(range(b_s), q):
            for asub in itertools.permutations(range(a_s), q):
                ident = dict(zip(bsub, asub))
                nxt = a_s
                mapping = {}
                for v in range(b_s):
                    if v in ident:
                        mapping[v] = ident[v]
                    else:
                        mapping[v] = nxt
                        nxt += 1
                merged = set(tuple(sorted(e)) for e in a_e)
                merged |= {tuple(sorted((mapping[u], mapping[v]))) for u, v in b_e}
                mk = canonical_key(nxt, merged)
                overlaps[mk] = overlaps.get(mk, 0) + 1
    return canonical_key(a_s, a_e), canonical_key(b_s, b_e), overlaps


def _inj_by_key(key, g, memo, method):
    if key in memo:
        return memo[key]
    s, edges = parse_key(key)
    if s > g.n:
        val = 0
    elif method == "direct" or is_connected(s, edges):
        val = _direct_inj(s, edges, g)
    else:
        ka, kb, overlaps = _split_plan(key)
        val = _inj_by_key(ka, g, memo, method) * _inj_by_key(kb, g, memo, method)
        for mk, mult in overlaps.items():
            val -= mult * _inj_by_key(mk, g, memo, method)
    memo[key] = val
    return val


def injection_count(s, edges, g: Graph, method: str = "merge", memo=None) -> int:
    """Number of injective homomorphisms of the pattern ``(s, edges)`` into ``g``.

    Connected patterns are enumerated directly. Disconnected patterns use
    ``method="merge"`` (product of component counts minus overlap
    corrections) or ``method="direct"`` (plain enumeration). Patterns may
    not contain isolated nodes beyond 8 nodes total.
    """
    if method not in ("merge", "direct"):
        raise ValueError("method must be 'merge' or 'direct'")
    memo = {} if memo is None else memo
    return _inj_by_key(canonical_key(s, edges), g, memo, method)


def pattern_count(s, edges, g: Graph, memo=None, method: str = "merge") -> int:
    """Non-induced copies of an arbitrary small pattern (connected or not)."""
    inj = injection_count(s, edges, g, method=method, memo=memo)
    aut = automorphism_count(s, edges)
    q, rem = divmod(inj, aut)
    assert rem == 0, "injection count not divisible by |Aut|"
    return q


def count_noninduced(g: Graph, motif: Motif) -> int:
    """Number of (not necessarily induced) subgraphs of ``g`` isomorphic to ``motif``."""
    if motif.r > g.n:
        return 0
    return pattern_count(motif.r, motif.edges, g)


# -- induced counts via the non-induced/induced linear relation ----------------


@lru_cache(maxsize=None)
def _induced_system(r):
    """Unit upper-triangular matrix a[R, H] and its exact integer inverse."""
    graphs = connected_graphs(r)
    k = len(graphs)
    a = [[0] * k for _ in range(k)]
    for i, re_ in enumerate(graphs):
        aut = automorphism_count(r, re_)
        for j, he in enumerate(graphs):
            if len(he) >= len(re_):
                a[i][j] = spanning_copies(re_, r, he, aut)
    # back substitution on the unit triangular system, exact in integers
    inv = [[0] * k for _ in range(k)]
    for col in range(k):
        for i in range(k - 1, -1, -1):
            acc = 1 if i == col else 0
            for j in range(i + 1, k):
                acc -= a[i][j] * inv[j][col]
            inv[i][col] = acc
    keys = [canonical_key(r, e) for e in graphs]
    return keys, a, inv


def count_induced(g: Graph, motif: Motif, ctx=None) -> int:
    """Number of ``r``-node subsets of ``g`` whose induced subgraph is ``motif``."""
    if motif.r > g.n:
        return 0
    keys, _, inv = _induced_system(motif.r)
    row = inv[keys.index(motif.canonical_key)]
    ctx = CountContext(g) if ctx is None else ctx
    total = 0
    for coef, key in zip(row, keys):
        if coef:
            total += coef * ctx.count_key(key)
    return total


def network_moment(g: Graph, motif: Motif, mode: str = "noninduced", ctx=None) -> float:
    """Count normalised by ``C(n, r)``: a density in ``[0, 1]``."""
    if g.n < motif.r:
        raise ValueError(f"graph has {g.n} nodes, motif needs {motif.r}")
    ctx = CountContext(g) if ctx is None else ctx
    if mode == "noninduced":
        x = ctx.count(motif)
    elif mode == "induced":
        x = count_induced(g, motif, ctx)
    else:
        raise ValueError("mode must be 'noninduced' or 'induced'")
    return x / binom(g.n, motif.r)


# -- closed-form fast path ----------------------------------------------------


def _exact_sum(arr) -> int:
    arr = np.asarray(arr)
    if arr.size == 0:
        return 0
    if arr.dtype.kind == "f":
        arr = np.rint(arr).astype(np.int64)
    peak = int(np.abs(arr).max())
    if peak * arr.size < _INT64_SAFE:
        return int(arr.sum(dtype=np.int64))
    return sum(int(x) for x in arr.ravel())


def _comb2(x):
    x = x.astype(np.int64)
    return x * (x - 1) // 2


def _comb3(x):
    x = x.astype(np.int64)
    return x * (x - 1) * (x - 2) // 6


_FAST_KEYS = {CATALOG[name].canonical_key: name for name in FAST_MOTIFS}


class DenseView:
    """Read-only dense adjacency exposing the parts of :class:`Graph` the
    closed forms need, without building sparse structures."""

    def __init__(self, adj):
        self.a = np.asarray(adj, dtype=bool)
        self.n = self.a.shape[0]
        self.degrees = self.a.sum(axis=1).astype(np.int64)
        self.m = int(self.degrees.sum()) // 2
        self._edges = None
        self._graph = None

    def dense(self):
        return self.a

    def edges(self):
        if self._edges is None:
            i, j = np.nonzero(np.triu(self.a, 1))
            self._edges = np.column_stack([i, j]).astype(np.int64)
        return self._edges

    def neighbors(self, u):
        return np.flatnonzero(self.a[u])

    def as_graph(self) -> Graph:
        if self._graph is None:
            self._graph = Graph.from_dense(self.a)
        return self._graph


class CountContext:
    """Per-graph cache of the matrix quantities shared by the closed forms.

    Accepts a :class:`Graph` or a :class:`DenseView`.
    """

    def __init__(self, g):
        self.g = g
        self._cache = {}
        self._memo = {}
        if isinstance(g, DenseView):
            self.dense = True
        else:
            # dense products pay off for small or dense graphs
            self.dense = g.n <= 512 or (g.n <= 2048 and 2 * g.m > 0.3 * g.n * g.n)

    def _get(self, name, fn):
        if name not in self._cache:
            self._cache[name] = fn()
        return self._cache[name]

    def deg(self):
        return self.g.degrees.astype(np.int64)

    def common(self):
        """Common-neighbour counts ``(A @ A)`` (dense array or sparse matrix)."""
        def build():
            if self.dense:
                a = self.g.dense().astype(np.float32)
                return np.rint(a @ a).astype(np.int64)
            a = self.g.csr.astype(np.int64)
            return (a @ a).tocsr()
        return self._get("common", build)

    def node_triangles(self):
        def build():
            c = self.common()
            if self.dense:
                return (c * self.g.dense()).sum(axis=1) // 2
            a = self.g.csr.astype(np.int64)
            return np.asarray(c.multiply(a).sum(axis=1)).ravel() // 2
        return self._get("tri", build)

    def edge_common(self):
        """Common-neighbour count for each edge ``i < j``."""
        def build():
            e = self.g.edges()
            c = self.common()
            if self.dense:
                return c[e[:, 0], e[:, 1]]
            return np.asarray(c[e[:, 0], e[:, 1]]).ravel().astype(np.int64)
        return self._get("ecommon", build)

    def fast(self, name) -> int:
        g = self.g
        d = self.deg()
        if name == "edge":
            return g.m
        if name == "twostar":
            return _exact_sum(_comb2(d))
        if name == "threestar":
            return _exact_sum(_comb3(d))
        if name == "triangle":
            return _exact_sum(self.node_triangles()) // 3
        if name == "path4":
            e = g.edges()
            return _exact_sum((d[e[:, 0]] - 1) * (d[e[:, 1]] - 1)) - 3 * self.fast("triangle")
        if name == "cycle4":
            c = self.common()
            if self.dense:
                iu = np.triu_indices(g.n, k=1)
                vals = c[iu]
            else:
                vals = sp.triu(c, k=1).data
            return _exact_sum(_comb2(vals)) // 2
        if name == "paw":
            return _exact_sum(self.node_triangles() * (d - 2))
        if name == "diamond":
            return _exact_sum(_comb2(self.edge_common()))
        if name == "k4":
            return self._k4()
        raise KeyError(name)

    def _k4(self):
        g = self.g
        total = 0
        for u in range(g.n):
            nb = g.neighbors(u)
            nb = nb[nb > u]
            if nb.size < 3:
                continue
            if self.dense:
                sub = g.dense()[np.ix_(nb, nb)].astype(np.float32)
            else:
                sub = g.csr[nb][:, nb].toarray().astype(np.float32)
            total += int(np.rint(((sub @ sub) * sub).sum())) // 6
        return total

    def count_key(self, key) -> int:
        """Non-induced count of the pattern with canonical ``key``."""
        if key in _FAST_KEYS:
            return self._get(("fast", key), lambda: self.fast(_FAST_KEYS[key]))
        s, edges = parse_key(key)
        g = self.g.as_graph() if isinstance(self.g, DenseView) else self.g
        return self._get(("gen", key), lambda: pattern_count(s, edges, g, memo=self._memo))

    def count(self, motif: Motif) -> int:
        return self.count_key(motif.canonical_key)


def fast_count(g: Graph, motif: Motif) -> int:
    """Non-induced count via closed forms; generic enumeration for other motifs."""
    ctx = CountContext(g)
    name = _FAST_KEYS.get(motif.canonical_key)
    if name is None:
        return count_noninduced(g, motif)
    return ctx.fast(name)


# -- naive oracles (tests and cross-checks only) ---------------------------------


def naive_injection_count(s, edges, g: Graph) -> int:
    """Enumerate every injective map; exponential, for tiny graphs only."""
    a = g.dense()
    count = 0
    for img in itertools.permutations(range(g.n), s):
        if all(a[img[u], img[v]] for u, v in edges):
            count += 1
    return count


def naive_induced_count(g: Graph, motif: Motif) -> int:
    """Enumerate node subsets and compare canonical keys of induced subgraphs."""
    a = g.dense()
    count = 0
    for sub in itertools.combinations(range(g.n), motif.r):
        edges = [(i, j) for i, j in itertools.combinations(range(motif.r), 2)
                 if a[sub[i], sub[j]]]
        if len(edges) == motif.efrak and canonical_key(motif.r, edges) == motif.canonical_key:
            count += 1
    return count
