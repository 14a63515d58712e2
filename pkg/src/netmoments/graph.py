"""Simple undirected graphs: storage, edge-list ingestion and basic manipulation."""

from __future__ import annotations

import hashlib
import io
import os
from typing import Iterable, Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

__all__ = [
    "Graph",
    "EdgeListError",
    "load_edge_list",
    "largest_connected_component",
    "induced_subgraph",
    "edge_density",
    "complete_graph",
    "empty_graph",
    "path_graph",
    "cycle_graph",
    "star_graph",
    "disjoint_union",
    "erdos_renyi",
]

# graphs at or below this size keep a dense boolean adjacency matrix
DENSE_LIMIT = 1 << 12


class EdgeListError(ValueError):
    """Raised for malformed edge-list input; carries the offending line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class Graph:
    """Immutable simple undirected graph on nodes ``0..n-1``.

    Adjacency is held as a CSR matrix with sorted neighbour lists. Small
    graphs additionally cache a dense boolean matrix for O(1) pair tests.

    Parameters
    ----------
    n : int
        Number of nodes.
    edges : array_like, shape (m, 2)
        Undirected edges. Duplicates (in either orientation) are merged.
        Self-loops raise ``ValueError``.
    labels : sequence, optional
        Original node identifiers, one per node, kept for reporting.
    """

    __slots__ = ("n", "m", "indptr", "indices", "degrees", "labels", "_dense", "_csr")

    def __init__(self, n: int, edges=(), labels=None):
        n = int(n)
        if n < 0:
            raise ValueError("node count must be nonnegative")
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= n):
            raise ValueError("edge endpoint out of range")
        if np.any(e[:, 0] == e[:, 1]):
            raise ValueError("self-loops are not allowed")
        lo = np.minimum(e[:, 0], e[:, 1])
        hi = np.maximum(e[:, 0], e[:, 1])
        key = np.unique(lo * max(n, 1) + hi)
        lo, hi = key // max(n, 1), key % max(n, 1)
        rows = np.concatenate([lo, hi])
        cols = np.concatenate([hi, lo])
        csr = sp.csr_matrix(
            (np.ones(rows.size, dtype=bool), (rows, cols)), shape=(n, n)
        )
        csr.sort_indices()
        self._init_from_csr(csr, labels)

    def _init_from_csr(self, csr, labels):
        self._csr = csr
        self.n = csr.shape[0]
        self.indptr = csr.indptr.astype(np.int64)
        self.indices = csr.indices.astype(np.int64)
        self.degrees = np.diff(self.indptr)
        self.m = int(self.degrees.sum()) // 2
        for arr in (self.indptr, self.indices, self.degrees):
            arr.flags.writeable = False
        if labels is None:
            self.labels = None
        else:
            labels = list(labels)
            if len(labels) != self.n:
                raise ValueError("labels must have one entry per node")
            self.labels = tuple(labels)
        self._dense = None

    @classmethod
    def from_dense(cls, adj, labels=None) -> "Graph":
        """Build from a symmetric boolean matrix with a zero diagonal."""
        a = np.asarray(adj, dtype=bool)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency must be square")
        if a.diagonal().any():
            raise ValueError("self-loops are not allowed")
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency must be symmetric")
        g = cls.__new__(cls)
        csr = sp.csr_matrix(a)
        csr.sort_indices()
        g._init_from_csr(csr, labels)
        if g.n <= DENSE_LIMIT:
            d = a.copy()
            d.flags.writeable = False
            g._dense = d
        return g

    @classmethod
    def _from_csr(cls, csr, labels=None) -> "Graph":
        g = cls.__new__(cls)
        csr = sp.csr_matrix(csr, dtype=bool)
        csr.eliminate_zeros()
        csr.sort_indices()
        g._init_from_csr(csr, labels)
        return g

    # -- queries ---------------------------------------------------------

    @property
    def csr(self) -> sp.csr_matrix:
        return self._csr

    def dense(self) -> np.ndarray:
        """Dense boolean adjacency (read-only); cached for small graphs."""
        if self._dense is not None:
            return self._dense
        d = self._csr.toarray()
        d.flags.writeable = False
        if self.n <= DENSE_LIMIT:
            self._dense = d
        return d

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def has_edge(self, i: int, j: int) -> bool:
        if self._dense is not None:
            return bool(self._dense[i, j])
        nb = self.neighbors(i)
        k = np.searchsorted(nb, j)
        return bool(k < nb.size and nb[k] == j)

    def edges(self) -> np.ndarray:
        """Edges as an (m, 2) array with ``i < j``, sorted lexicographically."""
        coo = sp.triu(self._csr, k=1).tocoo()
        e = np.column_stack([coo.row, coo.col]).astype(np.int64)
        order = np.lexsort((e[:, 1], e[:, 0]))
        return e[order]

    def to_edge_list(self) -> str:
        """Canonical serialization: sorted 0-indexed pairs, one per line."""
        return "".join(f"{i} {j}\n" for i, j in self.edges())

    def check(self) -> None:
        """Assert the structural invariants of a simple graph."""
        a = self._csr
        assert a.shape == (self.n, self.n)
        assert not a.diagonal().any(), "self-loop present"
        assert (a != a.T).nnz == 0, "adjacency not symmetric"
        assert np.array_equal(self.degrees, np.diff(a.indptr))
        assert 2 * self.m == int(self.degrees.sum())

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges(), other.edges())

    def __hash__(self):
        return hash((self.n, self.edges().tobytes()))

    def digest(self) -> str:
        """Stable hex digest of ``n`` and the sorted edge array."""
        h = hashlib.blake2b(digest_size=16)
        h.update(np.int64(self.n).tobytes())
        h.update(np.ascontiguousarray(self.edges(), dtype=np.int64).tobytes())
        return h.hexdigest()

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


# -- ingestion ------------------------------------------------------------


def _read_lines(source) -> Iterable[str]:
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(source.decode()).readlines()
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            return fh.read().decode().splitlines()
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode()
    return data.splitlines()


def load_edge_list(source, index_base: int = 0, allow_comments: bool = True,
                   drop_self_loops: bool = False) -> Graph:
    """Parse a whitespace-separated edge list into a :class:`Graph`.

    Node ids are shifted by ``index_base`` and then compacted to ``0..n-1``
    in increasing order; the shifted original ids are kept in
    ``Graph.labels``. Duplicate edges are merged. Self-loops raise
    :class:`EdgeListError` unless ``drop_self_loops`` is set.

    ``source`` may be a path, a bytes object or an open (text or binary)
    file.
    """
    pairs = []
    for lineno, raw in enumerate(_read_lines(source), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if allow_comments:
                continue
            raise EdgeListError("comment lines are disabled", lineno)
        tokens = line.split()
        if len(tokens) < 2:
            raise EdgeListError(f"expected two node ids, got {line!r}", lineno)
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise EdgeListError(f"non-integer node id in {line!r}", lineno) from None
        u -= index_base
        v -= index_base
        if u < 0 or v < 0:
            raise EdgeListError(f"node id below index base {index_base}", lineno)
        if u == v:
            if drop_self_loops:
                continue
            raise EdgeListError(f"self-loop on node {u + index_base}", lineno)
        pairs.append((u, v))
    if not pairs:
        return Graph(0, labels=())
    arr = np.asarray(pairs, dtype=np.int64)
    ids, inv = np.unique(arr, return_inverse=True)
    return Graph(ids.size, inv.reshape(-1, 2), labels=ids.tolist())


# -- manipulation ----------------------------------------------------------


def induced_subgraph(g: Graph, nodes) -> Graph:
    """Subgraph induced by ``nodes``, relabelled ``0..k-1`` in sorted order."""
    idx = np.asarray(nodes, dtype=np.int64).ravel()
    if idx.size and (idx.min() < 0 or idx.max() >= g.n):
        raise IndexError("node index out of range")
    idx = np.unique(idx)
    labels = None if g.labels is None else [g.labels[i] for i in idx]
    if g._dense is not None:
        sub = g._dense[np.ix_(idx, idx)]
        h = Graph.from_dense(sub, labels=labels)
        return h
    return Graph._from_csr(g.csr[idx][:, idx], labels=labels)


def largest_connected_component(g: Graph) -> Graph:
    """Induced subgraph on the largest connected component.

    Ties go to the component containing the smallest node index.
    """
    if g.n == 0:
        return g
    _, comp = connected_components(g.csr, directed=False)
    sizes = np.bincount(comp)
    best = np.flatnonzero(sizes == sizes.max())
    # components are numbered in order of their smallest node
    first = {c: np.flatnonzero(comp == c)[0] for c in best}
    winner = min(best, key=lambda c: first[c])
    return induced_subgraph(g, np.flatnonzero(comp == winner))


def edge_density(g: Graph) -> float:
    """Fraction of node pairs joined by an edge, ``2m / (n(n-1))``."""
    if g.n < 2:
        raise ValueError("edge density needs at least two nodes")
    return 2.0 * g.m / (g.n * (g.n - 1))


# -- constructors -----------------------------------------------------------


def complete_graph(n: int) -> Graph:
    a = ~np.eye(n, dtype=bool)
    return Graph.from_dense(a)


def empty_graph(n: int) -> Graph:
    return Graph(n)


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    """Centre node 0 joined to ``leaves`` leaf nodes."""
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def disjoint_union(*graphs: Graph) -> Graph:
    edges, offset = [], 0
    for h in graphs:
        edges.append(h.edges() + offset)
        offset += h.n
    e = np.concatenate(edges) if edges else np.empty((0, 2), np.int64)
    return Graph(offset, e)


def erdos_renyi(n: int, p: float, rng: Optional[np.random.Generator] = None) -> Graph:
    """G(n, p) via independent coin flips on the upper triangle."""
    rng = np.random.default_rng(rng)
    iu = np.triu_indices(n, k=1)
    keep = rng.random(iu[0].size) < p
    a = np.zeros((n, n), dtype=bool)
    a[iu[0][keep], iu[1][keep]] = True
    return Graph.from_dense(a | a.T)
