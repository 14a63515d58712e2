"""Small template graphs: canonical labels, automorphism counts, the motif catalog.

Small graphs (at most 8 nodes) are passed around as ``(s, edges)`` pairs,
where ``edges`` is an iterable of 2-tuples over ``0..s-1``.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "Motif",
    "CATALOG",
    "MOTIF_NAMES",
    "get_motif",
    "parse_motif",
    "parse_motif_list",
    "binom",
    "canonical_form",
    "canonical_key",
    "automorphism_count",
    "is_connected",
    "connected_graphs",
    "spanning_copies",
]

MAX_SMALL = 8


def _norm_edges(edges):
    out = set()
    for u, v in edges:
        u, v = int(u), int(v)
        if u == v:
            raise ValueError("self-loop in template graph")
        out.add((u, v) if u < v else (v, u))
    return frozenset(out)


def is_connected(s, edges) -> bool:
    if s == 0:
        return True
    adj = {i: set() for i in range(s)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    seen, stack = {0}, [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == s


def _refined_cells(s, edges):
    """Colour refinement; returns vertex cells in an isomorphism-invariant order."""
    adj = [[] for _ in range(s)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    colour = [0] * s
    while True:
        sig = [(colour[v], tuple(sorted(colour[w] for w in adj[v]))) for v in range(s)]
        ranks = {x: i for i, x in enumerate(sorted(set(sig)))}
        new = [ranks[x] for x in sig]
        if len(set(new)) == len(set(colour)):
            colour = new
            break
        colour = new
    cells = {}
    for v in range(s):
        cells.setdefault(colour[v], []).append(v)
    return [cells[c] for c in sorted(cells)]


def _labelings(s, edges):
    """All vertex orders compatible with the refined cells, as an array.

    Row ``k`` lists the vertex placed at each position.
    """
    cells = _refined_cells(s, edges)
    blocks = [list(itertools.permutations(c)) for c in cells]
    rows = [sum(combo, ()) for combo in itertools.product(*blocks)]
    return np.asarray(rows, dtype=np.int64).reshape(len(rows), s)


def _keys(s, edges, perms):
    a = np.zeros((s, s), dtype=bool)
    for u, v in edges:
        a[u, v] = a[v, u] = True
    iu = np.triu_indices(s, k=1)
    # permuted[k, i, j] = a[perm_k[i], perm_k[j]]
    bits = a[perms[:, iu[0]], perms[:, iu[1]]]
    weights = (1 << np.arange(bits.shape[1] - 1, -1, -1, dtype=np.int64))
    return bits.astype(np.int64) @ weights


@lru_cache(maxsize=None)
def _canon(s, edges):
    if s == 0:
        return 0, (), 1
    perms = _labelings(s, edges)
    keys = _keys(s, edges, perms)
    best = keys.max()
    hits = np.flatnonzero(keys == best)
    p = perms[hits[0]]
    pos = np.empty(s, dtype=np.int64)
    pos[p] = np.arange(s)
    cedges = tuple(sorted(tuple(sorted((int(pos[u]), int(pos[v])))) for u, v in edges))
    return int(best), cedges, int(hits.size)


def canonical_form(s, edges):
    """Canonically relabelled edge tuple; equal for isomorphic inputs."""
    if s > MAX_SMALL:
        raise ValueError(f"canonical labelling supports at most {MAX_SMALL} nodes")
    return _canon(int(s), _norm_edges(edges))[1]


def canonical_key(s, edges) -> str:
    """String key ``"s:i-j,..."`` identifying the isomorphism class."""
    ce = canonical_form(s, edges)
    return f"{int(s)}:" + ",".join(f"{u}-{v}" for u, v in ce)


def automorphism_count(s, edges) -> int:
    """Number of node permutations preserving adjacency.

    Automorphisms preserve the refined colour classes, so only
    colour-preserving permutations are checked; they are checked exhaustively.
    """
    if s > MAX_SMALL:
        raise ValueError(f"automorphism counting supports at most {MAX_SMALL} nodes")
    return _canon(int(s), _norm_edges(edges))[2]


def parse_key(key: str):
    s, _, body = key.partition(":")
    edges = [tuple(map(int, e.split("-"))) for e in body.split(",") if e]
    return int(s), tuple(edges)


def spanning_copies(r_edges, h_s, h_edges, r_aut=None) -> int:
    """Number of spanning subgraphs of H isomorphic to R (same node count)."""
    r_edges = list(r_edges)
    hset = _norm_edges(h_edges)
    count = 0
    for p in itertools.permutations(range(h_s)):
        if all(((p[u], p[v]) if p[u] < p[v] else (p[v], p[u])) in hset for u, v in r_edges):
            count += 1
    if r_aut is None:
        r_aut = automorphism_count(h_s, r_edges)
    assert count % r_aut == 0
    return count // r_aut


@lru_cache(maxsize=None)
def connected_graphs(s: int):
    """Canonical edge tuples of all connected graphs on ``s`` nodes, by edge count."""
    pairs = list(itertools.combinations(range(s), 2))
    found = {}
    for mask in range(1 << len(pairs)):
        edges = [pairs[k] for k in range(len(pairs)) if mask >> k & 1]
        if len(edges) < s - 1 or not is_connected(s, edges):
            continue
        ce = canonical_form(s, edges)
        found.setdefault(ce, None)
    return tuple(sorted(found, key=lambda e: (len(e), e)))


@dataclass(frozen=True)
class Motif:
    """Connected template graph with cached invariants.

    ``r`` is the node count, ``efrak`` the edge count and ``aut_count`` the
    size of the automorphism group.
    """

    edges: tuple
    r: int
    name: str = ""
    efrak: int = field(init=False)
    aut_count: int = field(init=False)
    canonical_key: str = field(init=False)

    def __post_init__(self):
        edges = tuple(sorted(_norm_edges(self.edges)))
        if self.r < 2 or self.r > 5:
            raise ValueError("motifs must have between 2 and 5 nodes")
        if any(v >= self.r for e in edges for v in e):
            raise ValueError("edge endpoint out of range")
        if not is_connected(self.r, edges):
            raise ValueError("motifs must be connected")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "efrak", len(edges))
        object.__setattr__(self, "aut_count", automorphism_count(self.r, edges))
        object.__setattr__(self, "canonical_key", canonical_key(self.r, edges))
        if not self.name:
            object.__setattr__(self, "name", self.canonical_key)

    @classmethod
    def from_edges(cls, edges, name: str = "") -> "Motif":
        edges = list(edges)
        r = 1 + max(max(e) for e in edges)
        return cls(tuple(edges), r, name)

    def __eq__(self, other):
        if not isinstance(other, Motif):
            return NotImplemented
        return self.canonical_key == other.canonical_key

    def __hash__(self):
        return hash(self.canonical_key)

    def __str__(self):
        return self.name


_CATALOG_EDGES = {
    "edge": [(0, 1)],
    "twostar": [(0, 1), (0, 2)],
    "triangle": [(0, 1), (1, 2), (0, 2)],
    "path4": [(0, 1), (1, 2), (2, 3)],
    "threestar": [(0, 1), (0, 2), (0, 3)],
    "cycle4": [(0, 1), (1, 2), (2, 3), (0, 3)],
    "paw": [(0, 1), (1, 2), (0, 2), (2, 3)],
    "diamond": [(0, 1), (1, 2), (0, 2), (1, 3), (2, 3)],
    "k4": [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
}

CATALOG = {name: Motif.from_edges(e, name) for name, e in _CATALOG_EDGES.items()}
MOTIF_NAMES = tuple(CATALOG)
_BY_KEY = {m.canonical_key: m for m in CATALOG.values()}
_ALIASES = {"2-star": "twostar", "3-star": "threestar", "path-4": "path4",
            "4-cycle": "cycle4", "c4": "cycle4", "p4": "path4"}


def get_motif(name: str) -> Motif:
    name = _ALIASES.get(name.lower(), name.lower())
    try:
        return CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown motif {name!r}; known: {', '.join(MOTIF_NAMES)}") from None


_INLINE = re.compile(r"^\s*\d+\s*-\s*\d+(\s*,\s*\d+\s*-\s*\d+)*\s*$")


def parse_motif(text: str) -> Motif:
    """Catalog name (``triangle``) or inline edge list (``0-1,1-2,0-2``)."""
    if _INLINE.match(text):
        edges = [tuple(int(x) for x in part.split("-")) for part in text.split(",")]
        m = Motif.from_edges(edges)
        return _BY_KEY.get(m.canonical_key, m)
    return get_motif(text.strip())


def parse_motif_list(text: str) -> tuple:
    """Comma-separated motifs; inline templates go in brackets, e.g. ``edge,[0-1,1-2]``."""
    parts = [p.strip() for p in re.findall(r"\[[^\]]*\]|[^,\[\]]+", text) if p.strip()]
    if not parts:
        raise ValueError("empty motif list")
    return tuple(parse_motif(p[1:-1] if p.startswith("[") else p) for p in parts)


def catalog_name(key: str):
    m = _BY_KEY.get(key)
    return m.name if m else None


def binom(n: int, k: int) -> int:
    """Binomial coefficient that is zero outside ``0 <= k <= n``."""
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)
