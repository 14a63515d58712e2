"""Sparse graphon models: sampling, population moments and limiting covariances."""

from __future__ import annotations

import hashlib
import math
import re
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.stats import qmc

from . import _rng
from .graph import DENSE_LIMIT, Graph
from .motifs import Motif

__all__ = [
    "GraphonModel",
    "PopulationMoment",
    "builtin_graphon",
    "sample_graph",
    "sample_latent",
    "sample_adjacency",
    "population_moment",
    "theoretical_mean",
    "limiting_covariance",
    "parse_schedule",
    "Schedule",
]


def _graphon1(u, v):
    return np.exp(-25.0 * (u - v) ** 2 / 2.0)


def _graphon2(u, v):
    return 0.5 * np.cos(0.1 * ((u - 0.5) ** 2 + (v - 0.5) ** 2) + 0.01) * np.maximum(u, v) ** (2.0 / 3.0) + 0.4


def _constant(u, v):
    return np.ones(np.broadcast(u, v).shape)


_BUILTIN = {"graphon1": _graphon1, "graphon2": _graphon2, "constant": _constant}


@lru_cache(maxsize=None)
def _normalise(name, reps=10, m=20, seed=20240601):
    """Integral of the raw kernel over the unit square by scrambled Sobol points.

    Returns ``(mean, standard_error)`` across ``reps`` independent scramblings
    of ``2**m`` points each.
    """
    fn = _BUILTIN[name]
    if name == "constant":
        return 1.0, 0.0
    est = []
    for k in range(reps):
        pts = qmc.Sobol(2, scramble=True, seed=seed + k).random_base2(m)
        est.append(fn(pts[:, 0], pts[:, 1]).mean())
    est = np.asarray(est)
    return float(est.mean()), float(est.std(ddof=1) / math.sqrt(reps))


@dataclass(frozen=True)
class GraphonModel:
    """Graphon ``w = raw / norm`` with ``∫∫ w = 1`` at sparsity ``rho``.

    Edges are drawn with probability ``h(u, v) = rho w(u, v)`` whenever that
    is at most one, and with probability zero otherwise.
    """

    name: str
    raw: Callable
    norm: float
    norm_se: float
    rho: float = 1.0

    def w(self, u, v):
        return self.raw(u, v) / self.norm

    def h(self, u, v):
        p = self.rho * self.w(u, v)
        return np.where(p <= 1.0, p, 0.0)

    def at(self, rho: float) -> "GraphonModel":
        if rho < 0:
            raise ValueError("rho must be nonnegative")
        return replace(self, rho=float(rho))

    @classmethod
    def from_function(cls, name, fn, rho=1.0, points=2 ** 22, seed=0):
        """Wrap a vectorised symmetric kernel, normalising it numerically."""
        pts = qmc.Sobol(2, scramble=True, seed=seed).random(points)
        vals = fn(pts[:, 0], pts[:, 1])
        norm = float(vals.mean())
        return cls(name, fn, norm, float(vals.std() / math.sqrt(points)), rho)


_NAMES = {"1": "graphon1", "graphon1": "graphon1", "2": "graphon2", "graphon2": "graphon2",
          "constant": "constant", "const": "constant"}


def builtin_graphon(name, rho: float = 1.0) -> GraphonModel:
    """``graphon1`` (smooth), ``graphon2`` (nonsmooth) or ``constant`` (w ≡ 1)."""
    key = _NAMES.get(str(name).lower())
    if key is None:
        raise KeyError(f"unknown graphon {name!r}")
    norm, se = _normalise(key)
    return GraphonModel(key, _BUILTIN[key], norm, se, float(rho))


# -- sampling ---------------------------------------------------------------

_XI_STREAM = 0x5851F42D4C957F2D
_EDGE_STREAM = 0x14057B7EF767814F


def sample_latent(n: int, seed: int) -> np.ndarray:
    """Latent positions ``xi_0..xi_{n-1}``, each a function of ``(seed, i)``."""
    return _rng.uniforms(_rng.mix(seed, _XI_STREAM), np.arange(n, dtype=np.uint64))


def _sample_pairs(model: GraphonModel, n: int, seed: int, block: int = 1 << 22):
    xi = sample_latent(n, seed)
    key = _rng.mix(seed, _EDGE_STREAM)
    rows, cols = [], []
    j0 = 1
    while j0 < n:
        # columns j0..j1-1 contribute j pairs each
        j1 = j0 + 1
        total = j0
        while j1 < n and total + j1 <= block:
            total += j1
            j1 += 1
        js = np.arange(j0, j1, dtype=np.int64)
        jj = np.repeat(js, js)
        starts = np.repeat(np.cumsum(js) - js, js)
        ii = np.arange(jj.size, dtype=np.int64) - starts
        counter = (jj * (jj - 1)) // 2 + ii
        u = _rng.uniforms(key, counter.astype(np.uint64))
        keep = u < model.h(xi[ii], xi[jj])
        rows.append(ii[keep])
        cols.append(jj[keep])
        j0 = j1
    if not rows:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    return np.concatenate(rows), np.concatenate(cols)


def sample_adjacency(model: GraphonModel, n: int, seed: int) -> np.ndarray:
    """Dense boolean adjacency of a draw from ``model`` (same draw as :func:`sample_graph`)."""
    i, j = _sample_pairs(model, n, seed)
    a = np.zeros((n, n), dtype=bool)
    a[i, j] = True
    a[j, i] = True
    return a


def sample_graph(model: GraphonModel, n: int, seed: int) -> Graph:
    """Draw a graph on ``n`` nodes from ``model``.

    Pair ``(i, j)`` with ``i < j`` is decided by its own counter-based
    uniform, so the edge set depends only on ``(seed, i, j)``.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n <= DENSE_LIMIT:
        return Graph.from_dense(sample_adjacency(model, n, seed))
    i, j = _sample_pairs(model, n, seed)
    return Graph(n, np.column_stack([i, j]))


# -- population functionals ----------------------------------------------------


@dataclass(frozen=True)
class PopulationMoment:
    """Monte Carlo estimate of ``∫ prod_{edges} w(xi_i, xi_j) dxi``."""

    key: str
    value: float
    std_error: float
    n_draws: int


def _pattern(obj):
    if isinstance(obj, Motif):
        return obj.r, obj.edges, obj.canonical_key
    if hasattr(obj, "edges") and hasattr(obj, "s"):
        return obj.s, obj.edges, obj.key
    s, edges = obj
    from .motifs import canonical_key
    return s, tuple(edges), canonical_key(s, edges)


def _key_seed(key: str) -> int:
    return int.from_bytes(hashlib.blake2b(key.encode(), digest_size=8).digest(), "little")


def population_moment(model: GraphonModel, pattern, n_draws: int = 2_000_000,
                      seed: int = 0, chunk: int = 1 << 18) -> PopulationMoment:
    """Plain Monte Carlo estimate of ``P_w`` for a motif or merged graph.

    ``pattern`` is a :class:`Motif`, a merge-table entry or an
    ``(s, edges)`` pair; disconnected patterns are handled by the same
    product integral.
    """
    if n_draws < 1000:
        raise ValueError("n_draws must be at least 1000")
    s, edges, key = _pattern(pattern)
    rng = _rng.generator(seed, _key_seed(key))
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < n_draws:
        k = min(chunk, n_draws - done)
        xi = rng.random((k, s))
        prod = np.ones(k)
        for u, v in edges:
            prod *= model.w(xi[:, u], xi[:, v])
        total += prod.sum()
        total_sq += (prod * prod).sum()
        done += k
    mean = total / n_draws
    var = max(total_sq / n_draws - mean * mean, 0.0)
    return PopulationMoment(key, float(mean), math.sqrt(var / n_draws), n_draws)


def theoretical_mean(model: GraphonModel, motif: Motif, n_draws: int = 2_000_000,
                     seed: int = 0) -> float:
    """Limit of ``rho^-efrak E[U_R]``: ``r! / |Aut(R)| * P_w(R)``."""
    p = population_moment(model, motif, n_draws, seed)
    return math.factorial(motif.r) / motif.aut_count * p.value


def limiting_covariance(model: GraphonModel, r: Motif, rp: Motif, n_draws: int = 2_000_000,
                        seed: int = 0, return_se: bool = False):
    """Limit of ``cov(sqrt(n) rho^-efrak U_R, sqrt(n) rho^-efrak' U_R')``.

    One-node overlaps add ``c_S r! r'! / |Aut(S)| P_w(S)``; disjoint unions
    subtract ``c_S r! r'! r r' / |Aut(S)| P_w(S)``.
    """
    from .algebra import build_merge_table

    table = build_merge_table(r, rp)
    base = math.factorial(r.r) * math.factorial(rp.r)
    value, var = 0.0, 0.0
    for e in table:
        if e.q == 1:
            coef = e.c * base / e.aut_count
        elif e.q == 0:
            coef = -e.c * base * r.r * rp.r / e.aut_count
        else:
            continue
        p = population_moment(model, e, n_draws, seed)
        value += coef * p.value
        var += (coef * p.std_error) ** 2
    if return_se:
        return value, math.sqrt(var)
    return value


# -- sparsity schedules ------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(n)|([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?))\s*(?:\^\s*([-+]?[0-9]*\.?[0-9]+))?\s*")


@dataclass(frozen=True)
class Schedule:
    """``rho(n) = const * n ** power``, parsed from strings like ``0.25*n^-0.1``."""

    text: str
    const: float
    power: float

    def __call__(self, n) -> float:
        return self.const * float(n) ** self.power


def parse_schedule(text: str) -> Schedule:
    """Parse a product of factors, each a number or ``n``, optionally raised to a power."""
    const, power = 1.0, 0.0
    if not text.strip():
        raise ValueError("empty sparsity schedule")
    for part in text.split("*"):
        mt = _TOKEN.fullmatch(part)
        if mt is None:
            raise ValueError(f"cannot parse factor {part!r} in schedule {text!r}")
        exp = float(mt.group(3)) if mt.group(3) else 1.0
        if mt.group(1):
            power += exp
        else:
            const *= float(mt.group(2)) ** exp
    return Schedule(text, const, power)
