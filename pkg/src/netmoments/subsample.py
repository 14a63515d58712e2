"""Uniform node subsampling of network moments, rescaling, empirical CDFs and KS distances."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _rng
from .counting import CountContext, DenseView, network_moment
from .graph import DENSE_LIMIT, Graph, edge_density
from .graphon import GraphonModel, sample_adjacency
from .motifs import Motif

__all__ = [
    "SubsampleConfig",
    "MomentSample",
    "RescaledSample",
    "EmpiricalJointCDF",
    "run_subsampling",
    "rescale",
    "reference_sample",
    "moment_vector",
    "empirical_cdf",
    "ks_distance",
    "default_threads",
]

MODES = ("noninduced", "induced")


def default_threads() -> int:
    env = os.environ.get("NETMOMENTS_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass(frozen=True)
class SubsampleConfig:
    """Subsample size ``b``, replicate count, ordered motif list, counting mode, seed."""

    b: int
    n_sub: int
    motifs: tuple
    mode: str = "noninduced"
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "motifs", tuple(self.motifs))
        if not self.motifs:
            raise ValueError("motif list must not be empty")
        if self.n_sub < 1:
            raise ValueError("n_sub must be at least 1")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.b < max(m.r for m in self.motifs):
            raise ValueError(f"b={self.b} is smaller than the largest motif")

    def check(self, n: int):
        if self.b > n:
            raise ValueError(f"subsample size b={self.b} exceeds n={n}")

    def to_dict(self):
        return {"b": self.b, "n_sub": self.n_sub, "motifs": [m.name for m in self.motifs],
                "mode": self.mode, "seed": self.seed}


def moment_vector(g, motifs, mode="noninduced") -> np.ndarray:
    """Network moments of ``g`` (a Graph, DenseView or boolean matrix) for each motif."""
    if isinstance(g, np.ndarray):
        g = DenseView(g)
    ctx = CountContext(g)
    return np.array([network_moment(g, m, mode, ctx) for m in motifs])


@dataclass
class MomentSample:
    """Raw subsample moments: ``y[i, j]`` is motif ``j`` in replicate ``i``."""

    y: np.ndarray
    rho_hat: float
    host_moments: np.ndarray
    config: SubsampleConfig
    n: int

    @property
    def motifs(self):
        return self.config.motifs

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([m.name for m in self.motifs])
        for row in self.y:
            w.writerow([repr(float(x)) for x in row])
        return buf.getvalue()

    def sidecar(self) -> dict:
        return {
            "rho_hat": self.rho_hat,
            "host_moments": {m.name: float(x) for m, x in zip(self.motifs, self.host_moments)},
            "n": self.n,
            "config": self.config.to_dict(),
            "replicate_seed_rule": "mix64(seed, replicate_index)",
            "diagnostics": diagnostics(self),
        }


def diagnostics(ms: MomentSample) -> dict:
    """Heuristic sparsity/degeneracy indicators; informational only."""
    out = {"rho_hat": ms.rho_hat, "b": ms.config.b}
    efr = max(m.efrak for m in ms.motifs)
    out["b_rho_hat_pow_2efrak"] = ms.config.b * ms.rho_hat ** (2 * efr)
    if ms.y.shape[0] > ms.y.shape[1] and ms.y.shape[1] > 1:
        cov = np.cov(ms.y, rowvar=False)
        with np.errstate(divide="ignore", invalid="ignore"):
            out["covariance_condition_number"] = float(np.linalg.cond(cov))
    return out


def _host_view(g: Graph):
    if g.n <= DENSE_LIMIT:
        a = g.dense()
        return lambda idx: a[np.ix_(idx, idx)]
    csr = g.csr
    return lambda idx: csr[idx][:, idx].toarray()


def _replicate_indices(n, b, seed, i):
    rng = _rng.generator(seed, i)
    return np.sort(rng.choice(n, size=b, replace=False))


def run_subsampling(g: Graph, cfg: SubsampleConfig, threads: int = None) -> MomentSample:
    """Draw ``n_sub`` uniform ``b``-node induced subgraphs and record their moments.

    Replicate ``i`` uses its own generator seeded by ``mix(seed, i)``, so the
    output does not depend on ``threads``.
    """
    cfg.check(g.n)
    if g.n < 2:
        raise ValueError("host graph needs at least two nodes")
    take = _host_view(g)
    k = len(cfg.motifs)
    y = np.empty((cfg.n_sub, k))

    def work(lo, hi):
        for i in range(lo, hi):
            idx = _replicate_indices(g.n, cfg.b, cfg.seed, i)
            y[i] = moment_vector(DenseView(take(idx)), cfg.motifs, cfg.mode)

    threads = threads or default_threads()
    chunks = np.linspace(0, cfg.n_sub, min(threads * 4, cfg.n_sub) + 1).astype(int)
    spans = list(zip(chunks[:-1], chunks[1:]))
    if threads == 1:
        for lo, hi in spans:
            work(lo, hi)
    else:
        with ThreadPoolExecutor(threads) as pool:
            list(pool.map(lambda s: work(*s), spans))
    host = moment_vector(g, cfg.motifs, cfg.mode)
    return MomentSample(y, edge_density(g), host, cfg, g.n)


@dataclass
class RescaledSample:
    """Rescaled moments ``z`` (rows are replicates) plus provenance."""

    z: np.ndarray
    motifs: tuple
    b: int
    info: dict = field(default_factory=dict)


def rescale(ms: MomentSample) -> RescaledSample:
    """``z_ij = sqrt(b) rho_hat^-efrak_j (y_ij - U_j(G))``."""
    if ms.rho_hat <= 0:
        raise ValueError("host graph has no edges (rho_hat = 0); moments cannot be rescaled")
    pw = np.array([ms.rho_hat ** -m.efrak for m in ms.motifs])
    z = math.sqrt(ms.config.b) * (ms.y * pw - ms.host_moments * pw)
    return RescaledSample(z, ms.motifs, ms.config.b,
                          {"rho_hat": ms.rho_hat, "source": "subsample"})


def _normalised_moments(model, b, seeds, motifs, mode):
    """Per-draw ``U`` and ``rho_hat`` for graphs of size ``b`` drawn from ``model``."""
    u = np.empty((len(seeds), len(motifs)))
    rho_hat = np.empty(len(seeds))
    for i, s in enumerate(seeds):
        view = DenseView(sample_adjacency(model, b, s))
        u[i] = moment_vector(view, motifs, mode)
        rho_hat[i] = 2.0 * view.m / (b * (b - 1))
    return u, rho_hat


def reference_sample(model: GraphonModel, cfg: SubsampleConfig, n_host: int, seed: int,
                     pool_size: int = 2000, pool_seed: int = None, scale: float = None,
                     normalise: str = "rho") -> RescaledSample:
    """Rescaled moments of independent size-``b`` graphs drawn from ``model``.

    Row ``i`` is ``sqrt(b c) [s_i^-efrak U(G_i) - mu]`` with ``c = 1 - b / n_host``
    unless ``scale`` overrides it. The centre ``mu_j = rho^-efrak_j E[U_j]`` is
    estimated from an independent pool of ``pool_size`` draws.

    ``normalise="rho"`` (default) sets ``s_i`` to the model sparsity, which is
    the normalisation whose spread matches the subsampling distribution.
    ``normalise="rho_hat"`` uses each draw's own edge density instead; a
    draw without edges then contributes zeros.
    """
    b = cfg.b
    if b < 2:
        raise ValueError("b must be at least 2")
    if model.rho <= 0:
        raise ValueError("model sparsity must be positive")
    if normalise not in ("rho", "rho_hat"):
        raise ValueError("normalise must be 'rho' or 'rho_hat'")
    c = 1.0 - b / n_host if scale is None else scale
    if pool_seed is None:
        pool_seed = _rng.mix(seed, 0x9E37)
    efr = np.array([m.efrak for m in cfg.motifs])
    pool_u, _ = _normalised_moments(model, b, [_rng.mix(pool_seed, i) for i in range(pool_size)],
                                    cfg.motifs, cfg.mode)
    mu = model.rho ** -efr * pool_u.mean(axis=0)
    u, rho_hat = _normalised_moments(model, b, [_rng.mix(seed, i) for i in range(cfg.n_sub)],
                                     cfg.motifs, cfg.mode)
    if normalise == "rho":
        v = u * model.rho ** -efr
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            v = np.where(u > 0, u * rho_hat[:, None] ** -efr, 0.0)
    z = math.sqrt(b * c) * (v - mu)
    info = {"source": "graphon", "model": model.name, "rho": model.rho, "n_host": n_host,
            "scale_c": c, "mu": mu.tolist(), "pool_size": pool_size, "pool_seed": pool_seed,
            "seed": seed, "normalise": normalise}
    return RescaledSample(z, cfg.motifs, b, info)


class EmpiricalJointCDF:
    """Fraction of sample rows that are coordinatewise ``<=`` a query point."""

    def __init__(self, sample):
        x = np.asarray(sample, dtype=float)
        if x.ndim == 1:
            x = x[:, None]
        if x.shape[0] < 1:
            raise ValueError("empirical CDF needs at least one row")
        self.sample = x
        self._sorted = np.sort(x[:, 0]) if x.shape[1] == 1 else None

    @property
    def dim(self):
        return self.sample.shape[1]

    def __len__(self):
        return self.sample.shape[0]

    def __call__(self, points, chunk=256):
        pts = np.asarray(points, dtype=float)
        single = pts.ndim == 1 and (self.dim > 1 or pts.size == 1)
        pts = pts.reshape(-1, self.dim)
        if self._sorted is not None:
            out = np.searchsorted(self._sorted, pts[:, 0], side="right") / len(self)
        else:
            out = np.empty(pts.shape[0])
            for lo in range(0, pts.shape[0], chunk):
                q = pts[lo:lo + chunk]
                le = np.all(self.sample[None, :, :] <= q[:, None, :], axis=2)
                out[lo:lo + chunk] = le.mean(axis=1)
        return float(out[0]) if single else out


def empirical_cdf(sample) -> EmpiricalJointCDF:
    return EmpiricalJointCDF(sample)


def ks_distance(a, b) -> float:
    """Largest gap between two empirical CDFs over the pooled sample points.

    Exact in one dimension; the standard computable surrogate for the
    supremum in higher dimensions.
    """
    if not isinstance(a, EmpiricalJointCDF):
        a = EmpiricalJointCDF(a)
    if not isinstance(b, EmpiricalJointCDF):
        b = EmpiricalJointCDF(b)
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    pts = np.unique(np.vstack([a.sample, b.sample]), axis=0)
    return float(np.max(np.abs(a(pts) - b(pts))))
