"""Comparing networks whose nodes cannot be matched.

Case 1 (very different sizes): subsample the large graph at ``b = n'`` and
locate the small graph's observed moments inside that cloud.
Case 2 (comparable sizes): subsample both graphs at a common small ``b``
and measure how far apart the two moment clouds are.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from . import _rng
from .graph import Graph
from .subsample import (EmpiricalJointCDF, SubsampleConfig, ks_distance, moment_vector,
                        rescale, run_subsampling)

__all__ = [
    "REPORT_SCHEMA",
    "REPORT_SCHEMA_VERSION",
    "ComparisonReport",
    "ConditionalSlice",
    "EmptySliceError",
    "case1_compare",
    "case2_compare",
    "conditional_slice",
    "default_bandwidth",
]

REPORT_SCHEMA = "netmoments.comparison"
REPORT_SCHEMA_VERSION = 1
_QUANTILES = (0.05, 0.25, 0.5, 0.75, 0.95)


class EmptySliceError(ValueError):
    """No replicate falls inside the conditioning window."""


@dataclass
class ConditionalSlice:
    """Rows whose column ``cond_index`` lies within ``bandwidth`` of ``target``."""

    cond_index: int
    target: float
    bandwidth: float
    rows: np.ndarray
    values: np.ndarray

    @property
    def count(self) -> int:
        return int(self.rows.size)

    def quantiles(self, probs=_QUANTILES) -> dict:
        """Quantiles of every non-conditioning column within the slice."""
        return {j: np.quantile(self.values[:, j], probs).tolist()
                for j in range(self.values.shape[1]) if j != self.cond_index}

    def tail_fraction(self, j: int, value: float) -> float:
        """Fraction of slice rows whose column ``j`` is at most ``value``."""
        return float(np.mean(self.values[:, j] <= value))


def conditional_slice(y, cond_index: int, target: float, bandwidth: float) -> ConditionalSlice:
    """Hard-window conditioning: keep rows with ``|y[:, cond_index] - target| <= bandwidth``.

    Row order is preserved. Raises :class:`EmptySliceError` when nothing is
    selected.
    """
    if not bandwidth > 0:
        raise ValueError("bandwidth must be positive")
    y = np.asarray(y, dtype=float)
    if y.ndim != 2:
        raise ValueError("sample matrix must be two-dimensional")
    if not 0 <= cond_index < y.shape[1]:
        raise IndexError("conditioning column out of range")
    rows = np.flatnonzero(np.abs(y[:, cond_index] - target) <= bandwidth)
    if rows.size == 0:
        raise EmptySliceError(
            f"no replicate within {bandwidth:g} of {target:g} in column {cond_index}; "
            "try a larger bandwidth")
    return ConditionalSlice(cond_index, float(target), float(bandwidth), rows, y[rows])


def default_bandwidth(column) -> float:
    """``0.5 * IQR / 1.349 * N^(-1/5)``, falling back to the standard deviation
    and then to a tiny positive width when the column is (nearly) constant."""
    x = np.asarray(column, dtype=float)
    q75, q25 = np.percentile(x, [75, 25])
    spread = (q75 - q25) / 1.349
    if spread <= 0:
        spread = float(x.std())
    bw = 0.5 * spread * len(x) ** -0.2
    return bw if bw > 0 else 1e-12 * max(1.0, float(np.abs(x).max()))


@dataclass
class ComparisonReport:
    """Outcome of a case-1 or case-2 comparison; ``to_dict`` gives the JSON form."""

    mode: str
    motifs: tuple
    b: int
    n_sub: int
    seeds: dict
    sizes: dict
    marginals: list
    joint: dict
    conditional: dict = None
    clouds: dict = field(default_factory=dict, repr=False)

    def to_dict(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "schema_version": REPORT_SCHEMA_VERSION,
            "mode": self.mode,
            "motifs": [m.name for m in self.motifs],
            "b": self.b,
            "n_sub": self.n_sub,
            "seeds": self.seeds,
            "sizes": self.sizes,
            "marginals": self.marginals,
            "joint": self.joint,
            "conditional": self.conditional,
        }

    def cloud_csv(self) -> str:
        """Plot-ready replicates: a ``source`` column then one column per motif."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["source"] + [m.name for m in self.motifs])
        for name, y in self.clouds.items():
            for row in y:
                w.writerow([name] + [repr(float(v)) for v in row])
        return buf.getvalue()


def _check_sizes(b, motifs):
    need = max(m.r for m in motifs)
    if b < need:
        raise ValueError(f"subsample size {b} is smaller than the largest motif ({need})")


def case1_compare(g_large: Graph, g_small: Graph, motifs, n_sub: int, mode: str = "noninduced",
                  seed: int = 0, level: float = 0.90, bandwidth: float = None,
                  rescaled: bool = False, threads: int = None) -> ComparisonReport:
    """Locate ``g_small``'s moments in the subsampling cloud of ``g_large`` at ``b = n'``.

    Parameters
    ----------
    level : float
        Coverage of the central interval reported for each motif.
    bandwidth : float, optional
        Window for the conditional slice on the first motif; the rule-of-thumb
        :func:`default_bandwidth` is used when omitted.
    rescaled : bool
        Report the cloud and observed values on the rescaled scale. Percentiles
        are unaffected because rescaling is increasing in each coordinate.
    """
    motifs = tuple(motifs)
    if not g_large.n > g_small.n:
        raise ValueError(f"case 1 needs n > n' (got n={g_large.n}, n'={g_small.n})")
    b = g_small.n
    _check_sizes(b, motifs)
    if not 0 < level < 1:
        raise ValueError("level must lie in (0, 1)")
    cfg = SubsampleConfig(b, n_sub, motifs, mode, seed)
    ms = run_subsampling(g_large, cfg, threads)
    y = ms.y
    obs = moment_vector(g_small, motifs, mode)
    if rescaled:
        rs = rescale(ms)
        pw = np.array([ms.rho_hat ** -m.efrak for m in motifs])
        obs = math.sqrt(b) * (obs - ms.host_moments) * pw
        y = rs.z
    lo_p, hi_p = (1 - level) / 2, 1 - (1 - level) / 2
    marginals = []
    for j, m in enumerate(motifs):
        col = y[:, j]
        lo, hi = np.quantile(col, [lo_p, hi_p])
        marginals.append({
            "motif": m.name,
            "observed": float(obs[j]),
            "percentile": float(np.mean(col <= obs[j])),
            "interval": [float(lo), float(hi)],
            "level": level,
            "in_interval": bool(lo <= obs[j] <= hi),
            "quantiles": dict(zip(map(str, _QUANTILES), np.quantile(col, _QUANTILES).tolist())),
        })
    below = float(np.mean(np.all(y <= obs, axis=1)))
    above = float(np.mean(np.all(y >= obs, axis=1)))
    joint = {"fraction_dominated": below, "fraction_dominating": above,
             "tail_weight": min(below, above)}
    conditional = None
    if len(motifs) > 1:
        bw = default_bandwidth(y[:, 0]) if bandwidth is None else bandwidth
        conditional = {"cond_motif": motifs[0].name, "target": float(obs[0]), "bandwidth": bw}
        try:
            sl = conditional_slice(y, 0, obs[0], bw)
        except EmptySliceError as exc:
            conditional.update({"count": 0, "empty": True, "message": str(exc)})
        else:
            conditional.update({
                "count": sl.count,
                "empty": False,
                "quantiles": {motifs[j].name: q for j, q in sl.quantiles().items()},
                "tail_fraction": {motifs[j].name: sl.tail_fraction(j, obs[j])
                                  for j in range(1, len(motifs))},
            })
    return ComparisonReport(
        "case1", motifs, b, n_sub, {"master": seed},
        {"n_large": g_large.n, "n_small": g_small.n, "rho_hat_large": ms.rho_hat},
        marginals, joint, conditional, {"subsample": y})


def _side_seeds(seed, g, gp):
    """Seeds tied to each graph's content so swapping the inputs swaps the clouds."""
    da, db = g.digest(), gp.digest()
    if da == db:
        return _rng.mix(seed, 0), _rng.mix(seed, 1)
    first = 0 if da < db else 1
    return (_rng.mix(seed, first), _rng.mix(seed, 1 - first))


def case2_compare(g: Graph, gp: Graph, b: int, motifs, n_sub: int, mode: str = "noninduced",
                  seed: int = 0, threads: int = None) -> ComparisonReport:
    """Subsample both graphs at the same ``b`` and compare the raw moment clouds by KS."""
    motifs = tuple(motifs)
    _check_sizes(b, motifs)
    if b > min(g.n, gp.n):
        raise ValueError(f"b={b} exceeds the smaller graph (n={min(g.n, gp.n)})")
    sa, sb = _side_seeds(seed, g, gp)
    ya = run_subsampling(g, SubsampleConfig(b, n_sub, motifs, mode, sa), threads).y
    yb = run_subsampling(gp, SubsampleConfig(b, n_sub, motifs, mode, sb), threads).y
    marginals = [{"motif": m.name, "ks": ks_distance(ya[:, j], yb[:, j]),
                  "mean_a": float(ya[:, j].mean()), "mean_b": float(yb[:, j].mean())}
                 for j, m in enumerate(motifs)]
    joint = {"ks": ks_distance(EmpiricalJointCDF(ya), EmpiricalJointCDF(yb)),
             "dimension": len(motifs)}
    return ComparisonReport(
        "case2", motifs, b, n_sub, {"master": seed, "a": sa, "b": sb},
        {"n_a": g.n, "n_b": gp.n}, marginals, joint, None, {"a": ya, "b": yb})
