"""KS-error experiments: how well subsampling approximates the graphon sampling law.

For each host size ``n`` a reference cloud of rescaled moments is drawn once
from the model at size ``b``. Each replicate then samples a host graph,
subsamples it and records the KS distance between the rescaled subsampling
cloud and the reference cloud, for every requested motif set.
"""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import _rng
from .graphon import Schedule, builtin_graphon, parse_schedule, sample_graph
from .motifs import Motif, parse_motif
from .subsample import (EmpiricalJointCDF, SubsampleConfig, ks_distance, reference_sample,
                        rescale, run_subsampling)

__all__ = [
    "B_RULES",
    "RHO_RULES",
    "DEFAULT_MOTIF_SETS",
    "ExperimentGrid",
    "KSRow",
    "b_rule",
    "ks_error_experiment",
    "rows_to_csv",
]

B_RULES = {
    "n23": lambda n: math.ceil(round(n ** (2.0 / 3.0), 9)),
    "2sqrt": lambda n: math.ceil(round(2.0 * n ** 0.5, 9)),
}

RHO_RULES = ("0.25*n^-0.1", "0.25*n^-0.25", "0.25*n^-0.5")

DEFAULT_MOTIF_SETS = (
    ("twostar",), ("triangle",), ("threestar",),
    ("twostar", "triangle"), ("twostar", "threestar"), ("triangle", "threestar"),
)

CSV_COLUMNS = ("graphon", "n", "b", "rho", "motif_set", "mean_ks", "se_ks", "runtime_s")


def b_rule(name: str):
    """Subsample size rule: ``n23`` is ceil(n^(2/3)), ``2sqrt`` is ceil(2 n^(1/2))."""
    try:
        return B_RULES[name]
    except KeyError:
        raise ValueError(f"unknown b rule {name!r}; choose from {sorted(B_RULES)}") from None


def _motif_tuple(ms):
    return tuple(m if isinstance(m, Motif) else parse_motif(m) for m in ms)


@dataclass(frozen=True)
class ExperimentGrid:
    """Configuration of one KS-error sweep.

    Parameters
    ----------
    graphon : str
        Built-in graphon name (``graphon1``, ``graphon2``, ``constant`` or ``1``/``2``).
    n_values : sequence of int
        Strictly increasing host sizes.
    b_rule : str
        ``n23`` or ``2sqrt``.
    rho : str
        Sparsity schedule such as ``0.25*n^-0.1``.
    motif_sets : sequence of sequences
        Each entry is a marginal (one motif) or joint (several motifs).
    n_sub, reps, seed
        Subsample replicates per host, hosts per ``n`` and master seed.
    reference_size, pool_size
        Rows in the reference cloud and draws used to estimate its centre.
    """

    graphon: str
    n_values: tuple
    b_rule: str = "n23"
    rho: str = "0.25*n^-0.1"
    motif_sets: tuple = DEFAULT_MOTIF_SETS
    n_sub: int = 500
    reps: int = 10
    seed: int = 0
    mode: str = "noninduced"
    reference_size: int = 2000
    pool_size: int = 2000

    def __post_init__(self):
        nv = tuple(int(n) for n in self.n_values)
        if not nv:
            raise ValueError("n_values must not be empty")
        if any(a >= b for a, b in zip(nv, nv[1:])):
            raise ValueError("n_values must be strictly increasing")
        object.__setattr__(self, "n_values", nv)
        sets = tuple(_motif_tuple(s) if not isinstance(s, str) else _motif_tuple([s])
                     for s in self.motif_sets)
        if not sets or any(not s for s in sets):
            raise ValueError("motif_sets must be non-empty")
        object.__setattr__(self, "motif_sets", sets)
        b_rule(self.b_rule)
        self.schedule
        builtin_graphon(self.graphon)
        if self.reps < 1 or self.n_sub < 1:
            raise ValueError("reps and n_sub must be positive")
        biggest = max(m.r for s in sets for m in s)
        for n in nv:
            b = self.b_for(n)
            if b < biggest:
                raise ValueError(f"b={b} at n={n} is smaller than the largest motif ({biggest})")
            if b > n:
                raise ValueError(f"b={b} exceeds n={n}")

    @property
    def schedule(self) -> Schedule:
        return parse_schedule(self.rho)

    def b_for(self, n: int) -> int:
        return b_rule(self.b_rule)(n)

    @property
    def motifs(self) -> tuple:
        """Union of all motif sets in first-appearance order."""
        out = []
        for s in self.motif_sets:
            for m in s:
                if m not in out:
                    out.append(m)
        return tuple(out)

    def to_dict(self):
        return {"graphon": self.graphon, "n_values": list(self.n_values), "b_rule": self.b_rule,
                "rho": self.rho, "motif_sets": [[m.name for m in s] for s in self.motif_sets],
                "n_sub": self.n_sub, "reps": self.reps, "seed": self.seed, "mode": self.mode,
                "reference_size": self.reference_size, "pool_size": self.pool_size}


@dataclass
class KSRow:
    graphon: str
    n: int
    b: int
    rho: float
    motif_set: str
    mean_ks: float
    se_ks: float
    runtime_s: float
    ks: list = field(default_factory=list, repr=False)

    def as_tuple(self):
        return (self.graphon, self.n, self.b, self.rho, self.motif_set,
                self.mean_ks, self.se_ks, self.runtime_s)


def _set_name(s):
    return "+".join(m.name for m in s)


def ks_error_experiment(grid: ExperimentGrid, threads: int = None, progress=None) -> list:
    """Run the sweep and return one :class:`KSRow` per ``(n, motif set)``.

    Seeds: the reference cloud for ``n`` uses ``mix(seed, n, 1)``, host graph
    ``k`` uses ``mix(seed, n, 2, k)`` and its subsampling run
    ``mix(seed, n, 3, k)``. The table is therefore a pure function of the grid.
    """
    base = builtin_graphon(grid.graphon)
    motifs = grid.motifs
    cols = [tuple(motifs.index(m) for m in s) for s in grid.motif_sets]
    rows = []
    for n in grid.n_values:
        t0 = time.perf_counter()
        b = grid.b_for(n)
        rho = grid.schedule(n)
        model = base.at(rho)
        ref_cfg = SubsampleConfig(b, grid.reference_size, motifs, grid.mode)
        ref = reference_sample(model, ref_cfg, n, _rng.mix(grid.seed, n, 1),
                               pool_size=grid.pool_size)
        ref_cdfs = [EmpiricalJointCDF(ref.z[:, list(c)]) for c in cols]
        ks = np.empty((grid.reps, len(cols)))
        for k in range(grid.reps):
            g = sample_graph(model, n, _rng.mix(grid.seed, n, 2, k))
            cfg = SubsampleConfig(b, grid.n_sub, motifs, grid.mode, _rng.mix(grid.seed, n, 3, k))
            z = rescale(run_subsampling(g, cfg, threads)).z
            for j, c in enumerate(cols):
                ks[k, j] = ks_distance(EmpiricalJointCDF(z[:, list(c)]), ref_cdfs[j])
            if progress:
                progress(n, k)
        elapsed = time.perf_counter() - t0
        for j, s in enumerate(grid.motif_sets):
            v = ks[:, j]
            se = float(v.std(ddof=1) / math.sqrt(len(v))) if len(v) > 1 else float("nan")
            rows.append(KSRow(base.name, n, b, rho, _set_name(s), float(v.mean()), se,
                              elapsed, v.tolist()))
    return rows


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([r.graphon, r.n, r.b, repr(r.rho), r.motif_set, repr(r.mean_ks),
                    repr(r.se_ks), f"{r.runtime_s:.3f}"])
    return buf.getvalue()
