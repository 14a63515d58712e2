"""Motif counts, moments and the merge-table algebra on small graphs.

Run: PYTHONPATH=src python notebooks/01_counting_and_algebra.py
"""

import numpy as np

from netmoments.algebra import (build_merge_table, enumerate_subsample_moments,
                                exact_subsample_covariance, verify_linearity)
from netmoments.counting import count_induced, count_noninduced, network_moment
from netmoments.graph import erdos_renyi, path_graph
from netmoments.motifs import CATALOG

# Counts on the 4-node path: two two-stars, no triangles.
p4 = path_graph(4)
for name in ("edge", "twostar", "triangle", "path4"):
    m = CATALOG[name]
    print(f"P4 {name:9s} non-induced {count_noninduced(p4, m)}  induced {count_induced(p4, m)}")

# The merge table of two triangles: graphs made by overlaying two copies.
print("\ntriangle x triangle merge table")
for e in build_merge_table(CATALOG["triangle"], CATALOG["triangle"]):
    print(f"  q={e.q} s={e.s} edges={e.sfrak} c={e.c} {e.name}")

# Linearity: X_R X_R' = sum_S c_S X_S holds exactly on any graph.
g = erdos_renyi(10, 0.5, np.random.default_rng(1))
rep = verify_linearity(g, CATALOG["twostar"], CATALOG["triangle"])
print(f"\nlinearity on a 10-node graph: {rep.lhs} == {rep.rhs} -> {bool(rep)}")

# Exact subsample covariance against brute-force enumeration of all b-subsets.
b = 6
r, rp = CATALOG["twostar"], CATALOG["triangle"]
y = enumerate_subsample_moments(g, (r, rp), b)
print(f"subsample mean {y[:, 0].mean():.6f} vs U(G) {network_moment(g, r):.6f}")
print(f"covariance formula {exact_subsample_covariance(g, r, rp, b):.3e} "
      f"vs enumeration {np.cov(y, rowvar=False, bias=True)[0, 1]:.3e}")
