"""Comparing unmatched networks: a large host against a small target, and two peers.

Run: PYTHONPATH=src python notebooks/03_comparing_networks.py
"""

import json

from netmoments.compare import case1_compare, case2_compare
from netmoments.graphon import builtin_graphon, sample_graph
from netmoments.motifs import CATALOG

rho = 0.25 * 3000 ** -0.1
same = builtin_graphon("graphon1").at(rho)
other = builtin_graphon("graphon2").at(rho)
motifs = (CATALOG["twostar"], CATALOG["threestar"])

large = sample_graph(same, 3000, seed=1)
small_same = sample_graph(same, 400, seed=2)
small_other = sample_graph(other, 400, seed=3)

for label, small in (("same graphon", small_same), ("other graphon", small_other)):
    rep = case1_compare(large, small, motifs, n_sub=500, seed=5)
    for mg in rep.marginals:
        print(f"case 1, {label}: {mg['motif']} percentile {mg['percentile']:.3f} "
              f"in 90% interval: {mg['in_interval']}")

a = sample_graph(same, 800, seed=8)
for label, peer in (("same graphon", sample_graph(same, 800, seed=9)),
                    ("other graphon", sample_graph(other, 800, seed=10))):
    rep = case2_compare(a, peer, b=100, motifs=motifs, n_sub=500, seed=5)
    print(f"case 2, {label}: joint KS {rep.joint['ks']:.3f}")

print(json.dumps(rep.to_dict(), indent=1)[:400], "...")
