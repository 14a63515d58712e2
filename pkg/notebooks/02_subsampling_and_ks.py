"""Subsampling a simulated sparse graphon graph and measuring KS error.

Run: PYTHONPATH=src python notebooks/02_subsampling_and_ks.py
"""

import math

from netmoments.graphon import builtin_graphon, sample_graph, theoretical_mean
from netmoments.motifs import CATALOG
from netmoments.subsample import (EmpiricalJointCDF, SubsampleConfig, diagnostics,
                                  ks_distance, reference_sample, rescale, run_subsampling)

n = 1000
rho = 0.25 * n ** -0.1
b = math.ceil(n ** (2 / 3))
model = builtin_graphon("graphon1").at(rho)
motifs = (CATALOG["twostar"], CATALOG["triangle"])

g = sample_graph(model, n, seed=7)
print(f"host: n={g.n}, m={g.m}, rho={rho:.4f}, b={b}")

ms = run_subsampling(g, SubsampleConfig(b, 500, motifs, "noninduced", seed=11))
print("diagnostics:", diagnostics(ms))
for j, m in enumerate(motifs):
    est = ms.rho_hat ** -m.efrak * ms.host_moments[j]
    print(f"{m.name}: rho_hat^-e U = {est:.4f}, limit {theoretical_mean(model, m):.4f}")

z = rescale(ms).z
ref = reference_sample(model, SubsampleConfig(b, 1000, motifs), n, seed=3, pool_size=1000)
print(f"KS triangle marginal: {ks_distance(z[:, 1], ref.z[:, 1]):.4f}")
print(f"KS joint (twostar, triangle): "
      f"{ks_distance(EmpiricalJointCDF(z), EmpiricalJointCDF(ref.z)):.4f}")
