import itertools
import math

import networkx as nx
import numpy as np
import pytest

from netmoments.graph import Graph, erdos_renyi


def random_suite(count, n_max, seed, n_min=1):
    """Erdős–Rényi graphs with random sizes and densities."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(n_min, n_max + 1))
        p = float(rng.uniform(0.15, 0.85))
        out.append(erdos_renyi(n, p, rng))
    return out


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(map(tuple, g.edges().tolist()))
    return h


def template_nx(s, edges) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(s))
    h.add_edges_from(edges)
    return h


def nx_aut(s, edges) -> int:
    t = template_nx(s, edges)
    return sum(1 for _ in nx.algorithms.isomorphism.GraphMatcher(t, t).isomorphisms_iter())


def nx_noninduced(g: Graph, s, edges) -> int:
    """Independent oracle: monomorphisms of the template into g divided by |Aut|."""
    gm = nx.algorithms.isomorphism.GraphMatcher(to_nx(g), template_nx(s, edges))
    inj = sum(1 for _ in gm.subgraph_monomorphisms_iter())
    return inj // nx_aut(s, edges)


def nx_induced(g: Graph, s, edges) -> int:
    t = template_nx(s, edges)
    h = to_nx(g)
    total = 0
    for sub in itertools.combinations(range(g.n), s):
        if nx.is_isomorphic(h.subgraph(sub), t):
            total += 1
    return total


@pytest.fixture(scope="session")
def small_suite():
    return random_suite(50, 8, seed=101)
