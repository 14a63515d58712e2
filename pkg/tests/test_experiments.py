import math

import numpy as np
import pytest

from netmoments.experiments import (CSV_COLUMNS, ExperimentGrid, b_rule, ks_error_experiment,
                                    rows_to_csv)
from netmoments.graphon import builtin_graphon
from netmoments.motifs import CATALOG as T
from netmoments.subsample import SubsampleConfig, ks_distance, reference_sample


def test_b_rules():
    assert b_rule("n23")(2000) == 159
    assert b_rule("n23")(1000) == 100
    assert b_rule("n23")(500) == 63
    assert b_rule("2sqrt")(400) == 40
    assert b_rule("2sqrt")(500) == math.ceil(2 * 500 ** 0.5)
    with pytest.raises(ValueError):
        b_rule("n12")


def test_grid_validation():
    with pytest.raises(ValueError):
        ExperimentGrid("graphon1", (1000, 500))
    with pytest.raises(ValueError):
        ExperimentGrid("graphon1", (4,), b_rule="n23", motif_sets=(("k4",),))
    with pytest.raises(ValueError):
        ExperimentGrid("graphon1", (100,), rho="0.25*log(n)")
    with pytest.raises(KeyError):
        ExperimentGrid("graphon7", (100,))
    g = ExperimentGrid("1", (100, 200), motif_sets=(("triangle",), ("twostar", "triangle")))
    assert [m.name for m in g.motifs] == ["triangle", "twostar"]


def test_same_generator_sanity():
    model = builtin_graphon("graphon1", 0.25 * 300 ** -0.1)
    n_sub = 400
    cfg = SubsampleConfig(45, n_sub, [T["triangle"]])
    a = reference_sample(model, cfg, 300, seed=1, pool_size=n_sub, pool_seed=5)
    same = reference_sample(model, cfg, 300, seed=1, pool_size=n_sub, pool_seed=5)
    other = reference_sample(model, cfg, 300, seed=2, pool_size=n_sub, pool_seed=5)
    assert ks_distance(a.z, same.z) == 0.0
    assert ks_distance(a.z, other.z) <= 2 / math.sqrt(n_sub)


def test_table_deterministic_and_csv():
    grid = ExperimentGrid("graphon1", (120, 200), motif_sets=(("triangle",), ("twostar", "triangle")),
                          n_sub=60, reps=2, seed=3, reference_size=80, pool_size=80)
    a = ks_error_experiment(grid)
    b = ks_error_experiment(grid, threads=2)
    assert [r.as_tuple()[:-1] for r in a] == [r.as_tuple()[:-1] for r in b]
    assert len(a) == 4
    for r in a:
        assert 0 <= r.mean_ks <= 1 and r.runtime_s > 0
    text = rows_to_csv(a).splitlines()
    assert tuple(text[0].split(",")) == CSV_COLUMNS
    assert text[1].startswith("graphon1,120,25,")
