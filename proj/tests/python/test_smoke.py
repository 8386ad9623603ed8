import math

import numpy as np
import pytest

import shearnet


def test_haar_atom_matches_formula():
    g = shearnet.haar_atom(2, 3, 8)
    np.testing.assert_allclose(g, [0.5, 0.5, -0.5, -0.5, 0, 0, 0, 0], atol=1e-15)
    r = 1 / math.sqrt(2)
    np.testing.assert_allclose(shearnet.haar_atom(1, 1, 4), [-r, 0, 0, r], atol=1e-15)


def test_cardinalities():
    assert len(shearnet.build_full_haar(8)) == 32
    assert len(shearnet.build_subsampled_haar(1024, 1.0)) == 9216
    assert len(shearnet.build_full_cdsh(4)) == 320
    assert shearnet.full_cdsh_cardinality(2) == 24
    with pytest.raises(shearnet.CapExceeded):
        shearnet.build_full_cdsh(64)
    with pytest.raises(shearnet.InvalidDimension):
        shearnet.build_full_haar(7)


def test_statistic_paths_agree():
    d = shearnet.build_full_haar(64)
    x = shearnet.gen_noise(64, 1, seed=3)
    fast = shearnet.statistic(d, x)
    slow = shearnet.statistic(d, x, method="naive")
    assert abs(fast.value - slow.value) < 1e-10
    assert fast.argmax == slow.argmax
    dense = np.array([d.atom(j) for j in range(len(d))])
    assert abs(np.max(np.abs(dense @ x)) - fast.value) < 1e-10


def test_shearlet_atoms_and_dictionary():
    g = shearnet.digitize_atom(3, -2, 5, 9, 16)
    assert g.shape == (16, 16)
    assert abs(np.linalg.norm(g) - 1) < 1e-12
    d = shearnet.build_subsampled_cdsh(16, 0.5, 0.5, 0.5)
    assert len(d) == shearnet.subsampled_cdsh_cardinality(16, 0.5, 0.5, 0.5)
    x = 4.0 * d.atom(7) + shearnet.gen_noise(16, 2, seed=1)
    s = shearnet.statistic(d, x)
    assert s.value > 3.0
    assert shearnet.manifest(d)["family"] == "shearlet"


def test_epsnet_and_bounds():
    full = shearnet.build_full_haar(32)
    value, witness, params = shearnet.epsnet_maxmin(full, shearnet.build_subsampled_haar(32, 0.5))
    assert value < 0.5
    assert params.startswith("haar(")
    assert shearnet.epsnet_maxmin(full, full)[0] < 1e-7
    assert shearnet.epsilon_bound(0.01, 0.01, 0.001) == pytest.approx(0.21467, abs=1e-5)


def test_thresholds_and_transform():
    assert shearnet.analytic_threshold(0.0, 1.0, 1024) == pytest.approx(3.7233, abs=1e-4)
    d = shearnet.build_subsampled_haar(64, 1.0)
    t1 = shearnet.calibrated_threshold(d, 0.1, 100, seed=4)
    assert t1 == shearnet.calibrated_threshold(d, 0.1, 100, seed=4)
    assert shearnet.decide(t1, t1) == "reject"
    v = [3, 1, 4, 1, 5, 9, 2, 6]
    assert shearnet.quantile_midpoint(v, 0.9) == np.quantile(v, 0.9, method="midpoint")
    c = shearnet.haar_orthobasis_transform(np.ones(4))
    np.testing.assert_allclose(c, [0, 0, math.sqrt(2), math.sqrt(2)], atol=1e-15)


def test_experiment_round_trip():
    cfg = {
        "grid_sizes": [64],
        "multipliers": [0.0, 2.0],
        "trials": 30,
        "dictionary": {"family": "haar", "variant": "subsampled", "epsilon": 1.0},
        "seed": 11,
    }
    a = shearnet.experiment("power", cfg)
    b = shearnet.experiment("power", cfg)
    assert a == b
    assert [r["c"] for r in a["rows"]] == [0.0, 2.0]
    for r in a["rows"]:
        assert r["error_sum"] == r["type1"] + r["type2"]
    with pytest.raises(shearnet.ParameterError):
        shearnet.experiment("power", {**cfg, "unexpected": 1})
    m = shearnet.gaussian_max_bound(100, 50, 1)
    assert m["bound"] == pytest.approx(0.1315, abs=1e-4)
