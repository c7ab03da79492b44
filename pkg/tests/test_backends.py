import os
import subprocess
import sys

import numpy as np
import pytest

from coinmotif import PipelineParams, discover_motifs, kernels
from coinmotif._backend import available_backends, get_backend, set_backend
from coinmotif.datasets import planted_series

pytestmark = pytest.mark.skipif("numba" not in available_backends(), reason="numba not installed")


def both(fn):
    out = {}
    previous = get_backend()
    try:
        for name in ("numba", "numpy"):
            set_backend(name)
            out[name] = fn()
    finally:
        set_backend(previous)
    return out["numba"], out["numpy"]


def test_set_backend_validates():
    with pytest.raises(ValueError):
        set_backend("cuda")
    assert set(available_backends()) == {"numba", "numpy"}


def test_env_flag_selects_numpy():
    code = "from coinmotif._backend import get_backend; print(get_backend())"
    for env in ({"COINMOTIF_DISABLE_NUMBA": "1"}, {"COINMOTIF_BACKEND": "numpy"}):
        proc = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True,
                              env={**os.environ, **env})
        assert proc.stdout.strip() == "numpy", proc.stderr


@pytest.mark.parametrize("w,d", [(20, 10), (5, 2), (7, 7), (40, 3)])
def test_paa_equivalent(w, d):
    W = np.random.default_rng(w * d).normal(size=(300, w))
    a, b = both(lambda: kernels.paa(W, d))
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-12)


def test_coin_basic_equivalent():
    rng = np.random.default_rng(1)
    for _ in range(10):
        X = rng.normal(size=(int(rng.integers(1, 400)), 10))
        order = rng.permutation(X.shape[0])
        (la, ka), (lb, kb) = both(lambda: kernels.coin_basic(X, 3.0, order))
        assert ka == kb
        np.testing.assert_array_equal(la, lb)


def test_nearest_equivalent_with_ties():
    C = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 5.0], [1.0, 0.0]])
    x = np.zeros(2)
    ids = np.array([3, 2, 1, 0], dtype=np.int64)
    a, b = both(lambda: kernels.nearest_among(x, C, ids))
    assert a == b and a[0] == 0
    ls, n = C * 2.0, np.full(4, 2.0)
    a, b = both(lambda: kernels.nearest_cf(x, ls, n, 4))
    assert a == b and a[0] == 0
    assert both(lambda: kernels.nearest_cf(x, ls, n, 0)) == ((-1, np.inf), (-1, np.inf))


def test_trivial_keep_equivalent():
    rng = np.random.default_rng(3)
    S = rng.normal(size=(500, 10)) * 0.8
    for _ in range(10):
        rows = np.sort(rng.choice(500, size=40, replace=False)).astype(np.int64)
        centroid = S[rows].mean(axis=0)
        a, b = both(lambda: kernels.trivial_keep_mask(S, rows, centroid, 2.0))
        np.testing.assert_array_equal(a, b)


@pytest.mark.parametrize("strategy", ["basic", "birch", "lsh"])
def test_pipeline_same_under_both_backends(strategy):
    pl = planted_series(8000, w=40, seed=5)
    a, b = both(lambda: discover_motifs(pl.series, PipelineParams(w=40, s=5), strategy))
    assert a.stages == b.stages
    assert [m.rows.tolist() for m in a.motifs] == [m.rows.tolist() for m in b.motifs]
    for ma, mb in zip(a.motifs, b.motifs):
        np.testing.assert_allclose(ma.centroid, mb.centroid, atol=1e-9)
