import ast
from pathlib import Path

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import coinmotif
from coinmotif import catalog as cat_io
from coinmotif import kernels
from coinmotif.coin import ClusterFeature, coin_cluster
from coinmotif.core import (
    TimeSeries,
    build_candidate_matrix,
    build_subsequence_matrix,
    reduce_rows,
    sax_encode,
    znormalize,
)
from coinmotif.extract import (
    GroupMotif,
    ShiftTestParams,
    detect_shifted_pair,
    remove_shifted,
    split_levels,
)
from coinmotif.oracle import audit_cluster, oracle_threshold_nn

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
PROPS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def varied(values):
    return np.ptp(values) > 1e-6 * max(1.0, np.abs(values).max())


@PROPS
@given(arrays(np.float64, st.integers(2, 200), elements=finite))
def test_znormalize_idempotent(values):
    if not varied(values):
        return
    once = znormalize(TimeSeries("a", values))
    twice = znormalize(TimeSeries("a", once.zvalues))
    np.testing.assert_allclose(twice.zvalues, once.zvalues, atol=1e-9)


@PROPS
@given(st.lists(st.integers(1, 80), min_size=1, max_size=5), st.integers(2, 30), st.integers(0, 2**32 - 1))
def test_subsequence_count(lengths, w, seed):
    rng = np.random.default_rng(seed)
    zs = [znormalize(TimeSeries(f"r{i}", rng.normal(size=n) + np.arange(n))) for i, n in enumerate(lengths) if n > 1]
    if not zs:
        return
    full = build_subsequence_matrix(zs, w, max(1, min(w // 2, 10)))
    assert len(full) == sum(max(0, z.zvalues.size - w + 1) for z in zs)


@PROPS
@given(st.integers(2, 40), st.integers(1, 10), st.integers(0, 2**32 - 1))
def test_reduced_plus_level_reconstructs_paa(w, d, seed):
    d = min(d, w)
    W = np.random.default_rng(seed).normal(size=(20, w))
    reduced, level = reduce_rows(W, d)
    bounds = [(i * w) // d for i in range(d + 1)]
    paa = np.column_stack([W[:, bounds[i]:bounds[i + 1]].mean(axis=1) for i in range(d)])
    np.testing.assert_allclose(reduced + level[:, None], paa, atol=1e-9)


@PROPS
@given(st.integers(0, 2**32 - 1), st.floats(0.0, 3.0))
def test_filters_keep_order(seed, f):
    z = znormalize(TimeSeries("a", np.cumsum(np.random.default_rng(seed).normal(size=300))))
    full = build_subsequence_matrix([z], 20, 10)
    cand = build_candidate_matrix(full, f)
    assert np.all(np.diff(cand.rows) > 0)


@PROPS
@given(arrays(np.float64, st.integers(1, 12), elements=st.floats(-5, 5)))
def test_sax_pure(x):
    word = sax_encode(x)
    assert word == sax_encode(x.copy()) and len(word) == x.size
    assert set(word) <= set("abcd")


@PROPS
@given(arrays(np.float64, st.tuples(st.integers(1, 60), st.just(3)), elements=st.floats(-3, 3)),
       st.floats(0.2, 3.0))
def test_radius_at_insertion_all_strategies(X, R):
    for strategy in ("basic", "birch", "lsh"):
        clusters = coin_cluster(X, R, strategy, branching=4)
        assert sorted(m for c in clusters for m in c.members) == list(range(X.shape[0]))
        for c in clusters:
            assert audit_cluster(X[c.members], R).replay_violations == 0


@PROPS
@given(arrays(np.float64, st.tuples(st.integers(0, 80), st.integers(1, 6)), elements=st.floats(-3, 3)),
       st.floats(0.1, 3.0), st.integers(0, 1000))
def test_basic_matches_oracle_any_order(X, R, seed):
    order = np.random.default_rng(seed).permutation(X.shape[0])
    got = [list(c.members) for c in coin_cluster(X[order], R, "basic")]
    assert got == oracle_threshold_nn(X[order], R)


@PROPS
@given(arrays(np.float64, st.tuples(st.integers(1, 40), st.just(4)), elements=st.floats(-10, 10)))
def test_cf_additivity(X):
    cf = ClusterFeature.of_point(X[0])
    for x in X[1:]:
        cf.add(x)
    ref = ClusterFeature.of_points(X)
    assert cf.count == ref.count
    np.testing.assert_allclose(cf.linear_sum, ref.linear_sum, atol=1e-9)
    np.testing.assert_allclose(cf.squared_sum, ref.squared_sum, rtol=1e-9, atol=1e-9)


def _rescan_keep(S, rows, centroid, delta):
    # direct form: rescan every row between the anchor and the next member
    keep, a = [True], rows[0]
    for b in rows[1:]:
        seg = S[a + 1:b]
        far = lambda x: ((seg - x) ** 2).sum(axis=1) > delta ** 2
        hit = bool(np.any(far(S[a]) & far(S[b]) & far(centroid)))
        keep.append(hit)
        a = b if hit else a
    return np.array(keep)


@PROPS
@given(st.integers(0, 2**32 - 1), st.integers(5, 300), st.floats(0.3, 3.0))
def test_trivial_scan_matches_rescan(seed, n, delta):
    rng = np.random.default_rng(seed)
    S = rng.normal(size=(n, 3))
    rows = np.sort(rng.choice(n, size=int(rng.integers(1, min(n, 40))), replace=False)).astype(np.int64)
    centroid = S[rows].mean(axis=0)
    np.testing.assert_array_equal(kernels.trivial_keep_mask(S, rows, centroid, delta),
                                  _rescan_keep(S, rows, centroid, delta))


def _random_groups(rng, n_rows, k):
    rows = rng.permutation(n_rows)
    cuts = np.sort(rng.choice(np.arange(1, n_rows), size=k - 1, replace=False))
    return [np.sort(part) for part in np.split(rows, cuts)]


@PROPS
@given(st.integers(0, 2**32 - 1), st.integers(2, 6))
def test_remove_shifted_never_drops_larger(seed, k):
    rng = np.random.default_rng(seed)
    z = znormalize(TimeSeries("a", rng.normal(size=203)))
    full = build_subsequence_matrix([z], 4, 2)
    groups = [GroupMotif.from_rows(i, r, full) for i, r in enumerate(_random_groups(rng, len(full), k))]
    params = ShiftTestParams(t_s=5, p=50, sigma_t=2)
    kept = {g.id for g in remove_shifted(groups, full, params)}
    for g in groups:
        if g.id in kept:
            continue
        # a dropped group was shifted relative to some larger-or-equal survivor
        assert any(o.id in kept and (o.support, -o.id) > (g.support, -g.id)
                   and detect_shifted_pair(g, o, full, params) for o in groups)


@PROPS
@given(arrays(np.float64, st.integers(1, 40), elements=st.floats(-3, 3)), st.integers(1, 5))
def test_split_levels_partition(levels, s):
    n = levels.size
    z = znormalize(TimeSeries("a", np.arange(n + 3, dtype=float)))
    full = build_subsequence_matrix([z], 4, 2)
    full.level[:] = levels
    g = GroupMotif.from_rows(0, np.arange(n), full)
    motifs = split_levels(g, full, 0.5, 2, s)
    flat = [r for m in motifs for r in m.rows.tolist()]
    assert len(flat) == len(set(flat))
    assert set(flat) <= set(range(n))
    assert all(m.support > s for m in motifs)


@PROPS
@given(st.recursive(
    st.none() | st.booleans() | st.integers(-10**6, 10**6) | finite | st.text(max_size=5),
    lambda inner: st.lists(inner, max_size=4) | st.dictionaries(st.text(max_size=4), inner, max_size=4),
    max_leaves=15))
def test_catalog_text_round_trip(doc):
    text = cat_io.dumps(doc)
    assert cat_io.dumps(cat_io.loads(text)) == text


def test_oracle_module_shares_no_production_code():
    src = Path(coinmotif.__file__).parent / "oracle.py"
    allowed = {"core": {"TimeSeries"}, "errors": {"SpecInfeasible", "TooLarge"}}
    for node in ast.walk(ast.parse(src.read_text())):
        if isinstance(node, ast.ImportFrom) and node.level == 1:
            assert node.module in allowed, node.module
            assert {a.name for a in node.names} <= allowed[node.module]
