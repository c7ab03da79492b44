import numpy as np
import pytest

from coinmotif.datasets import sine_pattern
from coinmotif.errors import SpecInfeasible, TooLarge
from coinmotif.oracle import (
    PlantedSpec,
    audit_cluster,
    dbscan_1d,
    generate_planted,
    naive_frequent_motifs,
    nontrivial_violations,
    oracle_threshold_nn,
    rescan_instances,
)


def coverage(motif, starts, tol):
    return int((np.abs(np.asarray(motif)[:, None] - starts[None, :]).min(axis=0) <= tol).sum())


def test_threshold_nn_three_points_and_empty():
    X = np.array([[0, 0], [0.1, 0], [10, 0]], dtype=float)
    assert oracle_threshold_nn(X, 1.0) == [[0, 1], [2]]
    assert oracle_threshold_nn(np.empty((0, 2)), 1.0) == []


def test_audit_examples():
    r = audit_cluster([[0.0, 0.0]], 1.0)
    assert r.max_pairwise == 0 and r.outlier_count == 0
    r = audit_cluster([[0.0, 0.0], [1.5, 0.0]], 1.0)
    assert r.max_pairwise == pytest.approx(1.5)
    assert r.outlier_count == 0
    # second member was 1.5 from the singleton centroid when inserted
    assert r.replay_violations == 1


def test_audit_counts_outliers():
    r = audit_cluster([[0.0], [0.0], [0.0], [3.0]], 1.0)
    assert r.outlier_count == 1 and r.max_pairwise == 3.0


def test_planted_trivial_cases():
    pat = sine_pattern(20)
    empty = generate_planted(PlantedSpec(pat, 0, seed=1, series_length=500))
    assert empty.starts.size == 0 and empty.series.values.size == 500
    one = generate_planted(PlantedSpec(pat, 1, levels=(2.0,), seed=1, series_length=500))
    s0 = one.starts[0]
    np.testing.assert_array_equal(one.series.values[s0:s0 + 20], 2.0 + pat)
    assert one.levels.tolist() == [2.0]


def test_planted_deterministic_and_non_overlapping():
    spec = PlantedSpec(sine_pattern(40), 60, levels=(0.0, 4.0), noise_sigma=0.06, seed=3, series_length=50_000)
    a, b = generate_planted(spec), generate_planted(spec)
    assert a.series.values.tobytes() == b.series.values.tobytes()
    assert np.all(np.diff(a.starts) >= 80)
    assert sorted(np.unique(a.levels, return_counts=True)[1].tolist()) == [30, 30]


def test_planted_infeasible():
    with pytest.raises(SpecInfeasible):
        generate_planted(PlantedSpec(sine_pattern(20), 30, series_length=600))


def test_naive_recovers_planted():
    w = 40
    pl = generate_planted(PlantedSpec(sine_pattern(w), 10, noise_sigma=0.06, seed=0, series_length=2000))
    motifs = naive_frequent_motifs(pl.series, w, np.sqrt(w / 20), 5)
    assert max(coverage(m, pl.starts, w // 4) for m in motifs) >= 9


def test_naive_large_support_is_empty():
    pl = generate_planted(PlantedSpec(sine_pattern(20), 5, seed=0, series_length=600))
    assert naive_frequent_motifs(pl.series, 20, 1.0, 10_000) == []


def test_naive_two_patterns_disjoint():
    w = 40
    rng = np.random.default_rng(4)
    values = rng.normal(size=4000)
    sine = sine_pattern(w)
    square = 3.0 * np.sign(np.sin(2 * np.pi * 2 * (np.arange(w) + 0.5) / w))
    starts = np.arange(10, 3900, 195)[:20]
    for k, s0 in enumerate(starts):
        values[s0:s0 + w] = (sine if k % 2 == 0 else square) + 0.06 * rng.standard_normal(w)
    motifs = naive_frequent_motifs(values, w, np.sqrt(w / 20), 5)
    best = [max(range(len(motifs)), key=lambda j: coverage(motifs[j], truth, w // 4))
            for truth in (starts[0::2], starts[1::2])]
    assert best[0] != best[1]
    assert coverage(motifs[best[0]], starts[0::2], w // 4) >= 9
    assert coverage(motifs[best[1]], starts[1::2], w // 4) >= 9
    assert not set(motifs[best[0]].tolist()) & set(motifs[best[1]].tolist())


def test_naive_cap():
    with pytest.raises(TooLarge):
        naive_frequent_motifs(np.zeros(6000), 20, 1.0, 5)


def test_nontrivial_violations():
    S = np.zeros((6, 2))
    S[2] = [5.0, 5.0]
    assert nontrivial_violations(S, [0, 4], 1.0) == []
    assert nontrivial_violations(S, [0, 1], 1.0) == [(0, 1)]
    S[4] = [1.5, 0.0]
    assert nontrivial_violations(S, [0, 4], 1.0) == [(0, 4)]


def test_dbscan_1d_examples():
    np.testing.assert_array_equal(dbscan_1d([0.1, 0.12, 5.0, 5.1], 0.5, 2), [0, 0, 1, 1])
    np.testing.assert_array_equal(dbscan_1d([0.0, 1.0, 2.0], 0.5, 2), [-1, -1, -1])


def test_rescan_finds_injections():
    w = 20
    pl = generate_planted(PlantedSpec(sine_pattern(w), 8, noise_sigma=0.06, seed=2, series_length=3000))
    v = pl.series.values
    z = (v - v.mean()) / v.std()
    seg = z[pl.starts[0]:pl.starts[0] + w].reshape(10, 2).mean(axis=1)
    picks = rescan_instances(v, seg - seg.mean(), w, 0.5)
    assert coverage(picks, pl.starts, 2) == 8
