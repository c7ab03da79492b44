"""Brute-force reference routines for testing.

Nothing here shares code with the production path: preprocessing, distance
evaluation and clustering are reimplemented in the most direct form. These
functions are quadratic (or worse) on purpose; the greedy loop of the
exhaustive motif search is compiled only so the quadratic baseline can be
timed at a few thousand samples.
"""

from dataclasses import dataclass, field

import numpy as np

from .core import TimeSeries
from .errors import SpecInfeasible, TooLarge

try:
    from numba import njit as _numba_njit

    def _jit(fn):
        return _numba_njit(cache=True)(fn)
except ImportError:  # pragma: no cover
    def _jit(fn):
        return fn

NAIVE_CAP = 5000


# --------------------------------------------------------------------------
# threshold 1-NN clustering


def oracle_threshold_nn(points, R):
    """Literal nearest-centroid threshold clustering over all clusters so far.

    Returns a list of member index lists (insertion order), cluster ids in
    creation order.
    """
    points = np.asarray(points, dtype=np.float64)
    members, sums, centroids = [], [], []
    for i in range(points.shape[0]):
        x = points[i]
        if centroids:
            dist = np.linalg.norm(np.array(centroids) - x, axis=1)
            j = int(np.argmin(dist))
            if dist[j] <= R:
                members[j].append(i)
                sums[j] = sums[j] + x
                centroids[j] = sums[j] / len(members[j])
                continue
        members.append([i])
        sums.append(x.copy())
        centroids.append(x.copy())
    return members


# --------------------------------------------------------------------------
# cluster audit


@dataclass
class AuditReport:
    max_pairwise: float
    outlier_count: int
    replay_max: float = 0.0
    replay_violations: int = 0


def audit_cluster(vectors, R):
    """Exhaustive geometry check of one cluster.

    ``vectors`` are the members in insertion order. ``outlier_count`` counts
    members farther than ``R`` from the final centroid; ``replay_violations``
    counts members farther than ``R`` from the centroid of the members that
    preceded them (the centroid they were compared with when inserted).
    """
    V = np.asarray(vectors, dtype=np.float64)
    n = V.shape[0]
    if n == 0:
        return AuditReport(0.0, 0)
    diff = V[:, None, :] - V[None, :, :]
    max_pairwise = float(np.sqrt((diff ** 2).sum(axis=2).max()))
    centroid = V.mean(axis=0)
    outliers = int((np.sqrt(((V - centroid) ** 2).sum(axis=1)) > R).sum())
    replay_max, violations = 0.0, 0
    for j in range(1, n):
        dist = float(np.sqrt(((V[j] - V[:j].mean(axis=0)) ** 2).sum()))
        replay_max = max(replay_max, dist)
        violations += dist > R * (1 + 1e-12)
    return AuditReport(max_pairwise, outliers, replay_max, violations)


# --------------------------------------------------------------------------
# planted motifs


@dataclass
class PlantedSpec:
    """Recipe for a white-noise series with copies of ``pattern`` pasted in.

    Injection ``i`` overwrites ``[start_i, start_i + w)`` with
    ``level_i + pattern + noise_sigma * N(0, 1)``; levels cycle through
    ``levels`` in a shuffled but balanced way. Consecutive injections are at
    least ``min_gap`` samples apart (default ``w``).
    """

    pattern: np.ndarray
    count: int
    levels: tuple = (0.0,)
    noise_sigma: float = 0.0
    seed: int = 0
    series_length: int = 10_000
    baseline_sigma: float = 1.0
    min_gap: int | None = None


@dataclass
class Planted:
    series: TimeSeries
    starts: np.ndarray
    levels: np.ndarray
    spec: PlantedSpec = field(repr=False, default=None)


def generate_planted(spec, series_id="planted", sensor="synthetic"):
    pattern = np.asarray(spec.pattern, dtype=np.float64)
    w = pattern.size
    gap = w if spec.min_gap is None else spec.min_gap
    L = spec.series_length
    slack = L - spec.count * w - max(spec.count - 1, 0) * gap
    if spec.count * w >= L or slack < 0:
        raise SpecInfeasible(f"{spec.count} injections of width {w} (gap {gap}) do not fit in {L} samples")
    rng = np.random.default_rng(spec.seed)
    values = rng.normal(0.0, spec.baseline_sigma, L)
    offsets = np.sort(rng.integers(0, slack + 1, spec.count))
    starts = offsets + np.arange(spec.count) * (w + gap)
    levels = np.resize(np.asarray(spec.levels, dtype=np.float64), spec.count)
    rng.shuffle(levels)
    for s0, lv in zip(starts, levels):
        values[s0:s0 + w] = lv + pattern + spec.noise_sigma * rng.standard_normal(w)
    return Planted(TimeSeries(series_id, values, sensor), starts.astype(np.int64), levels, spec)


# --------------------------------------------------------------------------
# exhaustive frequent-motif search


def _naive_reduced(values, w, d):
    z = (values - values.mean()) / values.std()
    n = z.size - w + 1
    windows = np.array([z[k:k + w] for k in range(n)])
    edges = [(i * w) // d for i in range(d + 1)]
    red = np.column_stack([windows[:, edges[i]:edges[i + 1]].mean(axis=1) for i in range(d)])
    return red - red.mean(axis=1, keepdims=True)


@_jit
def _greedy_motifs(D2, seeds, density, s, delta2):
    m = D2.shape[0]
    available = np.ones(m, dtype=np.bool_)
    label = np.full(m, -1, dtype=np.int64)
    members = np.empty(m, dtype=np.int64)
    n_motifs = 0
    for i in seeds:
        if density[i] <= s:
            break
        if not available[i]:
            continue
        cand = np.flatnonzero((D2[i] <= delta2) & available)
        # nearest first; the stable sort keeps ascending index among ties
        cand = cand[np.argsort(D2[i, cand], kind="mergesort")]
        members[0] = i
        size = 1
        for c in cand:
            if c == i:
                continue
            ok = True
            for t in range(size):
                mm = members[t]
                if D2[c, mm] > delta2:
                    ok = False
                    break
                lo, hi = (c, mm) if c < mm else (mm, c)
                found = False
                for k in range(lo + 1, hi):
                    if D2[c, k] > delta2 and D2[mm, k] > delta2:
                        found = True
                        break
                if not found:
                    ok = False
                    break
            if ok:
                members[size] = c
                size += 1
        if size > s:
            for t in range(size):
                label[members[t]] = n_motifs
            for t in range(size):
                # withdraw the member and the unbroken run of its close shifts
                mm = members[t]
                available[mm] = False
                k = mm + 1
                while k < m and D2[mm, k] <= delta2:
                    available[k] = False
                    k += 1
                k = mm - 1
                while k >= 0 and D2[mm, k] <= delta2:
                    available[k] = False
                    k -= 1
            n_motifs += 1
        else:
            available[i] = False
    return label, n_motifs


def naive_frequent_motifs(values, w, R, s, d=None, cap=NAIVE_CAP):
    """Frequent motifs by exhaustive pairwise search.

    Every window is z-scored with the series, averaged down to ``d`` segments
    and mean-shifted. Seeds are taken in order of decreasing neighbourhood size
    (ties: earliest start). A seed's neighbours within ``2R`` are added nearest
    first when they are within ``2R`` of every member and non-trivially similar
    to every member (some window strictly between them is farther than ``2R``
    from both). Sets with more than ``s`` members are reported; their members
    are then withdrawn, together with the unbroken run of neighbouring starts
    that stay within ``2R`` of each member (its trivial shifts).

    Returns a list of sorted start arrays.
    """
    values = np.asarray(getattr(values, "values", values), dtype=np.float64)
    if values.size > cap:
        raise TooLarge(f"series of length {values.size} exceeds the cap of {cap}")
    if d is None:
        d = max(1, min(w // 2, 10))
    if values.size < w or values.std() == 0:
        return []
    P = _naive_reduced(values, w, d)
    m = P.shape[0]
    delta2 = (2.0 * R) ** 2
    sq = (P * P).sum(axis=1)
    D2 = np.maximum(sq[:, None] + sq[None, :] - 2.0 * (P @ P.T), 0.0)
    density = (D2 <= delta2).sum(axis=1)
    seeds = np.lexsort((np.arange(m), -density))
    label, k = _greedy_motifs(D2, seeds, density, int(s), delta2)
    return [np.flatnonzero(label == j) for j in range(k)]


# --------------------------------------------------------------------------
# definition checks and small utilities


def nontrivial_violations(S, rows, delta):
    """Pairs of same-series members that are not non-trivially similar.

    ``rows`` are ascending row indices of one series in ``S`` (rows of a series
    are consecutive starts). For every pair ``(a, b)`` both conditions are
    checked: distance at most ``delta``, and some row strictly between them
    farther than ``delta`` from both. Returns the offending pairs.
    """
    S = np.asarray(S, dtype=np.float64)
    rows = sorted(int(r) for r in rows)
    bad = []
    for x in range(len(rows)):
        for y in range(x + 1, len(rows)):
            a, b = rows[x], rows[y]
            if np.sqrt(((S[a] - S[b]) ** 2).sum()) > delta:
                bad.append((a, b))
                continue
            seg = S[a + 1:b]
            da = np.sqrt(((seg - S[a]) ** 2).sum(axis=1))
            db = np.sqrt(((seg - S[b]) ** 2).sum(axis=1))
            if not np.any((da > delta) & (db > delta)):
                bad.append((a, b))
    return bad


def dbscan_1d(values, eps, min_pts):
    """Textbook DBSCAN with an all-pairs neighbourhood table. Returns labels, -1 for noise."""
    x = np.asarray(values, dtype=np.float64)
    n = x.size
    neigh = [np.flatnonzero(np.abs(x - x[i]) <= eps) for i in range(n)]
    core = np.array([len(nb) >= min_pts for nb in neigh], dtype=bool)
    labels = np.full(n, -1)
    c = 0
    for i in range(n):
        if labels[i] != -1 or not core[i]:
            continue
        labels[i] = c
        queue = list(neigh[i])
        while queue:
            j = queue.pop()
            if labels[j] == -1:
                labels[j] = c
                if core[j]:
                    queue.extend(neigh[j])
        c += 1
    return labels


def rescan_instances(values, centroid, w, R, d=None):
    """Linear rescan for windows within ``R`` of a motif centroid.

    Greedy non-overlapping picks, best first. Useful for back-filling instances
    that clustering missed.
    """
    values = np.asarray(getattr(values, "values", values), dtype=np.float64)
    if d is None:
        d = np.asarray(centroid).size
    P = _naive_reduced(values, w, d)
    dist = np.sqrt(((P - np.asarray(centroid)) ** 2).sum(axis=1))
    taken = np.zeros(P.shape[0], dtype=bool)
    picks = []
    for k in np.argsort(dist, kind="stable"):
        if dist[k] > R:
            break
        if not taken[k]:
            picks.append(int(k))
            taken[max(k - w + 1, 0):k + w] = True
    return np.array(sorted(picks), dtype=np.int64)
