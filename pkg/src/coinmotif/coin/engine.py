"""COIN clustering driver.

Points are visited in matrix order (or a seeded shuffle of it). Each point
goes to the nearest centroid among its candidate clusters when that centroid
is within ``R``; otherwise it starts a new cluster. Centroids move after every
insertion. Outliers created by that drift are kept where they are.
"""

from dataclasses import dataclass

import numpy as np

from .. import kernels
from .birch import CFTree
from .cf import Cluster, ClusterFeature
from .lsh import LshIndex

STRATEGIES = ("basic", "birch", "lsh")


@dataclass
class ClusterArrays:
    """Struct-of-arrays view of a clustering run (what the kernels produce)."""

    labels: np.ndarray
    order: np.ndarray
    k: int


def _visit_order(n, order_seed):
    order = np.arange(n, dtype=np.int64)
    if order_seed is not None:
        np.random.default_rng(order_seed).shuffle(order)
    return order


def _grow(arr, size):
    if size <= arr.shape[0]:
        return arr
    new = np.zeros((max(size, 2 * arr.shape[0]),) + arr.shape[1:], dtype=arr.dtype)
    new[:arr.shape[0]] = arr
    return new


def _labels_birch(X, order, radius, branching):
    n, d = X.shape
    r2 = radius * radius
    tree = CFTree(d, branching)
    labels = np.empty(n, dtype=np.int64)
    k = 0
    for i in order:
        x = X[i]
        path, cid, d2 = tree.descend(x)
        if cid is not None and d2 <= r2:
            tree.absorb(path, x)
            labels[i] = cid
        else:
            tree.add_cluster(path, k, x)
            labels[i] = k
            k += 1
    return labels, k, tree


def _labels_lsh(X, order, radius, index):
    n, d = X.shape
    r2 = radius * radius
    labels = np.empty(n, dtype=np.int64)
    ls = np.zeros((1024, d))
    counts = np.zeros(1024)
    centroids = np.zeros((1024, d))
    k = 0
    point_keys = index.keys_many(X)
    for i in order:
        x = X[i]
        cands = index.candidates(x, ordered=False, keys=point_keys[i])
        if cands.shape[0]:
            best, d2 = kernels.nearest_among(x, centroids, cands)
            if d2 <= r2:
                ls[best] += x
                counts[best] += 1.0
                centroids[best] = ls[best] / counts[best]
                index.update(best, centroids[best])
                labels[i] = best
                continue
        if k == ls.shape[0]:
            ls, counts, centroids = _grow(ls, k + 1), _grow(counts, k + 1), _grow(centroids, k + 1)
        ls[k] = x
        counts[k] = 1.0
        centroids[k] = x
        index.register(k, x, point_keys[i])
        labels[i] = k
        k += 1
    return labels, k


def cluster_labels(X, radius, strategy="birch", *, branching=50, lsh_r=3, lsh_b=5,
                   lsh_width=4.0, lsh_seed=0, order_seed=None):
    """Run COIN clustering and return labels plus the visit order.

    ``lsh_width`` is a multiple of ``radius``.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("points must be a 2-D array")
    if not radius > 0:
        raise ValueError("radius must be positive")
    if strategy not in STRATEGIES:
        raise ValueError(f"strategy must be one of {STRATEGIES}, got {strategy!r}")
    n, d = X.shape
    order = _visit_order(n, order_seed)
    if n == 0:
        return ClusterArrays(np.empty(0, dtype=np.int64), order, 0)
    if strategy == "basic":
        labels, k = kernels.coin_basic(X, radius, order)
    elif strategy == "birch":
        labels, k, _ = _labels_birch(X, order, radius, branching)
    else:
        index = LshIndex(d, lsh_width * radius, r=lsh_r, b=lsh_b, seed=lsh_seed)
        labels, k = _labels_lsh(X, order, radius, index)
    return ClusterArrays(labels, order, int(k))


def clusters_from_labels(X, labels, order, k):
    """Materialize :class:`Cluster` objects; members keep insertion order."""
    X = np.asarray(X, dtype=np.float64)
    seq = labels[order]
    by_label = np.argsort(seq, kind="stable")
    bounds = np.searchsorted(seq[by_label], np.arange(k + 1))
    clusters = []
    for cid in range(k):
        members = order[by_label[bounds[cid]:bounds[cid + 1]]]
        clusters.append(Cluster(cid, ClusterFeature.of_points(X[members]), members.tolist()))
    return clusters


def coin_cluster(matrix, radius, strategy="birch", **options):
    """COIN clustering of a candidate matrix (or a plain ``(n, d)`` array).

    Parameters
    ----------
    matrix : CandidateMatrix or array_like
        Mean-shifted reduced vectors, clustered in row order.
    radius : float
        COIN radius ``R``; clusters have diameter bounded by ``2R``.
    strategy : {"basic", "birch", "lsh"}
        How the candidate cluster set is built.
    **options
        ``branching``, ``lsh_r``, ``lsh_b``, ``lsh_width``, ``lsh_seed``,
        ``order_seed`` as in :func:`cluster_labels`.

    Returns
    -------
    list of Cluster
        In id (creation) order. Empty input gives ``[]``.
    """
    X = getattr(matrix, "reduced", matrix)
    X = np.asarray(X, dtype=np.float64)
    if X.size == 0:
        return []
    result = cluster_labels(X, radius, strategy, **options)
    return clusters_from_labels(X, result.labels, result.order, result.k)


def candidate_clusters_basic(x, clusters):
    """Every live cluster; makes the basic strategy a thresholded 1-NN."""
    return list(clusters)


def candidate_clusters_birch(x, tree):
    cid = tree.candidate(np.asarray(x, dtype=np.float64))
    return [] if cid is None else [cid]


def candidate_clusters_lsh(x, index):
    return index.candidates(np.asarray(x, dtype=np.float64)).tolist()
