"""Hot numeric kernels.

Every kernel has a numba implementation (``_*_jit``) and a vectorized numpy
implementation (``_*_np``). The public function dispatches on the active
backend (see :mod:`coinmotif._backend`). Both paths must agree; the test
suite runs them side by side.
"""

import numpy as np

from ._backend import get_backend, njit


def _segment_bounds(w, d):
    # floor(i*w/d): segment lengths differ by at most one
    return (np.arange(d + 1, dtype=np.int64) * w) // d


# --------------------------------------------------------------------------
# piecewise aggregate approximation


@njit
def _paa_jit(windows, bounds):
    n = windows.shape[0]
    d = bounds.shape[0] - 1
    out = np.empty((n, d))
    for i in range(n):
        for k in range(d):
            lo = bounds[k]
            hi = bounds[k + 1]
            acc = 0.0
            for j in range(lo, hi):
                acc += windows[i, j]
            out[i, k] = acc / (hi - lo)
    return out


def _paa_np(windows, bounds):
    sums = np.add.reduceat(windows, bounds[:-1], axis=1)
    return sums / np.diff(bounds)


def paa(windows, d):
    """Piecewise averages of each row of ``windows`` (shape ``(n, w)``) into ``d`` segments."""
    windows = np.ascontiguousarray(windows, dtype=np.float64)
    if windows.ndim != 2:
        raise ValueError("windows must be 2-D")
    w = windows.shape[1]
    if not 1 <= d <= w:
        raise ValueError(f"need 1 <= d <= w, got d={d}, w={w}")
    bounds = _segment_bounds(w, d)
    if windows.shape[0] == 0:
        return np.empty((0, d))
    if get_backend() == "numba":
        return _paa_jit(windows, bounds)
    return _paa_np(windows, bounds)


# --------------------------------------------------------------------------
# nearest centroid among CF rows (centroid = ls / n)


@njit
def _nearest_cf_jit(x, ls, n, m):
    best = -1
    best_d2 = np.inf
    d = x.shape[0]
    for j in range(m):
        inv = 1.0 / n[j]
        d2 = 0.0
        for k in range(d):
            diff = x[k] - ls[j, k] * inv
            d2 += diff * diff
        if d2 < best_d2:
            best_d2 = d2
            best = j
    return best, best_d2


def _nearest_cf_np(x, ls, n, m):
    if m == 0:
        return -1, np.inf
    diff = ls[:m] / n[:m, None] - x
    d2 = np.einsum("ij,ij->i", diff, diff)
    j = int(np.argmin(d2))
    return j, float(d2[j])


def nearest_cf(x, ls, n, m):
    """Index of the row whose centroid ``ls[j] / n[j]`` is nearest ``x``, and its squared distance.

    Only the first ``m`` rows are considered. Ties go to the lowest index.
    Returns ``(-1, inf)`` when ``m == 0``.
    """
    if get_backend() == "numba":
        return _nearest_cf_jit(x, ls, n, m)
    return _nearest_cf_np(x, ls, n, m)


@njit
def _nearest_among_jit(x, centroids, ids):
    best = -1
    best_d2 = np.inf
    d = x.shape[0]
    for t in range(ids.shape[0]):
        j = ids[t]
        d2 = 0.0
        for k in range(d):
            diff = x[k] - centroids[j, k]
            d2 += diff * diff
        if d2 < best_d2 or (d2 == best_d2 and j < best):
            best_d2 = d2
            best = j
    return best, best_d2


def _nearest_among_np(x, centroids, ids):
    if ids.shape[0] == 0:
        return -1, np.inf
    diff = centroids[ids] - x
    d2 = np.einsum("ij,ij->i", diff, diff)
    t = int(np.lexsort((ids, d2))[0])
    return int(ids[t]), float(d2[t])


def nearest_among(x, centroids, ids):
    """Nearest centroid among rows ``ids``; ties go to the lowest id whatever the order of ``ids``."""
    if get_backend() == "numba":
        return _nearest_among_jit(x, centroids, ids)
    return _nearest_among_np(x, centroids, ids)


# --------------------------------------------------------------------------
# exhaustive threshold clustering (candidate set = every cluster so far)


@njit
def _coin_basic_jit(X, order, radius):
    n, d = X.shape
    r2 = radius * radius
    centroids = np.empty((max(n, 1), d))
    ls = np.zeros((max(n, 1), d))
    counts = np.zeros(max(n, 1), dtype=np.int64)
    labels = np.empty(n, dtype=np.int64)
    k = 0
    for t in range(order.shape[0]):
        i = order[t]
        best = -1
        best_d2 = np.inf
        for j in range(k):
            d2 = 0.0
            for c in range(d):
                diff = X[i, c] - centroids[j, c]
                d2 += diff * diff
            if d2 < best_d2:
                best_d2 = d2
                best = j
        if best >= 0 and best_d2 <= r2:
            counts[best] += 1
            for c in range(d):
                ls[best, c] += X[i, c]
                centroids[best, c] = ls[best, c] / counts[best]
            labels[i] = best
        else:
            for c in range(d):
                ls[k, c] = X[i, c]
                centroids[k, c] = X[i, c]
            counts[k] = 1
            labels[i] = k
            k += 1
    return labels, k


def _coin_basic_np(X, order, radius):
    n, d = X.shape
    r2 = radius * radius
    centroids = np.empty((max(n, 1), d))
    ls = np.zeros((max(n, 1), d))
    counts = np.zeros(max(n, 1), dtype=np.int64)
    labels = np.empty(n, dtype=np.int64)
    k = 0
    for i in order:
        x = X[i]
        if k:
            diff = centroids[:k] - x
            d2 = np.einsum("ij,ij->i", diff, diff)
            best = int(np.argmin(d2))
            if d2[best] <= r2:
                counts[best] += 1
                ls[best] += x
                centroids[best] = ls[best] / counts[best]
                labels[i] = best
                continue
        ls[k] = x
        centroids[k] = x
        counts[k] = 1
        labels[i] = k
        k += 1
    return labels, k


def coin_basic(X, radius, order=None):
    """Cluster labels from exhaustive nearest-centroid threshold clustering.

    Returns ``(labels, k)``; cluster ids are assigned in creation order.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    if order is None:
        order = np.arange(X.shape[0], dtype=np.int64)
    else:
        order = np.ascontiguousarray(order, dtype=np.int64)
    if get_backend() == "numba":
        labels, k = _coin_basic_jit(X, order, float(radius))
        return labels, int(k)
    return _coin_basic_np(X, order, float(radius))


# --------------------------------------------------------------------------
# intra-cluster trivial-match scan


@njit
def _sqdist(S, r, x):
    acc = 0.0
    for c in range(S.shape[1]):
        e = S[r, c] - x[c]
        acc += e * e
    return acc


@njit
def _trivial_keep_jit(S, rows, centroid, delta2):
    m = rows.shape[0]
    keep = np.zeros(m, dtype=np.bool_)
    if m == 0:
        return keep
    keep[0] = True
    a = rows[0]
    # rows after the anchor already far from it and from the centroid;
    # each row is measured against a given anchor only once
    qual = np.empty(max(rows[m - 1] - a, 1), dtype=np.int64)
    nq = 0
    scanned = a + 1
    for t in range(1, m):
        b = rows[t]
        found = False
        for i in range(nq):
            if _sqdist(S, qual[i], S[b]) > delta2:
                found = True
                break
        r = scanned
        while not found and r < b:
            if _sqdist(S, r, S[a]) > delta2 and _sqdist(S, r, centroid) > delta2:
                qual[nq] = r
                nq += 1
                if _sqdist(S, r, S[b]) > delta2:
                    found = True
            r += 1
        if found:
            keep[t] = True
            a = b
            nq = 0
            scanned = b + 1
        else:
            scanned = b
    return keep


_CHUNK = 4096


def _trivial_keep_np(S, rows, centroid, delta2):
    m = rows.shape[0]
    keep = np.zeros(m, dtype=bool)
    if m == 0:
        return keep
    keep[0] = True
    a = rows[0]
    qual = np.empty(0, dtype=np.int64)
    scanned = a + 1
    for t in range(1, m):
        b = rows[t]
        if qual.size:
            found = bool(np.any(((S[qual] - S[b]) ** 2).sum(axis=1) > delta2))
        else:
            found = False
        lo = scanned
        while not found and lo < b:
            hi = min(b, lo + _CHUNK)
            seg = S[lo:hi]
            ok = (((seg - S[a]) ** 2).sum(axis=1) > delta2) & (((seg - centroid) ** 2).sum(axis=1) > delta2)
            idx = lo + np.flatnonzero(ok)
            qual = np.concatenate([qual, idx])
            found = bool(np.any(((S[idx] - S[b]) ** 2).sum(axis=1) > delta2))
            lo = hi
        if found:
            keep[t] = True
            a = b
            qual = np.empty(0, dtype=np.int64)
            scanned = b + 1
        else:
            scanned = b
    return keep


def trivial_keep_mask(S, rows, centroid, delta):
    """Two-pointer intra-cluster trivial-match scan over one series.

    ``rows`` are ascending row indices into ``S`` belonging to a single series,
    so rows strictly between two members are exactly the subsequences that
    start between them. Member ``t`` is kept iff some row between the last
    kept member and ``t`` is farther than ``delta`` from both and from
    ``centroid``.
    """
    S = np.ascontiguousarray(S, dtype=np.float64)
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    centroid = np.ascontiguousarray(centroid, dtype=np.float64)
    delta2 = float(delta) ** 2
    if get_backend() == "numba":
        return _trivial_keep_jit(S, rows, centroid, delta2)
    return _trivial_keep_np(S, rows, centroid, delta2)


def warmup():
    """Compile the numba kernels on tiny inputs so timings exclude JIT cost."""
    X = np.zeros((3, 2))
    X[2, 0] = 5.0
    _paa_jit(np.zeros((2, 4)), _segment_bounds(4, 2))
    _nearest_cf_jit(X[0], X, np.ones(3), 3)
    _nearest_among_jit(X[0], X, np.arange(3, dtype=np.int64))
    _coin_basic_jit(X, np.arange(3, dtype=np.int64), 1.0)
    _trivial_keep_jit(X, np.array([0, 2], dtype=np.int64), X[0], 1.0)

