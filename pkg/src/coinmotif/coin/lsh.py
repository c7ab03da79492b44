"""Quantized Gaussian-projection LSH over cluster centroids.

Each of ``b`` tables hashes a vector with ``r`` functions
``floor((a . x + o) / W)`` (``a`` standard normal, ``o`` uniform in ``[0, W)``)
and uses the ``r``-tuple as the bucket id. A cluster is a candidate for a
point when their bucket ids agree in at least one table.
"""

import numpy as np


class LshIndex:
    """Bucket index of live cluster centroids.

    Parameters
    ----------
    d : int
        Dimension of the hashed vectors.
    width : float
        Quantization width ``W`` in distance units.
    r : int
        Hash functions concatenated per bucket id.
    b : int
        Number of tables (bucket ids per vector).
    seed : int
        Seed for the projection directions and offsets.
    """

    def __init__(self, d, width, r=3, b=5, seed=0):
        if width <= 0:
            raise ValueError("quantization width must be positive")
        rng = np.random.default_rng(seed)
        self.d = d
        self.width = float(width)
        self.r = r
        self.b = b
        self.seed = seed
        self.planes = rng.standard_normal((b, r, d))
        self.offsets = rng.uniform(0.0, self.width, size=(b, r))
        self._proj = np.ascontiguousarray(self.planes.reshape(b * r, d) / self.width)
        self._shift = self.offsets.reshape(b * r) / self.width
        self.tables = [{} for _ in range(b)]
        self._arrays = [{} for _ in range(b)]
        self.registered = {}

    def _hash(self, x):
        return np.floor(self._proj @ x + self._shift).astype(np.int64).reshape(self.b, self.r)

    def _keys(self, x):
        h = self._hash(x)
        return tuple(h[t].tobytes() for t in range(self.b))

    def keys_many(self, X):
        """Internal bucket keys for every row of ``X`` (one matrix product)."""
        H = np.floor(np.asarray(X) @ self._proj.T + self._shift).astype(np.int64)
        H = H.reshape(-1, self.b, self.r)
        return [tuple(row[t].tobytes() for t in range(self.b)) for row in H]

    def bucket_ids(self, x):
        """The ``b`` bucket ids of ``x`` as a tuple of ``r``-tuples."""
        return tuple(tuple(row) for row in self._hash(x).tolist())

    def _add(self, t, key, cluster_id):
        bucket = self.tables[t].get(key)
        if bucket is None:
            self.tables[t][key] = {cluster_id}
        else:
            bucket.add(cluster_id)
        self._arrays[t].pop(key, None)

    def _remove(self, t, key, cluster_id):
        bucket = self.tables[t][key]
        bucket.discard(cluster_id)
        if not bucket:
            del self.tables[t][key]
        self._arrays[t].pop(key, None)

    def register(self, cluster_id, centroid, keys=None):
        if keys is None:
            keys = self._keys(centroid)
        for t, key in enumerate(keys):
            self._add(t, key, cluster_id)
        self.registered[cluster_id] = keys

    def update(self, cluster_id, centroid):
        """Re-register a drifted centroid if any of its bucket ids changed."""
        old = self.registered[cluster_id]
        new = self._keys(centroid)
        if new == old:
            return False
        for t, (ko, kn) in enumerate(zip(old, new)):
            if ko != kn:
                self._remove(t, ko, cluster_id)
                self._add(t, kn, cluster_id)
        self.registered[cluster_id] = new
        return True

    def candidates(self, x, ordered=True, keys=None):
        """Cluster ids sharing at least one bucket id with ``x``.

        Sorted and unique by default. With ``ordered=False`` the per-table
        buckets are just concatenated, so an id may repeat; a nearest-centroid
        search with explicit id tie-breaking does not care.
        """
        if keys is None:
            keys = self._keys(x)
        parts = []
        for t, key in enumerate(keys):
            bucket = self.tables[t].get(key)
            if not bucket:
                continue
            arr = self._arrays[t].get(key)
            if arr is None:
                arr = np.fromiter(bucket, dtype=np.int64, count=len(bucket))
                self._arrays[t][key] = arr
            parts.append(arr)
        if not parts:
            return np.empty(0, dtype=np.int64)
        out = np.concatenate(parts) if len(parts) > 1 else parts[0]
        return np.unique(out) if ordered else out

    def __len__(self):
        return len(self.registered)


def collision_recall(d, radius, width, r=3, b=5, trials=1000, seed=0, scale=1.0):
    """Monte Carlo recall of the candidate rule for pairs at distance <= ``radius``.

    Centroids are drawn from ``N(0, scale^2 I)``; each point is placed uniformly
    in the ball of ``radius`` around its centroid. A fresh index is built for every
    trial from a seed stream derived from ``seed``. Returns the fraction of
    trials where the centroid is among the point's candidates.
    """
    rng = np.random.default_rng(seed)
    hits = 0
    for t in range(trials):
        c = rng.normal(0.0, scale, d)
        u = rng.standard_normal(d)
        u *= radius * rng.uniform() ** (1.0 / d) / np.linalg.norm(u)
        index = LshIndex(d, width, r=r, b=b, seed=int(rng.integers(2**31)))
        index.register(0, c)
        hits += int(0 in index.candidates(c + u))
    return hits / trials
