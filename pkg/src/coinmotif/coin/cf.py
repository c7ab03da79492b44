from dataclasses import dataclass, field

import numpy as np

from ..errors import RadiusViolation


@dataclass
class ClusterFeature:
    """BIRCH clustering feature: member count, linear sum and scalar squared sum."""

    count: int
    linear_sum: np.ndarray
    squared_sum: float

    @classmethod
    def of_point(cls, x):
        x = np.asarray(x, dtype=np.float64)
        return cls(1, x.copy(), float(x @ x))

    @classmethod
    def of_points(cls, X):
        X = np.asarray(X, dtype=np.float64)
        return cls(X.shape[0], X.sum(axis=0), float(np.einsum("ij,ij->", X, X)))

    @property
    def centroid(self):
        return self.linear_sum / self.count

    def merge(self, other):
        return ClusterFeature(
            self.count + other.count,
            self.linear_sum + other.linear_sum,
            self.squared_sum + other.squared_sum,
        )

    def add(self, x):
        """In-place insertion of one point."""
        x = np.asarray(x, dtype=np.float64)
        self.count += 1
        self.linear_sum = self.linear_sum + x
        self.squared_sum += float(x @ x)
        return self

    def radius(self):
        """Root-mean-square distance of the members from the centroid."""
        c = self.centroid
        return float(np.sqrt(max(self.squared_sum / self.count - c @ c, 0.0)))


@dataclass
class Cluster:
    """A COIN cluster. ``members`` holds row indices into the clustered matrix, in insertion order."""

    id: int
    cf: ClusterFeature
    members: list = field(default_factory=list)

    @property
    def centroid(self):
        return self.cf.centroid

    @property
    def support(self):
        return len(self.members)

    def __len__(self):
        return len(self.members)


def insert_into_cluster(cluster, row, x, radius):
    """Add point ``x`` (matrix row ``row``) to ``cluster``.

    Raises
    ------
    RadiusViolation
        If ``x`` is farther than ``radius`` from the current centroid.
    """
    dist = float(np.linalg.norm(np.asarray(x) - cluster.centroid))
    if dist > radius:
        raise RadiusViolation(f"point {row} is {dist:.6g} from cluster {cluster.id} (R={radius})")
    cluster.cf.add(x)
    cluster.members.append(row)
    return cluster
