"""Bounded-radius (COIN) subsequence clustering with basic, CF-tree and LSH candidate sets."""

from .birch import CFTree
from .cf import Cluster, ClusterFeature, insert_into_cluster
from .engine import (
    STRATEGIES,
    candidate_clusters_basic,
    candidate_clusters_birch,
    candidate_clusters_lsh,
    cluster_labels,
    clusters_from_labels,
    coin_cluster,
)
from .lsh import LshIndex, collision_recall

__all__ = [
    "CFTree",
    "Cluster",
    "ClusterFeature",
    "LshIndex",
    "STRATEGIES",
    "candidate_clusters_basic",
    "candidate_clusters_birch",
    "candidate_clusters_lsh",
    "cluster_labels",
    "clusters_from_labels",
    "coin_cluster",
    "collision_recall",
    "insert_into_cluster",
]
