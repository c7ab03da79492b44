"""Frequent time-series motif discovery with bounded-radius (COIN) subsequence clustering."""

from ._backend import get_backend, set_backend
from .coin import Cluster, ClusterFeature, coin_cluster
from .core import (
    CandidateMatrix,
    PipelineParams,
    Subsequence,
    TimeSeries,
    ZSeries,
    znormalize,
)
from .extract import GroupMotif, Motif, MotifCatalog, ShiftTestParams, discover_motifs

__version__ = "0.1.0"

__all__ = [
    "CandidateMatrix",
    "Cluster",
    "ClusterFeature",
    "GroupMotif",
    "Motif",
    "MotifCatalog",
    "PipelineParams",
    "ShiftTestParams",
    "Subsequence",
    "TimeSeries",
    "ZSeries",
    "coin_cluster",
    "discover_motifs",
    "get_backend",
    "set_backend",
    "znormalize",
]
