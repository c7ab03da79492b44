"""From clusters to motifs: support filter, shifted-cluster removal, intra-cluster
trivial-match removal, a second shifted-cluster pass, and level splitting.

:func:`discover_motifs` runs the whole chain, preprocessing included.
"""

from dataclasses import asdict, dataclass, field
import logging
import time

import numpy as np
from sklearn.cluster import DBSCAN

from . import kernels
from .coin import coin_cluster
from .core import (
    PipelineParams,
    TimeSeries,
    build_candidate_matrix,
    build_subsequence_matrix,
    znormalize,
)
from .errors import NoSeries, ZeroVariance

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ShiftTestParams:
    t_s: int = 10
    p: float = 50.0
    sigma_t: float = 2.0

    def __post_init__(self):
        if self.t_s < 1 or not 0 < self.p <= 100 or not self.sigma_t > 0:
            raise ValueError(f"invalid shift-test parameters {self}")


@dataclass
class GroupMotif:
    """A cluster after post-processing. ``rows`` index the full subsequence matrix, ascending."""

    id: int
    rows: np.ndarray
    centroid: np.ndarray

    @property
    def support(self):
        return int(self.rows.shape[0])

    @classmethod
    def from_rows(cls, id, rows, full):
        rows = np.sort(np.asarray(rows, dtype=np.int64))
        return cls(id, rows, full.reduced[rows].mean(axis=0))


@dataclass
class Motif:
    id: int
    parent: int
    rows: np.ndarray
    centroid: np.ndarray
    levels: np.ndarray

    @property
    def support(self):
        return int(self.rows.shape[0])

    @property
    def level_stats(self):
        return float(self.levels.mean()), float(self.levels.min()), float(self.levels.max())


@dataclass
class MotifCatalog:
    """Result of one pipeline run over the series of one sensor."""

    sensor: str
    params: PipelineParams
    strategy: str
    stages: dict
    motifs: list
    group_motifs: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    timing: dict = field(default_factory=dict)
    full: object = field(default=None, repr=False)

    def member_table(self, motif):
        """``[(series_id, start, level), ...]`` for the members of ``motif``."""
        series, start = self.full.locate(motif.rows)
        ids = self.full.series_ids
        return [(ids[s], int(t), float(lv)) for s, t, lv in zip(series, start, motif.levels)]

    def member_windows(self, motif, original_units=True):
        """Raw member windows, optionally mapped back to sensor units."""
        series, start = self.full.locate(motif.rows)
        w = self.full.w
        out = np.empty((motif.support, w))
        for i, (s, t) in enumerate(zip(series, start)):
            z = self.full.zseries[s]
            win = z.zvalues[t:t + w]
            out[i] = win * z.std + z.mean if original_units else win
        return out


# --------------------------------------------------------------------------
# F7


def filter_support(clusters, s):
    """Clusters with strictly more than ``s`` members."""
    return [c for c in clusters if c.support > s]


# --------------------------------------------------------------------------
# F8


def diff_list(rows1, rows2, full, t_s):
    """Start-time differences between members of ``rows1`` and their nearest close-by partner in ``rows2``.

    For each member of the first group (ascending), the members of the second
    group in the same series whose start lies less than ``t_s`` samples away
    are compared by distance; the nearest one (ties: earliest) contributes
    ``start2 - start1``. Members with no such partner contribute nothing.
    """
    rows1 = np.asarray(rows1, dtype=np.int64)
    rows2 = np.asarray(rows2, dtype=np.int64)
    if rows1.size == 0 or rows2.size == 0:
        return np.empty(0, dtype=np.int64)
    # rows of one series are consecutive starts, so a row window is a start window
    lo = np.searchsorted(rows2, rows1 - t_s, side="right")
    hi = np.searchsorted(rows2, rows1 + t_s, side="left")
    cnt = hi - lo
    if not cnt.any():
        return np.empty(0, dtype=np.int64)
    # flatten every (member, partner) pair in the start window
    owner = np.repeat(np.arange(rows1.size), cnt)
    first = np.repeat(lo - np.concatenate(([0], np.cumsum(cnt)[:-1])), cnt)
    cand = rows2[np.arange(owner.size) + first]
    src = rows1[owner]
    s1, _ = full.locate(src)
    s2, _ = full.locate(cand)
    same = s1 == s2
    owner, cand, src = owner[same], cand[same], src[same]
    if owner.size == 0:
        return np.empty(0, dtype=np.int64)
    diff = full.reduced[cand] - full.reduced[src]
    d2 = np.einsum("ij,ij->i", diff, diff)
    # nearest partner per member, ties to the earliest start
    order = np.lexsort((cand, d2, owner))
    owner, cand, src = owner[order], cand[order], src[order]
    head = np.concatenate(([True], owner[1:] != owner[:-1]))
    return (cand[head] - src[head]).astype(np.int64)


def detect_shifted_pair(h1, h2, full, params):
    """True when ``h1`` (the smaller group) is a time-shifted copy of ``h2``.

    The diff-list must cover at least ``p`` percent of ``h1`` and its
    population standard deviation must be below ``sigma_t``.
    """
    rows1 = getattr(h1, "rows", h1)
    rows2 = getattr(h2, "rows", h2)
    n1 = len(rows1)
    if n1 == 0:
        return False
    # cheap necessary condition before any distance work
    lo = np.searchsorted(rows2, np.asarray(rows1) - params.t_s, side="right")
    hi = np.searchsorted(rows2, np.asarray(rows1) + params.t_s, side="left")
    if np.count_nonzero(hi > lo) * 100.0 < params.p * n1:
        return False
    dl = diff_list(rows1, rows2, full, params.t_s)
    if dl.size == 0 or dl.size * 100.0 < params.p * n1:
        return False
    return bool(np.std(dl) < params.sigma_t)


def _proximity_counts(groups, n_rows, t_s):
    """Members of group ``i`` with some member of group ``j`` less than ``t_s`` rows away.

    Returns parallel arrays ``(i, j, count)`` over the pairs with a non-zero
    count. Needs disjoint groups (clusters always are); returns None
    otherwise so the caller skips the bound. Pairs across a series boundary
    are counted too; that only loosens this upper bound.
    """
    owner = np.full(n_rows, -1, dtype=np.int64)
    member_rows, member_owner = [], []
    for i, g in enumerate(groups):
        owner[g.rows] = i
        member_rows.append(g.rows)
        member_owner.append(np.full(g.rows.size, i, dtype=np.int64))
    empty = np.empty(0, dtype=np.int64)
    if not member_rows:
        return empty, empty, empty
    rows = np.concatenate(member_rows)
    if np.count_nonzero(owner >= 0) != rows.size:
        return None
    own = np.concatenate(member_owner)
    G = len(groups)
    keys = []
    for off in range(-t_s + 1, t_s):
        if off == 0:
            continue
        nb = rows + off
        ok = (nb >= 0) & (nb < n_rows)
        other = np.full(rows.size, -1, dtype=np.int64)
        other[ok] = owner[nb[ok]]
        sel = (other >= 0) & (other != own)
        # one key per (member row, neighbouring group)
        keys.append(rows[sel] * G + other[sel])
    keys = np.unique(np.concatenate(keys)) if keys else empty
    if keys.size == 0:
        return empty, empty, empty
    pair = owner[keys // G] * G + keys % G
    uniq, counts = np.unique(pair, return_counts=True)
    return uniq // G, uniq % G, counts


def remove_shifted(groups, full, params):
    """Drop groups that are shifted copies of larger ones.

    Groups are visited by decreasing support (ties: lower id first). Each
    surviving group is compared with every smaller surviving group after it;
    a smaller group that tests as shifted is dropped at once and takes no
    further part. Survivors are returned in id order.
    """
    order = sorted(groups, key=lambda g: (-g.support, g.id))
    G = len(order)
    near = _proximity_counts(order, len(full), params.t_s)
    if near is None:
        partners = [range(i + 1, G) for i in range(G)]
    else:
        small, big, count = near
        support = np.array([g.support for g in order], dtype=np.float64)
        # coverage bound: the diff-list of ``small`` cannot be longer than ``count``
        sel = (big < small) & (count * 100.0 >= params.p * support[small])
        partners = [[] for _ in range(G)]
        for i, j in sorted(zip(big[sel].tolist(), small[sel].tolist())):
            partners[i].append(j)
    alive = [True] * G
    for i, big_group in enumerate(order):
        if not alive[i]:
            continue
        for j in partners[i]:
            if alive[j] and detect_shifted_pair(order[j], big_group, full, params):
                alive[j] = False
    return sorted((g for g, a in zip(order, alive) if a), key=lambda g: g.id)


# --------------------------------------------------------------------------
# F9


def remove_trivial_within(group, full, delta):
    """Two-pointer trivial-match removal inside one group.

    Within each series the anchor starts at the first member; the next member
    is kept only if some subsequence of the full matrix starting strictly
    between the two is farther than ``delta`` from both members and from the
    group centroid. A kept member becomes the new anchor. The centroid is
    recomputed from the survivors.
    """
    rows = group.rows
    if rows.size < 2:
        return group
    series, _ = full.locate(rows)
    keep = np.zeros(rows.size, dtype=bool)
    cuts = np.flatnonzero(np.diff(series)) + 1
    for seg in np.split(np.arange(rows.size), cuts):
        keep[seg] = kernels.trivial_keep_mask(full.reduced, rows[seg], group.centroid, delta)
    kept = rows[keep]
    return GroupMotif(group.id, kept, full.reduced[kept].mean(axis=0))


# --------------------------------------------------------------------------
# F10


def split_level_labels(levels, eps=0.5, min_pts=2):
    """1-D DBSCAN labels for member levels (-1 marks noise)."""
    levels = np.asarray(levels, dtype=np.float64).reshape(-1)
    n = levels.shape[0]
    if n == 0:
        return np.empty(0, dtype=np.int64)
    # one unbroken chain of eps-gaps is a single cluster when every point is core
    if n >= min_pts and min_pts <= 2 and np.all(np.diff(np.sort(levels)) <= eps):
        return np.zeros(n, dtype=np.int64)
    return DBSCAN(eps=eps, min_samples=min_pts).fit_predict(levels.reshape(-1, 1))


def split_levels(group, full, eps=0.5, min_pts=2, s=1, first_id=0):
    """Split a group-motif by member level; keep level clusters with more than ``s`` members.

    Motifs come out ordered by mean level.
    """
    levels = full.level[group.rows]
    labels = split_level_labels(levels, eps, min_pts)
    parts = []
    for lab in np.unique(labels[labels >= 0]):
        idx = np.flatnonzero(labels == lab)
        if idx.size > s:
            parts.append(idx)
    parts.sort(key=lambda idx: (levels[idx].mean(), idx[0]))
    motifs = []
    for k, idx in enumerate(parts):
        rows = group.rows[idx]
        motifs.append(Motif(first_id + k, group.id, rows, full.reduced[rows].mean(axis=0), levels[idx]))
    return motifs


# --------------------------------------------------------------------------
# pipeline


def _member_count(groups):
    return int(sum(g.support for g in groups))


def discover_motifs(series, params=None, strategy="birch", sensor=None):
    """Run preprocessing, clustering and motif extraction over a set of series.

    Parameters
    ----------
    series : TimeSeries or sequence of TimeSeries
        Runs of a single sensor.
    params : PipelineParams, optional
        Defaults to ``PipelineParams()``.
    strategy : {"basic", "birch", "lsh"}
        Candidate-set strategy for clustering.
    sensor : str, optional
        Name recorded in the catalog; taken from the first series otherwise.

    Returns
    -------
    MotifCatalog
    """
    if isinstance(series, TimeSeries):
        series = [series]
    series = list(series)
    if not series:
        raise NoSeries("no series to analyse")
    params = params or PipelineParams()
    params.validate()
    sensor = sensor if sensor is not None else series[0].sensor
    warnings = []
    timing = {}
    stages = {"series": len(series)}

    t0 = time.perf_counter()
    zs = []
    for ts in series:
        try:
            zs.append(znormalize(ts))
        except ZeroVariance:
            msg = f"series {ts.id!r}: zero variance, skipped"
            logger.warning(msg)
            warnings.append(msg)
            continue
        if len(ts) < params.w:
            msg = f"series {ts.id!r}: length {len(ts)} shorter than window {params.w}, no subsequences"
            logger.warning(msg)
            warnings.append(msg)
    stages["series_used"] = len(zs)
    full = build_subsequence_matrix(zs, params.w, params.d)
    stages["subsequences"] = len(full)
    stages["after_deviation_filter"] = int(np.count_nonzero(full.deviation >= params.f))
    cand = build_candidate_matrix(full, params.f, params.sax_alphabet)
    stages["candidates"] = len(cand)
    timing["preprocess"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    clusters = coin_cluster(
        cand.reduced,
        params.R,
        strategy,
        branching=params.branching,
        lsh_r=params.lsh_r,
        lsh_b=params.lsh_b,
        lsh_width=params.lsh_width,
        lsh_seed=params.lsh_seed,
        order_seed=params.order_seed,
    )
    stages["clusters"] = len(clusters)
    timing["cluster"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    strong = filter_support(clusters, params.s)
    groups = [GroupMotif.from_rows(c.id, cand.rows[c.members], full) for c in strong]
    stages["high_support_clusters"] = len(groups)
    stages["high_support_members"] = _member_count(groups)

    shift = ShiftTestParams(params.t_s, params.p, params.sigma_t)
    groups = remove_shifted(groups, full, shift)
    stages["after_shift_removal_clusters"] = len(groups)
    stages["after_shift_removal_members"] = _member_count(groups)
    timing["shift_removal"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    groups = [remove_trivial_within(g, full, params.delta) for g in groups]
    stages["after_trivial_removal_clusters"] = len(groups)
    stages["after_trivial_removal_members"] = _member_count(groups)
    timing["trivial_removal"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    groups = remove_shifted(groups, full, shift)
    stages["group_motifs"] = len(groups)
    stages["group_motif_members"] = _member_count(groups)

    motifs = []
    for g in groups:
        motifs.extend(split_levels(g, full, params.level_eps, params.level_min_pts, params.s, len(motifs)))
    stages["motifs"] = len(motifs)
    stages["motif_members"] = _member_count(motifs)
    timing["extract"] = time.perf_counter() - t0

    return MotifCatalog(sensor, params, strategy, stages, motifs, groups, warnings, timing, full)


def params_dict(params):
    return asdict(params)
