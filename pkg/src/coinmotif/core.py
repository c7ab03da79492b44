"""Series types and preprocessing: z-normalization through the candidate matrix.

The stages run in this order for every series::

    znormalize -> generate_subsequences -> deviation filter
               -> piecewise averaging + mean shift -> SAX de-duplication

Everything is array based. A :class:`CandidateMatrix` stores one row per
surviving window; :class:`Subsequence` is a per-row view built on demand.
"""

from dataclasses import dataclass, field
from statistics import NormalDist
import math

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from . import kernels
from .errors import ConfigError, WindowTooLong, ZeroVariance


@dataclass(frozen=True)
class TimeSeries:
    """One run of one sensor, uniformly sampled."""

    id: str
    values: np.ndarray
    sensor: str = ""

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size == 0:
            raise ValueError(f"series {self.id!r}: values must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(values)):
            raise ValueError(f"series {self.id!r}: values contain NaN or infinity")
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.size


@dataclass(frozen=True)
class ZSeries:
    source: str
    zvalues: np.ndarray
    mean: float = 0.0
    std: float = 1.0

    def __len__(self):
        return self.zvalues.size


@dataclass(frozen=True)
class Subsequence:
    series: str
    start: int
    raw: np.ndarray
    reduced: np.ndarray
    level: float


def default_radius(w, base=1.0):
    """COIN radius for window ``w``: ``base`` at w=20, scaled by sqrt(w/20)."""
    return base * math.sqrt(w / 20.0)


def default_paa_dim(w):
    return max(1, min(w // 2, 10))


@dataclass
class PipelineParams:
    """All knobs of the motif pipeline.

    ``R`` and ``d`` are derived from ``w`` when left as ``None``.
    ``lsh_width`` is the LSH quantization width as a multiple of ``R``.
    """

    w: int = 20
    R: float | None = None
    s: int = 50
    f: float = 1.0
    d: int | None = None
    sax_alphabet: int = 4
    lsh_seed: int = 0
    branching: int = 50
    lsh_r: int = 3
    lsh_b: int = 5
    lsh_width: float = 4.0
    t_s: int | None = None
    p: float = 50.0
    sigma_t: float = 2.0
    level_eps: float = 0.5
    level_min_pts: int = 2
    order_seed: int | None = None

    def __post_init__(self):
        if self.R is None:
            self.R = default_radius(self.w)
        if self.d is None:
            self.d = default_paa_dim(self.w)
        if self.t_s is None:
            self.t_s = self.d
        self.validate()

    def validate(self):
        problems = []
        if self.w < 2:
            problems.append(f"w must be >= 2 (got {self.w})")
        if not 1 <= self.d <= max(self.w, 1):
            problems.append(f"d must satisfy 1 <= d <= w (got d={self.d}, w={self.w})")
        if not self.R > 0:
            problems.append(f"R must be > 0 (got {self.R})")
        if self.s < 1:
            problems.append(f"s must be >= 1 (got {self.s})")
        if self.f < 0:
            problems.append(f"f must be >= 0 (got {self.f})")
        if self.sax_alphabet < 2:
            problems.append(f"sax_alphabet must be >= 2 (got {self.sax_alphabet})")
        if self.branching < 2:
            problems.append(f"branching must be >= 2 (got {self.branching})")
        if self.lsh_r < 1 or self.lsh_b < 1:
            problems.append("lsh_r and lsh_b must be >= 1")
        if not self.lsh_width > 0:
            problems.append(f"lsh_width must be > 0 (got {self.lsh_width})")
        if self.t_s < 1:
            problems.append(f"t_s must be >= 1 (got {self.t_s})")
        if not 0 < self.p <= 100:
            problems.append(f"p must be in (0, 100] (got {self.p})")
        if not self.sigma_t > 0:
            problems.append(f"sigma_t must be > 0 (got {self.sigma_t})")
        if not self.level_eps > 0 or self.level_min_pts < 1:
            problems.append("level_eps must be > 0 and level_min_pts >= 1")
        if problems:
            raise ConfigError("; ".join(problems))

    @property
    def delta(self):
        return 2.0 * self.R


# --------------------------------------------------------------------------
# F1 - F2


def znormalize(series):
    """Z-score a series using the population standard deviation.

    Raises
    ------
    ZeroVariance
        If the series is constant.
    """
    values = series.values if isinstance(series, TimeSeries) else np.asarray(series, dtype=np.float64)
    source = series.id if isinstance(series, TimeSeries) else ""
    mean = float(values.mean())
    std = float(values.std())
    if std == 0.0 or not np.isfinite(std):
        raise ZeroVariance(f"series {source!r} is constant")
    return ZSeries(source, (values - mean) / std, mean, std)


def generate_subsequences(z, w):
    """All length-``w`` windows of ``z``, one per row, window ``k`` covering ``[k, k + w)``.

    The result is a read-only strided view, not a copy.
    """
    values = z.zvalues if isinstance(z, ZSeries) else np.asarray(z, dtype=np.float64)
    if w < 2:
        raise ConfigError(f"window length must be >= 2, got {w}")
    if w > values.size:
        raise WindowTooLong(f"window {w} longer than series of length {values.size}")
    return sliding_window_view(values, w)


# --------------------------------------------------------------------------
# F3


def deviation_mask(windows, f):
    windows = np.asarray(windows)
    if windows.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    return (windows.max(axis=1) - windows.min(axis=1)) >= f


def filter_low_deviation(windows, f):
    """Windows whose max-minus-min spread is at least ``f``, order preserved."""
    windows = np.asarray(windows)
    return windows[deviation_mask(windows, f)]


# --------------------------------------------------------------------------
# F4


def reduce_rows(windows, d):
    """Piecewise-average ``windows`` to ``d`` dims and mean-shift each row.

    Returns ``(reduced, level)`` where ``reduced + level[:, None]`` is the
    piecewise average before shifting.
    """
    averaged = kernels.paa(windows, d)
    level = averaged.mean(axis=1)
    return averaged - level[:, None], level


def reduce_and_merge_level(window, d):
    reduced, level = reduce_rows(np.asarray(window, dtype=np.float64)[None, :], d)
    return reduced[0], float(level[0])


# --------------------------------------------------------------------------
# F5


def sax_breakpoints(alphabet):
    """Gaussian equiprobable breakpoints for an alphabet of size ``alphabet``."""
    if alphabet < 2:
        raise ConfigError(f"SAX alphabet must be >= 2, got {alphabet}")
    nd = NormalDist()
    return np.array([nd.inv_cdf(i / alphabet) for i in range(1, alphabet)])


def sax_symbols(reduced, alphabet=4):
    """Integer SAX symbols; a value equal to a breakpoint takes the upper symbol."""
    return np.searchsorted(sax_breakpoints(alphabet), np.asarray(reduced), side="right").astype(np.int8)


def sax_encode(reduced, alphabet=4):
    """SAX word for one vector, e.g. ``"abcd"``."""
    return "".join(chr(ord("a") + int(c)) for c in sax_symbols(np.ravel(reduced), alphabet))


def first_of_runs(words, series_index=None):
    """Mask keeping a window unless its word equals the previous kept word of the same series.

    A dropped window always equals the last kept one, so comparing with the
    immediate predecessor gives the same result.
    """
    words = np.asarray(words)
    n = words.shape[0]
    keep = np.ones(n, dtype=bool)
    if n < 2:
        return keep
    same = words[1:] == words[:-1]
    if same.ndim > 1:
        same = same.all(axis=tuple(range(1, same.ndim)))
    if series_index is not None:
        series_index = np.asarray(series_index)
        same &= series_index[1:] == series_index[:-1]
    keep[1:] = ~same
    return keep


def drop_consecutive_duplicates(words, series_index=None):
    """Positions kept by the neighbouring-duplicate rule."""
    return np.flatnonzero(first_of_runs(words, series_index))


# --------------------------------------------------------------------------
# full matrix and candidate matrix


@dataclass
class SubsequenceMatrix:
    """Every window of every usable series after F4 (nothing filtered).

    Rows of one series are contiguous and ordered by start, so row ``offsets[i] + t``
    is the window of series ``i`` starting at ``t``.
    """

    series_ids: list
    offsets: np.ndarray
    reduced: np.ndarray
    level: np.ndarray
    deviation: np.ndarray
    w: int
    d: int
    zseries: list = field(repr=False, default_factory=list)

    def __len__(self):
        return self.reduced.shape[0]

    def locate(self, rows):
        """``(series_index, start)`` arrays for global row indices."""
        rows = np.asarray(rows, dtype=np.int64)
        series = np.searchsorted(self.offsets, rows, side="right") - 1
        return series, rows - self.offsets[series]

    def raw(self, row):
        series, start = self.locate([row])
        return self.zseries[series[0]].zvalues[start[0]:start[0] + self.w]


@dataclass
class CandidateMatrix:
    """Windows surviving the deviation filter and SAX de-duplication."""

    rows: np.ndarray
    series_index: np.ndarray
    start: np.ndarray
    reduced: np.ndarray
    level: np.ndarray
    w: int
    d: int
    full: SubsequenceMatrix = field(repr=False, default=None)

    def __len__(self):
        return self.rows.shape[0]

    def __getitem__(self, i):
        sid = self.full.series_ids[self.series_index[i]] if self.full is not None else str(self.series_index[i])
        raw = self.full.raw(self.rows[i]) if self.full is not None else None
        return Subsequence(sid, int(self.start[i]), raw, self.reduced[i], float(self.level[i]))

    @classmethod
    def from_vectors(cls, reduced, level=None):
        """A bare matrix over given reduced vectors (one pseudo-series, starts 0..n-1)."""
        reduced = np.asarray(reduced, dtype=np.float64).reshape(len(reduced), -1)
        n, d = reduced.shape
        return cls(
            rows=np.arange(n),
            series_index=np.zeros(n, dtype=np.int64),
            start=np.arange(n),
            reduced=reduced,
            level=np.zeros(n) if level is None else np.asarray(level, dtype=np.float64),
            w=d,
            d=d,
        )


def build_subsequence_matrix(zseries, w, d):
    """Stack F2 and F4 over several z-normalized series.

    Series shorter than ``w`` contribute no rows (they get an empty block).
    """
    reduced, levels, devs, offsets = [], [], [], [0]
    for z in zseries:
        if len(z) < w:
            offsets.append(offsets[-1])
            continue
        windows = generate_subsequences(z, w)
        r, lv = reduce_rows(windows, d)
        reduced.append(r)
        levels.append(lv)
        devs.append(windows.max(axis=1) - windows.min(axis=1))
        offsets.append(offsets[-1] + windows.shape[0])
    return SubsequenceMatrix(
        series_ids=[z.source for z in zseries],
        offsets=np.asarray(offsets[:-1], dtype=np.int64),
        reduced=np.concatenate(reduced) if reduced else np.empty((0, d)),
        level=np.concatenate(levels) if levels else np.empty(0),
        deviation=np.concatenate(devs) if devs else np.empty(0),
        w=w,
        d=d,
        zseries=list(zseries),
    )


def build_candidate_matrix(full, f, alphabet=4):
    """Apply the deviation filter and SAX neighbour de-duplication to ``full``."""
    survivors = np.flatnonzero(full.deviation >= f)
    series, start = full.locate(survivors)
    words = sax_symbols(full.reduced[survivors], alphabet)
    keep = first_of_runs(words, series)
    rows = survivors[keep]
    return CandidateMatrix(
        rows=rows,
        series_index=series[keep],
        start=start[keep],
        reduced=full.reduced[rows],
        level=full.level[rows],
        w=full.w,
        d=full.d,
        full=full,
    )
