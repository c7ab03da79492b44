"""Standalone SVG plots of motifs: member windows overlaid, centroid on top.

Hand-written SVG keeps the package free of plotting dependencies; the files
open in any browser.
"""

from html import escape
from pathlib import Path
import re

import numpy as np

WIDTH, HEIGHT = 640, 400
MARGIN = dict(left=70, right=20, top=40, bottom=50)


def _nice_ticks(lo, hi, n=5):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(n, 1)
    mag = 10.0 ** np.floor(np.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    first = np.ceil(lo / step) * step
    ticks = np.arange(first, hi + step * 1e-9, step)
    return [float(t) for t in ticks]


def _fmt(v):
    return f"{v:.6g}"


def centroid_curve(centroid, w, level, scale=1.0, offset=0.0):
    """Expand a ``d``-dimensional centroid to ``w`` samples (one step per segment)."""
    d = len(centroid)
    edges = [(i * w) // d for i in range(d + 1)]
    out = np.empty(w)
    for i in range(d):
        out[edges[i]:edges[i + 1]] = centroid[i]
    return (out + level) * scale + offset


def motif_svg(windows, centroid_line, title, ylabel, xlabel="sample index within window", members=None):
    """SVG text for one motif.

    Parameters
    ----------
    windows : ndarray, shape (k, w)
        Member windows in the units to be shown.
    centroid_line : ndarray, shape (w,)
        Centroid in the same units.
    members : list of (run, start), optional
        Provenance written onto each member path as ``data-run``/``data-start``.
    """
    windows = np.asarray(windows, dtype=np.float64)
    k, w = windows.shape
    ys = np.concatenate([windows.ravel(), centroid_line])
    lo, hi = float(ys.min()), float(ys.max())
    pad = 0.05 * (hi - lo) if hi > lo else 1.0
    lo, hi = lo - pad, hi + pad
    x0, x1 = MARGIN["left"], WIDTH - MARGIN["right"]
    y0, y1 = HEIGHT - MARGIN["bottom"], MARGIN["top"]

    def sx(x):
        return x0 + (x1 - x0) * x / max(w - 1, 1)

    def sy(y):
        return y0 + (y1 - y0) * (y - lo) / (hi - lo)

    def path(vals):
        return " ".join(f"{'M' if i == 0 else 'L'}{sx(i):.2f},{sy(v):.2f}" for i, v in enumerate(vals))

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>',
        f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>',
    ]
    for t in _nice_ticks(0, w - 1):
        parts.append(f'<line x1="{sx(t):.2f}" y1="{y0}" x2="{sx(t):.2f}" y2="{y0 + 4}" stroke="black"/>')
        parts.append(f'<text x="{sx(t):.2f}" y="{y0 + 16}" text-anchor="middle">{_fmt(t)}</text>')
    for t in _nice_ticks(lo, hi):
        parts.append(f'<line x1="{x0 - 4}" y1="{sy(t):.2f}" x2="{x0}" y2="{sy(t):.2f}" stroke="black"/>')
        parts.append(f'<text x="{x0 - 6}" y="{sy(t) + 4:.2f}" text-anchor="end">{_fmt(t)}</text>')
    parts.append(f'<text x="{(x0 + x1) / 2:.1f}" y="{HEIGHT - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    parts.append(
        f'<text x="16" y="{(y0 + y1) / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {(y0 + y1) / 2:.1f})">{escape(ylabel)}</text>'
    )
    opacity = max(0.05, min(0.6, 8.0 / max(k, 1)))
    parts.append(f'<g class="members" fill="none" stroke="steelblue" stroke-opacity="{opacity:.3f}">')
    for i, row in enumerate(windows):
        tag = ""
        if members is not None:
            run, start = members[i]
            tag = f' data-run="{escape(str(run))}" data-start="{int(start)}"'
        parts.append(f'<path{tag} d="{path(row)}"/>')
    parts.append("</g>")
    parts.append(f'<path class="centroid" d="{path(centroid_line)}" fill="none" stroke="crimson" stroke-width="2.5"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def catalog_motif_svg(catalog, motif):
    """SVG for a motif of a :class:`~coinmotif.extract.MotifCatalog`, in sensor units."""
    windows = catalog.member_windows(motif, original_units=True)
    series, _ = catalog.full.locate(motif.rows)
    zs = [catalog.full.zseries[s] for s in series]
    scale = float(np.mean([z.std for z in zs]))
    offset = float(np.mean([z.mean for z in zs]))
    line = centroid_curve(motif.centroid, catalog.full.w, float(motif.levels.mean()), scale, offset)
    title = f"{catalog.sensor}: motif {motif.id} (support {motif.support})"
    members = [(run, start) for run, start, _ in catalog.member_table(motif)]
    return motif_svg(windows, line, title, ylabel=f"{catalog.sensor} (sensor units)", members=members)


def safe_name(text):
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", text) or "sensor"


def write_motif_plots(catalog, directory):
    """One ``<sensor>_motif_<id>.svg`` per motif; returns the paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for m in catalog.motifs:
        p = directory / f"{safe_name(catalog.sensor)}_motif_{m.id:03d}.svg"
        p.write_text(catalog_motif_svg(catalog, m), encoding="utf-8")
        paths.append(p)
    return paths
