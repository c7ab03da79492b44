"""Canonical JSON for motif catalogs.

Keys keep the order in which the document is built (and :func:`json.loads`
preserves it), floats are written with 9 significant digits, and indentation
is fixed, so ``dumps(loads(text)) == text`` byte for byte.
"""

import json
import math

import numpy as np

FORMAT = "coinmotif-catalog/1"
FLOAT_DIGITS = 9


def _float(x):
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite float {x!r}")
    if x == 0.0:
        # -0.0 would come back as the integer 0 and break the round trip
        return "0"
    return format(x, f".{FLOAT_DIGITS}g")


def _encode(obj, indent, level, out):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        out.append("null")
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (k, v) in enumerate(obj.items()):
            if not isinstance(k, str):
                raise TypeError(f"catalog keys must be strings, got {k!r}")
            out.append(pad + json.dumps(k, ensure_ascii=False) + ": ")
            _encode(v, indent, level + 1, out)
            out.append(",\n" if i + 1 < len(obj) else "\n")
        out.append(end + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        items = obj.tolist() if isinstance(obj, np.ndarray) else obj
        if not items:
            out.append("[]")
            return
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in items):
            # numeric vectors stay on one line
            out.append("[" + ", ".join(_scalar(v) for v in items) + "]")
            return
        out.append("[\n")
        for i, v in enumerate(items):
            out.append(pad)
            _encode(v, indent, level + 1, out)
            out.append(",\n" if i + 1 < len(items) else "\n")
        out.append(end + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def _scalar(v):
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return _float(v)


def dumps(doc, indent=2):
    """Canonical text of a catalog document (trailing newline included)."""
    out = []
    _encode(doc, indent, 0, out)
    out.append("\n")
    return "".join(out)


def loads(text):
    return json.loads(text)


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def dump(doc, path):
    text = dumps(doc)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return text


def without_timing(doc):
    """Copy of ``doc`` with every ``timing`` entry removed (for determinism checks)."""
    if isinstance(doc, dict):
        return {k: without_timing(v) for k, v in doc.items() if k != "timing"}
    if isinstance(doc, list):
        return [without_timing(v) for v in doc]
    return doc


# --------------------------------------------------------------------------
# building documents


def params_doc(params):
    return {
        "w": params.w,
        "R": params.R,
        "s": params.s,
        "f": params.f,
        "d": params.d,
        "sax_alphabet": params.sax_alphabet,
        "lsh_seed": params.lsh_seed,
        "branching": params.branching,
        "lsh_r": params.lsh_r,
        "lsh_b": params.lsh_b,
        "lsh_width": params.lsh_width,
        "t_s": params.t_s,
        "p": params.p,
        "sigma_t": params.sigma_t,
        "level_eps": params.level_eps,
        "level_min_pts": params.level_min_pts,
        "order_seed": params.order_seed,
    }


def motif_doc(catalog, motif):
    mean, lo, hi = motif.level_stats
    return {
        "id": motif.id,
        "parent": motif.parent,
        "support": motif.support,
        "level": {"mean": mean, "min": lo, "max": hi},
        "centroid": motif.centroid,
        "members": [
            {"run": run, "start": start, "level": level}
            for run, start, level in catalog.member_table(motif)
        ],
    }


def sensor_doc(catalog):
    """Document for one successful sensor run."""
    return {
        "sensor": catalog.sensor,
        "status": "ok",
        "warnings": list(catalog.warnings),
        "stages": dict(catalog.stages),
        "motifs": [motif_doc(catalog, m) for m in catalog.motifs],
        "timing": {k: float(v) for k, v in catalog.timing.items()},
    }


def failed_sensor_doc(sensor, kind, message):
    return {"sensor": sensor, "status": "error", "error": {"kind": kind, "message": message}}


def catalog_doc(params, strategy, sensors, inputs=()):
    return {
        "format": FORMAT,
        "strategy": strategy,
        "params": params_doc(params),
        "inputs": [str(p) for p in inputs],
        "sensors": list(sensors),
    }
