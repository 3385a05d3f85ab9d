"""CSV and JSON serialisation of paths and coefficient grids.

Reals are written with 17 significant digits so that a write/read cycle
reproduces every float exactly.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from ..errors import DataError
from .synthesis import WaveletCoefGrid

__all__ = [
    "fmt_real",
    "write_path_csv",
    "read_path_csv",
    "write_grid_csv",
    "read_grid_csv",
    "write_json",
    "read_json",
    "sidecar_path",
]

SIDECAR_KEYS = ("alpha", "H", "Q", "family", "N", "N_j", "delta", "T", "seed")


def fmt_real(x: float) -> str:
    return format(float(x), ".17g")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else str(v)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_json(path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # repr of a Python float is the shortest round-trip string
    path.write_text(json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n")
    return path


def read_json(path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON ({exc})") from exc


def sidecar_path(path) -> Path:
    path = Path(path)
    return path.with_suffix(".json")


def write_path_csv(path, x, meta: dict | None = None) -> Path:
    """Write ``X(t), t = 0..N`` as ``t,X`` rows plus an optional JSON sidecar."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    x = np.asarray(x, dtype=float)
    with path.open("w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["t", "X"])
        for t, v in enumerate(x):
            wr.writerow([t, fmt_real(v)])
    if meta is not None:
        write_json(sidecar_path(path), meta)
    return path


def read_path_csv(path) -> np.ndarray:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["t", "X"]:
        raise DataError(f"{path}: expected header 't,X'")
    try:
        t = np.array([int(r[0]) for r in rows[1:]])
        x = np.array([float(r[1]) for r in rows[1:]])
    except (ValueError, IndexError) as exc:
        raise DataError(f"{path}: malformed row ({exc})") from exc
    if t.size == 0 or not np.array_equal(t, np.arange(t.size)):
        raise DataError(f"{path}: t must run 0..N without gaps")
    if not np.all(np.isfinite(x)):
        raise DataError(f"{path}: non-finite path value")
    return x


def grid_sidecar(grid: WaveletCoefGrid, extra: dict | None = None) -> dict:
    meta = {k: grid.meta.get(k) for k in SIDECAR_KEYS}
    meta["N_j"] = {str(j): int(n) for j, n in grid.counts.items()}
    for k, v in grid.meta.items():
        meta.setdefault(k, v)
    if extra:
        meta.update(extra)
    return meta


def write_grid_csv(path, grid: WaveletCoefGrid, extra_meta: dict | None = None) -> Path:
    """Write ``j,k,d`` rows (``k`` from 1) and the JSON sidecar."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["j", "k", "d"])
        for j in grid.octaves:
            for k, v in enumerate(grid[j], start=1):
                wr.writerow([j, k, fmt_real(v)])
    write_json(sidecar_path(path), grid_sidecar(grid, extra_meta))
    return path


def read_grid_csv(path) -> WaveletCoefGrid:
    """Read a ``j,k,d`` file and its sidecar (if present)."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["j", "k", "d"]:
        raise DataError(f"{path}: expected header 'j,k,d'")
    coeffs: dict = {}
    try:
        for r in rows[1:]:
            j, k, d = int(r[0]), int(r[1]), float(r[2])
            lst = coeffs.setdefault(j, [])
            if k != len(lst) + 1:
                raise DataError(f"{path}: k out of sequence at octave {j}")
            lst.append(d)
    except (ValueError, IndexError) as exc:
        raise DataError(f"{path}: malformed row ({exc})") from exc
    if not coeffs:
        raise DataError(f"{path}: no coefficients")
    side = sidecar_path(path)
    meta = read_json(side) if side.is_file() else {}
    return WaveletCoefGrid({j: np.array(v) for j, v in coeffs.items()}, meta)
