"""Readers for distance-matrix CSV, point-cloud CSV and symbolic-space JSON."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .metric import FiniteMetricSpace, MetricError, build_euclidean, build_from_matrix
from .symbolic import DistanceSpec, Example3Config, SymbolicSpace, example3_space, realize_space

__all__ = ["InputError", "read_rows", "load_distance_csv", "load_points_csv", "load_symbolic_json", "load_space"]


class InputError(ValueError):
    """Input file could not be parsed into a space."""


def read_rows(path) -> tuple[list[list[float]], bool]:
    """Numeric rows of a CSV file and whether it had a '#' header line."""
    rows = []
    header = False
    with open(path, newline="") as fh:
        for k, row in enumerate(csv.reader(fh)):
            if not row or all(not c.strip() for c in row):
                continue
            if row[0].lstrip().startswith("#"):
                if k == 0:
                    header = True
                    continue
                raise InputError(f"{path}: comment line after the first row")
            try:
                rows.append([float(c) for c in row])
            except ValueError as exc:
                raise InputError(f"{path}: non-numeric entry in row {k + 1}") from exc
    if not rows:
        raise InputError(f"{path}: no data rows")
    return rows, header


def load_distance_csv(path) -> FiniteMetricSpace:
    rows, _ = read_rows(path)
    if any(len(r) != len(rows) for r in rows):
        raise InputError(f"{path}: distance matrix is not square")
    try:
        return build_from_matrix(rows)
    except MetricError as exc:
        raise InputError(f"{path}: {exc}") from exc


def load_points_csv(path, norm: str = "euclidean") -> FiniteMetricSpace:
    rows, _ = read_rows(path)
    if len({len(r) for r in rows}) != 1:
        raise InputError(f"{path}: points have mismatched dimensions")
    try:
        return build_euclidean(rows, norm=norm)
    except MetricError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _distance_spec(cfg: dict, depth: int) -> DistanceSpec:
    dist = cfg.get("distance", {"kind": "dq", "q": 2})
    if isinstance(dist, str):
        dist = {"kind": dist, **cfg}
    kind = dist.get("kind")
    if kind == "dq":
        return DistanceSpec.dq(dist.get("q", 2))
    if kind == "scales":
        values = dist.get("values", dist.get("scales"))
        if isinstance(values, list):
            return DistanceSpec.scale_sequence([float(v) for v in values])
        return DistanceSpec.geometric(float(dist.get("ratio", 0.5)), depth)
    raise InputError(f"unknown distance kind {kind!r}")


def load_symbolic_json(path) -> tuple[FiniteMetricSpace, SymbolicSpace | Example3Config]:
    """Realize a symbolic-space config.

    Fields: p, L, optional row-major 0/1 "matrix", "distance" as
    {"kind": "dq", "q": q}, {"kind": "scales", "values": [...]} or
    {"kind": "scales", "ratio": r}, or {"kind": "example3", "n_max": n}.
    """
    try:
        cfg = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc
    try:
        depth = int(cfg["L"])
        dist = cfg.get("distance")
        if (isinstance(dist, dict) and dist.get("kind") == "example3") or dist == "example3":
            n_max = int(dist.get("n_max", 2)) if isinstance(dist, dict) else int(cfg.get("n_max", 2))
            ex = Example3Config(n_max)
            return example3_space(ex, depth), ex
        matrix = cfg.get("matrix")
        p = int(cfg["p"])
        if matrix is not None:
            matrix = tuple(tuple(int(v) for v in row) for row in matrix)
        alphabet = tuple(cfg.get("alphabet", ()))
        sym = SymbolicSpace(p, depth, _distance_spec(cfg, depth), matrix, alphabet)
        return realize_space(sym), sym
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"{path}: bad symbolic config ({exc})") from exc


def _looks_like_matrix(rows) -> bool:
    n = len(rows)
    if any(len(r) != n for r in rows):
        return False
    m = np.asarray(rows)
    return bool(np.all(np.diag(m) == 0) and np.allclose(m, m.T, atol=1e-12, rtol=0))


def load_space(path, kind: str = "auto") -> FiniteMetricSpace:
    """Load any supported input; `auto` picks by extension and content.

    JSON files are symbolic configs. A CSV with a '#' header is a point
    cloud; otherwise a square symmetric matrix with zero diagonal is read as
    distances and anything else as points.
    """
    path = Path(path)
    if not path.exists():
        raise InputError(f"{path}: no such file")
    if kind == "symbolic" or (kind == "auto" and path.suffix.lower() == ".json"):
        return load_symbolic_json(path)[0]
    if kind == "matrix":
        return load_distance_csv(path)
    if kind == "points":
        return load_points_csv(path)
    if kind != "auto":
        raise InputError(f"unknown input kind {kind!r}")
    rows, header = read_rows(path)
    if not header and _looks_like_matrix(rows):
        return load_distance_csv(path)
    return load_points_csv(path)
