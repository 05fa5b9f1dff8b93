"""Deterministic CSV with a schema-version header line.

Every file starts with ``# etau-csv <kind> <version>`` followed by a
column header row.  Floats are written with ``repr`` so equal inputs
produce byte-identical files; booleans become ``true``/``false``.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import UsageError

_PREFIX = "# etau-csv"


def format_value(v) -> str:
    if isinstance(v, bool) or isinstance(v, np.bool_):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_table(
    path,
    kind: str,
    version: int,
    columns: Sequence[str],
    rows: Iterable[Sequence],
) -> None:
    lines = [f"{_PREFIX} {kind} {version}", ",".join(columns)]
    for row in rows:
        if len(row) != len(columns):
            raise UsageError(
                f"row has {len(row)} fields, expected {len(columns)}: {row!r}"
            )
        lines.append(",".join(format_value(v) for v in row))
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_table(path, expected_kind: str | None = None):
    """Read a schema-versioned table; returns (kind, version, columns, rows)."""
    with open(path, "r", encoding="ascii") as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    if not lines or not lines[0].startswith(_PREFIX):
        raise UsageError(f"{path}: missing '{_PREFIX}' schema header line")
    parts = lines[0][len(_PREFIX) :].split()
    if len(parts) != 2:
        raise UsageError(f"{path}: malformed schema header {lines[0]!r}")
    kind, version = parts[0], int(parts[1])
    if expected_kind is not None and kind != expected_kind:
        raise UsageError(f"{path}: expected a {expected_kind!r} file, found {kind!r}")
    if len(lines) < 2:
        raise UsageError(f"{path}: missing column header row")
    columns = lines[1].split(",")
    rows = [ln.split(",") for ln in lines[2:] if ln]
    for row in rows:
        if len(row) != len(columns):
            raise UsageError(f"{path}: row width mismatch: {row!r}")
    return kind, version, columns, rows


CURVE_COLUMNS = ("component_id", "sample_index", "theta", "t")


def write_curve_components(path, components: Iterable[tuple]) -> None:
    """Write loops as (component_id, sample_index, theta, t) records."""
    rows = []
    for cid, (thetas, ts) in enumerate(components):
        for idx, (th, t) in enumerate(zip(thetas, ts)):
            rows.append((cid, idx, float(th), float(t)))
    write_table(path, "curves", 1, CURVE_COLUMNS, rows)


def read_curve_components(path) -> list[tuple[np.ndarray, np.ndarray]]:
    """Read loops back as (theta array, t array) pairs, ordered by component."""
    _, _, columns, rows = read_table(path, "curves")
    if tuple(columns) != CURVE_COLUMNS:
        raise UsageError(f"{path}: expected columns {CURVE_COLUMNS}, found {columns}")
    by_comp: dict[int, list[tuple[int, float, float]]] = {}
    for cid_s, idx_s, th_s, t_s in rows:
        by_comp.setdefault(int(cid_s), []).append(
            (int(idx_s), float(th_s), float(t_s))
        )
    out = []
    for cid in sorted(by_comp):
        recs = by_comp[cid]
        order = [r[0] for r in recs]
        if order != sorted(order) or len(set(order)) != len(order):
            raise UsageError(
                f"{path}: sample_index must be strictly increasing per component"
            )
        out.append(
            (
                np.array([r[1] for r in recs]),
                np.array([r[2] for r in recs]),
            )
        )
    return out
