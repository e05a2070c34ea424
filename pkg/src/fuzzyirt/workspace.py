"""Workspace layout and file formats for the pipeline commands.

A workspace is a directory with one repository per artifact family:
responses/, params/, forms/, kb/, results/ and runs/. Every artifact is
written together with a .meta.json sidecar recording the producing
command, its effective configuration (plus hash) and the seed, so any
file can be regenerated from its sidecar alone.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .estimation import ResponseMatrix
from .irt import ItemParams

REPOSITORIES = ("responses", "params", "forms", "kb", "results", "runs")

_CELL_SYMBOLS = {"1": 1, "0": 0, "N": -1}
_SYMBOL_OF = {1: "1", 0: "0", -1: "N"}


@dataclass(frozen=True)
class WorkspaceLayout:
    """Root directory plus the fixed repository subdirectories."""

    root: Path

    def __post_init__(self):
        object.__setattr__(self, "root", Path(self.root))

    @property
    def responses(self) -> Path:
        return self.root / "responses"

    @property
    def params(self) -> Path:
        return self.root / "params"

    @property
    def forms(self) -> Path:
        return self.root / "forms"

    @property
    def kb(self) -> Path:
        return self.root / "kb"

    @property
    def results(self) -> Path:
        return self.root / "results"

    @property
    def runs(self) -> Path:
        return self.root / "runs"

    def ensure(self) -> "WorkspaceLayout":
        for name in REPOSITORIES:
            (self.root / name).mkdir(parents=True, exist_ok=True)
        return self


def config_hash(config: dict) -> str:
    canon = json.dumps(config, sort_keys=True, default=str)
    return hashlib.sha256(canon.encode()).hexdigest()


def write_sidecar(artifact: Path, command: str, config: dict, seed) -> Path:
    """Record provenance next to the artifact file."""
    meta = {
        "artifact": artifact.name,
        "command": command,
        "config": config,
        "config_hash": config_hash(config),
        "seed": seed,
        "created": datetime.now(timezone.utc).isoformat(),
    }
    path = artifact.with_name(artifact.name + ".meta.json")
    path.write_text(json.dumps(meta, indent=2, default=str) + "\n")
    return path


def write_run_record(ws: WorkspaceLayout, command: str, config: dict, seed,
                     artifacts: Sequence[Path]) -> Path:
    stamp = datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%S%f")
    record = {
        "command": command,
        "config": config,
        "config_hash": config_hash(config),
        "seed": seed,
        "created": datetime.now(timezone.utc).isoformat(),
        "artifacts": [str(p) for p in artifacts],
    }
    path = ws.runs / f"{command}-{stamp}.json"
    path.write_text(json.dumps(record, indent=2, default=str) + "\n")
    return path


def parse_config_file(path: Path) -> dict[str, str]:
    """Flat key = value lines; blank lines and # comments ignored."""
    out: dict[str, str] = {}
    for number, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}, line {number}: expected key = value")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise ValueError(f"{path}, line {number}: empty key")
        out[key] = value
    return out


def ingest_responses(path: Path) -> ResponseMatrix:
    """Read a response CSV: header of item ids, one student per row,
    cells 1 (correct), 0 (incorrect) or N (not administered).

    Format violations are reported with their line number.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        rows = list(reader)
    if not rows:
        raise ValueError(f"{path}: file is empty")
    header = [cell.strip() for cell in rows[0]]
    if len(header) < 2:
        raise ValueError(f"{path}, line 1: header needs a student column and item ids")
    item_ids = header[1:]
    if len(set(item_ids)) != len(item_ids):
        raise ValueError(f"{path}, line 1: duplicate item ids")
    student_ids: list[str] = []
    data = []
    seen = set()
    for number, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise ValueError(
                f"{path}, line {number}: expected {len(header)} cells, got {len(row)}"
            )
        sid = row[0].strip()
        if not sid:
            raise ValueError(f"{path}, line {number}: empty student id")
        if sid in seen:
            raise ValueError(f"{path}, line {number}: duplicate student id {sid!r}")
        seen.add(sid)
        student_ids.append(sid)
        cells = []
        for item_id, cell in zip(item_ids, row[1:]):
            symbol = cell.strip()
            if symbol not in _CELL_SYMBOLS:
                raise ValueError(
                    f"{path}, line {number}, item {item_id}: "
                    f"invalid cell {symbol!r} (expected 1, 0 or N)"
                )
            cells.append(_CELL_SYMBOLS[symbol])
        data.append(cells)
    if not data:
        raise ValueError(f"{path}: no response rows")
    return ResponseMatrix(np.array(data, dtype=np.int8),
                          tuple(student_ids), tuple(item_ids))


def write_responses(matrix: ResponseMatrix, path: Path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["student_id", *matrix.item_ids])
        for sid, row in zip(matrix.student_ids, matrix.data):
            writer.writerow([sid, *(_SYMBOL_OF[int(v)] for v in row)])
    return path


def write_items(items: Sequence[ItemParams], item_ids: Sequence[str],
                path: Path) -> Path:
    if len(items) != len(item_ids):
        raise ValueError("items and item_ids differ in length")
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["item_id", "a", "b", "c"])
        for item_id, item in zip(item_ids, items):
            writer.writerow([item_id, repr(item.a), repr(item.b), repr(item.c)])
    return path


def read_items(path: Path) -> tuple[list[ItemParams], list[str]]:
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        rows = list(reader)
    if not rows or [c.strip() for c in rows[0]] != ["item_id", "a", "b", "c"]:
        raise ValueError(f"{path}: expected header item_id,a,b,c")
    items, ids = [], []
    for number, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 4:
            raise ValueError(f"{path}, line {number}: expected 4 cells")
        try:
            items.append(ItemParams(float(row[1]), float(row[2]), float(row[3])))
        except ValueError as exc:
            raise ValueError(f"{path}, line {number}: {exc}") from None
        ids.append(row[0].strip())
    if not items:
        raise ValueError(f"{path}: no item rows")
    return items, ids


def write_abilities(thetas: Iterable[float], student_ids: Sequence[str],
                    path: Path) -> Path:
    thetas = list(thetas)
    if len(thetas) != len(student_ids):
        raise ValueError("thetas and student_ids differ in length")
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["student_id", "theta"])
        for sid, theta in zip(student_ids, thetas):
            writer.writerow([sid, repr(float(theta))])
    return path


def read_abilities(path: Path) -> tuple[list[float], list[str]]:
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        rows = list(reader)
    if not rows or [c.strip() for c in rows[0]] != ["student_id", "theta"]:
        raise ValueError(f"{path}: expected header student_id,theta")
    thetas, ids = [], []
    for number, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 2:
            raise ValueError(f"{path}, line {number}: expected 2 cells")
        try:
            thetas.append(float(row[1]))
        except ValueError:
            raise ValueError(f"{path}, line {number}: theta is not a number") from None
        ids.append(row[0].strip())
    if not thetas:
        raise ValueError(f"{path}: no ability rows")
    return thetas, ids


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    """Small helper for curve files; None cells become empty strings."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow(["" if v is None else v for v in row])
    return path
