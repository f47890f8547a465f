"""Dataset ingestion: plain-text/CSV parsing plus the bundled fixtures.

Bundled fixtures are the two classic Old Faithful waiting-time series
(public-domain classroom data):

* ``faithful-hardle`` — 272 waiting times between eruptions, the version
  popularized by Härdle's smoothing monograph and shipped as R's
  ``faithful`` dataset (mean 70.897, range 43-96).
* ``faithful-azzalini`` — 299 waiting times from the continuous
  August 1-15, 1985 record analyzed by Azzalini & Bowman and shipped as the
  ``geyser`` dataset in R's MASS package (mean 72.314, range 43-108).

Larger benchmark sets referenced alongside these (Danish fire-insurance
losses, translog cost-function residuals) are NOT bundled; point the CLI at
a local file instead.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import DataError

FIXTURES = {
    "faithful-hardle": ("faithful_hardle.csv", "bundled fixture: Old Faithful waiting times (Härdle, n=272)"),
    "faithful-azzalini": ("faithful_azzalini.csv", "bundled fixture: Old Faithful waiting times (Azzalini & Bowman, n=299)"),
}


@dataclass(frozen=True)
class Dataset:
    name: str
    values: np.ndarray
    source: str

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.values.size == 0:
            raise DataError(f"dataset {self.name!r} is empty")
        if not np.all(np.isfinite(self.values)):
            raise DataError(f"dataset {self.name!r} contains non-finite values")

    @property
    def n(self) -> int:
        return int(self.values.size)


def _parse_text(text: str, column, source: str, name: str) -> Dataset:
    lines = text.splitlines()
    rows: list[tuple[int, list[str]]] = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue  # blank lines are skipped, not errors
        rows.append((lineno, line))
    if not rows:
        raise DataError(f"{source}: no data lines found")

    delimiter = "," if any("," in line for _, line in rows[:10]) else None
    parsed: list[tuple[int, list[str]]] = []
    for lineno, line in rows:
        if delimiter:
            cells = next(csv.reader(io.StringIO(line)))
        else:
            cells = line.split()
        parsed.append((lineno, [c.strip() for c in cells]))

    header: list[str] | None = None
    first_cells = parsed[0][1]
    if not _all_numeric(first_cells):
        header = first_cells
        body = parsed[1:]
    else:
        body = parsed

    if isinstance(column, str):
        if header is None or column not in header:
            raise DataError(f"{source}: no column named {column!r}"
                            + (f" (columns: {header})" if header else " (file has no header)"))
        col_idx = header.index(column)
    else:
        col_idx = int(column)

    values = []
    for lineno, cells in body:
        if col_idx >= len(cells):
            raise DataError(f"{source}, line {lineno}: no column {col_idx} ({len(cells)} cells)")
        cell = cells[col_idx]
        try:
            v = float(cell)
        except ValueError:
            raise DataError(f"{source}, line {lineno}: could not parse {cell!r} as a number")
        if not np.isfinite(v):
            raise DataError(f"{source}, line {lineno}: non-finite value {cell!r}")
        values.append(v)
    if not values:
        raise DataError(f"{source}: no numeric rows in column {column!r}")
    return Dataset(name=name, values=np.asarray(values), source=source)


def _all_numeric(cells: list[str]) -> bool:
    for c in cells:
        try:
            float(c)
        except ValueError:
            return False
    return bool(cells)


def load_dataset(path_or_fixture: str, column=0) -> Dataset:
    """Load a bundled fixture by id, or parse a single-column/CSV file.

    ``column`` selects by header name (str) or 0-based index (int).
    """
    if path_or_fixture in FIXTURES:
        filename, provenance = FIXTURES[path_or_fixture]
        text = resources.files("ddetest.data").joinpath(filename).read_text()
        return _parse_text(text, column, provenance, path_or_fixture)
    try:
        with open(path_or_fixture, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DataError(f"could not read {path_or_fixture!r}: {exc}") from exc
    name = path_or_fixture.rsplit("/", 1)[-1]
    return _parse_text(text, column, path_or_fixture, name)
