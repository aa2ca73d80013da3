"""CSV ingestion and persistence.

Schemas: a returns file is (date, return); a forecasts file is
(date, method_1, ..., method_k).  Dates are ISO-8601, decimal point, no
thousands separators.  Floats are written with ``repr`` so a write/load
round trip is bit-exact.
"""

from __future__ import annotations

import csv
from datetime import date
from typing import NamedTuple

import numpy as np

from .losses import ForecastSeries
from .series import TimeSeries


class LoadedReturns(NamedTuple):
    series: TimeSeries
    dropped_zeros: int


def _parse_date(token: str, path: str, line: int) -> str:
    try:
        date.fromisoformat(token)
    except ValueError as exc:
        raise ValueError(f"{path}:{line}: bad ISO-8601 date {token!r}") from exc
    return token


def _parse_float(token: str, path: str, line: int) -> float:
    try:
        return float(token)
    except ValueError as exc:
        raise ValueError(f"{path}:{line}: bad numeric field {token!r}") from exc


def load_returns(path: str) -> LoadedReturns:
    """Read a (date, return) CSV; rows with return exactly zero are dropped.

    A header row is detected by a non-numeric second field.  Returns the
    series (with timestamps) and the count of dropped zero-return rows.
    """
    dates: list[str] = []
    values: list[float] = []
    dropped = 0
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for line, row in enumerate(reader, start=1):
            if not row:
                continue
            if len(row) != 2:
                raise ValueError(f"{path}:{line}: expected 2 fields, got {len(row)}")
            if line == 1:
                try:
                    float(row[1])
                except ValueError:
                    continue  # header
            value = _parse_float(row[1], path, line)
            if value == 0.0:
                dropped += 1
                continue
            dates.append(_parse_date(row[0], path, line))
            values.append(value)
    if not values:
        raise ValueError(f"{path}: no usable observations")
    return LoadedReturns(TimeSeries(np.array(values), tuple(dates)), dropped)


def load_series(path: str) -> TimeSeries:
    """Read a generic one-column (value) or two-column (date, value) CSV."""
    dates: list[str] = []
    values: list[float] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for line, row in enumerate(reader, start=1):
            if not row:
                continue
            if len(row) not in (1, 2):
                raise ValueError(f"{path}:{line}: expected 1 or 2 fields, got {len(row)}")
            if line == 1:
                try:
                    float(row[-1])
                except ValueError:
                    continue  # header
            values.append(_parse_float(row[-1], path, line))
            if len(row) == 2:
                dates.append(_parse_date(row[0], path, line))
    if not values:
        raise ValueError(f"{path}: no usable observations")
    ts = tuple(dates) if len(dates) == len(values) else None
    return TimeSeries(np.array(values), ts)


def load_forecasts(path: str, tau: float,
                   returns: TimeSeries | None = None) -> list[ForecastSeries]:
    """Read a (date, method_1, ..., method_k) CSV of quantile forecasts.

    Empty cells mark unavailable entries.  When ``returns`` (with
    timestamps) is given, forecasts are aligned to its dates; a date
    present in the returns but absent from the file is an alignment
    error, while extra forecast dates (e.g. filtered zero-return days)
    are dropped.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        if len(header) < 2:
            raise ValueError(f"{path}: header must name at least one method")
        methods = [name.strip() for name in header[1:]]
        by_date: dict[str, list[float]] = {}
        order: list[str] = []
        for line, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ValueError(
                    f"{path}:{line}: expected {len(header)} fields, got {len(row)}"
                )
            stamp = _parse_date(row[0], path, line)
            vals = [
                np.nan if token.strip() == "" else _parse_float(token, path, line)
                for token in row[1:]
            ]
            by_date[stamp] = vals
            order.append(stamp)

    if returns is not None:
        if returns.timestamps is None:
            raise ValueError("returns series has no timestamps to align on")
        missing = [d for d in returns.timestamps if d not in by_date]
        if missing:
            raise ValueError(
                f"{path}: no forecasts for return date {missing[0]} "
                f"({len(missing)} missing in total)"
            )
        order = list(returns.timestamps)

    matrix = np.array([by_date[d] for d in order], dtype=np.float64)
    return [
        ForecastSeries(method=methods[j], values=matrix[:, j], tau=tau)
        for j in range(len(methods))
    ]


def write_series(path: str, series: TimeSeries, value_header: str = "value") -> None:
    """Write (date, value) or single-column CSV; floats via repr (round-trip exact)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if series.timestamps is not None:
            writer.writerow(["date", value_header])
            for stamp, value in zip(series.timestamps, series.values):
                writer.writerow([stamp, repr(float(value))])
        else:
            writer.writerow([value_header])
            for value in series.values:
                writer.writerow([repr(float(value))])


def write_experiment_rows(path: str, rows: list[dict]) -> None:
    """Write rejection-frequency rows with the documented schema."""
    fields = ["kappa", "n", "delta", "test", "reject_pct", "mc_se", "M", "seed"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(fields)
        for row in rows:
            writer.writerow([
                repr(float(row["kappa"])),
                int(row["n"]),
                repr(float(row["delta"])),
                row["test"],
                f"{row['reject_pct']:.4f}",
                f"{row['mc_se']:.6f}",
                int(row["M"]),
                int(row["seed"]),
            ])


def write_table(path: str, header: list[str], rows: list[list]) -> None:
    """Generic CSV writer used by the hill and pairwise reports."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
