"""Ordered real-valued observations, the universal input type."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class TimeSeries:
    """Ordered observations with optional timestamps.

    Values must be finite; NaN or infinity is rejected at construction so
    that no non-finite number can reach the statistics downstream.
    """

    values: np.ndarray
    timestamps: tuple[str, ...] | None = field(default=None)

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise ValueError(f"expected a 1-d series, got shape {values.shape}")
        bad = ~np.isfinite(values)
        if bad.any():
            idx = int(np.argmax(bad))
            raise ValueError(f"non-finite value at index {idx}: {values[idx]}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if self.timestamps is not None:
            ts = tuple(self.timestamps)
            if len(ts) != values.size:
                raise ValueError(
                    f"{len(ts)} timestamps for {values.size} observations"
                )
            object.__setattr__(self, "timestamps", ts)

    def __len__(self) -> int:
        return int(self.values.size)


def as_values(x: "TimeSeries | np.ndarray") -> np.ndarray:
    """Accept a TimeSeries or a plain array and return float64 values."""
    if isinstance(x, TimeSeries):
        return x.values
    arr = np.asarray(x, dtype=np.float64)
    if not np.isfinite(arr).all():
        raise ValueError("series contains non-finite values")
    return arr
