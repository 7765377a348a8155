"""Series ingestion and standardization."""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .simulate import returns_from_prices

__all__ = ["Kind", "Dataset", "standardize", "read_series"]


class Kind(enum.Enum):
    RETURNS = "returns"
    PRICES = "prices"
    MAXIMA = "maxima"


@dataclass(frozen=True)
class Dataset:
    """A working series with the statistics used to standardize it.

    ``values`` is the series actually analyzed (prices are converted to
    returns on ingestion); ``standardized`` has mean 0 and sample standard
    deviation 1 (n-1 denominator).
    """

    values: np.ndarray
    kind: Kind
    mean: float
    sd: float
    standardized: np.ndarray


def standardize(values) -> tuple[np.ndarray, float, float]:
    """Center and scale by the n-1 sample standard deviation."""
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 1 or x.size < 2:
        raise DataError("need at least two observations to standardize")
    if not np.all(np.isfinite(x)):
        raise DataError("series contains non-finite values")
    mean = float(np.mean(x))
    sd = float(np.std(x, ddof=1))
    if sd == 0.0 or not math.isfinite(sd):
        raise DataError("constant series cannot be standardized")
    return (x - mean) / sd, mean, sd


def read_series(path, kind: Kind) -> Dataset:
    """Load a single-column CSV series and standardize it.

    A non-numeric first row is treated as a header.  Price series are
    converted to periodic returns before standardization.
    """
    rows: list[float] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, start=1):
            if not row or (len(row) == 1 and row[0].strip() == ""):
                raise DataError(f"{path}:{lineno}: blank row")
            if len(row) != 1:
                raise DataError(f"{path}:{lineno}: expected a single column, got {len(row)}")
            try:
                value = float(row[0])
            except ValueError:
                if lineno == 1:
                    continue  # header
                raise DataError(f"{path}:{lineno}: cannot parse {row[0]!r} as a number") from None
            if not math.isfinite(value):
                raise DataError(f"{path}:{lineno}: non-finite value {row[0]!r}")
            rows.append(value)
    if not rows:
        raise DataError(f"{path}: no numeric rows")

    values = np.asarray(rows, dtype=np.float64)
    if kind is Kind.PRICES:
        if values.size < 2:
            raise DataError(f"{path}: need at least two prices")
        if np.any(values <= 0.0):
            raise DataError(f"{path}: prices must be positive")
        values = returns_from_prices(values)
    standardized, mean, sd = standardize(values)
    return Dataset(values=values, kind=kind, mean=mean, sd=sd, standardized=standardized)
