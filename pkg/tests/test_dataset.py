"""Tests for series ingestion and standardization."""

import math

import numpy as np
import pytest

from jumpfbst.dataset import Dataset, Kind, read_series, standardize
from jumpfbst.errors import DataError


def test_standardize_two_point_algebra():
    z, mean, sd = standardize([-1.0, 1.0])
    assert mean == 0.0
    assert sd == pytest.approx(math.sqrt(2.0), rel=1e-15)
    assert z == pytest.approx([-1.0 / math.sqrt(2.0), 1.0 / math.sqrt(2.0)], rel=1e-15)


def test_standardize_output_moments():
    rng = np.random.default_rng(3)
    for _ in range(20):
        x = rng.normal(loc=rng.uniform(-5, 5), scale=rng.uniform(0.1, 10), size=50)
        z, _, _ = standardize(x)
        assert abs(z.mean()) < 1e-12
        assert abs(z.std(ddof=1) - 1.0) < 1e-12


def test_standardize_affine_invariance():
    rng = np.random.default_rng(4)
    x = rng.normal(size=30)
    z1, _, _ = standardize(x)
    z2, _, _ = standardize(3.5 * x + 11.0)
    assert np.allclose(z1, z2, atol=1e-12)


def test_standardize_rejects_degenerate_series():
    with pytest.raises(DataError):
        standardize([1.0])
    with pytest.raises(DataError):
        standardize([2.0, 2.0, 2.0])


def test_read_series_plain_column(tmp_path):
    path = tmp_path / "r.csv"
    path.write_text("0.1\n0.2\n")
    ds = read_series(path, Kind.RETURNS)
    assert np.allclose(ds.values, [0.1, 0.2])
    assert ds.kind is Kind.RETURNS


def test_read_series_header_autodetected(tmp_path):
    path = tmp_path / "r.csv"
    path.write_text("value\n1.0\n2.0\n3.0\n")
    ds = read_series(path, Kind.MAXIMA)
    assert np.allclose(ds.values, [1.0, 2.0, 3.0])


def test_read_series_prices_converted_then_constant_rejected(tmp_path):
    path = tmp_path / "p.csv"
    path.write_text("100\n110\n121\n")
    # returns are (0.10, 0.10): constant, so standardization must fail
    with pytest.raises(DataError):
        read_series(path, Kind.PRICES)


def test_read_series_prices_pipeline(tmp_path):
    path = tmp_path / "p.csv"
    path.write_text("100\n110\n99\n130.9\n")
    ds = read_series(path, Kind.PRICES)
    assert ds.values.size == 3
    assert ds.values[0] == pytest.approx(0.10)
    assert abs(ds.standardized.mean()) < 1e-12


def test_read_series_parse_error_reports_line(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("1.0\n2.0\noops\n4.0\n")
    with pytest.raises(DataError) as err:
        read_series(path, Kind.RETURNS)
    assert ":3:" in str(err.value)


def test_read_series_rejects_multi_column(tmp_path):
    path = tmp_path / "wide.csv"
    path.write_text("1.0,2.0\n")
    with pytest.raises(DataError):
        read_series(path, Kind.RETURNS)


def test_read_series_empty_file(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("")
    with pytest.raises(DataError):
        read_series(path, Kind.RETURNS)


def test_bundled_rainfall_series_loads():
    import importlib.resources as resources
    ref = resources.files("jumpfbst").joinpath("data/maiquetia_annual_max_1951_1998.csv")
    with resources.as_file(ref) as path:
        ds = read_series(path, Kind.MAXIMA)
    assert ds.values.size == 48
    assert ds.sd > 0
    assert np.all(ds.values > 0)
