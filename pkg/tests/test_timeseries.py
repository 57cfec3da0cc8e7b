import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ideawaves.timeseries import (
    WeeklySeries,
    decompose,
    dtw,
    normalize_unit_range,
    random_walk,
)


def naive_dtw(a, b):
    n, m = len(a), len(b)
    D = [[math.inf] * (m + 1) for _ in range(n + 1)]
    D[0][0] = 0.0
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            d = a[i - 1] - b[j - 1]
            D[i][j] = d * d + min(D[i - 1][j], D[i][j - 1], D[i - 1][j - 1])
    return math.sqrt(D[n][m])


def test_dtw_hand_examples():
    assert dtw([0, 0, 1], [0, 1]) == 0.0
    assert dtw([0, 2], [1]) == math.sqrt(2)
    assert dtw([3.5], [3.5]) == 0.0


def test_dtw_rejects_empty():
    with pytest.raises(ValueError):
        dtw([], [1.0])


def test_dtw_matches_naive_reference():
    rng = np.random.default_rng(0)
    for _ in range(200):
        a = rng.normal(size=rng.integers(1, 31))
        b = rng.normal(size=rng.integers(1, 31))
        assert dtw(a, b) == naive_dtw(a, b)


finite = st.floats(-100, 100, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(arrays(float, st.integers(1, 25), elements=finite), arrays(float, st.integers(1, 25), elements=finite))
def test_dtw_properties(a, b):
    assert dtw(a, a) == 0.0
    assert abs(dtw(a, b) - dtw(b, a)) <= 1e-12 * max(1.0, dtw(a, b))
    if len(a) == len(b):
        assert dtw(a, b) <= math.sqrt(np.sum((a - b) ** 2)) * (1 + 1e-12)


@pytest.mark.parametrize(
    "x, y", [([-2, 0, 2], [-1, 0, 1]), ([1, 2, 3], [-1, 0, 1]), ([5, 5, 5], [0, 0, 0])]
)
def test_normalize_examples(x, y):
    np.testing.assert_allclose(normalize_unit_range(x), y, atol=1e-15)


@settings(max_examples=200, deadline=None)
@given(arrays(float, st.integers(2, 50), elements=finite), st.floats(0.01, 100), st.floats(-100, 100))
def test_normalize_properties(x, scale, shift):
    if np.ptp(x) < 1e-6:
        return
    y = normalize_unit_range(x)
    assert y.min() == -1.0 and y.max() == 1.0
    np.testing.assert_allclose(normalize_unit_range(scale * x + shift), y, atol=1e-9)


def test_normalize_rejects_empty():
    with pytest.raises(ValueError):
        normalize_unit_range([])


def test_decompose_constant():
    dec = decompose(np.full(200, 7.0))
    np.testing.assert_allclose(dec.trend[dec.valid], 7.0)
    np.testing.assert_allclose(dec.seasonal, 0.0, atol=1e-12)
    np.testing.assert_allclose(dec.core_residual, 0.0, atol=1e-12)
    assert np.isnan(dec.trend[:26]).all() and np.isnan(dec.trend[-26:]).all()
    assert len(dec.core_residual) == 200 - 52


def test_decompose_linear_plus_sine():
    t = np.arange(260.0)
    trend = 2 * t
    y = trend + 10 * np.sin(2 * np.pi * t / 52)
    dec = decompose(WeeklySeries.from_values(y))
    core = dec.valid
    rmse = np.sqrt(np.mean((dec.trend[core] - trend[core]) ** 2))
    assert rmse < 0.01 * np.ptp(trend)
    assert np.sqrt(np.mean(dec.core_residual ** 2)) < 0.1


def test_decompose_identity_and_shift():
    rng = np.random.default_rng(3)
    y = np.cumsum(rng.normal(size=300)) + 5 * np.cos(np.arange(300) * 2 * np.pi / 52)
    dec = decompose(y)
    v = dec.valid
    np.testing.assert_allclose(dec.trend[v] + dec.seasonal[v] + dec.residual[v], y[v], atol=1e-12)
    assert abs(dec.pattern.mean()) < 1e-9
    shifted = decompose(y + 13.0)
    np.testing.assert_allclose(shifted.trend[v], dec.trend[v] + 13.0, atol=1e-9)
    np.testing.assert_allclose(shifted.seasonal, dec.seasonal, atol=1e-9)
    np.testing.assert_allclose(shifted.core_residual, dec.core_residual, atol=1e-9)


def test_decompose_odd_period_and_errors():
    dec = decompose(np.arange(40.0), period=7)
    np.testing.assert_allclose(dec.trend[dec.valid], np.arange(3.0, 37.0))
    with pytest.raises(ValueError):
        decompose(np.ones(103))


def test_decomposition_csv(tmp_path):
    dec = decompose(np.arange(120.0))
    path = tmp_path / "d.csv"
    dec.write_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "date,observed,trend,seasonal,residual"
    assert lines[1].split(",")[2] == "" and lines[27].split(",")[2] != ""


def test_random_walk_determinism_and_scale():
    a = random_walk(100, 5)
    assert np.array_equal(a, random_walk(100, 5))
    assert not np.array_equal(a, random_walk(100, 6))
    assert np.array_equal(random_walk(10, [1, 2, 3]), random_walk(10, (1, 2, 3)))
    np.testing.assert_array_equal(random_walk(20, 1, scale=0.0), np.zeros(20))
    with pytest.raises(ValueError):
        random_walk(0, 1)


def test_random_walk_final_value_clt():
    finals = np.array([random_walk(260, [9, k])[-1] for k in range(500)])
    se = math.sqrt(260) / math.sqrt(500)
    assert abs(finals.mean()) < 4 * se
    assert 0.85 < finals.std() / math.sqrt(260) < 1.15
