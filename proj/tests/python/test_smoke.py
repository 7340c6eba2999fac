"""Smoke tests for the python bindings."""

import math

import pytest

import _regimecast as rc


def test_parse_keyword_field():
    assert rc.parse_keyword_field("['Fed', ' rates ']") == ["fed", "rates"]
    assert rc.parse_keyword_field("[]") == []
    with pytest.raises(Exception):
        rc.parse_keyword_field("not a list")


def test_compute_pct_change():
    dates, pct = rc.compute_pct_change(
        ["2020-01-01", "2020-01-02", "2020-01-03"], [100.0, 110.0, 99.0]
    )
    assert dates == ["2020-01-02", "2020-01-03"]
    assert pct[0] == pytest.approx(10.0)
    assert pct[1] == pytest.approx(100.0 * (99.0 - 110.0) / 110.0)


def test_pelt_finds_a_step():
    series = [0.0] * 50 + [5.0] * 50
    indices, objective = rc.pelt(series)
    assert len(indices) == 1
    assert abs(indices[0] - 50) <= 2
    assert math.isfinite(objective)


def test_rbf_cost_definition():
    series = [0.0, 1.0, 0.5]
    bw = 0.5
    gram = sum(
        math.exp(-bw * (a - b) ** 2) for a in series for b in series
    )
    assert rc.rbf_cost(series, 0, 3, bw) == pytest.approx(3.0 - gram / 3.0)


def test_dtw():
    assert rc.dtw([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == 0.0
    assert rc.dtw([0.0, 0.0], [1.0]) == pytest.approx(2.0)
    with pytest.raises(Exception):
        rc.dtw([0.0] * 6, [0.0] * 2, band=1)


def test_similarity_metrics():
    s = [0.1, 0.5, 0.9, 0.2, 0.7, 0.4]
    pw, r, p, zero_var = rc.pearson_weight(s, s)
    assert r == pytest.approx(1.0)
    assert pw == pytest.approx(1.0)
    assert not zero_var
    assert rc.cosine_distance(s, s) == pytest.approx(0.0, abs=1e-12)
    assert rc.normalized_dtw(s, s) == pytest.approx(1.0)


def test_solve_coefficients():
    alpha, beta, gamma = rc.solve_coefficients(4996.0)
    assert alpha == pytest.approx(0.60, abs=0.05)
    assert alpha + beta + gamma == pytest.approx(1.0, abs=1e-9)


def test_pca_and_clustering():
    import random

    rng = random.Random(7)
    rows = {}
    for c, center in enumerate([(0.0, 0.0, 0.0), (9.0, 0.0, 0.0), (0.0, 9.0, 0.0)]):
        for i in range(15):
            rows[f"w{c}_{i}"] = [x + rng.gauss(0.0, 0.3) for x in center]
    reduced = rc.pca_reduce(rows, 2)
    assert all(len(v) == 2 for v in reduced.values())

    labels, count, probs = rc.hdbscan(rows, min_cluster_size=5, min_samples=3)
    assert count == 3
    for c in range(3):
        members = {labels[f"w{c}_{i}"] for i in range(15)}
        assert len(members) == 1
    assert all(0.0 <= p <= 1.0 for p in probs.values())


def test_forecast_and_metrics():
    dates = [f"2020-{m:02d}-{d:02d}" for m in range(1, 4) for d in range(1, 29)]
    y = [1.0 + 0.1 * i for i in range(len(dates))]
    yhat, trend, seasonal, regressor = rc.fit_predict(
        dates, y, {}, ["2020-04-01", "2020-04-02"],
        n_changepoints=0, ridge_lambda=1e-8, auto_seasonality=True,
    )
    assert yhat[1] > yhat[0]
    for i in range(len(yhat)):
        assert yhat[i] == pytest.approx(trend[i] + seasonal[i] + regressor[i], abs=1e-9)

    mae, mse, rmse, r2 = rc.regression_metrics([1.0, 2.0, 3.0], [1.0, 2.0, 4.0])
    assert mae == pytest.approx(1.0 / 3.0)
    assert mse == pytest.approx(1.0 / 3.0)
    assert rmse == pytest.approx(math.sqrt(1.0 / 3.0))

    assert rc.adjusted_rand_index([0, 0, 1, 1], [1, 1, 0, 0]) == pytest.approx(1.0)
    purity, inverse_purity, f = rc.purity_fmeasure([0, 0, 1, 1], [0, 0, 1, 1])
    assert purity == 1.0 and f == 1.0
