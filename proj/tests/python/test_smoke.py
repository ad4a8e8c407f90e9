import math

import pytest

import mutwalk


def test_version():
    assert mutwalk.__version__ == "0.1.0"


def test_closed_forms():
    params = mutwalk.ModelParams(3, 0.1)
    assert mutwalk.return_time_zero(params).value == 8.0
    assert mutwalk.return_time_class(mutwalk.ModelParams(4, 0.2), 2).value == pytest.approx(16 / 6)
    assert mutwalk.traversal_time(mutwalk.ModelParams(2, 0.25)).value == 8.0


def test_series_agree():
    params = mutwalk.ModelParams(6, 0.3)
    a = mutwalk.passage_time_explicit(params, 4, 1)
    b = mutwalk.passage_time_kac_series(params, 4, 1)
    assert a.method == "explicit_series"
    assert b.method == "kac_series"
    assert abs(a.value - b.value) <= a.error_bound + b.error_bound
    assert a.terms_used >= 8


def test_oracle():
    params = mutwalk.ModelParams(2, 0.25)
    h = mutwalk.hitting_times(params, 0)
    assert h == pytest.approx([4.0, 20 / 3, 8.0], rel=1e-12)
    assert mutwalk.lempot_residual(params, 0) <= 1e-12
    assert mutwalk.stationary(params) == pytest.approx([0.25, 0.5, 0.25])
    assert mutwalk.ergodic_residual(params, 30) <= 1e-9


def test_exact_backend():
    assert mutwalk.hitting_times_exact(2, "1/4", 0) == ["4", "20/3", "8"]
    assert mutwalk.lempot_residual_exact(3, "1/10", 1) == "0"
    assert mutwalk.stationary_exact(2, "1/3") == ["1/4", "1/2", "1/4"]
    assert mutwalk.ehrenfest_hitting_times_exact(4, 0)[0] == "16"
    assert mutwalk.ehrenfest_hitting_times(4, 0)[0] == pytest.approx(16.0)


def test_transition_rows_are_stochastic():
    rows = mutwalk.transition_matrix(mutwalk.ModelParams(5, 0.2))
    for row in rows:
        assert math.isclose(sum(row), 1.0, abs_tol=1e-12)
    law = mutwalk.class_distribution(mutwalk.ModelParams(5, 0.2), 5, 3)
    assert math.isclose(sum(law), 1.0, abs_tol=1e-12)


def test_monte_carlo_reproducible():
    params = mutwalk.ModelParams(5, 0.2)
    a = mutwalk.estimate_hitting_time(params, 5, 0, seed=9, trials=2000)
    b = mutwalk.estimate_hitting_time(params, 5, 0, seed=9, trials=2000, threads=3)
    assert a.mean == b.mean
    assert a.std_error == b.std_error
    assert a.n_censored == b.n_censored
    ref = mutwalk.hitting_times(params, 0)[5]
    assert abs(a.mean - ref) <= 4 * a.std_error
    tv = mutwalk.lumping_consistency(params, 5, 2, seed=9, trials=20000)
    assert tv <= 0.02


def test_errors():
    with pytest.raises(ValueError):
        mutwalk.ModelParams(4, 1.5)
    with pytest.raises(ValueError):
        mutwalk.hitting_times_exact(2, "0", 0)
    with pytest.raises(mutwalk.NonConvergenceError):
        mutwalk.passage_time_explicit(
            mutwalk.ModelParams(4, 0.05), 4, 0,
            mutwalk.SeriesControl(max_terms=20))
    with pytest.raises(mutwalk.AllCensoredError):
        mutwalk.estimate_hitting_time(
            mutwalk.ModelParams(8, 0.1), 8, 0, seed=1, trials=50, max_steps=1)


def test_vandermonde():
    assert mutwalk.vandermonde_check(30, 13)
    with pytest.raises(ValueError):
        mutwalk.vandermonde_check(4, 5)
