import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qsym import (
    Additive,
    CustomGauge,
    GaugeInvalid,
    MaxGauge,
    ScaledAdditive,
    build_space,
    check_triangle,
    collinear_space,
    euclidean_space,
    invert_diag,
    is_ptolemaic,
    minimal_bmetric_K,
    parse_triangle_function,
    random_semimetric_space,
    snowflake,
    transform_distances,
    ultrametric_space,
)

from conftest import naive_minimal_K, naive_ptolemaic, naive_triangle_margin


def squared_line(coords):
    return transform_distances(collinear_space(coords), lambda d: d * d)


def test_gauge_evaluation():
    assert Additive()(1.0, 2.0) == 3.0
    assert ScaledAdditive(2.0)(1.0, 2.0) == 6.0
    assert MaxGauge()(1.0, 2.0) == 2.0
    u = np.array([1.0, 2.0])
    assert np.array_equal(np.asarray(Additive()(u, u)), np.array([2.0, 4.0]))


def test_gauge_describe():
    assert Additive().describe() == "additive"
    assert ScaledAdditive(2.0).describe() == "bmetric:2"
    assert MaxGauge().describe() == "max"


def test_check_triangle_metric_line(line4):
    rep = check_triangle(line4, Additive())
    assert rep.holds
    # the line is exactly geodesic: the worst margin is an equality
    assert rep.margin == 0.0


def test_check_triangle_witness_on_failure():
    X = squared_line([0.0, 1.0, 2.0])
    rep = check_triangle(X, Additive())
    assert not rep.holds
    x, z, y = rep.worst_triple
    d = np.asarray(X.dist)
    assert rep.lhs == d[x, y]
    assert rep.rhs == pytest.approx(d[x, z] + d[z, y])
    assert rep.margin == pytest.approx(-2.0)  # 4 vs 1 + 1
    assert rep.worst_labels(X) == ("0", "1", "2")


def test_check_triangle_scaled_gauge():
    X = squared_line([0.0, 1.0, 2.0])
    assert not check_triangle(X, ScaledAdditive(1.9)).holds
    assert check_triangle(X, ScaledAdditive(2.0)).holds


def test_minimal_bmetric_K_squared_line():
    assert minimal_bmetric_K(squared_line([0.0, 1.0, 2.0])) == 2.0
    assert minimal_bmetric_K(collinear_space([0.0, 1.0, 2.0])) == 1.0
    assert minimal_bmetric_K(collinear_space([0.0, 1.0])) == 0.0


@pytest.mark.parametrize("seed", range(6))
def test_triangle_margin_matches_naive(seed):
    X = random_semimetric_space(6, seed=seed)
    for phi in (Additive(), ScaledAdditive(1.7), MaxGauge()):
        rep = check_triangle(X, phi)
        want = naive_triangle_margin(X, phi)
        assert rep.margin == pytest.approx(want, abs=1e-12)
        assert rep.holds == (want >= -1e-9)


@pytest.mark.parametrize("seed", range(6))
def test_minimal_K_matches_naive(seed):
    X = random_semimetric_space(6, seed=seed)
    assert minimal_bmetric_K(X) == pytest.approx(naive_minimal_K(X), rel=1e-12)


def test_minimal_K_is_threshold():
    for seed in range(4):
        X = random_semimetric_space(5, seed=seed)
        K = minimal_bmetric_K(X)
        assert check_triangle(X, ScaledAdditive(K)).holds
        if K > 1.0:
            assert not check_triangle(X, ScaledAdditive(K * (1 - 1e-6))).holds


def test_custom_gauge_accepts_lp_combination():
    phi = CustomGauge(lambda u, v: (u ** 2 + v ** 2) ** 0.5, name="l2")
    assert phi(3.0, 4.0) == pytest.approx(5.0)
    # the half-snowflake of a metric satisfies the quadratic-mean gauge:
    # d(x,y) <= d(x,z) + d(z,y) squares into the very inequality checked
    X = euclidean_space(6, 2, seed=0)
    assert check_triangle(snowflake(X, 0.5), phi).holds


def test_custom_gauge_rejections():
    with pytest.raises(GaugeInvalid):
        CustomGauge(lambda u, v: u - v)  # not symmetric
    with pytest.raises(GaugeInvalid):
        CustomGauge(lambda u, v: u + v + 1.0)  # nonzero at the origin
    with pytest.raises(GaugeInvalid):
        CustomGauge(lambda u, v: np.sin(u) + np.sin(v), vectorized=True)


def test_invert_diag():
    # diag of additive is 2t, of bmetric:K is 2Kt, of max is t
    assert invert_diag(Additive(), 9.0) == pytest.approx(4.5)
    assert invert_diag(ScaledAdditive(2.0), 9.0) == pytest.approx(2.25)
    assert invert_diag(MaxGauge(), 9.0) == pytest.approx(9.0)


def test_is_ptolemaic_euclidean_and_square():
    assert is_ptolemaic(euclidean_space(8, 2, seed=2)).holds
    # the unit square attains Ptolemy equality on its diagonals
    sq = build_space(
        ["a", "b", "c", "d"],
        [
            [0, 1, np.sqrt(2), 1],
            [1, 0, 1, np.sqrt(2)],
            [np.sqrt(2), 1, 0, 1],
            [1, np.sqrt(2), 1, 0],
        ],
    )
    rep = is_ptolemaic(sq)
    assert rep.holds
    assert rep.margin == pytest.approx(0.0, abs=1e-12)


def test_is_ptolemaic_failure_witness():
    bad = build_space(
        ["a", "b", "c", "d"],
        [
            [0, 1, 10, 1],
            [1, 0, 1, 10],
            [10, 1, 0, 1],
            [1, 10, 1, 0],
        ],
    )
    rep = is_ptolemaic(bad)
    assert not rep.holds
    assert rep.lhs > rep.rhs
    assert rep.margin == pytest.approx(naive_ptolemaic(bad))
    assert len(rep.worst_labels(bad)) == 4


def test_is_ptolemaic_small_spaces_vacuous(line3):
    rep = is_ptolemaic(line3)
    assert rep.holds and rep.checked == 0


@pytest.mark.parametrize("seed", range(4))
def test_ptolemaic_margin_matches_naive(seed):
    X = euclidean_space(7, 2, seed=seed)
    rep = is_ptolemaic(X)
    assert rep.mode == "exhaustive"
    assert rep.margin == pytest.approx(naive_ptolemaic(X), rel=1e-9, abs=1e-12)


def test_parse_triangle_function():
    assert isinstance(parse_triangle_function("additive"), Additive)
    assert isinstance(parse_triangle_function("max"), MaxGauge)
    phi = parse_triangle_function("bmetric:2.5")
    assert isinstance(phi, ScaledAdditive) and phi.K == 2.5
    with pytest.raises(ValueError):
        parse_triangle_function("bmetric:0.5")
    with pytest.raises(ValueError):
        parse_triangle_function("junk")


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(4, 7))
def test_ultrametric_is_one_half_bmetric_everywhere(seed, n):
    # max(u, v) <= (u + v) <= 2 max(u, v): ultrametrics are metrics, and
    # their minimal additive coefficient can reach down to 1/2 of nothing
    # below max; sanity across random instances
    X = ultrametric_space(n, seed=seed)
    assert check_triangle(X, MaxGauge()).holds
    assert check_triangle(X, Additive()).holds
    assert minimal_bmetric_K(X) <= 1.0 + 1e-12
