import numpy as np
from pytest import approx, raises
from scipy import stats as scipy_stats

from freeassoc.activation import ActivationMatrix
from freeassoc.experiments import default_priming_items
from freeassoc.stats import (Normalization, StatsException, normalize, normalize_array, rank_with_ties, spearman,
                             wilcoxon_paired)


def matrix(values):
    values = np.asarray(values, dtype=float)
    rows, cols = values.shape
    return ActivationMatrix([f"n{i}" for i in range(rows)], [f"p{j}" for j in range(cols)], values)


def test_normalize_l1():
    n = normalize(matrix([[1, 3], [3, 1]]))
    assert(n.values.tolist() == [[0.25, 0.75], [0.75, 0.25]])
    assert(n.mode is Normalization.L1)
    assert(n.primes == ("p0", "p1"))


def test_normalize_l1_rows_sum_to_one():
    rng = np.random.default_rng(3)
    n = normalize(matrix(rng.random((30, 8)) * 100))
    assert(n.values.sum(axis=1) == approx(np.ones(30), abs=1e-12))


def test_normalize_zero_vectors_pass_through():
    n = normalize(matrix([[0, 2], [0, 2], [0, 0]]))
    assert(n.values.tolist() == [[0.0, 1.0], [0.0, 1.0], [0.0, 0.0]])


def test_normalize_max():
    out = normalize_array(np.array([[2.0, 1.0], [4.0, 4.0]]), "max")
    # columns -> [[.5, .25], [1, 1]], rows -> [[1, .5], [1, 1]]
    assert(out.tolist() == [[1.0, 0.5], [1.0, 1.0]])


def test_normalize_zscore():
    out = normalize_array(np.array([[1.0, 2.0, 3.0], [3.0, 2.0, 1.0], [2.0, 2.0, 2.0]]), Normalization.ZSCORE)
    assert(out.mean(axis=1) == approx(np.zeros(3), abs=1e-12))
    # the constant middle column passes the column pass unchanged
    assert(np.isfinite(out).all())


def test_normalize_rejects_negative():
    with raises(StatsException):
        normalize(matrix([[1, -1], [0, 2]]))


def test_unknown_mode():
    with raises(ValueError):
        normalize_array(np.ones((2, 2)), "softmax")


def test_rank_with_ties():
    assert(rank_with_ties([10, 20, 20, 5]).tolist() == [2.0, 3.5, 3.5, 1.0])


def test_wilcoxon_all_negative():
    x = np.arange(50, dtype=float)
    y = x + np.arange(1, 51)
    result = wilcoxon_paired(x, y)
    assert(result.n == 50)
    assert(result.w_plus == 0.0)
    assert(result.w_minus == 1275.0)
    assert(result.effect_r == approx(-0.8703, abs=1e-4))
    assert(result.p < 0.001)


def test_wilcoxon_reaction_times():
    items = default_priming_items()
    result = wilcoxon_paired([i.rt_related for i in items], [i.rt_unrelated for i in items])
    assert(result.effect_r == approx(-0.87, abs=0.001))
    assert(result.p < 0.001)


def test_wilcoxon_matches_scipy_z():
    rng = np.random.default_rng(1)
    x = rng.normal(size=40)
    y = x + rng.normal(loc=0.3, size=40)
    result = wilcoxon_paired(x, y)
    reference = scipy_stats.wilcoxon(x, y, correction=False, method="approx")
    assert(result.p == approx(reference.pvalue, rel=1e-9))


def test_wilcoxon_zeros_dropped():
    x = [1, 2, 3, 4, 5, 6, 7]
    y = [1, 2, 0, 0, 0, 0, 0]
    result = wilcoxon_paired(x, y)
    assert(result.n == 5)
    assert(result.effect_r > 0)


def test_wilcoxon_swap_negates():
    rng = np.random.default_rng(4)
    x, y = rng.random(30), rng.random(30)
    a, b = wilcoxon_paired(x, y), wilcoxon_paired(y, x)
    assert(a.effect_r == -b.effect_r)
    assert(a.w_plus == b.w_minus)


def test_wilcoxon_errors():
    with raises(StatsException):
        wilcoxon_paired([1, 2, 3], [1, 2])
    with raises(StatsException):
        wilcoxon_paired([1, 2, 3, 4], [2, 3, 4, 5])
    with raises(StatsException):
        wilcoxon_paired([1, 2, 3, 4, 5, 6], [1, 2, 3, 4, 5, 7])


def test_spearman_small():
    result = spearman([1, 2, 3, 4], [2, 1, 4, 3])
    assert(result.rho == approx(0.6))
    assert(result.n == 4)


def test_spearman_perfect():
    assert(spearman([1, 2, 3], [10, 20, 30]).rho == 1.0)
    result = spearman([1, 2, 3, 4], [4, 3, 2, 1])
    assert(result.rho == -1.0)
    assert(result.p == 0.0)


def test_spearman_matches_scipy():
    rng = np.random.default_rng(8)
    x = rng.integers(0, 10, size=60)
    y = x + rng.integers(0, 6, size=60)
    result = spearman(x, y)
    reference = scipy_stats.spearmanr(x, y)
    assert(result.rho == approx(reference.statistic, rel=1e-12))
    assert(result.p == approx(reference.pvalue, rel=1e-9))


def test_spearman_errors():
    with raises(StatsException):
        spearman([1, 2], [1, 2])
    with raises(StatsException):
        spearman([1, 1, 1], [1, 2, 3])
    with raises(StatsException):
        spearman([1, 2, 3], [1, 2])


def test_to_dict():
    result = spearman([1, 2, 3, 4], [2, 1, 4, 3])
    assert(set(result.to_dict()) == {"rho", "p", "n"})


def test_spearman_monotone_invariance():
    rng = np.random.default_rng(12)
    for _ in range(10):
        x = rng.normal(size=40)
        y = x + rng.normal(scale=2.0, size=40)
        base = spearman(x, y)
        for fx, fy in [(np.exp, lambda v: v ** 3 + 5), (lambda v: 2 * v - 7, np.arctan)]:
            transformed = spearman(fx(x), fy(y))
            assert(transformed.rho == approx(base.rho, abs=1e-12))
            assert(transformed.p == approx(base.p, rel=1e-9))
        assert(spearman(-x, y).rho == approx(-base.rho, abs=1e-12))


def test_effect_size_bound():
    rng = np.random.default_rng(21)
    for n in (5, 12, 50, 200):
        bound = (n * (n + 1) / 4) / (np.sqrt(n * (n + 1) * (2 * n + 1) / 24) * np.sqrt(n))
        for _ in range(20):
            x = rng.normal(size=n)
            y = x + rng.normal(loc=rng.normal(), size=n)
            assert(abs(wilcoxon_paired(x, y).effect_r) <= bound + 1e-12)
        one_sided = wilcoxon_paired(np.arange(n) + 1.0, np.zeros(n) - np.arange(n))
        assert(one_sided.effect_r == approx(bound, rel=1e-12))
    assert(bound < 1.0)


def test_spearman_perfect_with_ties():
    x = [0.1, 0.5, 0.5, 0.9, 1.7, 2.0, 2.0]
    down = spearman(x, [9, 7, 7, 4, 3, 1, 1])
    assert((down.rho, down.p, down.n) == (-1.0, 0.0, 7))
    assert(spearman(x, np.log(x)).rho == 1.0)
    result = spearman(x, [1, 2, 3, 4, 5, 6, 8])
    assert(result.rho == approx(scipy_stats.spearmanr(x, [1, 2, 3, 4, 5, 6, 8]).statistic, rel=1e-12))
    assert(0.0 < result.p < 0.05)
