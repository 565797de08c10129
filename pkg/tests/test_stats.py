import random

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from scipy import special
from scipy import stats as sps

from painsense.errors import ArgumentError, DegenerateDataError
from painsense.stats import GroupSamples, anova_oneway, regularized_incomplete_beta, t_test

samples = st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=2, max_size=15)


def test_beta_boundaries():
    assert regularized_incomplete_beta(2.5, 3.0, 0.0) == 0.0
    assert regularized_incomplete_beta(2.5, 3.0, 1.0) == 1.0
    assert regularized_incomplete_beta(2.0, 2.0, 0.5) == pytest.approx(0.5, abs=1e-15)


@given(st.floats(0, 1))
def test_beta_uniform_case(x):
    assert regularized_incomplete_beta(1.0, 1.0, x) == pytest.approx(x, abs=1e-14)


@pytest.mark.parametrize("a, b, x", [(0, 1, 0.5), (1, -1, 0.5), (1, 1, -0.1), (1, 1, 1.1)])
def test_beta_domain(a, b, x):
    with pytest.raises(ArgumentError):
        regularized_incomplete_beta(a, b, x)


def test_beta_against_scipy_grid():
    rng = random.Random(7)
    for _ in range(5000):
        a, b = 10 ** rng.uniform(-2, 3), 10 ** rng.uniform(-2, 3)
        x = rng.random()
        assert abs(regularized_incomplete_beta(a, b, x) - special.betainc(a, b, x)) <= 1e-10


@given(st.floats(0.05, 200), st.floats(0.05, 200), st.floats(0, 1))
def test_beta_reflection(a, b, x):
    # the identity needs 1 - x to be exact in floating point
    assume(1.0 - (1.0 - x) == x)
    total = regularized_incomplete_beta(a, b, x) + regularized_incomplete_beta(b, a, 1 - x)
    assert abs(total - 1.0) <= 1e-10


def test_t_test_identical_groups():
    r = t_test([1, 2, 3], [1, 2, 3])
    assert r.statistic == 0.0 and r.p_value == 1.0 and r.df == (4,)


def test_t_test_reference_case():
    r = t_test([1, 2, 3, 4], [2, 3, 4, 5])
    ref = sps.ttest_ind([1, 2, 3, 4], [2, 3, 4, 5])
    assert r.statistic == pytest.approx(-1.0954451150103321, rel=1e-12)
    assert r.statistic == pytest.approx(ref.statistic, rel=1e-12)
    assert r.p_value == pytest.approx(0.3153335962012298, abs=1e-12)
    assert r.df == (6,)


@given(samples, samples, st.floats(1e-3, 1e3))
def test_t_test_scale_invariant(g1, g2, c):
    try:
        r = t_test(g1, g2)
    except DegenerateDataError:
        return
    s = t_test([c * v for v in g1], [c * v for v in g2])
    assert s.statistic == pytest.approx(r.statistic, rel=1e-9, abs=1e-9)
    assert s.p_value == pytest.approx(r.p_value, abs=1e-9)


def test_tiny_and_huge_scales():
    base = t_test([0.0, 0.0], [0.0, 1.0])
    for c in (1.4653916302871151e-161, 1e-300, 1e300):
        r = t_test([0.0, 0.0], [0.0, c])
        assert r.statistic == pytest.approx(base.statistic, rel=1e-12)
        f = anova_oneway([[0.0, 0.0], [0.0, c], [c, c]])
        assert f.statistic == pytest.approx(anova_oneway([[0, 0], [0, 1], [1, 1]]).statistic, rel=1e-12)


def test_t_test_errors():
    with pytest.raises(DegenerateDataError):
        t_test([1, 1], [2, 2])
    with pytest.raises(ArgumentError):
        t_test([1], [2, 3])


def test_anova_equal_groups():
    r = anova_oneway([[1, 2, 3], [1, 2, 3]])
    assert r.statistic == 0.0 and r.p_value == 1.0


def test_anova_reference_case():
    groups = [[1, 2, 3, 4], [2, 3, 4, 5], [3, 4, 5, 6]]
    ref = sps.f_oneway(*groups)
    r = anova_oneway(groups)
    assert r.df == (2, 9)
    assert r.statistic == pytest.approx(2.4, rel=1e-12)
    assert r.statistic == pytest.approx(ref.statistic, rel=1e-12)
    assert r.p_value == pytest.approx(ref.pvalue, abs=1e-12)


def test_f_tail_at_three():
    # right tail of F(2, 9) at 3.0
    assert regularized_incomplete_beta(4.5, 1.0, 9 / (9 + 2 * 3.0)) == pytest.approx(sps.f.sf(3.0, 2, 9), abs=1e-12)


def test_anova_errors():
    with pytest.raises(ArgumentError):
        anova_oneway([[1, 2, 3]])
    with pytest.raises(ArgumentError):
        anova_oneway([[1, 2], [3]])
    with pytest.raises(DegenerateDataError):
        anova_oneway([[1, 1], [2, 2]])


@given(samples, samples)
def test_two_group_anova_equals_t_squared(g1, g2):
    try:
        t = t_test(g1, g2)
    except DegenerateDataError:
        return
    f = anova_oneway([g1, g2])
    assert f.statistic == pytest.approx(t.statistic**2, rel=1e-9, abs=1e-12)
    assert f.p_value == pytest.approx(t.p_value, abs=1e-9)


@given(st.lists(samples, min_size=2, max_size=5), st.randoms())
def test_anova_permutation_invariance(groups, rnd):
    try:
        base = anova_oneway(groups)
    except DegenerateDataError:
        return
    shuffled = [rnd.sample(g, len(g)) for g in groups]
    rnd.shuffle(shuffled)
    r = anova_oneway(shuffled)
    assert r.statistic == pytest.approx(base.statistic, rel=1e-12, abs=1e-12)
    assert 0.0 <= r.p_value <= 1.0


def test_group_csv_parsing():
    g = GroupSamples.from_csv("group,value\nb,1\na,2\nb,3\na,4\n")
    assert g.names == ("b", "a")
    assert g.groups == ((1.0, 3.0), (2.0, 4.0))
    with pytest.raises(ArgumentError):
        GroupSamples.from_csv("a,1,2\n")
    with pytest.raises(ArgumentError):
        GroupSamples.from_csv("a,x\n")


def test_result_line():
    assert t_test([1, 2, 3], [1, 2, 3]).line() == "ttest,0.0,4,1.0"
    assert anova_oneway([[1, 2, 3], [1, 2, 3]]).line() == "anova,0.0,1/4,1.0"
