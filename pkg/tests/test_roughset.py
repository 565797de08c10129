import itertools
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from painsense.errors import ArgumentError, ConfigError
from painsense.roughset import (
    ConstantAttributeWarning,
    InformationSystem,
    attribute_weights,
    dependence,
    discretize,
    importance,
    indiscernibility_classes,
    normalize_attribute,
    normalize_weights,
    positive_region,
    read_decision_table,
    screen,
    write_decision_table,
)
from oracles import dependence_bruteforce, importance_bruteforce, positive_region_bruteforce


@pytest.fixture
def two_attr():
    return InformationSystem.from_codes({"a": [0, 0, 1, 1], "b": [0, 1, 0, 1]})


def as_table(system):
    return {
        obj: {a: int(system.codes[i, j]) for j, a in enumerate(system.attributes)}
        for i, obj in enumerate(system.universe)
    }


@st.composite
def decision_tables(draw, max_objects=8, max_attrs=3, n_codes=3):
    n = draw(st.integers(1, max_objects))
    m = draw(st.integers(1, max_attrs))
    columns = {f"a{j}": draw(st.lists(st.integers(0, n_codes - 1), min_size=n, max_size=n)) for j in range(m)}
    system = InformationSystem.from_codes(columns)
    target = draw(st.sets(st.sampled_from(system.universe)))
    return system, target


def test_normalize_examples():
    assert normalize_attribute([2, 4, 6]).tolist() == [0.0, 0.5, 1.0]
    assert normalize_attribute([0, 1023]).tolist() == [0.0, 1.0]
    with pytest.warns(ConstantAttributeWarning):
        assert normalize_attribute([5, 5, 5]).tolist() == [0.0, 0.0, 0.0]
    with pytest.raises(ArgumentError):
        normalize_attribute([])


def test_discretize_examples():
    assert discretize([0.0, 0.5, 1.0], 5).tolist() == [0, 2, 4]
    assert discretize([0.999, 1.0], 4).tolist() == [3, 3]
    with pytest.raises(ConfigError):
        discretize([0.1], 1)


@given(st.floats(0.0, 1.0))
def test_two_bin_split(v):
    assert discretize([v], 2).tolist() == [0 if v < 0.5 else 1]


@given(st.lists(st.floats(0.0, 1.0), min_size=1), st.integers(2, 20))
def test_discretize_code_range(values, bins):
    codes = discretize(values, bins)
    assert codes.min() >= 0 and codes.max() <= bins - 1


def test_indiscernibility_examples(two_attr):
    assert indiscernibility_classes(two_attr, ["a"]) == [(1, 2), (3, 4)]
    assert indiscernibility_classes(two_attr, ["a", "b"]) == [(1,), (2,), (3,), (4,)]
    same = InformationSystem.from_codes({"a": [2, 2, 2]})
    assert indiscernibility_classes(same, ["a"]) == [(1, 2, 3)]


def test_indiscernibility_errors(two_attr):
    with pytest.raises(ArgumentError):
        indiscernibility_classes(two_attr, [])
    with pytest.raises(ArgumentError):
        indiscernibility_classes(two_attr, ["zzz"])


def test_positive_region_examples(two_attr):
    assert positive_region(two_attr, ["a"], {1, 2}) == [1, 2]
    assert positive_region(two_attr, ["a"], {1, 3}) == []
    assert positive_region(two_attr, ["a"], two_attr.universe) == [1, 2, 3, 4]
    with pytest.raises(ArgumentError):
        positive_region(two_attr, ["a"], {99})


def test_dependence_examples(two_attr):
    assert dependence(two_attr, ["a"], {1, 2}) == 0.5
    assert dependence(two_attr, ["a"], two_attr.universe) == 1.0
    assert dependence(two_attr, ["a"], set()) == 0.0


def test_importance_examples(two_attr):
    assert importance(two_attr, ["a", "b"], "a", {1}) == 0.25
    assert importance(two_attr, ["a", "b"], "b", {1}) == 0.25
    with pytest.raises(ArgumentError):
        importance(two_attr, ["a"], "b", {1})


@given(st.lists(st.integers(0, 2), min_size=1, max_size=8), st.data())
def test_duplicate_attribute_has_zero_importance(codes, data):
    system = InformationSystem.from_codes({"a": codes, "a_copy": list(codes)})
    target = data.draw(st.sets(st.sampled_from(system.universe)))
    assert importance(system, ["a", "a_copy"], "a", target) == 0.0


def test_single_attribute_importance_uses_empty_set_convention():
    system = InformationSystem.from_codes({"a": [0, 0, 1, 1]})
    # proper subset: POS over no attributes is empty
    assert importance(system, ["a"], "a", {1, 2}) == 0.5
    # X = U: both positive regions are U
    assert importance(system, ["a"], "a", system.universe) == 0.0


def test_attribute_weights_worked_example(two_attr):
    w = attribute_weights(two_attr, {1}, 0.5, 0.5)
    assert w.rho == (0.0, 0.0)
    assert w.gamma == (0.25, 0.25)
    assert w.omega == (0.125, 0.125)
    assert w.omega_norm == (0.5, 0.5)
    assert not w.zero_mass


def test_attribute_weights_single_attribute():
    system = InformationSystem.from_codes({"a": [0, 1, 1, 2]})
    w = attribute_weights(system, {1})
    assert w.omega_norm == (1.0,)


@given(decision_tables())
def test_alpha_one_gives_dependence(case):
    system, target = case
    w = attribute_weights(system, target, 1.0, 0.0)
    assert w.omega == w.rho


def test_full_dependence_mode(two_attr):
    w = attribute_weights(two_attr, {1}, 0.5, 0.5, "full")
    assert w.rho == (0.25, 0.25)


@pytest.mark.parametrize("alpha, beta", [(0.5, 0.6), (-0.1, 1.1), (1.0, 0.1)])
def test_attribute_weights_mixing_validation(two_attr, alpha, beta):
    with pytest.raises(ConfigError):
        attribute_weights(two_attr, {1}, alpha, beta)


def test_attribute_weights_bad_mode(two_attr):
    with pytest.raises(ConfigError):
        attribute_weights(two_attr, {1}, dependence_mode="both")


def test_normalize_weights_examples():
    w, flag = normalize_weights([0.125, 0.125])
    assert w.tolist() == [0.5, 0.5] and not flag
    w, flag = normalize_weights([3.7])
    assert w.tolist() == [1.0] and not flag
    w, flag = normalize_weights([0, 0, 0])
    assert w.tolist() == [1 / 3] * 3 and flag
    with pytest.raises(ArgumentError):
        normalize_weights([0.5, -0.1])


@given(st.lists(st.floats(0, 1e6), min_size=1, max_size=50))
def test_normalize_weights_sum(values):
    w, flag = normalize_weights(values)
    assert flag == all(v == 0 for v in values)
    assert abs(sum(w) - 1.0) <= 1e-12


def test_screen_examples():
    system = InformationSystem.from_codes({"a": [0, 1, 2]}, raw=np.array([[0.0], [0.5], [1.0]]))
    w = attribute_weights(system, {3})
    assert screen(system, w, 0.5).selected == (2, 3)
    assert screen(system, w, 0.0).selected == system.universe
    assert screen(system, w, 1.0).selected == (3,)
    with pytest.raises(ConfigError):
        screen(system, w, 1.0 + 1e-9)
    with pytest.raises(ConfigError):
        screen(system, w, -0.1)


@given(decision_tables(), st.lists(st.floats(0, 1), min_size=2, max_size=6))
def test_screen_anti_monotone(case, thetas):
    system, target = case
    w = attribute_weights(system, target)
    thetas = sorted(thetas)
    results = [set(screen(system, w, t).selected) for t in thetas]
    for lo, hi in zip(results, results[1:]):
        assert hi <= lo
    assert all(0.0 <= s <= 1.0 for s in screen(system, w, 0.0).scores)


@given(decision_tables())
def test_structure_against_bruteforce(case):
    system, target = case
    table = as_table(system)
    attrs = list(system.attributes)
    for r in range(1, len(attrs) + 1):
        for subset in itertools.combinations(attrs, r):
            blocks = indiscernibility_classes(system, subset)
            flat = [x for b in blocks for x in b]
            assert sorted(flat) == sorted(system.universe)
            assert len(flat) == len(set(flat))
            pos = set(positive_region(system, subset, target))
            assert pos == positive_region_bruteforce(table, subset, target)
            assert pos <= set(target)
            # int/int division and float(Fraction) are both correctly rounded, so equality is exact
            assert dependence(system, subset, target) == float(dependence_bruteforce(table, subset, target))
            for a in subset:
                expected = importance_bruteforce(table, subset, a, target)
                assert importance(system, subset, a, target) == float(expected)


@given(decision_tables())
def test_refinement_monotonicity(case):
    system, target = case
    attrs = list(system.attributes)
    for r in range(1, len(attrs)):
        for small in itertools.combinations(attrs, r):
            coarse = [set(b) for b in indiscernibility_classes(system, small)]
            fine = indiscernibility_classes(system, attrs)
            assert all(any(set(b) <= c for c in coarse) for b in fine)
            assert set(positive_region(system, small, target)) <= set(positive_region(system, attrs, target))


def test_from_values_records_constant_attribute():
    system = InformationSystem.from_values({"x": [1.0, 2.0, 3.0], "flat": [4.0, 4.0, 4.0]}, bins=5)
    assert system.constant_attributes == ("flat",)
    assert system.codes[:, 1].tolist() == [0, 0, 0]
    assert system.raw[:, 0].tolist() == [0.0, 0.5, 1.0]


def test_information_system_validation():
    with pytest.raises(ArgumentError):
        InformationSystem((1, 2), ("a",), np.array([[0], [1]]), np.array([[0.0], [1.5]]))
    with pytest.raises(ArgumentError):
        InformationSystem((1, 1), ("a",), np.array([[0], [1]]), np.array([[0.0], [1.0]]))


def test_decision_table_csv_roundtrip(two_attr):
    text = write_decision_table(two_attr, {1, 4})
    assert text.splitlines()[0] == "object,a,b,label"
    system, target = read_decision_table(text)
    assert system.attributes == ("a", "b")
    assert system.universe == ("1", "2", "3", "4")
    assert set(target) == {"1", "4"}
    assert system.codes.tolist() == two_attr.codes.tolist()
    assert write_decision_table(system, target) == text


@pytest.mark.parametrize(
    "text",
    [
        "",
        "obj,a,label\n1,0,1\n",
        "object,a,label\n1,-1,1\n",
        "object,a,label\n1,0,2\n",
        "object,a,label\n1,0\n",
        "object,a,label\n",
    ],
)
def test_decision_table_csv_rejects(text):
    with pytest.raises(ArgumentError):
        read_decision_table(text)


def test_no_warning_from_information_system():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        InformationSystem.from_values({"flat": [1.0, 1.0]})
