import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from creativemdp.normalize import (
    Affine,
    Logistic,
    MinMax,
    normalize,
    tag_from_string,
    tag_to_string,
)

finite_arrays = st.lists(
    st.floats(min_value=-1e12, max_value=1e12, allow_nan=False, allow_infinity=False),
    min_size=1,
    max_size=12,
)


def test_min_max_endpoints():
    assert normalize([0.0, 10.0], MinMax()).tolist() == [0.0, 1.0]


def test_min_max_constant_rule():
    assert normalize([3.0, 3.0, 3.0], MinMax()).tolist() == [0.5, 0.5, 0.5]


def test_logistic_standard():
    out = normalize([-1.0, 0.0, 1.0], Logistic(0.0, 1.0))
    sigma = lambda x: 1.0 / (1.0 + math.exp(-x))
    assert out == pytest.approx([sigma(-1.0), 0.5, sigma(1.0)])


def test_affine_clamps():
    assert normalize([-5.0, 0.25, 5.0], Affine(1.0, 0.0)).tolist() == [0.0, 0.25, 1.0]


@pytest.mark.parametrize("bad", [float("nan"), float("inf"), -float("inf")])
def test_rejects_non_finite(bad):
    with pytest.raises(ValueError):
        normalize([0.0, bad], MinMax())


@given(finite_arrays)
def test_min_max_in_unit_interval(xs):
    out = normalize(xs, MinMax())
    assert np.all(out >= 0.0) and np.all(out <= 1.0)


@given(finite_arrays, st.floats(-3, 3), st.floats(-3, 3))
def test_affine_in_unit_interval(xs, scale, offset):
    out = normalize(xs, Affine(scale, offset))
    assert np.all(out >= 0.0) and np.all(out <= 1.0)


@given(finite_arrays, st.floats(-10, 10), st.floats(0.01, 5))
def test_logistic_in_unit_interval(xs, center, slope):
    out = normalize(xs, Logistic(center, slope))
    assert np.all(out >= 0.0) and np.all(out <= 1.0)


@given(finite_arrays)
def test_min_max_monotone(xs):
    out = normalize(xs, MinMax())
    order = np.argsort(xs, kind="stable")
    assert np.all(np.diff(out[order]) >= 0)


@pytest.mark.parametrize(
    "text,tag",
    [
        ("min-max", MinMax()),
        ("affine", Affine()),
        ("affine:2,0.5", Affine(2.0, 0.5)),
        ("logistic", Logistic()),
        ("logistic:1,3", Logistic(1.0, 3.0)),
    ],
)
def test_tag_string_round_trip(text, tag):
    assert tag_from_string(text) == tag
    assert tag_from_string(tag_to_string(tag)) == tag


def test_tag_from_string_rejects_unknown():
    with pytest.raises(ValueError):
        tag_from_string("zscore")
