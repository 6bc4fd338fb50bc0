"""JSON round trips and parse errors."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import off_orbit_point

from fuchsred import EXACT, DiscreteData, FloatField, io, reduce
from fuchsred.reduction import random_level_specs, sample_tuple
from fuchsred.scalars import gq

F = EXACT
fractions = st.fractions(max_denominator=10**12)


@settings(max_examples=60, deadline=None)
@given(re=fractions, im=fractions)
def test_exact_scalar_round_trip(re, im):
    x = gq(re, im)
    assert io.load_scalar(io.dump_scalar(x, F), F) == x


@settings(max_examples=60, deadline=None)
@given(re=st.floats(allow_nan=False, allow_infinity=False),
       im=st.floats(allow_nan=False, allow_infinity=False))
def test_float_scalar_round_trip(re, im):
    f = FloatField()
    z = complex(re, im)
    assert io.load_scalar(io.loads(io.dumps({"z": io.dump_scalar(z, f)}))["z"], f) == z


@pytest.mark.parametrize("text, value", [
    ("3/2", gq(Fraction(3, 2))),
    ("1-2i", gq(1, -2)),
    ("-1/3+4/5i", gq(Fraction(-1, 3), Fraction(4, 5))),
    ("i", gq(0, 1)),
    ("-i", gq(0, -1)),
    ("2.5", gq(Fraction(5, 2))),
])
def test_exact_text_forms(text, value):
    assert io.load_scalar(text, F) == value


def test_plain_numbers():
    assert io.load_scalar(7, F) == gq(7)
    assert io.load_scalar([1, 2], F) == gq(1, 2)
    assert io.load_scalar("1+i", FloatField()) == complex(1, 1)


@pytest.mark.parametrize("bad", [True, None, [1, 2, 3], ["1", "0", "0", "1"], "x/y", {"a": 1}])
def test_bad_scalars(bad):
    with pytest.raises(io.ParseError):
        io.load_scalar(bad, F)


def test_tuple_round_trip_is_lossless():
    rng = random.Random(5)
    specs = random_level_specs(3, 4, rng, F, nilpotent=(1,))
    x = sample_tuple(specs, rng, F)
    text = io.dumps(io.dump_tuple(x))
    back = io.load_tuple(io.loads(text))
    assert back == x
    assert io.dumps(io.dump_tuple(back)) == text


def test_reduced_round_trip_is_lossless():
    rng = random.Random(6)
    specs = random_level_specs(3, 5, rng, F)
    data = DiscreteData.default(specs).coerce(F)
    p = reduce(sample_tuple(specs, rng, F, data), data)
    back = io.load_reduced(io.loads(io.dumps(io.dump_reduced(p))))
    assert back == p
    q = off_orbit_point()
    assert io.load_reduced(io.dump_reduced(q)) == q


def test_discrete_defaults_fill_in():
    rng = random.Random(1)
    specs = random_level_specs(2, 4, rng, F)
    data = io.load_discrete({"anchors": [3, 2, 1]}, F, specs)
    assert data.lambda_top == specs[3].eigs[0][0]
    assert data.ordering_up == specs[2].slots()
    full = io.dump_discrete(data, F)
    assert io.load_discrete(full, F) == data


def test_mode_mismatch():
    rng = random.Random(2)
    x = sample_tuple(random_level_specs(2, 3, rng, F), rng, F)
    with pytest.raises(io.ParseError):
        io.load_tuple(io.dump_tuple(x), FloatField())


def test_structural_errors():
    with pytest.raises(io.ParseError):
        io.loads("{not json")
    with pytest.raises(io.ParseError):
        io.load_tuple({"specs": []})
    with pytest.raises(io.ParseError):
        io.load_matrix([[1, 2], [3]], F)
    with pytest.raises(io.ParseError):
        io.load_matrix([[1, 2], [3, 4]], F, m=3)
    with pytest.raises(io.ParseError):
        io.read_json("/nonexistent/file.json")


def test_dumps_is_canonical():
    doc = {"b": 1, "a": [1, 2]}
    assert io.dumps(doc) == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'
