from __future__ import annotations

import math

import pytest
from hypothesis import given, settings, strategies as st

from dgaudit.complexes import (
    Cochain,
    CochainMap,
    ComplexError,
    cohomology,
    cohomology_dims,
    cone,
    euler_characteristic,
    identity_map,
    shift,
    sup_inf_amp,
    trunc_ge,
    trunc_le,
    zero_map,
)
from dgaudit.linalg import PrimeField

from strategies import F, complexes_with_cohomology


@given(complexes_with_cohomology())
@settings(max_examples=50, deadline=None)
def test_cohomology_matches_construction(data):
    c, h = data
    assert cohomology_dims(c) == h
    assert cohomology(c).dims == h


@given(complexes_with_cohomology(), st.integers(-3, 3))
@settings(max_examples=40, deadline=None)
def test_shift_moves_cohomology(data, i):
    c, h = data
    assert cohomology_dims(shift(c, i)) == {n - i: k for n, k in h.items()}


@given(complexes_with_cohomology())
@settings(max_examples=40, deadline=None)
def test_euler_characteristic_of_chains_and_cohomology(data):
    c, h = data
    assert euler_characteristic(c.dims) == euler_characteristic(h)


@given(complexes_with_cohomology())
@settings(max_examples=40, deadline=None)
def test_cone_of_identity_is_acyclic(data):
    c, _ = data
    assert cohomology_dims(cone(identity_map(c))) == {}


@given(complexes_with_cohomology())
@settings(max_examples=30, deadline=None)
def test_cone_of_zero_map_is_sum(data):
    c, h = data
    out = cohomology_dims(cone(zero_map(c, c)))
    expected = {}
    for n, k in h.items():
        expected[n] = expected.get(n, 0) + k
        expected[n - 1] = expected.get(n - 1, 0) + k
    assert out == expected


@given(complexes_with_cohomology(), st.integers(-3, 3))
@settings(max_examples=40, deadline=None)
def test_truncations_split_cohomology(data, i):
    c, h = data
    hi, proj = trunc_ge(c, i)
    lo, inc = trunc_le(c, i)
    assert cohomology_dims(hi) == {n: k for n, k in h.items() if n >= i}
    assert cohomology_dims(lo) == {n: k for n, k in h.items() if n <= i}
    assert proj.target is hi and inc.source is lo


@given(complexes_with_cohomology())
@settings(max_examples=30, deadline=None)
def test_classify_representatives(data):
    c, _ = data
    H = cohomology(c)
    for n, reps in H.reps.items():
        for j, z in enumerate(reps):
            assert H.classify(n, z) == {j: 1}


def test_rejects_nonzero_square():
    with pytest.raises(ComplexError):
        Cochain(F, {0: 1, 1: 1, 2: 1}, {0: [{0: 1}], 1: [{0: 1}]})


def test_rejects_noncommuting_map():
    c = Cochain(F, {0: 1, 1: 1}, {0: [{0: 1}]})
    with pytest.raises(ComplexError):
        CochainMap(c, c, {0: [{0: 1}], 1: [{}]})


def test_classify_rejects_non_cocycle():
    c = Cochain(F, {0: 1, 1: 1}, {0: [{0: 1}]})
    H = cohomology(c)
    with pytest.raises(ComplexError):
        H.classify(0, {0: 1})


def test_sup_inf_amp():
    assert sup_inf_amp({}) == (-math.inf, math.inf, None)
    assert sup_inf_amp({-2: 1, 0: 3}) == (0, -2, 2)


def test_field_mismatch_in_map():
    c = Cochain(F, {0: 1}, {})
    e = Cochain(PrimeField(7), {0: 1}, {})
    with pytest.raises(ComplexError):
        CochainMap(c, e, {})
