from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from dgaudit.constructions import koszul_module, koszul_on_maximal_ideal
from dgaudit.dg import shift_module
from dgaudit.fixtures import ci2, cubic_ring, f_ext1, f_field, f_kg, f_kn, f_rg, f_rn
from dgaudit.gorenstein import (
    UNBOUNDED,
    InternalInconsistency,
    auslander_bound_estimate,
    audit_theorem,
    cohomology_algebra,
    condition7_test,
    gdim,
    gorenstein_bass,
    gorenstein_pairing,
    is_dualizing,
    is_gorenstein_projective,
    is_mcm,
    lc_dim,
    p_bound,
    socle_dimension,
    support,
    thick_by_support,
)
from dgaudit.resolutions import UNKNOWN, Verdict, dual, regular, residue

from oracles import standard_monomials
from strategies import monomial_ring, monomial_ring_data, ring_seeds


def monomial_socle(n, gens):
    # standard monomials killed into the ideal by every variable
    std = set(standard_monomials(n, gens))
    out = 0
    for e in std:
        if all(tuple(e[j] + (j == i) for j in range(n)) not in std for i in range(n)):
            out += 1
    return out


def test_cohomology_algebra_is_associative_and_unital():
    H = cohomology_algebra(f_kn(), random.Random(3))
    basis = [{i: 1} for i in range(H.dim)]
    for x in basis:
        assert H.product(H.unit, x) == x
        for y in basis:
            for z in basis:
                assert H.product(H.product(x, y), z) == H.product(x, H.product(y, z))


def test_cohomology_algebra_independent_of_representatives():
    a = f_kn()
    H1 = cohomology_algebra(a)
    H2 = cohomology_algebra(a, random.Random(7))
    assert H1.dims() == H2.dims()
    for x in range(H1.dim):
        for y in range(H1.dim):
            assert bool(H1.product({x: 1}, {y: 1})) == bool(H2.product({x: 1}, {y: 1}))


@pytest.mark.parametrize("make,method", [(f_field, "single check"), (f_rg, "exact expansion"), (f_kg, "single check")])
def test_pairing_methods(make, method):
    v = gorenstein_pairing(make())
    assert v.is_true and v.witness["method"] == method
    assert v.witness["certificate"].endswith("quasi-isomorphism")


def test_pairing_rejects_asymmetric_dimensions():
    v = gorenstein_pairing(f_kn())
    assert v.is_false and v.witness["reason"] == "dimension symmetry fails"


def test_pairing_rejects_degenerate():
    v = gorenstein_pairing(f_rn())
    assert v.is_false and v.witness["method"] == "exact expansion"


def test_sampling_route_on_larger_rings():
    # k[x,y]/(x^2, y^2) is Gorenstein, k[x,y]/(x^2, xy, y^3) is not
    good = gorenstein_pairing(monomial_ring(2, [(2, 0), (0, 2)]))
    assert good.is_true and good.witness["method"] == "Schwartz-Zippel"
    assert good.witness["failure_bound"] < 2**-39
    bad = gorenstein_pairing(monomial_ring(2, [(2, 0), (1, 1), (0, 3)]))
    assert bad.is_false


def test_pairing_is_seed_independent():
    a = monomial_ring(2, [(2, 0), (0, 2)])
    assert {gorenstein_pairing(a, s).value for s in range(4)} == {True}


@given(ring_seeds)
@settings(max_examples=20, deadline=None)
def test_pairing_matches_socle_oracle_on_monomial_rings(seed):
    n, gens = monomial_ring_data(random.Random(seed))
    a = monomial_ring(n, gens)
    expected = monomial_socle(n, gens) == 1
    assert socle_dimension(a) == monomial_socle(n, gens)
    assert gorenstein_pairing(a).value is expected


@given(ring_seeds)
@settings(max_examples=10, deadline=None)
def test_pairing_and_bass_agree_on_koszul_complexes(seed):
    n, gens = monomial_ring_data(random.Random(seed), max_vars=2, max_dim=5)
    k = koszul_on_maximal_ideal(monomial_ring(n, gens))
    pv = gorenstein_pairing(k)
    bv = gorenstein_bass(k, 8, pairing=pv)
    assert bv.value == pv.value or bv.is_unknown


def test_bass_cross_check_raises_on_disagreement():
    fake = Verdict(False, None, {})
    with pytest.raises(InternalInconsistency):
        gorenstein_bass(f_rg(), 6, pairing=fake)


def test_gdim_values():
    a = f_kg()
    assert gdim(regular(a), 8)[0] == 0
    assert gdim(residue(a), 8)[0] == -1
    value, refl = gdim(residue(f_kn()), 6)
    assert value == UNKNOWN and refl.is_unknown


def test_gorenstein_projective():
    a = f_rg()
    assert is_gorenstein_projective(regular(a), 8).is_true
    assert is_gorenstein_projective(residue(a), 8).is_true
    assert is_gorenstein_projective(shift_module(regular(a), 1), 8).is_false


def test_p_bound_certified_routes():
    a = f_rn()
    pb = p_bound(regular(a), residue(a), 8)
    assert pb.value == 0 and pb.route == "finite resolution of the source"
    g = f_rg()
    pb = p_bound(residue(g), regular(g), 8)
    assert pb.value == 0 and pb.route == "finite injective dimension of the target"


def test_p_bound_unbounded_evidence():
    a = f_rn()
    pb = p_bound(residue(a), residue(a), 6)
    assert pb.value == UNBOUNDED
    assert pb.to_json()["table"]


@given(st.integers(-3, 3))
@settings(max_examples=7, deadline=None)
def test_p_bound_shift_invariance(k):
    a = f_kg()
    for m, n in [(regular(a), residue(a)), (residue(a), regular(a)), (koszul_module(a), regular(a))]:
        assert p_bound(m, shift_module(n, k), 8).value == p_bound(m, n, 8).value


def test_auslander_estimate():
    a = f_rg()
    fam = [regular(a), residue(a), dual(regular(a))]
    best, caveat, values = auslander_bound_estimate(regular(a), fam, 8)
    assert best == 0 and "lower bound" in caveat
    with pytest.raises(ValueError):
        auslander_bound_estimate(regular(a), [], 8)


def test_dualizing():
    a = f_rg()
    assert is_dualizing(a, dual(regular(a)), 6).is_true
    assert is_dualizing(a, regular(a), 6).is_true
    b = f_rn()
    assert is_dualizing(b, dual(regular(b)), 6).is_true
    assert is_dualizing(b, regular(b), 6).is_false
    with pytest.raises(ValueError):
        is_dualizing(a, regular(b), 6)


def test_support_lc_and_mcm():
    a = f_kg()
    A = regular(a)
    assert support(A) == ["m"]
    assert lc_dim(A) == 0
    assert is_mcm(A).is_true
    assert not is_mcm(residue(a)).is_true
    assert thick_by_support(koszul_module(a), A).is_true


def test_condition7():
    a = f_kg()
    v = condition7_test(a, residue(a), 8)
    assert v.is_true and v.witness["n"] == -1
    v = condition7_test(f_kn(), residue(f_kn()), 6)
    assert v.is_unknown


@pytest.mark.parametrize("make", [f_field, f_rg, f_ext1, f_kg, ci2, cubic_ring], ids=lambda f: f.__name__)
def test_audit_gorenstein_small(make):
    rep = audit_theorem(make(), window=8)
    assert rep.consistent
    assert set(rep.verdicts().values()) == {True}


def test_audit_non_gorenstein_rn():
    rep = audit_theorem(f_rn(), window=8)
    assert rep.consistent
    v = rep.verdicts()
    assert v[1] is False
    for e in rep.entries[1:]:
        assert e["verdict"].value == UNKNOWN and e["verdict"].witness


def test_audit_report_json_shape():
    rep = audit_theorem(f_rg(), window=6)
    js = rep.to_json()
    assert [c["id"] for c in js["conditions"]] == list(range(1, 8))
    assert js["family"] == ["A", "k", "A^v", "A//x"]
    assert js["consistent"] is True
