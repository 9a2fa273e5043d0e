"""The standard small algebras used throughout the tests and the CLI."""

from __future__ import annotations

from .constructions import (
    DEFAULT_FIELD,
    artinian_ring,
    ci_fiber,
    exterior_algebra,
    field_algebra,
    fiber_from_dg_resolution,
    koszul_on_maximal_ideal,
    taylor_resolution_data,
)
from .linalg import MultiPoly


def _poly(field, variables, terms):
    return MultiPoly(field, variables, terms)


def f_field(field=None):
    a = field_algebra(field or DEFAULT_FIELD)
    a.name = "F-FIELD"
    return a


def f_rg(field=None):
    F = field or DEFAULT_FIELD
    a = artinian_ring(("x",), [_poly(F, ("x",), {(2,): 1})], F, name="F-RG")
    return a


def f_rn(field=None):
    F = field or DEFAULT_FIELD
    v = ("x", "y")
    rels = [_poly(F, v, {(2, 0): 1}), _poly(F, v, {(1, 1): 1}), _poly(F, v, {(0, 2): 1})]
    return artinian_ring(v, rels, F, name="F-RN")


def f_ext1(field=None):
    a = exterior_algebra(["e"], -1, field or DEFAULT_FIELD)
    a.name = "F-EXT1"
    return a


def f_kg(field=None):
    a = koszul_on_maximal_ideal(f_rg(field))
    a.name = "F-KG"
    return a


def f_kn(field=None):
    a = koszul_on_maximal_ideal(f_rn(field))
    a.name = "F-KN"
    return a


def cubic_ring(field=None):
    F = field or DEFAULT_FIELD
    return artinian_ring(("x",), [_poly(F, ("x",), {(3,): 1})], F, name="k[x]/(x^3)")


def taylor_fiber(field=None):
    """Derived fiber of k[u,v] -> k[u,v]/(u^2, uv, v^2) via the Taylor resolution."""
    F = field or DEFAULT_FIELD
    r = taylor_resolution_data(F, ("u", "v"), [(2, 0), (1, 1), (0, 2)])
    a = fiber_from_dg_resolution(r)
    a.name = "taylor-fiber"
    return a


def ci2(field=None):
    a = ci_fiber(2, field or DEFAULT_FIELD)
    return a


FIXTURES = {
    "F-FIELD": f_field,
    "F-RG": f_rg,
    "F-RN": f_rn,
    "F-EXT1": f_ext1,
    "F-KG": f_kg,
    "F-KN": f_kn,
}

GORENSTEIN = {"F-FIELD": True, "F-RG": True, "F-RN": False, "F-EXT1": True, "F-KG": True, "F-KN": False}


def fixture(name: str, field=None):
    try:
        return FIXTURES[name](field)
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}") from None
