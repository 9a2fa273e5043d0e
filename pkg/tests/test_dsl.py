from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from dgaudit.dsl import (
    COMMANDS,
    DslNameError,
    DslSyntaxError,
    Item,
    Script,
    format_expr,
    format_script,
    parse,
    resolve_names,
    tokenize,
)

EXAMPLE = """
field Fp 101;
ring R = poly x / (x^2);   # comment
algebra A = koszul R (x);
audit A window 10;
"""

names = st.sampled_from(["x", "y", "z", "u1", "v_2"])

exprs = st.recursive(
    st.one_of(st.integers(0, 50).map(lambda n: ("num", n)), names.map(lambda v: ("var", v))),
    lambda inner: st.one_of(
        st.tuples(inner, inner).map(lambda t: ("add", t)),
        st.tuples(inner, inner).map(lambda t: ("sub", *t)),
        st.tuples(inner, inner, inner).map(lambda t: ("mul", t)),
        st.tuples(inner, st.integers(1, 5)).map(lambda t: ("pow", *t)),
        inner.map(lambda e: ("neg", e)),
    ),
    max_leaves=8,
)


def test_example_parses():
    s = parse(EXAMPLE)
    assert len(s) == 4
    assert [it.kind for it in s.items] == ["field", "ring", "algebra", "audit"]
    assert s.items[3].opts == (("window", 10),)
    assert s.items[1].body == (("x",), (("pow", ("var", "x"), 2),))
    assert len(s.commands()) == 1


def test_empty_script():
    assert len(parse("")) == 0
    assert len(parse("# only a comment\n")) == 0


def test_positions_in_syntax_errors():
    with pytest.raises(DslSyntaxError) as err:
        parse("field Fp 101;\nring R = poly x / ((x^2);")
    assert (err.value.line, err.value.col) == (2, 25)
    assert "')'" in err.value.expected
    assert isinstance(err.value, SyntaxError)


@pytest.mark.parametrize("text", [
    "ring R = poly x / (x^2)",
    "algebra = koszul R;",
    "field GF 7;",
    "ring R = poly / (x);",
    "audit;",
    "algebra A = koszul R (x,);",
    "frobnicate A;",
    "ring R = poly x / (x @ 2);",
])
def test_malformed_scripts_raise_syntax_errors(text):
    with pytest.raises(SyntaxError):
        parse(text)


@pytest.mark.parametrize("text,name", [
    ("audit A;", "A"),
    ("ring R = poly x / (x^2); module M = residue S;", "S"),
    ("ring R = poly x / (x^2); module M = frob R;", "frob"),
    ("ring R = poly x / (x^2); bass R;", "R"),
    ("ring R = poly x / (x^2); module M = residue R; audit R family M, N;", "N"),
    ("module M = dual N;", "N"),
])
def test_undeclared_names(text, name):
    with pytest.raises(NameError) as err:
        parse(text)
    assert err.value.name == name
    assert isinstance(err.value, DslNameError)


def test_names_can_be_skipped():
    assert len(parse("audit A;", check_names=False)) == 1


def test_tokenizer_rejects_stray_characters():
    with pytest.raises(DslSyntaxError) as err:
        tokenize("ring R = poly x / (x $ 2);")
    assert err.value.col == 22


def test_all_declaration_forms_round_trip():
    text = """
    field Q;
    field Fp 7;
    ring R = poly x, y / (x^2, x*y, y^2 - 3*x*y + -2);
    algebra A = koszul R;
    algebra B = koszul A (x, y);
    algebra E = exterior (e, f) degree -3;
    algebra T = fiber taylor (u, v) / (u^2, u*v, v^2);
    algebra C = adjoin R (e : -1 = x, t : -2 nil 3);
    algebra K = fixture "F-KG";
    algebra S = A;
    module M = shift dual residue A 2;
    module N = koszul A;
    module P = M;
    ext M N window 5 seed 3;
    audit A family A, k, dual, M;
    validate R;
    cohomology M;
    """
    s = parse(text)
    out = format_script(s)
    assert parse(out) == s
    assert format_script(parse(out)) == out


@given(st.lists(exprs, min_size=1, max_size=3))
@settings(max_examples=150, deadline=None)
def test_pretty_printer_is_a_fixed_point(rels):
    text = f"ring R = poly x, y, z, u1, v_2 / ({', '.join(format_expr(e) for e in rels)});"
    s = parse(text)
    once = format_script(s)
    assert parse(once) == s
    assert format_script(parse(once)) == once


@given(exprs)
@settings(max_examples=150, deadline=None)
def test_printed_expressions_reparse_to_equal_values(e):
    # evaluate both trees over the integers mod 101 at a fixed point
    point = {"x": 3, "y": 5, "z": 7, "u1": 11, "v_2": 13}

    def ev(t):
        tag = t[0]
        if tag == "num":
            return t[1] % 101
        if tag == "var":
            return point[t[1]]
        if tag == "add":
            return sum(ev(x) for x in t[1]) % 101
        if tag == "sub":
            return (ev(t[1]) - ev(t[2])) % 101
        if tag == "mul":
            out = 1
            for x in t[1]:
                out = out * ev(x) % 101
            return out
        if tag == "pow":
            return pow(ev(t[1]), t[2], 101)
        return -ev(t[1]) % 101

    s = parse(f"ring R = poly x / ({format_expr(e)});", check_names=False)
    assert ev(s.items[0].body[1][0]) == ev(e)


def test_commands_have_argument_kinds():
    assert set(COMMANDS) >= {"audit", "bass", "ext", "depth", "projdim", "injdim", "gorenstein", "mcm", "resolve", "condition7"}
    kinds = resolve_names(parse("ring R = poly x / (x^2); module M = residue R;"))
    assert kinds == {"R": "ring", "M": "module"}


def test_item_equality_ignores_positions():
    a = Item("audit", None, ("A",), (), 1, 1)
    b = Item("audit", None, ("A",), (), 5, 9)
    assert a == b
    assert Script([a]).commands() == [b]
