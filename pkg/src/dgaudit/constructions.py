"""Building DG algebras: Artinian quotient rings, free graded-commutative
extensions, Koszul quotients, and derived fibers from DG resolutions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

from .dg import (
    AxiomFailure,
    DgAlgebra,
    DgModule,
    ValidationReport,
    _sign,
    check_dga,
    h0,
)
from .linalg import Echelon, MultiPoly, PrimeField, axpy, poly_reduce_at_origin, scaled


class InfiniteDimensional(ValueError):
    pass


class CapExceeded(ValueError):
    pass


class LiftFailure(AssertionError):
    pass


DEFAULT_FIELD = PrimeField(101)
DEFAULT_CAP = 4096


# ---------------------------------------------------------------------------
# expressions: ("num", c) | ("var", name) | ("add", [e...]) | ("sub", a, b)
#              | ("mul", [e...]) | ("pow", e, n) | ("neg", e)


def evaluate(expr, env: dict, one, add, mul, scale):
    """Evaluate an expression tree with user-supplied ring operations."""
    tag = expr[0]
    if tag == "num":
        return scale(one, expr[1])
    if tag == "var":
        if expr[1] not in env:
            raise NameError(f"undeclared name {expr[1]!r}")
        return env[expr[1]]
    if tag == "neg":
        return scale(evaluate(expr[1], env, one, add, mul, scale), -1)
    if tag == "add":
        vals = [evaluate(e, env, one, add, mul, scale) for e in expr[1]]
        out = vals[0]
        for v in vals[1:]:
            out = add(out, v)
        return out
    if tag == "sub":
        a = evaluate(expr[1], env, one, add, mul, scale)
        b = evaluate(expr[2], env, one, add, mul, scale)
        return add(a, scale(b, -1))
    if tag == "mul":
        vals = [evaluate(e, env, one, add, mul, scale) for e in expr[1]]
        out = vals[0]
        for v in vals[1:]:
            out = mul(out, v)
        return out
    if tag == "pow":
        base = evaluate(expr[1], env, one, add, mul, scale)
        out = one
        for _ in range(expr[2]):
            out = mul(out, base)
        return out
    raise ValueError(f"unknown expression node {tag!r}")


def expr_to_poly(expr, field, variables) -> MultiPoly:
    env = {v: MultiPoly.var(field, variables, v) for v in variables}
    one = MultiPoly.constant(field, variables, 1)
    return evaluate(expr, env, one, lambda a, b: a + b, lambda a, b: a * b, lambda a, c: a * c)


def expr_in_algebra(expr, a: DgAlgebra, env: dict) -> dict:
    p = a.p

    def add(u, v):
        out = dict(u)
        axpy(out, 1, v, p)
        return out

    return evaluate(expr, env, dict(a.unit), add, a.product, lambda u, c: scaled(u, a.field(c), p))


# ---------------------------------------------------------------------------
# Artinian rings


def _grevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


def _monomials_upto(n: int, top: int) -> list:
    out = []
    for deg in range(top + 1):
        for c in itertools.combinations_with_replacement(range(n), deg):
            e = [0] * n
            for i in c:
                e[i] += 1
            out.append(tuple(e))
    return out


def _mono_label(variables, e) -> str:
    parts = [v if k == 1 else f"{v}^{k}" for v, k in zip(variables, e) if k]
    return "*".join(parts) or "1"


def nilpotency_witnesses(variables, relations, cap: int = DEFAULT_CAP) -> list:
    """Least ``e_i`` with ``x_i^{e_i}`` in the ideal, certified by an explicit
    combination of multiples of the relations of bounded degree."""
    n = len(variables)
    field = relations[0].field if relations else None
    top = max([r.degree() for r in relations] + [1])
    while True:
        monos = _monomials_upto(n, top)
        if len(monos) > cap:
            raise InfiniteDimensional(
                f"no nilpotency witness for every variable within {cap} monomials"
            )
        monos.sort(key=_grevlex_key, reverse=True)
        index = {e: k for k, e in enumerate(monos)}
        ech = Echelon(field.characteristic)
        for r in relations:
            dr = r.degree()
            if dr < 0:
                continue
            for mu in monos:
                if sum(mu) + dr > top:
                    continue
                v = {}
                for e, c in r.terms.items():
                    v[index[tuple(a + b for a, b in zip(e, mu))]] = c
                ech.add(v)
        wit = []
        for i in range(n):
            found = None
            for k in range(1, top + 1):
                e = [0] * n
                e[i] = k
                if not ech.normal_form({index[tuple(e)]: 1}):
                    found = k
                    break
            wit.append(found)
        if all(w is not None for w in wit):
            return wit
        top *= 2


def artinian_ring(variables, relations, field=None, cap: int = DEFAULT_CAP, name=None) -> DgAlgebra:
    """``k[variables]/(relations)`` in degree 0 with zero differential.

    Relations may be MultiPolys or expression trees.  The monomial basis is
    the set of standard monomials for graded reverse lexicographic pivoting.
    """
    variables = tuple(variables)
    field = field or (relations[0].field if relations and isinstance(relations[0], MultiPoly) else DEFAULT_FIELD)
    rels = [r if isinstance(r, MultiPoly) else expr_to_poly(r, field, variables) for r in relations]
    n = len(variables)
    p = field.characteristic
    if n == 0:
        alg = DgAlgebra(field, [0], {(0, 0): {0: 1}}, [{}], {0: 1}, ["1"], name=name)
        alg.named = {}
        return alg
    if not rels:
        raise InfiniteDimensional(f"variable {variables[0]} has no nilpotency witness")
    wit = nilpotency_witnesses(variables, rels, cap)
    box_size = 1
    for w in wit:
        box_size *= w
    if box_size > 16 * cap:
        raise CapExceeded(f"monomial box of size {box_size} exceeds the cap")
    box = [tuple(e) for e in itertools.product(*[range(w) for w in wit])]
    box.sort(key=_grevlex_key, reverse=True)
    index = {e: k for k, e in enumerate(box)}
    ech = Echelon(p)
    for r in rels:
        for mu in box:
            v = {}
            for e, c in r.terms.items():
                m = tuple(a + b for a, b in zip(e, mu))
                k = index.get(m)
                if k is not None:
                    v[k] = (v.get(k, 0) + c) % p if p else v.get(k, 0) + c
            v = {k: c for k, c in v.items() if c}
            if v:
                ech.add(v)
    std = sorted((k for k in range(len(box)) if k not in ech.rows), reverse=True)
    if not std:
        raise ValueError("the quotient ring is zero")
    if len(std) > cap:
        raise CapExceeded(f"quotient dimension {len(std)} exceeds the cap {cap}")
    pos = {k: i for i, k in enumerate(std)}
    monos = [box[k] for k in std]

    def reduce_mono(e):
        k = index.get(e)
        if k is None:
            return {}
        return {pos[j]: c for j, c in ech.normal_form({k: 1}).items()}

    mult = {}
    for i, e in enumerate(monos):
        for j, f in enumerate(monos):
            v = reduce_mono(tuple(a + b for a, b in zip(e, f)))
            if v:
                mult[(i, j)] = v
    one = reduce_mono((0,) * n)
    labels = [_mono_label(variables, e) for e in monos]
    alg = DgAlgebra(field, [0] * len(monos), mult, None, one, labels, name=name)
    alg.named = {v: reduce_mono(tuple(1 if j == i else 0 for j in range(n))) for i, v in enumerate(variables)}
    alg.ring_variables = variables
    alg.ring_relations = rels
    return check_dga(alg)


# ---------------------------------------------------------------------------
# free extensions


def adjoin_variable(a: DgAlgebra, name: str, degree: int, dvec: dict, nil: int | None = None,
                    check: bool = True) -> DgAlgebra:
    """Adjoin a graded-commutative variable ``e`` with ``d(e) = dvec``.

    Odd variables are exterior; even ones need an explicit truncation
    ``e^nil = 0`` (validated afterwards).  Basis index of ``b e^i`` is
    ``i * dim A + b``, so ``A`` sits inside with unchanged indices.
    """
    if degree > 0:
        raise ValueError("generator degrees must be <= 0")
    odd = degree % 2 == 1
    top = 2 if odd else nil
    if top is None or top < 1:
        raise InfiniteDimensional(f"even generator {name} needs a nilpotency bound")
    p = a.p
    N = a.dim
    if any(a.degrees[i] != degree + 1 for i in dvec):
        raise ValueError(f"d({name}) must have degree {degree + 1}")
    degrees = []
    labels = []
    for i in range(top):
        for b in range(N):
            degrees.append(a.degrees[b] + i * degree)
            if i == 0:
                labels.append(a.labels[b])
            else:
                pw = name if i == 1 else f"{name}^{i}"
                labels.append(pw if a.labels[b] == "1" else f"{a.labels[b]}*{pw}")
    mult = {}
    for i in range(top):
        for j in range(top):
            if i + j >= top:
                continue
            for b in range(N):
                for c, v in a.mul[b].items():
                    # (b e^i)(c e^j) = (-1)^{i |e| |c|} (bc) e^{i+j}
                    s = _sign(i * degree * a.degrees[c])
                    mult[(i * N + b, j * N + c)] = {(i + j) * N + k: s * x for k, x in v.items()}
    d = []
    for i in range(top):
        for b in range(N):
            v = {i * N + k: x for k, x in a.d[b].items()}
            if i:
                w = a.product({b: 1}, dvec)
                coef = _sign(a.degrees[b]) * i
                axpy(v, coef, {(i - 1) * N + k: x for k, x in w.items()}, p)
            d.append(v)
    out = DgAlgebra(a.field, degrees, mult, d, dict(a.unit), labels, name=a.name)
    named = dict(getattr(a, "named", {}))
    named[name] = {N + k: x for k, x in a.unit.items()}
    out.named = named
    if check:
        check_dga(out)
    return out


def field_algebra(field=None) -> DgAlgebra:
    field = field or DEFAULT_FIELD
    a = DgAlgebra(field, [0], {(0, 0): {0: 1}}, [{}], {0: 1}, ["1"], name="k")
    a.named = {}
    return a


def exterior_algebra(names, degree: int = -1, field=None) -> DgAlgebra:
    a = field_algebra(field)
    for nm in names:
        a = adjoin_variable(a, nm, degree, {}, check=False)
    a.name = f"Lambda({','.join(names)})"
    return check_dga(a)


def ci_fiber(c: int, field=None) -> DgAlgebra:
    """Exterior algebra on ``c`` degree -1 generators with zero differential."""
    if c < 1:
        raise ValueError("c must be positive")
    a = exterior_algebra([f"e{i + 1}" for i in range(c)], -1, field)
    a.name = f"ci_fiber({c})"
    return a


# ---------------------------------------------------------------------------
# Koszul quotients


def koszul_quotient_lift(a: DgAlgebra, lift: dict, name: str | None = None, verify: bool = True) -> DgAlgebra:
    """``A//x`` for a degree-0 cocycle ``lift`` representing ``x``."""
    if any(a.degrees[i] != 0 for i in lift):
        raise LiftFailure("lift must lie in degree 0")
    if a.diff(lift):
        raise LiftFailure("lift is not a cocycle")
    count = sum(1 for nm in getattr(a, "named", {}) if nm.startswith("_e"))
    var = name or f"_e{count + 1}"
    out = adjoin_variable(a, var, -1, lift, check=True)
    out.name = f"{a.name}//x" if a.name else None
    if verify:
        ha = h0(a)
        x = ha.reduce(lift)
        if not h0_quotient_matches(a, [x], out):
            raise LiftFailure("H^0 of the Koszul quotient is not H^0(A)/(x)")
    return out


def koszul_quotient(a: DgAlgebra, x: dict, name: str | None = None) -> DgAlgebra:
    """``A//x`` for a class ``x`` of H^0(A) given in H^0 coordinates; the
    lift is the canonical one (standard vectors at non-pivot positions)."""
    return koszul_quotient_lift(a, h0(a).lift(x), name)


def koszul_sequence(a: DgAlgebra, xs: list, names=None) -> DgAlgebra:
    ha = h0(a)
    lifts = [ha.lift(x) for x in xs]
    cur = a
    for i, lf in enumerate(lifts):
        cur = koszul_quotient_lift(cur, lf, names[i] if names else None, verify=False)
    if xs and not h0_quotient_matches(a, list(xs), cur):
        raise LiftFailure("H^0 of the Koszul quotient is not H^0(A)/(x)")
    if xs:
        cur.name = f"{a.name}//({len(xs)})" if a.name else None
    return cur


def koszul_on_maximal_ideal(a: DgAlgebra) -> DgAlgebra:
    gens = h0(a).generators
    if not gens:
        return a
    out = koszul_sequence(a, gens)
    out.name = f"K({a.name})" if a.name else None
    return out


def restrict_to(b: DgAlgebra, a: DgAlgebra) -> DgModule:
    """``b`` as a DG module over ``a``, for ``b`` built from ``a`` by adjoining
    variables (so the first ``a.dim`` basis vectors of ``b`` are those of ``a``)."""
    if b.degrees[: a.dim] != a.degrees:
        raise ValueError("algebra does not extend the given one")
    act = {(i, j): v for i in range(a.dim) for j, v in b.mul[i].items()}
    return DgModule(a, b.degrees, act, b.d, b.labels, name=b.name)


def koszul_module(a: DgAlgebra) -> DgModule:
    """The Koszul object A//x on minimal generators of the maximal ideal of
    H^0(A), as a DG module over A."""
    cache = a.__dict__.setdefault("_modules", {})
    if "koszul" not in cache:
        m = restrict_to(koszul_on_maximal_ideal(a), a)
        m.name = "A//x"
        cache["koszul"] = m
    return cache["koszul"]


def h0_quotient_matches(a: DgAlgebra, xs: list, b: DgAlgebra) -> bool:
    """Whether H^0(b) and H^0(a)/(xs) have the same multiplication table
    under the map induced by the inclusion of A^0 into b^0 (indices kept)."""
    ha = h0(a)
    hb = h0(b)
    basis, table, unit = ha.quotient_table(xs)
    if len(basis) != hb.dim:
        return False
    images = [hb.reduce({ha.basis[k]: 1}) for k in basis]
    ech = Echelon(a.p, track=True)
    for i, v in enumerate(images):
        if not ech.add(v, {i: 1})[0]:
            return False

    def back(v):
        r, tag, _ = ech.reduce(v, {})
        return scaled(tag, -1, a.p)

    for i in range(len(basis)):
        for j in range(len(basis)):
            lhs = table.get((i, j), {})
            rhs = back(hb.product(images[i], images[j]))
            if lhs != rhs:
                return False
    return back(hb.unit) == unit


# ---------------------------------------------------------------------------
# presentations


@dataclass
class PresentationAST:
    field: object = None
    ring_variables: list = dc_field(default_factory=list)
    relations: list = dc_field(default_factory=list)
    generators: list = dc_field(default_factory=list)      # (name, degree, nil)
    differentials: dict = dc_field(default_factory=dict)   # name -> expression
    cap: int = DEFAULT_CAP

    def validate(self):
        for nm, deg, _nil in self.generators:
            if deg > 0:
                raise ValueError(f"generator {nm} has positive degree")


def expand_presentation(pres: PresentationAST) -> DgAlgebra:
    pres.validate()
    field = pres.field or DEFAULT_FIELD
    a = artinian_ring(pres.ring_variables, pres.relations, field, pres.cap)
    env = dict(a.named)
    order = sorted(range(len(pres.generators)), key=lambda i: -pres.generators[i][1])
    for i in order:
        nm, deg, nil = pres.generators[i]
        expr = pres.differentials.get(nm)
        dvec = expr_in_algebra(expr, a, env) if expr is not None else {}
        dvec = {k: c for k, c in dvec.items()}
        bad = [k for k in dvec if a.degrees[k] != deg + 1]
        if bad:
            raise ValueError(f"d({nm}) is not homogeneous of degree {deg + 1}")
        odd = deg % 2 == 1
        top = 2 if odd else nil
        if top is None:
            raise InfiniteDimensional(f"even generator {nm} has no nilpotency bound")
        if a.dim * top > pres.cap:
            raise CapExceeded(f"dimension {a.dim * top} exceeds the cap {pres.cap}")
        a = adjoin_variable(a, nm, deg, dvec, nil, check=False)
        env = dict(a.named)
    return check_dga(a)


# ---------------------------------------------------------------------------
# derived fibers


@dataclass
class ResolutionData:
    """A DG algebra resolution G of R/I over R = k[variables], degreewise free.

    ``d[j]`` and ``mult[(i, j)]`` map basis indices to MultiPoly coefficients;
    basis element ``unit`` is the identity.  Exactness over R is asserted by
    the supplier and not checked.
    """

    field: object
    variables: tuple
    degrees: list
    d: list
    mult: dict
    unit: int = 0
    ideal: list = dc_field(default_factory=list)
    labels: list | None = None
    user_asserted_exact: bool = True


def _pzero(r: ResolutionData) -> MultiPoly:
    return MultiPoly(r.field, r.variables)


def _pvec_add(out: dict, c: MultiPoly, v: dict):
    for k, x in v.items():
        y = out.get(k)
        out[k] = x * c if y is None else y + x * c


def _pvec_clean(v: dict) -> dict:
    return {k: x for k, x in v.items() if not x.is_zero()}


def verify_resolution_data(r: ResolutionData) -> ValidationReport:
    rep = ValidationReport()
    n = len(r.degrees)
    deg = r.degrees
    one = MultiPoly.constant(r.field, r.variables, 1)

    def dmap(v):
        out: dict = {}
        for k, c in v.items():
            _pvec_add(out, c, r.d[k])
        return _pvec_clean(out)

    def prod(u, v):
        out: dict = {}
        for i, a in u.items():
            for j, b in v.items():
                w = r.mult.get((i, j))
                if w:
                    _pvec_add(out, a * b, w)
        return _pvec_clean(out)

    def sub(u, v):
        out = dict(u)
        _pvec_add(out, -one, v)
        return _pvec_clean(out)

    for i in range(n):
        if any(deg[k] != deg[i] + 1 for k in r.d[i]):
            rep.add("differential degree", (i,))
        if dmap(r.d[i]):
            rep.add("d squared nonzero", (i,), "polynomial identity d(d(e)) = 0 fails")
    for (i, j), v in r.mult.items():
        if any(deg[k] != deg[i] + deg[j] for k in v):
            rep.add("product degree", (i, j))
    u = {r.unit: one}
    for i in range(n):
        ei = {i: one}
        if sub(prod(u, ei), ei) or sub(prod(ei, u), ei):
            rep.add("unit law", (i,))
        for j in range(n):
            ej = {j: one}
            xy = prod(ei, ej)
            yx = prod(ej, ei)
            s = _sign(deg[i] * deg[j])
            if sub(xy, {k: c * s for k, c in yx.items()}):
                rep.add("graded commutativity", (i, j))
            lhs = dmap(xy)
            rhs = prod(r.d[i], ej)
            _pvec_add(rhs, one * _sign(deg[i]), prod(ei, r.d[j]))
            if sub(lhs, _pvec_clean(rhs)):
                rep.add("Leibniz", (i, j), "polynomial Leibniz identity fails")
            for k in range(n):
                ek = {k: one}
                if sub(prod(xy, ek), prod(ei, prod(ej, ek))):
                    rep.add("associativity", (i, j, k))
    if deg and any(t > 0 for t in deg):
        rep.add("positive degree", (deg.index(max(deg)),))
    return rep


def fiber_from_dg_resolution(r: ResolutionData) -> DgAlgebra:
    """``k (x)_R G``: every polynomial structure constant is replaced by its
    constant term."""
    rep = verify_resolution_data(r)
    if not rep.ok:
        raise AxiomFailure(rep)
    F = r.field
    d = [{k: poly_reduce_at_origin(c) for k, c in v.items()} for v in r.d]
    mult = {key: {k: poly_reduce_at_origin(c) for k, c in v.items()} for key, v in r.mult.items()}
    a = DgAlgebra(F, r.degrees, mult, d, {r.unit: 1}, r.labels, name="fiber")
    a.named = {}
    a.user_asserted_exact = r.user_asserted_exact
    return check_dga(a)


def _subset_sign(I, J) -> int:
    """Sign of the permutation sorting the concatenation I + J."""
    seq = list(I) + list(J)
    inv = sum(1 for x in range(len(seq)) for y in range(x + 1, len(seq)) if seq[x] > seq[y])
    return _sign(inv)


def koszul_resolution_data(field, variables, fs) -> ResolutionData:
    """Koszul complex on ``fs`` over ``k[variables]`` with its exterior product."""
    variables = tuple(variables)
    c = len(fs)
    fs = [f if isinstance(f, MultiPoly) else expr_to_poly(f, field, variables) for f in fs]
    subsets = [S for k in range(c + 1) for S in itertools.combinations(range(c), k)]
    index = {S: i for i, S in enumerate(subsets)}
    one = MultiPoly.constant(field, variables, 1)
    degrees = [-len(S) for S in subsets]
    d = []
    for S in subsets:
        v = {}
        for pos, j in enumerate(S):
            T = tuple(x for x in S if x != j)
            v[index[T]] = fs[j] * _sign(pos)
        d.append(v)
    mult = {}
    for I in subsets:
        for J in subsets:
            if set(I) & set(J):
                continue
            U = tuple(sorted(I + J))
            mult[(index[I], index[J])] = {index[U]: one * _subset_sign(I, J)}
    labels = ["e" + "".join(str(j + 1) for j in S) if S else "1" for S in subsets]
    return ResolutionData(field, variables, degrees, d, mult, 0, fs, labels)


def _lcm(monos) -> tuple:
    if not monos:
        return None
    return tuple(max(e) for e in zip(*monos))


def taylor_resolution_data(field, variables, monomials) -> ResolutionData:
    """Taylor resolution of a monomial ideal (exponent tuples) with its
    standard DG algebra structure."""
    variables = tuple(variables)
    n = len(variables)
    ms = [tuple(m) for m in monomials]
    r = len(ms)
    subsets = [S for k in range(r + 1) for S in itertools.combinations(range(r), k)]
    index = {S: i for i, S in enumerate(subsets)}

    def mlcm(S):
        return _lcm([ms[i] for i in S]) if S else (0,) * n

    def mono(e, c=1):
        return MultiPoly(field, variables, {tuple(e): c})

    degrees = [-len(S) for S in subsets]
    d = []
    for S in subsets:
        v = {}
        L = mlcm(S)
        for pos, j in enumerate(S):
            T = tuple(x for x in S if x != j)
            q = tuple(a - b for a, b in zip(L, mlcm(T)))
            v[index[T]] = mono(q, _sign(pos))
        d.append(v)
    mult = {}
    for I in subsets:
        for J in subsets:
            if set(I) & set(J):
                continue
            U = tuple(sorted(I + J))
            q = tuple(a + b - c for a, b, c in zip(mlcm(I), mlcm(J), mlcm(U)))
            mult[(index[I], index[J])] = {index[U]: mono(q, _subset_sign(I, J))}
    ideal = [mono(m) for m in ms]
    labels = ["e" + "".join(str(j + 1) for j in S) if S else "1" for S in subsets]
    return ResolutionData(field, variables, degrees, d, mult, 0, ideal, labels)
