"""DG algebras and DG modules as structure constants.

Basis elements are integer indices.  Products, actions and differentials are
sparse vectors (``{index: scalar}``).  Sign conventions: graded commutativity
``xy = (-1)^{|x||y|} yx``, Leibniz ``d(xy) = d(x)y + (-1)^{|x|} x d(y)``,
shift ``M[i]^n = M^{n+i}`` with ``d`` scaled by ``(-1)^i`` and the action
twisted by ``(-1)^{i|a|}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .complexes import Cochain, cohomology_dims
from .linalg import Echelon, axpy, kernel_and_image, scaled


class AxiomFailure(ValueError):
    def __init__(self, report):
        self.report = report
        super().__init__(str(report))


class NotLocal(ValueError):
    pass


class NotArtinian(ValueError):
    pass


class AlgebraMismatch(ValueError):
    pass


class ZeroModule(ValueError):
    pass


def _clean(field, v) -> dict:
    out = {}
    for k, c in v.items():
        c = field(c)
        if c:
            out[k] = c
    return out


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


@dataclass
class Violation:
    axiom: str
    witness: tuple
    detail: str = ""

    def __str__(self):
        return f"{self.axiom} at {self.witness}" + (f": {self.detail}" if self.detail else "")


@dataclass
class ValidationReport:
    violations: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def axioms(self) -> set:
        return {v.axiom for v in self.violations}

    def add(self, axiom, witness, detail=""):
        # one witness per axiom keeps reports readable on large inputs
        if axiom not in self.axioms():
            self.violations.append(Violation(axiom, tuple(witness), detail))

    def __str__(self):
        return "valid" if self.ok else "; ".join(map(str, self.violations))


class DgAlgebra:
    """Finite-dimensional graded-commutative DG algebra.

    ``mult`` maps ``(i, j)`` to the product vector of basis elements ``i`` and
    ``j``; missing pairs multiply to zero.  ``unit`` is a vector.
    """

    def __init__(self, field, degrees, mult, d, unit, labels=None, name=None):
        self.field = field
        self.p = field.characteristic
        self.degrees = [int(t) for t in degrees]
        self.dim = len(self.degrees)
        self.labels = list(labels) if labels else [f"b{i}" for i in range(self.dim)]
        self.name = name
        self.mul = [dict() for _ in range(self.dim)]
        for (i, j), v in mult.items():
            v = _clean(field, v)
            if v:
                self.mul[i][j] = v
        self.d = [_clean(field, v) for v in d] if d is not None else [{} for _ in range(self.dim)]
        if len(self.d) != self.dim:
            raise ValueError("differential list has the wrong length")
        self.unit = _clean(field, unit)
        self.by_degree = {}
        for i, t in enumerate(self.degrees):
            self.by_degree.setdefault(t, []).append(i)
        self._h0 = None

    # --- arithmetic -----------------------------------------------------
    def product(self, u: dict, v: dict) -> dict:
        out: dict = {}
        p = self.p
        mul = self.mul
        for i, a in u.items():
            row = mul[i]
            if not row:
                continue
            for j, b in v.items():
                w = row.get(j)
                if w:
                    axpy(out, a * b, w, p)
        return out

    def diff(self, u: dict) -> dict:
        out: dict = {}
        for i, a in u.items():
            axpy(out, a, self.d[i], self.p)
        return out

    def basis_vector(self, i: int) -> dict:
        return {i: 1}

    def dims(self) -> dict:
        out = {}
        for t in self.degrees:
            out[t] = out.get(t, 0) + 1
        return out

    @property
    def min_degree(self) -> int:
        return min(self.degrees) if self.degrees else 0

    def underlying(self) -> Cochain:
        return _as_cochain(self.field, self.degrees, self.d)

    def cohomology_dims(self) -> dict:
        return cohomology_dims(self.underlying())

    def structure(self) -> dict:
        """Structure constants in a plain form (for equality tests)."""
        return {
            "degrees": list(self.degrees),
            "mult": {(i, j): dict(v) for i in range(self.dim) for j, v in self.mul[i].items()},
            "d": [dict(v) for v in self.d],
            "unit": dict(self.unit),
        }

    def __repr__(self):
        return f"DgAlgebra({self.name or ''} dims={self.dims()} over {self.field})"


def _as_cochain(field, degrees, d) -> Cochain:
    """Cochain of a space whose basis elements carry ``degrees``."""
    pos = {}
    dims = {}
    for i, t in enumerate(degrees):
        pos[i] = dims.get(t, 0)
        dims[t] = pos[i] + 1
    cols = {t: [None] * k for t, k in dims.items()}
    for i, t in enumerate(degrees):
        cols[t][pos[i]] = {pos[j]: c for j, c in d[i].items()}
    return Cochain(field, dims, cols, check=False)


def degree_positions(degrees) -> tuple:
    """``(position of each index within its degree, indices per degree)``."""
    pos = {}
    per = {}
    for i, t in enumerate(degrees):
        per.setdefault(t, []).append(i)
        pos[i] = len(per[t]) - 1
    return pos, per


def validate_dga(a: DgAlgebra) -> ValidationReport:
    rep = ValidationReport()
    p = a.p
    deg = a.degrees
    n = a.dim
    for i, t in enumerate(deg):
        if t > 0:
            rep.add("positive degree", (i,))
    for i in range(n):
        for j, v in a.mul[i].items():
            if any(deg[k] != deg[i] + deg[j] for k in v):
                rep.add("product degree", (i, j))
        if any(deg[k] != deg[i] + 1 for k in a.d[i]):
            rep.add("differential degree", (i,))
    if any(deg[k] != 0 for k in a.unit) or not a.unit:
        rep.add("unit law", ("unit",), "unit must be a nonzero degree-0 element")
    for i in range(n):
        if a.diff(a.d[i]):
            rep.add("d squared nonzero", (i,))
    e = {}
    for i in range(n):
        ei = {i: 1}
        if a.product(a.unit, ei) != ei or a.product(ei, a.unit) != ei:
            rep.add("unit law", (i,))
        if deg[i] % 2 and a.product(ei, ei):
            rep.add("odd square nonzero", (i,))
    for i in range(n):
        for j in range(n):
            xy = a.mul[i].get(j, e)
            yx = a.mul[j].get(i, e)
            s = _sign(deg[i] * deg[j])
            diff = dict(xy)
            axpy(diff, -s, yx, p)
            if diff:
                rep.add("graded commutativity", (i, j))
            lhs = a.diff(xy)
            rhs = a.product(a.d[i], {j: 1})
            axpy(rhs, _sign(deg[i]), a.product({i: 1}, a.d[j]), p)
            axpy(lhs, -1, rhs, p)
            if lhs:
                rep.add("Leibniz", (i, j))
    for i in range(n):
        for j, xy in a.mul[i].items():
            for k in range(n):
                left = a.product(xy, {k: 1})
                right = a.product({i: 1}, a.mul[j].get(k, e))
                axpy(left, -1, right, p)
                if left:
                    rep.add("associativity", (i, j, k))
        # products with a zero left factor: check x(yz) = 0 when xy = 0
        for j in range(n):
            if j in a.mul[i]:
                continue
            for k, yz in a.mul[j].items():
                if a.product({i: 1}, yz):
                    rep.add("associativity", (i, j, k))
    return rep


def check_dga(a: DgAlgebra) -> DgAlgebra:
    rep = validate_dga(a)
    if not rep.ok:
        raise AxiomFailure(rep)
    return a


# ---------------------------------------------------------------------------
# H^0


@dataclass
class H0Data:
    algebra: DgAlgebra
    basis: list            # indices of A^0 forming a basis of H^0
    table: dict            # (k, l) -> vector in H^0 coordinates
    unit: dict             # unit in H^0 coordinates
    character: list        # augmentation value of each basis element
    maximal_ideal: list    # basis vectors of the radical, H^0 coordinates
    generators: list       # minimal generators of the radical
    residue_dim: int = 1
    _bech: Echelon = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v: dict) -> dict:
        """Class in H^0 coordinates of a degree-0 element of A."""
        nf = self._bech.normal_form(v)
        pos = {b: k for k, b in enumerate(self.basis)}
        return {pos[i]: c for i, c in nf.items()}

    def lift(self, x: dict) -> dict:
        """Canonical cocycle representative: non-pivot standard vectors."""
        return {self.basis[k]: c for k, c in x.items()}

    def product(self, u: dict, v: dict) -> dict:
        out: dict = {}
        p = self.algebra.p
        for k, a in u.items():
            for l, b in v.items():
                w = self.table.get((k, l))
                if w:
                    axpy(out, a * b, w, p)
        return out

    def augment(self, x: dict):
        p = self.algebra.p
        s = sum(c * self.character[k] for k, c in x.items())
        return s % p if p else s

    def augment_element(self, v: dict):
        """Augmentation of an element of A (zero off degree 0)."""
        a = self.algebra
        v0 = {i: c for i, c in v.items() if a.degrees[i] == 0}
        return self.augment(self.reduce(v0)) if v0 else 0

    def quotient_table(self, xs: list) -> tuple:
        """Multiplication table of H^0/(xs): ``(basis, table, unit)``."""
        p = self.algebra.p
        ech = Echelon(p)
        for x in xs:
            for k in range(self.dim):
                ech.add(self.product(x, {k: 1}))
        basis = [k for k in range(self.dim) if k not in ech.rows]
        pos = {k: i for i, k in enumerate(basis)}

        def red(v):
            return {pos[k]: c for k, c in ech.normal_form(v).items()}

        table = {}
        for i, k in enumerate(basis):
            for j, l in enumerate(basis):
                w = red(self.table.get((k, l), {}))
                if w:
                    table[(i, j)] = w
        return basis, table, red(self.unit)


def _nilpotent(h: H0Data, v: dict) -> bool:
    cur = dict(v)
    for _ in range(h.dim + 1):
        if not cur:
            return True
        cur = h.product(cur, v)
    return not cur


def h0(a: DgAlgebra) -> H0Data:
    if a._h0 is not None:
        return a._h0
    p = a.p
    F = a.field
    bech = Echelon(p)
    for i in a.by_degree.get(-1, []):
        bech.add(a.d[i])
    basis = [i for i in a.by_degree.get(0, []) if i not in bech.rows]
    pos = {b: k for k, b in enumerate(basis)}
    if not basis:
        raise NotLocal("H^0 is zero")

    def red(v):
        return {pos[i]: c for i, c in bech.normal_form(v).items()}

    table = {}
    for k, b in enumerate(basis):
        for l, c in enumerate(basis):
            w = red(a.mul[b].get(c, {}))
            if w:
                table[(k, l)] = w
    h = H0Data(a, basis, table, red(a.unit), [], [], [], 1, bech)
    n = len(basis)
    unit = h.unit
    chars = []
    for k in range(n):
        x = {k: 1}
        if p:
            q = p
            while q < n:
                q *= p
            y = dict(unit)
            base = x
            e = q
            while e:
                if e & 1:
                    y = h.product(y, base)
                base = h.product(base, base)
                e >>= 1
            # y = x^q must be a scalar multiple of 1; over F_p that scalar is chi(x)
            lam = None
            for kk, c in unit.items():
                lam = F.div(y.get(kk, 0), c)
                break
            probe = dict(y)
            axpy(probe, -lam, unit, p)
            if probe:
                raise NotLocal("H^0 is not local with residue field k")
        else:
            tr = 0
            for l in range(n):
                tr += h.product(x, {l: 1}).get(l, 0)
            lam = F(tr) / n
        nil = dict(x)
        axpy(nil, -lam, unit, p)
        if not _nilpotent(h, nil):
            raise NotLocal("H^0 is not local with residue field k")
        chars.append(lam)
    h.character = chars
    mech = Echelon(p)
    rad = []
    for k in range(n):
        v = {k: 1}
        axpy(v, -chars[k], unit, p)
        if mech.add(v)[0]:
            rad.append(v)
    if len(rad) != n - 1:
        raise NotLocal("radical has codimension different from 1")
    h.maximal_ideal = rad
    sq = Echelon(p)
    for u in rad:
        for v in rad:
            sq.add(h.product(u, v))
    gens = []
    for u in rad:
        if sq.add(u)[0]:
            gens.append(u)
    h.generators = gens
    a._h0 = h
    return h


def augmentation(a: DgAlgebra) -> list:
    """Augmentation value of every basis element of A."""
    h = h0(a)
    return [h.augment_element({i: 1}) for i in range(a.dim)]


# ---------------------------------------------------------------------------
# modules


class DgModule:
    """``act`` maps ``(a, m)`` to the vector ``a.m``; missing pairs act by zero."""

    def __init__(self, algebra: DgAlgebra, degrees, act, d, labels=None, name=None):
        self.algebra = algebra
        self.p = algebra.p
        self.degrees = [int(t) for t in degrees]
        self.dim = len(self.degrees)
        self.labels = list(labels) if labels else [f"m{i}" for i in range(self.dim)]
        self.name = name
        self.act = [dict() for _ in range(algebra.dim)]
        F = algebra.field
        for (i, j), v in act.items():
            v = _clean(F, v)
            if v:
                self.act[i][j] = v
        self.d = [_clean(F, v) for v in d] if d is not None else [{} for _ in range(self.dim)]
        self.by_degree = {}
        for i, t in enumerate(self.degrees):
            self.by_degree.setdefault(t, []).append(i)
        self._cache = {}

    def action(self, u: dict, m: dict) -> dict:
        out: dict = {}
        p = self.p
        act = self.act
        for i, a in u.items():
            row = act[i]
            if not row:
                continue
            for j, b in m.items():
                w = row.get(j)
                if w:
                    axpy(out, a * b, w, p)
        return out

    def diff(self, m: dict) -> dict:
        out: dict = {}
        for i, a in m.items():
            axpy(out, a, self.d[i], self.p)
        return out

    def dims(self) -> dict:
        out = {}
        for t in self.degrees:
            out[t] = out.get(t, 0) + 1
        return out

    def underlying(self) -> Cochain:
        return _as_cochain(self.algebra.field, self.degrees, self.d)

    def cohomology_dims(self) -> dict:
        if "H" not in self._cache:
            self._cache["H"] = cohomology_dims(self.underlying())
        return dict(self._cache["H"])

    @property
    def n_min(self):
        return min(self.degrees) if self.degrees else None

    @property
    def n_max(self):
        return max(self.degrees) if self.degrees else None

    def is_acyclic(self) -> bool:
        return not self.cohomology_dims()

    def __repr__(self):
        return f"DgModule({self.name or ''} dims={self.dims()})"


def validate_module(m: DgModule) -> ValidationReport:
    rep = ValidationReport()
    a = m.algebra
    p = m.p
    deg = m.degrees
    adeg = a.degrees
    for i in range(a.dim):
        for j, v in m.act[i].items():
            if any(deg[k] != adeg[i] + deg[j] for k in v):
                rep.add("action degree", (i, j))
    for j in range(m.dim):
        if any(deg[k] != deg[j] + 1 for k in m.d[j]):
            rep.add("differential degree", (j,))
        if m.diff(m.d[j]):
            rep.add("d squared nonzero", (j,))
        ej = {j: 1}
        if m.action(a.unit, ej) != ej:
            rep.add("unit law", (j,))
    for i in range(a.dim):
        for j in range(m.dim):
            am = m.act[i].get(j, {})
            lhs = m.diff(am)
            rhs = m.action(a.d[i], {j: 1})
            axpy(rhs, _sign(adeg[i]), m.action({i: 1}, m.d[j]), p)
            axpy(lhs, -1, rhs, p)
            if lhs:
                rep.add("Leibniz", (i, j))
    for i in range(a.dim):
        for k in range(a.dim):
            ik = a.mul[i].get(k, {})
            for j in range(m.dim):
                left = m.action(ik, {j: 1})
                right = m.action({i: 1}, m.act[k].get(j, {}))
                axpy(left, -1, right, p)
                if left:
                    rep.add("associativity", (i, k, j))
    return rep


def check_module(m: DgModule) -> DgModule:
    rep = validate_module(m)
    if not rep.ok:
        raise AxiomFailure(rep)
    return m


def regular_module(a: DgAlgebra) -> DgModule:
    act = {(i, j): v for i in range(a.dim) for j, v in a.mul[i].items()}
    return DgModule(a, a.degrees, act, a.d, a.labels, name="A")


def residue_module(a: DgAlgebra) -> DgModule:
    chars = augmentation(a)
    act = {(i, 0): {0: c} for i, c in enumerate(chars) if c}
    return DgModule(a, [0], act, [{}], ["1"], name="k")


def free_module(a: DgAlgebra, degrees) -> DgModule:
    """Direct sum of copies of A with generators in the given degrees."""
    n = a.dim
    mdeg = []
    labels = []
    for t in degrees:
        for b in range(n):
            mdeg.append(a.degrees[b] + t)
            labels.append(f"{a.labels[b]}*g{len(labels) // n}")
    act = {}
    d = []
    for j, _t in enumerate(degrees):
        off = j * n
        for b in range(n):
            d.append({off + c: x for c, x in a.d[b].items()})
        for i in range(n):
            for b, v in a.mul[i].items():
                act[(i, off + b)] = {off + c: x for c, x in v.items()}
    return DgModule(a, mdeg, act, d, labels, name=f"free{list(degrees)}")


def shift_module(m: DgModule, i: int) -> DgModule:
    """``M[i]``: degrees drop by ``i``, d scaled by (-1)^i, action by (-1)^(i|a|)."""
    a = m.algebra
    p = m.p
    s = _sign(i)
    act = {}
    for x in range(a.dim):
        sx = _sign(i * a.degrees[x])
        for j, v in m.act[x].items():
            act[(x, j)] = scaled(v, sx, p)
    d = [scaled(v, s, p) for v in m.d]
    return DgModule(a, [t - i for t in m.degrees], act, d, m.labels, name=f"{m.name}[{i}]")


def module_map_check(f: list, m: DgModule, n: DgModule) -> bool:
    """Whether ``f`` (images of basis vectors) is a degree-0 DG morphism."""
    p = m.p
    a = m.algebra

    def app(v):
        out: dict = {}
        for j, c in v.items():
            axpy(out, c, f[j], p)
        return out

    for j in range(m.dim):
        if any(n.degrees[k] != m.degrees[j] for k in f[j]):
            return False
        lhs = n.diff(f[j])
        axpy(lhs, -1, app(m.d[j]), p)
        if lhs:
            return False
        for i in range(a.dim):
            lhs = app(m.act[i].get(j, {}))
            axpy(lhs, -1, n.action({i: 1}, f[j]), p)
            if lhs:
                return False
    return True


def module_cone(f: list, m: DgModule, n: DgModule) -> DgModule:
    """cone(f)^k = M^{k+1} + N^k; d(x, y) = (-dx, f x + dy);
    a(x, y) = ((-1)^{|a|} a x, a y).  M occupies indices ``0..dim M - 1``."""
    a = m.algebra
    p = m.p
    off = m.dim
    deg = [t - 1 for t in m.degrees] + list(n.degrees)
    d = []
    for j in range(m.dim):
        v = scaled(m.d[j], -1, p)
        for k, c in f[j].items():
            v[off + k] = c
        d.append(v)
    for j in range(n.dim):
        d.append({off + k: c for k, c in n.d[j].items()})
    act = {}
    for i in range(a.dim):
        s = _sign(a.degrees[i])
        for j, v in m.act[i].items():
            act[(i, j)] = scaled(v, s, p)
        for j, v in n.act[i].items():
            act[(i, off + j)] = {off + k: c for k, c in v.items()}
    return DgModule(a, deg, act, d, name="cone")


def direct_sum(ms: list) -> DgModule:
    a = ms[0].algebra
    deg, act, d = [], {}, []
    off = 0
    for m in ms:
        deg += m.degrees
        for j in range(m.dim):
            d.append({off + k: c for k, c in m.d[j].items()})
        for i in range(a.dim):
            for j, v in m.act[i].items():
                act[(i, off + j)] = {off + k: c for k, c in v.items()}
        off += m.dim
    return DgModule(a, deg, act, d, name="+".join(str(m.name) for m in ms))


def submodule(m: DgModule, vectors: list, name=None) -> DgModule:
    """DG submodule spanned by homogeneous ``vectors`` (closure is checked)."""
    p = m.p
    a = m.algebra
    ech = Echelon(p, track=True)
    for k, v in enumerate(vectors):
        if not ech.add(v, {k: 1})[0]:
            raise ValueError("submodule vectors are dependent")

    def coords(v):
        r, tag, _ = ech.reduce(v, {})
        if r:
            raise ValueError("span is not closed under the module structure")
        return scaled(tag, -1, p)

    deg = []
    for v in vectors:
        ts = {m.degrees[i] for i in v}
        if len(ts) != 1:
            raise ValueError("submodule vectors must be homogeneous and nonzero")
        deg.append(ts.pop())
    d = [coords(m.diff(v)) for v in vectors]
    act = {}
    for i in range(a.dim):
        for k, v in enumerate(vectors):
            w = m.action({i: 1}, v)
            if w:
                act[(i, k)] = coords(w)
    return DgModule(a, deg, act, d, name=name)


def maximal_ideal_module(a: DgAlgebra) -> DgModule:
    """Kernel of the augmentation A -> k as a DG submodule of A."""
    chars = augmentation(a)
    zero_idx = [i for i in a.by_degree.get(0, [])]
    cols = [{0: c} if c else {} for c in (chars[i] for i in zero_idx)]
    kernel, _ = kernel_and_image(cols, a.p)
    vecs = [{i: 1} for i in range(a.dim) if a.degrees[i] != 0]
    vecs += [{zero_idx[k]: c for k, c in z.items()} for z in kernel]
    return submodule(regular_module(a), vecs, name="m")


def matlis_dual(m: DgModule) -> DgModule:
    """Field dual: basis m_k^* in degree -|m_k|;
    (a f)(x) = (-1)^{|a||f|} f(a x), d f = -(-1)^{|f|} f o d."""
    a = m.algebra
    p = m.p
    deg = [-t for t in m.degrees]
    d = [dict() for _ in range(m.dim)]
    for j in range(m.dim):
        for k, c in m.d[j].items():
            # (d m_k^*)(m_j) = -(-1)^{|m_k^*|} [d m_j]_k
            x = -_sign(deg[k]) * c
            d[k][j] = x % p if p else x
    act = {}
    for i in range(a.dim):
        for j, v in m.act[i].items():
            for k, c in v.items():
                # (a m_k^*)(m_j) = (-1)^{|a||m_k^*|} [a m_j]_k
                x = _sign(a.degrees[i] * deg[k]) * c
                act.setdefault((i, k), {})[j] = x % p if p else x
    return DgModule(a, deg, act, d, [f"{l}*" for l in m.labels], name=f"{m.name}^v")


def restrict_scalars_to_field(m: DgModule) -> Cochain:
    return m.underlying()


# ---------------------------------------------------------------------------
# Hom and tensor


def _same_algebra(m: DgModule, n: DgModule):
    if m.algebra is not n.algebra:
        raise AlgebraMismatch("modules live over different algebras")


def dg_hom(m: DgModule, n: DgModule) -> Cochain:
    """Complex of A-linear maps; degree i maps satisfy f(a x) = (-1)^{i|a|} a f(x)
    and D f = d_N f - (-1)^i f d_M."""
    _same_algebra(m, n)
    a = m.algebra
    p = m.p
    degs = sorted({tn - tm for tm in m.degrees for tn in n.degrees})
    var_index = {}
    spaces = {}
    for i in degs:
        pairs = [(x, y) for x in range(m.dim) for y in range(n.dim) if n.degrees[y] == m.degrees[x] + i]
        var_index[i] = {pr: k for k, pr in enumerate(pairs)}
        # constraint rows keyed by (a, x, y): f(a x)_y - (-1)^{i|a|} (a f(x))_y
        cons = {}
        cols = [{} for _ in pairs]
        for ai in range(a.dim):
            s = _sign(i * a.degrees[ai])
            for x in range(m.dim):
                ax = m.act[ai].get(x)
                if ax:
                    for x2, c in ax.items():
                        for y in n.by_degree.get(m.degrees[x2] + i, []):
                            key = (ai, x, y)
                            k = var_index[i][(x2, y)]
                            cons.setdefault(key, len(cons))
                            r = cons[key]
                            cols[k][r] = (cols[k].get(r, 0) + c) % p if p else cols[k].get(r, 0) + c
                for y in n.by_degree.get(m.degrees[x] + i, []):
                    ay = n.act[ai].get(y)
                    if not ay:
                        continue
                    k = var_index[i][(x, y)]
                    for y2, c in ay.items():
                        key = (ai, x, y2)
                        cons.setdefault(key, len(cons))
                        r = cons[key]
                        val = cols[k].get(r, 0) - s * c
                        val = val % p if p else val
                        if val:
                            cols[k][r] = val
                        else:
                            cols[k].pop(r, None)
        for col in cols:
            for r in [r for r, c in col.items() if not (c % p if p else c)]:
                del col[r]
        kernel, _ = kernel_and_image(cols, p)
        spaces[i] = kernel
    # differential
    coord = {}
    for i, basis in spaces.items():
        ech = Echelon(p, track=True)
        for k, v in enumerate(basis):
            ech.add(v, {k: 1})
        coord[i] = ech
    dims = {i: len(b) for i, b in spaces.items() if b}
    d = {}
    for i in dims:
        s = _sign(i)
        vi = var_index[i]
        pairs_i = list(vi)
        cols = []
        for f in spaces[i]:
            img: dict = {}
            target_index = var_index.get(i + 1, {})
            for k, c in f.items():
                x, y = pairs_i[k]
                for y2, e in n.d[y].items():
                    kk = target_index[(x, y2)]
                    img[kk] = img.get(kk, 0) + c * e
            for x2 in range(m.dim):
                for x, e in m.d[x2].items():
                    for y in n.by_degree.get(m.degrees[x] + i, []):
                        c = f.get(vi[(x, y)])
                        if c:
                            kk = target_index[(x2, y)]
                            img[kk] = img.get(kk, 0) - s * c * e
            img = {k: (c % p if p else c) for k, c in img.items()}
            img = {k: c for k, c in img.items() if c}
            if img:
                r, tag, _ = coord[i + 1].reduce(img, {})
                if r:
                    raise RuntimeError("Hom differential left the A-linear maps")
                cols.append(scaled(tag, -1, p))
            else:
                cols.append({})
        d[i] = cols
    return Cochain(a.field, dims, d, check=True)


def dg_tensor(m: DgModule, n: DgModule) -> Cochain:
    """M (x)_A N: quotient of M (x)_k N by (a x) (x) y - (-1)^{|a||x|} x (x) (a y)."""
    _same_algebra(m, n)
    a = m.algebra
    p = m.p
    degs = {}
    for x in range(m.dim):
        for y in range(n.dim):
            degs.setdefault(m.degrees[x] + n.degrees[y], []).append((x, y))
    index = {t: {pr: k for k, pr in enumerate(prs)} for t, prs in degs.items()}
    quot = {}
    for t, prs in degs.items():
        quot[t] = Echelon(p)
    for ai in range(a.dim):
        for x in range(m.dim):
            for y in range(n.dim):
                t = a.degrees[ai] + m.degrees[x] + n.degrees[y]
                if t not in index:
                    continue
                rel: dict = {}
                for x2, c in m.act[ai].get(x, {}).items():
                    k = index[t][(x2, y)]
                    rel[k] = rel.get(k, 0) + c
                s = _sign(a.degrees[ai] * m.degrees[x])
                for y2, c in n.act[ai].get(y, {}).items():
                    k = index[t][(x, y2)]
                    rel[k] = rel.get(k, 0) - s * c
                rel = {k: (c % p if p else c) for k, c in rel.items()}
                rel = {k: c for k, c in rel.items() if c}
                if rel:
                    quot[t].add(rel)
    basis = {t: [k for k in range(len(prs)) if k not in quot[t].rows] for t, prs in degs.items()}
    pos = {t: {k: j for j, k in enumerate(b)} for t, b in basis.items()}
    dims = {t: len(b) for t, b in basis.items() if b}
    d = {}
    for t in dims:
        cols = []
        prs = degs[t]
        for k in basis[t]:
            x, y = prs[k]
            img: dict = {}
            for x2, c in m.d[x].items():
                kk = index[t + 1][(x2, y)]
                img[kk] = img.get(kk, 0) + c
            s = _sign(m.degrees[x])
            for y2, c in n.d[y].items():
                kk = index[t + 1][(x, y2)]
                img[kk] = img.get(kk, 0) + s * c
            img = {k2: (c % p if p else c) for k2, c in img.items()}
            img = {k2: c for k2, c in img.items() if c}
            if img:
                nf = quot[t + 1].normal_form(img)
                cols.append({pos[t + 1][k2]: c for k2, c in nf.items()})
            else:
                cols.append({})
        d[t] = cols
    return Cochain(a.field, dims, d, check=True)
