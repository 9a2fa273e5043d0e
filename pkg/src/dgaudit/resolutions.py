"""Minimal semifree resolutions and the windowed homological tables built on them.

A resolution ``G -> M`` is stored through its generators ``g_j`` of degree
``t_j``: ``d(g_j)`` is a sparse vector over the keys ``j' * dim A + b``
(meaning ``b g_j'``) and ``eps(g_j)`` is a vector of ``M``.  On the basis
``b g_j`` we use ``d(b g_j) = d(b) g_j + (-1)^{|b|} b d(g_j)`` and
``eps(b g_j) = b eps(g_j)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from .dg import (
    DgAlgebra,
    DgModule,
    ZeroModule,
    _sign,
    augmentation,
    h0,
    matlis_dual,
    module_cone,
    regular_module,
    residue_module,
    shift_module,
)
from .linalg import Echelon, axpy, scaled


class MinimalityViolation(AssertionError):
    pass


class NotMinimal(ValueError):
    pass


class WindowError(ValueError):
    pass


UNKNOWN = "Unknown"


@dataclass
class Verdict:
    value: object                      # True | False | "Unknown"
    at_window: int | None = None
    witness: dict = dc_field(default_factory=dict)

    @property
    def is_true(self):
        return self.value is True

    @property
    def is_false(self):
        return self.value is False

    @property
    def is_unknown(self):
        return self.value == UNKNOWN

    def to_json(self):
        return {"value": self.value, "at_window": self.at_window, "witness": self.witness}


@dataclass
class ExtTable:
    lo: int
    hi: int
    dims: dict
    exact_upto: float                  # entries with index <= exact_upto are exact
    status: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        self.status = {
            "lo": "exact",
            "hi": "exact" if self.hi <= self.exact_upto else "truncated",
        }

    def __getitem__(self, i):
        return self.dims.get(i, 0)

    def is_exact(self, i) -> bool:
        return i <= self.exact_upto

    def nonzero(self) -> list:
        return sorted(i for i, k in self.dims.items() if k)

    def total(self) -> int:
        return sum(self.dims.values())

    def to_json(self):
        return {
            "window": [self.lo, self.hi],
            "dims": {str(i): self.dims.get(i, 0) for i in range(self.lo, self.hi + 1)},
            "status": dict(self.status),
        }


# ---------------------------------------------------------------------------
# resolutions


class SemifreeResolution:
    """Minimal semifree resolution, extended lazily degree by degree."""

    def __init__(self, target: DgModule):
        a = target.algebra
        hdims = target.cohomology_dims()
        if not hdims:
            raise ZeroModule("cannot resolve an acyclic module")
        self.target = target
        self.algebra = a
        self.N = a.dim
        self.p = a.p
        self.t = []            # generator degrees
        self.dgen = []         # d(g_j) as {key: coeff}
        self.eps = []          # eps(g_j) as vector of the target
        self.by_degree = {}    # degree -> generator indices
        self.stages = []       # [(degree, [generator indices])]
        self.rev = {}          # j -> [(l, b, c)]: b g_j occurs in d(g_l) with coeff c
        self.next_degree = max(hdims)
        self.complete_below = self.next_degree + 1
        self.finite = False
        self.minimal = True
        self._m_lifts = [h0(a).lift(x) for x in h0(a).generators]
        self._chars = augmentation(a)
        self._dcache = {}

    # -- basis bookkeeping
    def g_basis(self, n: int) -> list:
        """Keys of G^n."""
        a = self.algebra
        N = self.N
        out = []
        for t, js in self.by_degree.items():
            bs = a.by_degree.get(n - t)
            if not bs:
                continue
            for j in js:
                base = j * N
                out.extend(base + b for b in bs)
        out.sort()
        return out

    def g_dims(self) -> dict:
        out = {}
        a = self.algebra
        for t, js in self.by_degree.items():
            for s, bs in a.by_degree.items():
                out[t + s] = out.get(t + s, 0) + len(js) * len(bs)
        return out

    def d_key(self, key: int, sign: int = 1) -> dict:
        a = self.algebra
        N = self.N
        p = self.p
        j, b = divmod(key, N)
        base = j * N
        if p:
            out = {base + c: sign * x % p for c, x in a.d[b].items()}
        else:
            out = {base + c: sign * x for c, x in a.d[b].items()}
        dg = self.dgen[j]
        if dg:
            s = sign * _sign(a.degrees[b])
            mulb = a.mul[b]
            for k2, x in dg.items():
                i, b2 = divmod(k2, N)
                w = mulb.get(b2)
                if w:
                    base = i * N
                    coef = s * x
                    for c, y in w.items():
                        kk = base + c
                        v = (out.get(kk, 0) + coef * y)
                        if p:
                            v %= p
                        if v:
                            out[kk] = v
                        else:
                            out.pop(kk, None)
        return out

    def d_vec(self, v: dict) -> dict:
        out: dict = {}
        for k, c in v.items():
            axpy(out, c, self.d_key(k), self.p)
        return out

    def eps_key(self, key: int) -> dict:
        j, b = divmod(key, self.N)
        return self.target.action({b: 1}, self.eps[j])

    def act_key(self, a_vec: dict, key: int) -> dict:
        """``a . (b g_j)`` as a G-vector."""
        j, b = divmod(key, self.N)
        w = self.algebra.product(a_vec, {b: 1})
        base = j * self.N
        return {base + c: x for c, x in w.items()}

    # -- the mapping cone C = cone(eps), keys: G keys >= 0, module index m as -(m+1)
    def _cone_basis(self, n: int) -> list:
        keys = self.g_basis(n + 1)
        keys += [-(m + 1) for m in self.target.by_degree.get(n, [])]
        return keys

    def _cone_d(self, key: int) -> dict:
        v = self._dcache.get(key)
        if v is None:
            v = self._dcache[key] = self._cone_d_raw(key)
        return v

    def _cone_d_raw(self, key: int) -> dict:
        p = self.p
        if key >= 0:
            out = self.d_key(key, -1)
            for m, c in self.eps_key(key).items():
                out[-(m + 1)] = c
            return out
        m = -key - 1
        return {-(k + 1): c for k, c in self.target.d[m].items()}

    def _cone_act(self, a_vec: dict, v: dict) -> dict:
        """Action of a degree-0 element on a cone vector."""
        out: dict = {}
        p = self.p
        for key, c in v.items():
            if key >= 0:
                axpy(out, c, self.act_key(a_vec, key), p)
            else:
                w = self.target.action(a_vec, {-key - 1: 1})
                axpy(out, c, {-(k + 1): x for k, x in w.items()}, p)
        return out

    def _cone_cocycles(self, n: int) -> list:
        basis = self._cone_basis(n)
        ech = Echelon(self.p, track=True)
        kernel = []
        for k, key in enumerate(basis):
            ok, dep = ech.add(self._cone_d(key), {k: 1})
            if not ok:
                kernel.append({basis[i]: c for i, c in dep.items()})
        return kernel

    def _kill_degree(self, n: int) -> list:
        """Adjoin generators of degree ``n`` killing H^n of the cone."""
        p = self.p
        Z = self._cone_cocycles(n)
        if not Z:
            return []
        ech = Echelon(p)
        for key in self._cone_basis(n - 1):
            ech.add(self._cone_d(key))
        for x in self._m_lifts:
            for z in Z:
                w = self._cone_act(x, z)
                if w:
                    ech.add(w)
        new = []
        for z in Z:
            if ech.add(z)[0]:
                new.append(z)
        added = []
        for z in new:
            g = {k: c for k, c in z.items() if k >= 0}
            m = {-k - 1: (-c) % p if p else -c for k, c in z.items() if k < 0}
            j = len(self.t)
            self.t.append(n)
            self.dgen.append(g)
            self.eps.append(m)
            self.by_degree.setdefault(n, []).append(j)
            self.rev[j] = []
            N = self.N
            for k2, c in g.items():
                i, b = divmod(k2, N)
                self.rev[i].append((j, b, c))
            added.append(j)
        self._check_minimal(added)
        return added

    def _check_minimal(self, js):
        N = self.N
        chars = self._chars
        p = self.p
        for j in js:
            acc = {}
            for k2, c in self.dgen[j].items():
                i, b = divmod(k2, N)
                if chars[b]:
                    acc[i] = (acc.get(i, 0) + c * chars[b])
                    if p:
                        acc[i] %= p
            if any(acc.values()):
                self.minimal = False
                raise MinimalityViolation(f"generator {j} has a unit coefficient in its differential")

    def _tail_acyclic(self) -> bool:
        """Whether the cone has no cohomology below the processed degrees."""
        degs = set()
        for n in self.g_dims():
            degs.add(n - 1)
        for t in self.target.by_degree:
            degs.add(t)
        lows = sorted((n for n in degs if n < self.complete_below), reverse=True)
        if not lows:
            return True
        ranks = {}

        def rank(n):
            if n not in ranks:
                ech = Echelon(self.p)
                for key in self._cone_basis(n):
                    ech.add(self._cone_d(key))
                ranks[n] = ech.rank
            return ranks[n]

        for n in lows:
            dim = len(self._cone_basis(n))
            if dim - rank(n) - rank(n - 1):
                return False
        return True

    def extend(self, g_min: int) -> "SemifreeResolution":
        """Ensure every generator of degree >= ``g_min`` is present."""
        while not self.finite and self.complete_below > g_min:
            n = self.complete_below - 1
            added = self._kill_degree(n)
            if added:
                self.stages.append((n, added))
            self.complete_below = n
            lowest = min(self.g_dims(), default=0) - 1
            low_target = min(self.target.by_degree)
            if n <= min(lowest, low_target):
                # nothing below: the cone is bounded and now acyclic
                self.finite = True
            elif not added and self._tail_acyclic():
                self.finite = True
        return self

    def ensure(self, g_min: int) -> "SemifreeResolution":
        return self.extend(g_min)

    # -- summaries
    def betti(self) -> dict:
        out = {}
        for t in self.t:
            out[t] = out.get(t, 0) + 1
        return out

    def n_generators(self) -> int:
        return len(self.t)

    def filtration_stage(self, j: int) -> int:
        for s, (_n, js) in enumerate(self.stages):
            if j in js:
                return s
        raise KeyError(j)

    def min_generator_degree(self):
        return min(self.t) if self.t else None

    def exact_ext_upto(self, n_min: int) -> float:
        """Largest Hom-degree computed exactly against a module starting at n_min."""
        if self.finite:
            return math.inf
        return n_min - self.complete_below - 1

    def exact_tor_upto(self, n_max: int) -> float:
        if self.finite:
            return math.inf
        return -self.complete_below - 1 - n_max


def _cache(m: DgModule) -> dict:
    return m._cache


def resolution(m: DgModule, g_min: int) -> SemifreeResolution:
    """Cached minimal semifree resolution of ``m``, complete down to ``g_min``."""
    c = _cache(m)
    res = c.get("res")
    if res is None:
        res = SemifreeResolution(m)
        c["res"] = res
    return res.extend(g_min)


def minimal_semifree(m: DgModule, g_min: int) -> SemifreeResolution:
    return resolution(m, g_min)


def betti(res: SemifreeResolution) -> dict:
    if not res.minimal:
        raise NotMinimal("Betti numbers need a minimal resolution")
    return res.betti()


# ---------------------------------------------------------------------------
# Hom and tensor against resolutions


def _hom_basis(res: SemifreeResolution, n: DgModule, i: int) -> list:
    out = []
    for t, js in res.by_degree.items():
        ms = n.by_degree.get(t + i)
        if ms:
            for j in js:
                out.extend((j, m) for m in ms)
    out.sort()
    return out


def _hom_d(res: SemifreeResolution, n: DgModule, i: int, j: int, m: int) -> dict:
    """D of the map sending g_j to the basis vector m (degree i):
    (D f)(g_l) = d_N f(g_l) - (-1)^i f(d g_l), f(b g) = (-1)^{i|b|} b f(g)."""
    p = res.p
    a = res.algebra
    out: dict = {}
    for m2, c in n.d[m].items():
        out[(j, m2)] = c
    s = -_sign(i)
    for (l, b, c) in res.rev[j]:
        w = n.act[b].get(m)
        if not w:
            continue
        coef = s * _sign(i * a.degrees[b]) * c
        for m2, x in w.items():
            key = (l, m2)
            v = out.get(key, 0) + coef * x
            if p:
                v %= p
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


def _hom_rank(res, n, i, cache) -> int:
    if i in cache:
        return cache[i]
    ech = Echelon(res.p)
    for (j, m) in _hom_basis(res, n, i):
        ech.add(_hom_d(res, n, i, j, m))
    cache[i] = ech.rank
    return ech.rank


def _ext_from_res(res: SemifreeResolution, n: DgModule, lo: int, hi: int) -> ExtTable:
    n_min = n.n_min
    exact = res.exact_ext_upto(n_min)
    ranks: dict = {}
    dims = {}
    for i in range(lo, hi + 1):
        if i > exact + 1:
            break
        dim = len(_hom_basis(res, n, i))
        if not dim:
            continue
        h = dim - _hom_rank(res, n, i, ranks) - _hom_rank(res, n, i - 1, ranks)
        if h:
            dims[i] = h
    return ExtTable(lo, hi, dims, exact)


def ext(m: DgModule, n: DgModule, window) -> ExtTable:
    """Ext^i_A(m, n) for i in the window, from Hom(G, n) with G resolving m
    down to degree n_min - hi - 1."""
    lo, hi = window
    if lo > hi:
        raise WindowError("inverted window")
    if m.algebra is not n.algebra:
        raise ValueError("modules over different algebras")
    if not n.cohomology_dims():
        raise ZeroModule("second argument is acyclic")
    res = resolution(m, n.n_min - hi - 1)
    return _ext_from_res(res, n, lo, hi)


def _tor_basis(res, n, deg):
    out = []
    for t, js in res.by_degree.items():
        ms = n.by_degree.get(deg - t)
        if ms:
            for j in js:
                out.extend((j, x) for x in ms)
    out.sort()
    return out


def _tor_d(res, n, j, x) -> dict:
    """d(g_j (x) x) = sum c (-1)^{|b| t_i} g_i (x) b x + (-1)^{t_j} g_j (x) dx."""
    p = res.p
    a = res.algebra
    N = res.N
    out: dict = {}
    for k2, c in res.dgen[j].items():
        i, b = divmod(k2, N)
        w = n.act[b].get(x)
        if not w:
            continue
        coef = c * _sign(a.degrees[b] * res.t[i])
        for y, e in w.items():
            key = (i, y)
            v = out.get(key, 0) + coef * e
            if p:
                v %= p
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    s = _sign(res.t[j])
    for y, e in n.d[x].items():
        key = (j, y)
        v = out.get(key, 0) + s * e
        if p:
            v %= p
        if v:
            out[key] = v
        else:
            out.pop(key, None)
    return out


def tor(m: DgModule, n: DgModule, window) -> ExtTable:
    """Tor_i = H^{-i}(G (x)_A n) for i in the window."""
    lo, hi = window
    if lo > hi:
        raise WindowError("inverted window")
    if not n.cohomology_dims():
        raise ZeroModule("second argument is acyclic")
    n_max = n.n_max
    res = resolution(m, -hi - 1 - n_max)
    exact = res.exact_tor_upto(n_max)
    ranks = {}

    def rank(deg):
        if deg not in ranks:
            ech = Echelon(res.p)
            for (j, x) in _tor_basis(res, n, deg):
                ech.add(_tor_d(res, n, j, x))
            ranks[deg] = ech.rank
        return ranks[deg]

    dims = {}
    for i in range(lo, hi + 1):
        if i > exact + 1:
            break
        deg = -i
        dim = len(_tor_basis(res, n, deg))
        if not dim:
            continue
        h = dim - rank(deg) - rank(deg - 1)
        if h:
            dims[i] = h
    return ExtTable(lo, hi, dims, exact)


# ---------------------------------------------------------------------------
# derived invariants


def residue(a: DgAlgebra) -> DgModule:
    c = a.__dict__.setdefault("_modules", {})
    if "k" not in c:
        c["k"] = residue_module(a)
    return c["k"]


def regular(a: DgAlgebra) -> DgModule:
    c = a.__dict__.setdefault("_modules", {})
    if "A" not in c:
        c["A"] = regular_module(a)
    return c["A"]


def dual(m: DgModule) -> DgModule:
    if "dual" not in m._cache:
        m._cache["dual"] = matlis_dual(m)
    return m._cache["dual"]


def _nonzero(m: DgModule):
    if not m.cohomology_dims():
        raise ZeroModule("acyclic module")


def bass_table(m: DgModule, window: int) -> ExtTable:
    """mu^i = dim Ext^i_A(k, m) for n_min(m) <= i <= window."""
    _nonzero(m)
    k = residue(m.algebra)
    lo = m.n_min
    return ext(k, m, (lo, max(window, lo)))


def depth(m: DgModule) -> int:
    """Least i with Ext^i(k, m) != 0, scanning upward from n_min(m)."""
    _nonzero(m)
    k = residue(m.algebra)
    i = m.n_min
    while True:
        t = ext(k, m, (i, i))
        if t[i]:
            return i
        i += 1


PROBE_CAP = 4096


def projdim_verdict(m: DgModule, window: int, cap: int = PROBE_CAP) -> Verdict:
    """True(value) when the minimal resolution is finite within the window;
    value = -(least generator degree), i.e. the least n with Ext^i(m, N) = 0
    for i > n + sup(N).  The search gives up (Unknown) once more than ``cap``
    generators are needed."""
    _nonzero(m)
    res = resolution(m, max(m.n_min, max(m.cohomology_dims())))
    g_min = m.n_min - window
    while not res.finite and res.complete_below > g_min and res.n_generators() <= cap:
        res.extend(res.complete_below - 1)
    if res.finite:
        t_min = res.min_generator_degree()
        sup = max(m.cohomology_dims())
        value = -t_min
        return Verdict(True, window, {
            "projdim": value,
            "pd_shifted": value + sup,
            "convention": "projdim = least n with Ext^i(M,N)=0 for i > n + sup N; pd = projdim + sup M",
            "betti": _jsonable(res.betti()),
        })
    witness = {"betti": _jsonable(res.betti()), "complete_below": res.complete_below}
    if res.complete_below > g_min:
        witness["cap_reached"] = cap
    return Verdict(UNKNOWN, window, witness)


def _jsonable(d: dict) -> dict:
    return {int(k): v for k, v in sorted(d.items())}


@dataclass
class InjdimResult:
    sup: object                        # int, or a lower bound when not certified
    certified: bool
    table: ExtTable
    witness: dict = dc_field(default_factory=dict)

    def __iter__(self):
        return iter((self.sup, self.certified))


def injdim_sup(m: DgModule, window: int) -> InjdimResult:
    """sup{i : Ext^i(k, m) != 0}.  Certified when m^v has finite projective
    dimension: then dim Ext^i(k, m) = number of degree -i generators of the
    minimal resolution of m^v, so the sup is minus its least generator degree."""
    _nonzero(m)
    table = bass_table(m, window)
    nz = table.nonzero()
    pv = projdim_verdict(dual(m), window)
    if pv.is_true:
        sup = pv.witness["projdim"]
        if nz and nz[-1] > sup:
            raise AssertionError("Bass table exceeds the certified bound")
        return InjdimResult(sup, True, table, {"route": "finite resolution of the Matlis dual"})
    lower = nz[-1] if nz else None
    return InjdimResult(lower, False, table, {"route": "window lower bound", "window": window})


def sppj_resolution(m: DgModule, steps: int, minimal: bool = True) -> list:
    """Iterated surjections on top cohomology: returns ``[(P_i, M_i, f_i)]``
    with ``M_{i+1} = cone(f_i)[-1]``.  With ``minimal=False`` an extra free
    summand mapping to zero is added at each step (still sup-preserving)."""
    from .dg import free_module

    _nonzero(m)
    a = m.algebra
    out = []
    cur = m
    prev_sup = None
    for _ in range(steps):
        hd = cur.cohomology_dims()
        if not hd:
            break
        s = max(hd)
        if prev_sup is not None and s > prev_sup:
            raise AssertionError("sup increased along the sppj resolution")
        reps = top_generators(cur, s)
        gdeg = [s] * len(reps) + ([s] if not minimal else [])
        P = free_module(a, gdeg)
        N = a.dim
        f = []
        images = reps + ([{}] if not minimal else [])
        for j, z in enumerate(images):
            for b in range(N):
                f.append(cur.action({b: 1}, z))
        C = module_cone(f, P, cur)
        nxt = shift_module(C, -1)
        out.append((P, cur, f))
        prev_sup = s
        cur = nxt
        if not cur.cohomology_dims():
            out.append((None, cur, None))
            break
    else:
        out.append((None, cur, None))
    return out


def top_generators(m: DgModule, s: int) -> list:
    """Cocycles of degree s whose classes minimally generate H^s(m) over H^0(A)."""
    p = m.p
    a = m.algebra
    deg_s = m.by_degree.get(s, [])
    ech = Echelon(p, track=True)
    Z = []
    for k, i in enumerate(deg_s):
        ok, dep = ech.add(m.d[i], {k: 1})
        if not ok:
            Z.append({deg_s[q]: c for q, c in dep.items()})
    rel = Echelon(p)
    for i in m.by_degree.get(s - 1, []):
        rel.add(m.d[i])
    for x in h0(a).generators:
        lx = h0(a).lift(x)
        for z in Z:
            w = m.action(lx, z)
            if w:
                rel.add(w)
    return [z for z in Z if rel.add(z)[0]]


def injdim_certificate(m: DgModule, window: int):
    """Certified sup{i : Ext^i(k, m) != 0}, or None when the Matlis dual has
    no finite resolution within the window."""
    d = dual(m)
    pv = projdim_verdict(d, window)
    if not pv.is_true:
        return None
    return pv.witness["projdim"]


def rhom_into_A(m: DgModule, window: int):
    """``(table, bounded, route)`` for RHom_A(m, A).

    Boundedness is certified by a finite resolution of m (Ext^i(m, A) = 0
    for i > projdim + sup A) or by a finite injective dimension of A
    (Ext^i(m, A) = 0 for i > injdim A - inf m); the table is then computed
    far enough to contain every nonzero entry."""
    _nonzero(m)
    a = m.algebra
    A = regular(a)
    hm = m.cohomology_dims()
    lo = A.n_min - max(hm)
    pv = projdim_verdict(m, window)
    bound, route = None, UNKNOWN
    if pv.is_true:
        bound, route = pv.witness["projdim"] + max(A.cohomology_dims()), "finite resolution"
    else:
        inj = injdim_certificate(A, window)
        if inj is not None:
            bound, route = inj - min(hm), "finite injective dimension of A"
    hi = max(window, lo) if bound is None else max(window, lo, bound)
    table = ext(m, A, (lo, hi))
    if bound is None:
        return table, Verdict(UNKNOWN, window, {"nonzero": table.nonzero(), "total": table.total()}), UNKNOWN
    return table, Verdict(True, window, {"route": route, "vanishes_above": bound, "sup": _table_sup(table)}), route


def _table_sup(t: ExtTable):
    nz = t.nonzero()
    return nz[-1] if nz else None
