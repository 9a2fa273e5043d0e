"""Finitely supported cochain complexes over a field.

Differentials are stored per degree as lists of sparse columns: ``d[n][j]``
is the image of the ``j``-th basis vector of degree ``n`` written in the
basis of degree ``n + 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from .linalg import Echelon, Matrix, axpy, kernel_and_image, scaled


class ComplexError(ValueError):
    pass


@dataclass
class GradedSpace:
    dims: dict
    labels: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        self.dims = {int(n): int(k) for n, k in self.dims.items() if k}
        if any(k < 0 for k in self.dims.values()):
            raise ComplexError("negative dimension")

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    @property
    def total(self) -> int:
        return sum(self.dims.values())

    def support(self) -> list:
        return sorted(self.dims)


class Cochain:
    def __init__(self, field, dims: dict, d: dict, labels: dict | None = None, check: bool = True):
        self.field = field
        self.p = field.characteristic
        self.space = GradedSpace(dims, labels or {})
        self.d = {}
        for n, k in self.space.dims.items():
            cols = d.get(n, [{} for _ in range(k)])
            if len(cols) != k:
                raise ComplexError(f"degree {n}: {len(cols)} columns for dimension {k}")
            target = self.space.dim(n + 1)
            for col in cols:
                if any(not 0 <= i < target for i in col):
                    raise ComplexError(f"degree {n}: differential leaves the target basis")
            self.d[n] = [dict(c) for c in cols]
        if check:
            for n in self.space.dims:
                for j, col in enumerate(self.d[n]):
                    if self.apply(n + 1, col):
                        raise ComplexError(f"d^2 != 0 on basis vector {j} of degree {n}")

    @property
    def dims(self) -> dict:
        return self.space.dims

    def dim(self, n: int) -> int:
        return self.space.dim(n)

    def apply(self, n: int, v: dict) -> dict:
        """Differential of a degree-``n`` vector."""
        out: dict = {}
        cols = self.d.get(n)
        if cols is None:
            return out
        for j, c in v.items():
            axpy(out, c, cols[j], self.p)
        return out

    def matrix(self, n: int) -> Matrix:
        rows, cols = self.dim(n + 1), self.dim(n)
        m = [[0] * cols for _ in range(rows)]
        for j, col in enumerate(self.d.get(n, [])):
            for i, c in col.items():
                m[i][j] = c
        return Matrix(self.field, m, cols)

    def degrees(self) -> list:
        return self.space.support()


class CochainMap:
    """Degree-``shift`` map; ``components[n][j]`` is the image of basis vector
    ``j`` of ``source`` degree ``n`` in ``target`` degree ``n + shift``."""

    def __init__(self, source: Cochain, target: Cochain, components: dict, shift: int = 0, check: bool = True):
        if source.field != target.field:
            raise ComplexError("field mismatch")
        self.source = source
        self.target = target
        self.shift = shift
        self.components = {n: [dict(v) for v in components.get(n, [{}] * k)] for n, k in source.dims.items()}
        if check:
            sign = -1 if shift % 2 else 1
            p = source.p
            for n in source.dims:
                for j in range(source.dim(n)):
                    lhs = target.apply(n + shift, self.components[n][j])
                    rhs = self.apply(n + 1, source.d[n][j])
                    axpy(lhs, -sign, rhs, p)
                    if lhs:
                        raise ComplexError(f"map does not commute with d at degree {n}, vector {j}")

    def apply(self, n: int, v: dict) -> dict:
        out: dict = {}
        comps = self.components.get(n)
        if comps is None:
            return out
        for j, c in v.items():
            axpy(out, c, comps[j], self.source.p)
        return out


def identity_map(c: Cochain) -> CochainMap:
    return CochainMap(c, c, {n: [{j: 1} for j in range(k)] for n, k in c.dims.items()})


def zero_map(source: Cochain, target: Cochain, shift: int = 0) -> CochainMap:
    return CochainMap(source, target, {}, shift)


class Cohomology:
    """Cohomology with chosen cocycle representatives per degree."""

    def __init__(self, complex_: Cochain, reps: dict, classifiers: dict):
        self.complex = complex_
        self.reps = reps
        self._cls = classifiers
        self.space = GradedSpace({n: len(r) for n, r in reps.items()})

    @property
    def dims(self) -> dict:
        return self.space.dims

    def dim(self, n: int) -> int:
        return self.space.dim(n)

    def classify(self, n: int, v: dict) -> dict:
        """Coordinates of the class of the cocycle ``v`` in the chosen basis."""
        ech = self._cls.get(n)
        if ech is None:
            if v:
                raise ComplexError(f"degree {n} carries no cohomology basis")
            return {}
        r, tag, _ = ech.reduce(v, {})
        if r:
            raise ComplexError("vector is not a cocycle")
        return scaled(tag, -1, self.complex.p)


def cohomology(c: Cochain) -> Cohomology:
    p = c.p
    reps = {}
    classifiers = {}
    for n in c.degrees():
        kernel, _ = kernel_and_image(c.d[n], p)
        ech = Echelon(p, track=True)
        for col in c.d.get(n - 1, []):
            ech.add(col, {})
        basis = []
        for z in kernel:
            ok, _ = ech.add(z, {len(basis): 1})
            if ok:
                basis.append(z)
        if basis:
            reps[n] = basis
            classifiers[n] = ech
    return Cohomology(c, reps, classifiers)


def cohomology_dims(c: Cochain) -> dict:
    """Dimensions only, via ranks."""
    ranks = {}
    for n in c.degrees():
        ech = Echelon(c.p)
        for col in c.d[n]:
            ech.add(col)
        ranks[n] = ech.rank
    out = {}
    for n in c.degrees():
        h = c.dim(n) - ranks[n] - ranks.get(n - 1, 0)
        if h:
            out[n] = h
    return out


def shift(c: Cochain, i: int) -> Cochain:
    """``c[i]``: degree ``n`` of the result is degree ``n + i`` of ``c``."""
    sign = -1 if i % 2 else 1
    dims = {n - i: k for n, k in c.dims.items()}
    d = {n - i: [scaled(col, sign, c.p) for col in cols] for n, cols in c.d.items()}
    labels = {n - i: v for n, v in c.space.labels.items()}
    return Cochain(c.field, dims, d, labels, check=False)


def cone(f: CochainMap) -> Cochain:
    """cone(f)^n = X^{n+1} + Y^n with d(x, y) = (-dx, f(x) + dy)."""
    if f.shift != 0:
        raise ComplexError("cone needs a degree-0 map")
    X, Y = f.source, f.target
    p = X.p
    degs = set(n - 1 for n in X.dims) | set(Y.dims)
    dims = {n: X.dim(n + 1) + Y.dim(n) for n in degs}
    d = {}
    for n in degs:
        off_next = X.dim(n + 2)
        cols = []
        for j in range(X.dim(n + 1)):
            col = scaled(X.d[n + 1][j], -1, p)
            for i, c in f.components[n + 1][j].items():
                col[off_next + i] = c
            cols.append(col)
        for j in range(Y.dim(n)):
            cols.append({off_next + i: c for i, c in Y.d[n][j].items()})
        d[n] = cols
    return Cochain(X.field, dims, d, check=False)


def trunc_ge(c: Cochain, i: int) -> tuple:
    """Smart truncation keeping degrees >= i, with degree i replaced by
    C^i / B^i.  Returns ``(complex, projection map c -> complex)``."""
    p = c.p
    bech = Echelon(p)
    for col in c.d.get(i - 1, []):
        bech.add(col)
    quot = [j for j in range(c.dim(i)) if j not in bech.rows]
    pos = {j: k for k, j in enumerate(quot)}

    def to_quot(v):
        nf = bech.normal_form(v)
        return {pos[j]: x for j, x in nf.items()}

    dims = {n: k for n, k in c.dims.items() if n > i}
    if quot:
        dims[i] = len(quot)
    d = {n: c.d[n] for n in dims if n > i}
    if quot:
        d[i] = [c.d[i][j] for j in quot]
    out = Cochain(c.field, dims, d, check=False)
    comps = {}
    for n, k in c.dims.items():
        if n > i:
            comps[n] = [{j: 1} for j in range(k)]
        elif n == i:
            comps[n] = [to_quot({j: 1}) for j in range(k)]
    return out, CochainMap(c, out, comps)


def trunc_le(c: Cochain, i: int) -> tuple:
    """Smart truncation keeping degrees <= i, with degree i replaced by Z^i.
    Returns ``(complex, inclusion map complex -> c)``."""
    p = c.p
    kernel, _ = kernel_and_image(c.d.get(i, []), p)
    kech = Echelon(p, track=True)
    for k, z in enumerate(kernel):
        kech.add(z, {k: 1})

    def coords(v):
        r, tag, _ = kech.reduce(v, {})
        if r:
            raise ComplexError("boundary outside the cycles")
        return scaled(tag, -1, p)

    dims = {n: k for n, k in c.dims.items() if n < i}
    if kernel:
        dims[i] = len(kernel)
    d = {}
    for n in dims:
        if n < i - 1:
            d[n] = c.d[n]
        elif n == i - 1:
            d[n] = [coords(col) for col in c.d[n]]
        else:
            d[n] = [{} for _ in kernel]
    out = Cochain(c.field, dims, d, check=False)
    comps = {n: [{j: 1} for j in range(k)] for n, k in dims.items() if n < i}
    if kernel:
        comps[i] = kernel
    return out, CochainMap(out, c, comps)


def sup_inf_amp(c) -> tuple:
    """``(sup, inf, amp)`` of the cohomology; the zero object gives
    ``(-inf, +inf, None)``."""
    dims = c if isinstance(c, dict) else cohomology_dims(c)
    degs = [n for n, k in dims.items() if k]
    if not degs:
        return (-math.inf, math.inf, None)
    return (max(degs), min(degs), max(degs) - min(degs))


def euler_characteristic(dims: dict) -> int:
    return sum((-1) ** (n % 2) * k for n, k in dims.items())
