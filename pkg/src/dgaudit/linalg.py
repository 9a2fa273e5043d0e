"""Exact scalars, dense and sparse linear algebra, and naive multivariate polynomials.

Scalars of a prime field are plain ints in ``[0, p)``; rationals are
``fractions.Fraction``.  Sparse vectors are dicts ``{index: nonzero scalar}``
and are what the homological code passes around; the dense :class:`Matrix`
is the small, user-facing surface (``rref``/``solve``).
"""

from __future__ import annotations

import heapq
import itertools
import random
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class FieldMismatch(ValueError):
    pass


class ShapeError(ValueError):
    pass


class VariableMismatch(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class PrimeField:
    kind = "prime"

    def __init__(self, p: int):
        if not isinstance(p, int) or not is_prime(p) or p >= 2**31:
            raise ValueError(f"prime field needs a prime p < 2^31, got {p!r}")
        self.p = p
        self.zero = 0
        self.one = 1

    def __call__(self, x) -> int:
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def random(self, rng: random.Random):
        return rng.randrange(self.p)

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def size(self) -> int:
        return self.p

    def to_int(self, a) -> int:
        """Integer representative in ``[0, p)`` for reports."""
        return int(a)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("prime", self.p))

    def __repr__(self):
        return f"GF({self.p})"


class RationalField:
    kind = "rational"
    p = 0

    def __init__(self):
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def __call__(self, x) -> Fraction:
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) / b

    def random(self, rng: random.Random, bound: int = 2**64):
        return Fraction(rng.randrange(-bound, bound))

    @property
    def characteristic(self) -> int:
        return 0

    @property
    def size(self):
        return float("inf")

    def to_int(self, a):
        return str(a) if Fraction(a).denominator != 1 else int(a)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("rational")

    def __repr__(self):
        return "QQ"


def field_from_kind(kind: str, p: int | None = None):
    if kind == "rational":
        return RationalField()
    if kind == "prime":
        return PrimeField(p)
    raise ValueError(f"unknown field kind {kind!r}")


# ---------------------------------------------------------------------------
# sparse vectors


def axpy(dst: dict, c, src: Mapping, p: int) -> None:
    """``dst += c * src`` in place, dropping zeros."""
    if p:
        for k, v in src.items():
            x = (dst.get(k, 0) + c * v) % p
            if x:
                dst[k] = x
            else:
                dst.pop(k, None)
    else:
        for k, v in src.items():
            x = dst.get(k, 0) + c * v
            if x:
                dst[k] = x
            else:
                dst.pop(k, None)


def scaled(v: Mapping, c, p: int) -> dict:
    if p:
        c %= p
        if not c:
            return {}
        return {k: x * c % p for k, x in v.items()}
    if not c:
        return {}
    return {k: x * c for k, x in v.items()}


def lin_comb(pairs: Iterable, p: int) -> dict:
    out: dict = {}
    for c, v in pairs:
        axpy(out, c, v, p)
    return out


def _inv(a, p):
    return pow(a, -1, p) if p else 1 / Fraction(a)


class Echelon:
    """Incremental echelon form of sparse vectors.

    Rows are normalized to leading coefficient 1 at their smallest key.
    When ``track`` is set every row carries a tag vector recording how it
    was combined from the inputs, which is how kernels are read off.
    """

    def __init__(self, p: int, track: bool = False):
        self.p = p
        self.track = track
        self.rows: dict = {}
        self.tags: dict = {}

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce(self, v: dict, tag: dict | None, full: bool):
        p = self.p
        rows = self.rows
        tags = self.tags
        heap = list(v)
        heapq.heapify(heap)
        pop = heapq.heappop
        push = heapq.heappush
        last = None
        lead = None
        while heap:
            k = pop(heap)
            # duplicates leave the heap consecutively
            if k == last:
                continue
            last = k
            c = v.get(k)
            if c is None:
                continue
            row = rows.get(k)
            if row is None:
                if lead is None:
                    lead = k
                if not full:
                    break
                continue
            c = -c
            # every key of a row is >= its pivot, so new keys are still ahead
            for kk, x in row.items():
                old = v.get(kk)
                if old is None:
                    v[kk] = c * x % p if p else c * x
                    push(heap, kk)
                else:
                    y = (old + c * x) % p if p else old + c * x
                    if y:
                        v[kk] = y
                    else:
                        del v[kk]
            if tag is not None:
                axpy(tag, c, tags[k], p)
        return lead

    def reduce(self, v: Mapping, tag: Mapping | None = None):
        """Leading-term reduction; returns ``(remainder, tag, lead)``."""
        v = dict(v)
        tag = dict(tag) if tag is not None else None
        lead = self._reduce(v, tag, full=False)
        return v, tag, lead

    def normal_form(self, v: Mapping) -> dict:
        """Remainder with every pivot index eliminated (canonical modulo the span)."""
        v = dict(v)
        self._reduce(v, None, full=True)
        return v

    def contains(self, v: Mapping) -> bool:
        r, _, _ = self.reduce(v)
        return not r

    def add(self, v: Mapping, tag: Mapping | None = None):
        """Insert ``v``.  Returns ``(True, None)`` if it was independent,
        else ``(False, dependency_tag)``."""
        if self.track:
            if tag is None:
                raise ValueError("tracked echelon needs a tag")
            tag = dict(tag)
        else:
            tag = None
        r = dict(v)
        lead = self._reduce(r, tag, full=False)
        if not r:
            return False, tag
        p = self.p
        c = _inv(r[lead], p)
        self.rows[lead] = scaled(r, c, p) if c != 1 else r
        if tag is not None:
            self.tags[lead] = scaled(tag, c, p) if c != 1 else tag
        return True, None


def kernel_and_image(columns: Sequence[Mapping], p: int):
    """Kernel basis (as sparse vectors over column indices) and an echelon of the image."""
    ech = Echelon(p, track=True)
    kernel = []
    for i, col in enumerate(columns):
        ok, dep = ech.add(col, {i: 1})
        if not ok:
            kernel.append(dep)
    return kernel, ech


def sparse_rank(vectors: Iterable[Mapping], p: int) -> int:
    ech = Echelon(p)
    for v in vectors:
        ech.add(v)
    return ech.rank


# ---------------------------------------------------------------------------
# dense matrices


class Matrix:
    """Dense matrix over a field; entries are stored as row lists."""

    def __init__(self, field, rows: Sequence[Sequence], ncols: int | None = None):
        self.field = field
        self.rows = [[field(x) for x in r] for r in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else (ncols or 0)
        if any(len(r) != self.ncols for r in self.rows):
            raise ShapeError("ragged rows")

    @classmethod
    def zeros(cls, field, nrows: int, ncols: int) -> "Matrix":
        return cls(field, [[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, field, n: int) -> "Matrix":
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, field, columns: Sequence[Sequence], nrows: int) -> "Matrix":
        return cls(field, [[c[i] for c in columns] for i in range(nrows)], len(columns))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> list:
        return [r[j] for r in self.rows]

    def columns(self) -> list:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "Matrix":
        return Matrix(self.field, [self.column(j) for j in range(self.ncols)], self.nrows)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        if self.ncols != other.nrows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        F = self.field
        out = []
        cols = other.columns()
        for r in self.rows:
            out.append([F(sum(a * b for a, b in zip(r, c))) for c in cols])
        return Matrix(F, out, other.ncols)

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.field == other.field and self.rows == other.rows

    def __repr__(self):
        return f"Matrix({self.field}, {self.rows})"


def rref(m: Matrix):
    """Reduced row echelon form with first-nonzero pivoting.

    Returns ``(rank, kernel_basis, pivots)`` where ``kernel_basis`` is a
    ``cols x (cols - rank)`` matrix whose columns span the null space.
    """
    reduced, pivots = _rref_rows(m)
    rank = len(pivots)
    F = m.field
    free = [j for j in range(m.ncols) if j not in pivots]
    kcols = []
    for f in free:
        v = [F.zero] * m.ncols
        v[f] = F.one
        for i, pc in enumerate(pivots):
            v[pc] = F.neg(reduced[i][f])
        kcols.append(v)
    return rank, Matrix.from_columns(F, kcols, m.ncols) if kcols else Matrix.zeros(F, m.ncols, 0), pivots


def _rref_rows(m: Matrix):
    F = m.field
    rows = [list(r) for r in m.rows]
    pivots: list[int] = []
    r = 0
    for c in range(m.ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = F.inv(rows[r][c])
        rows[r] = [F.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rref_matrix(m: Matrix) -> Matrix:
    rows, _ = _rref_rows(m)
    return Matrix(m.field, rows, m.ncols)


def rank(m: Matrix) -> int:
    return len(_rref_rows(m)[1])


def solve(m: Matrix, b: Matrix) -> Matrix | None:
    """Canonical solution of ``m @ x = b`` (free variables zero), or None."""
    if m.field != b.field:
        raise FieldMismatch(f"{m.field} vs {b.field}")
    if m.nrows != b.nrows:
        raise ShapeError(f"lhs has {m.nrows} rows, rhs has {b.nrows}")
    F = m.field
    aug = Matrix(F, [list(r) + list(s) for r, s in zip(m.rows, b.rows)], m.ncols + b.ncols)
    rows, pivots = _rref_rows(aug)
    if any(pc >= m.ncols for pc in pivots):
        return None
    x = [[F.zero] * b.ncols for _ in range(m.ncols)]
    for i, pc in enumerate(pivots):
        for j in range(b.ncols):
            x[pc][j] = rows[i][m.ncols + j]
    return Matrix(F, x, b.ncols)


def determinant(rows: Sequence[Sequence], field) -> object:
    """Determinant by Gaussian elimination over any field object with
    ``zero/one/add/sub/mul/inv/is_zero`` style methods."""
    n = len(rows)
    a = [list(r) for r in rows]
    det = field.one
    iszero = getattr(field, "is_zero", lambda x: x == field.zero)
    for c in range(n):
        piv = next((i for i in range(c, n) if not iszero(a[i][c])), None)
        if piv is None:
            return field.zero
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = field.neg(det)
        det = field.mul(det, a[c][c])
        inv = field.inv(a[c][c])
        for i in range(c + 1, n):
            if not iszero(a[i][c]):
                f = field.mul(a[i][c], inv)
                a[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(a[i], a[c])]
    return det


# ---------------------------------------------------------------------------
# polynomials


class MultiPoly:
    """Polynomial in an ordered tuple of variables, terms ``{exponents: coeff}``."""

    __slots__ = ("field", "variables", "terms")

    def __init__(self, field, variables: Sequence[str], terms: Mapping | None = None):
        self.field = field
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n:
                raise VariableMismatch(f"exponent {e} for variables {self.variables}")
            c = field(c)
            if c != 0:
                clean[e] = c
        self.terms = clean

    @classmethod
    def constant(cls, field, variables, c) -> "MultiPoly":
        return cls(field, variables, {(0,) * len(tuple(variables)): c})

    @classmethod
    def var(cls, field, variables, name: str) -> "MultiPoly":
        variables = tuple(variables)
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        return cls(field, variables, {tuple(e): 1})

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                raise VariableMismatch(f"{self.variables} vs {other.variables}")
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other
        return MultiPoly.constant(self.field, self.variables, other)

    def __add__(self, other):
        other = self._coerce(other)
        F = self.field
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = F.add(t.get(e, F.zero), c)
        return MultiPoly(F, self.variables, t)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return MultiPoly(F, self.variables, {e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        F = self.field
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = F.add(t.get(e, F.zero), F.mul(c1, c2))
        return MultiPoly(F, self.variables, t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = MultiPoly.constant(self.field, self.variables, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            other = self._coerce(other)
        return poly_equal(self, other)

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def constant_term(self):
        return self.terms.get((0,) * len(self.variables), self.field.zero)

    def evaluate(self, point: Sequence):
        F = self.field
        acc = F.zero
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term = F.mul(term, _fpow(F, F(x), k))
            acc = F.add(acc, term)
        return acc

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)


def _fpow(F, x, k):
    out = F.one
    for _ in range(k):
        out = F.mul(out, x)
    return out


def poly_reduce_at_origin(f: MultiPoly):
    """Image of ``f`` in ``k = R/(x_1, ..., x_n)``: its constant term."""
    return f.constant_term()


def poly_equal(f: MultiPoly, g: MultiPoly) -> bool:
    if f.variables != g.variables:
        raise VariableMismatch(f"{f.variables} vs {g.variables}")
    if f.field != g.field:
        raise FieldMismatch(f"{f.field} vs {g.field}")
    return not (f - g).terms


# ---------------------------------------------------------------------------
# univariate helpers and GF(p^e)


def _coeffs(f: MultiPoly) -> list:
    """Dense coefficient list (low degree first) of a univariate poly."""
    n = f.degree()
    out = [f.field.zero] * (n + 1)
    for (k,), c in f.terms.items():
        out[k] = c
    return out


def _from_coeffs(field, var, cs) -> MultiPoly:
    return MultiPoly(field, (var,), {(i,): c for i, c in enumerate(cs)})


def poly_divmod(f: MultiPoly, g: MultiPoly):
    if len(f.variables) != 1:
        raise VariableMismatch("univariate division only")
    g = f._coerce(g)
    F = f.field
    a = _coeffs(f)
    b = _coeffs(g)
    if not g.terms:
        raise ZeroDivisionError("polynomial division by zero")
    db = len(b) - 1
    inv = F.inv(b[-1])
    q = [F.zero] * max(len(a) - db, 1)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c == 0:
            continue
        c = F.mul(c, inv)
        q[i - db] = c
        for j, bj in enumerate(b):
            a[i - db + j] = F.sub(a[i - db + j], F.mul(c, bj))
    v = f.variables[0]
    return _from_coeffs(F, v, q), _from_coeffs(F, v, a[:db] if db else [])


def poly_gcd(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    while g.terms:
        f, g = g, poly_divmod(f, g)[1]
    if f.terms:
        lead = _coeffs(f)[-1]
        f = f * f.field.inv(lead)
    return f


def poly_powmod(f: MultiPoly, n: int, m: MultiPoly) -> MultiPoly:
    out = MultiPoly.constant(f.field, f.variables, 1)
    base = poly_divmod(f, m)[1]
    while n:
        if n & 1:
            out = poly_divmod(out * base, m)[1]
        base = poly_divmod(base * base, m)[1]
        n >>= 1
    return out


def _prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f: MultiPoly) -> bool:
    """Rabin's test over a prime field."""
    F = f.field
    q = F.p
    n = f.degree()
    if n < 1:
        return False
    x = MultiPoly.var(F, f.variables, f.variables[0])
    for r in _prime_factors(n):
        h = poly_powmod(x, q ** (n // r), f) - x
        if poly_gcd(f, h).degree() != 0:
            return False
    return not poly_divmod(poly_powmod(x, q**n, f) - x, f)[1].terms


class ExtensionField:
    """GF(p^e) as ``GF(p)[t]/(f)`` with ``f`` the first irreducible monic
    polynomial in a fixed enumeration.  Elements are univariate MultiPolys
    of degree < e."""

    kind = "extension"

    def __init__(self, base: PrimeField, e: int):
        if not 1 <= e <= 8:
            raise ValueError("extension degree must be in 1..8")
        self.base = base
        self.e = e
        self.var = "t"
        self.modulus = self._find_modulus()
        self.zero = MultiPoly(base, (self.var,))
        self.one = MultiPoly.constant(base, (self.var,), 1)

    def _find_modulus(self) -> MultiPoly:
        p, e = self.base.p, self.e
        for tail in itertools.product(range(p), repeat=e):
            cs = list(reversed(tail)) + [1]
            f = _from_coeffs(self.base, self.var, cs)
            if is_irreducible(f):
                return f
        raise RuntimeError("no irreducible polynomial found")  # pragma: no cover

    @property
    def size(self) -> int:
        return self.base.p**self.e

    @property
    def characteristic(self) -> int:
        return self.base.p

    def __call__(self, x) -> MultiPoly:
        if isinstance(x, MultiPoly):
            return poly_divmod(x, self.modulus)[1]
        return MultiPoly.constant(self.base, (self.var,), self.base(x))

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return poly_divmod(a * b, self.modulus)[1]

    def is_zero(self, a) -> bool:
        return not a.terms

    def inv(self, a):
        # extended Euclid on (a, modulus)
        r0, r1 = self.modulus, a
        s0, s1 = self.zero, self.one
        while r1.terms:
            q, r = poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
        if r0.degree() != 0:
            raise ZeroDivisionError("inverse of zero")
        return self(s0 * self.base.inv(r0.constant_term()))

    def random(self, rng: random.Random):
        return _from_coeffs(self.base, self.var, [rng.randrange(self.base.p) for _ in range(self.e)])

    def __repr__(self):
        return f"GF({self.base.p}^{self.e})"
