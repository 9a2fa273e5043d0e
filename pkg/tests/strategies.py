"""Shared hypothesis strategies with known answers built in."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from dgaudit.complexes import Cochain
from dgaudit.linalg import Matrix, PrimeField, rank

P = 101
F = PrimeField(P)


def _invertible(rng, n):
    while True:
        m = [[rng.randrange(P) for _ in range(n)] for _ in range(n)]
        if rank(Matrix(F, m)) == n:
            return m


def _inverse(m):
    n = len(m)
    aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(m)]
    for c in range(n):
        piv = next(i for i in range(c, n) if aug[i][c])
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = pow(aug[c][c], -1, P)
        aug[c] = [x * inv % P for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [(x - f * y) % P for x, y in zip(aug[i], aug[c])]
    return [r[n:] for r in aug]


def scrambled_complex(h: dict, b: dict, seed: int) -> Cochain:
    """Direct sum of ``h[n]`` copies of k in degree n and ``b[n]`` copies of
    k -> k from degree n to n + 1, conjugated by random bases."""
    rng = random.Random(seed)
    degs = sorted(set(h) | set(b) | {n + 1 for n in b})
    dims = {n: h.get(n, 0) + b.get(n, 0) + b.get(n - 1, 0) for n in degs}
    # basis at n: [cohomology | sources of b[n] | targets of b[n-1]]
    raw = {}
    for n in degs:
        cols = []
        for j in range(dims[n]):
            col = {}
            if h.get(n, 0) <= j < h.get(n, 0) + b.get(n, 0):
                k = j - h.get(n, 0)
                col[h.get(n + 1, 0) + b.get(n + 1, 0) + k] = 1
            cols.append(col)
        raw[n] = cols
    g = {n: _invertible(rng, k) for n, k in dims.items() if k}
    gi = {n: _inverse(m) for n, m in g.items()}
    d = {}
    for n, k in dims.items():
        if not k:
            continue
        cols = []
        for j in range(k):
            # column j of g[n+1] * raw * g[n]^-1
            v = {}
            for t in range(k):
                c = gi[n][t][j]
                if not c:
                    continue
                for i, x in raw[n][t].items():
                    for r in range(dims[n + 1]):
                        y = g[n + 1][r][i] * x * c % P
                        if y:
                            v[r] = (v.get(r, 0) + y) % P
            cols.append({r: x for r, x in v.items() if x})
        d[n] = cols
    return Cochain(F, {n: k for n, k in dims.items() if k}, d)


small_dims = st.dictionaries(st.integers(-3, 2), st.integers(0, 2), max_size=4)


@st.composite
def complexes_with_cohomology(draw):
    h = draw(small_dims)
    b = draw(small_dims)
    seed = draw(st.integers(0, 10**6))
    return scrambled_complex(h, b, seed), {n: k for n, k in h.items() if k}


def monomial_ring_data(rng: random.Random, max_vars: int = 4, max_dim: int = 8):
    """Random monomial relations of degree >= 2 with a pure power of every
    variable and a quotient of dimension at most ``max_dim``; the variables
    are then minimal generators of the maximal ideal."""
    from oracles import standard_monomials

    while True:
        n = rng.randint(1, max_vars)
        gens = []
        for i in range(n):
            e = [0] * n
            e[i] = rng.randint(2, 3)
            gens.append(tuple(e))
        for _ in range(rng.randint(0, 3)):
            gens.append(tuple(rng.randint(0, 2) for _ in range(n)))
        gens = [g for g in gens if sum(g) >= 2]
        std = standard_monomials(n, gens)
        if 1 <= len(std) <= max_dim:
            return n, gens


def monomial_ring(n, gens, field=F):
    from dgaudit.constructions import artinian_ring
    from dgaudit.linalg import MultiPoly

    names = [f"x{i}" for i in range(n)]
    return artinian_ring(names, [MultiPoly(field, names, {g: 1}) for g in gens], field)


def ring_element(a, poly_terms: dict) -> dict:
    """Vector of a polynomial in the named variables of an Artinian ring."""
    names = list(a.ring_variables)
    out: dict = {}
    for e, c in poly_terms.items():
        v = dict(a.unit)
        for name, k in zip(names, e):
            for _ in range(k):
                v = a.product(v, a.named[name])
        for i, x in v.items():
            out[i] = (out.get(i, 0) + c * x) % a.p
    return {i: x for i, x in out.items() if x}


ring_seeds = st.integers(0, 10**6)
