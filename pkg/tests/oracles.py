"""Brute-force reference computations written without the package kernel."""

from __future__ import annotations

import itertools


def rank_mod_p(rows: list, p: int) -> int:
    rows = [[x % p for x in r] for r in rows if any(x % p for x in r)]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def standard_monomials(nvars: int, gens: list) -> list:
    """Monomials outside the monomial ideal generated by ``gens`` (which must
    contain a pure power of every variable)."""
    bounds = []
    for i in range(nvars):
        pure = [g[i] for g in gens if all(g[j] == 0 for j in range(nvars) if j != i) and g[i] > 0]
        bounds.append(min(pure))
    out = []
    for e in itertools.product(*[range(b) for b in bounds]):
        if not any(all(e[j] >= g[j] for j in range(nvars)) for g in gens):
            out.append(e)
    return out


def koszul_cohomology_monomial(nvars: int, gens: list, p: int) -> dict:
    """Cohomology dims of the Koszul complex on all variables of
    k[x]/(monomials); exterior degree s sits in cohomological degree -s."""
    std = standard_monomials(nvars, gens)
    pos = {e: k for k, e in enumerate(std)}
    subsets = {s: list(itertools.combinations(range(nvars), s)) for s in range(nvars + 1)}
    basis = {s: [(e, S) for S in subsets[s] for e in std] for s in subsets}
    index = {s: {b: k for k, b in enumerate(basis[s])} for s in basis}
    ranks = {}
    for s in range(1, nvars + 1):
        # d(m e_S) = sum_k (-1)^k x_{S_k} m e_{S - S_k}
        rows = [[0] * len(basis[s]) for _ in basis[s - 1]]
        for col, (e, S) in enumerate(basis[s]):
            for k, v in enumerate(S):
                f = list(e)
                f[v] += 1
                f = tuple(f)
                if f not in pos:
                    continue
                T = S[:k] + S[k + 1:]
                rows[index[s - 1][(f, T)]][col] += -1 if k % 2 else 1
        ranks[s] = rank_mod_p(rows, p)
    out = {}
    for s in range(nvars + 1):
        h = len(basis[s]) - ranks.get(s, 0) - ranks.get(s + 1, 0)
        if h:
            out[-s] = h
    return out


class _DenseEchelon:
    def __init__(self, p: int):
        self.p = p
        self.rows = {}

    def add(self, v: list) -> bool:
        p = self.p
        v = [x % p for x in v]
        for c, x in enumerate(v):
            if not x:
                continue
            row = self.rows.get(c)
            if row is None:
                inv = pow(x, -1, p)
                self.rows[c] = [y * inv % p for y in v]
                return True
            v = [(y - x * z) % p for y, z in zip(v, row)]
        return False


def nullspace_mod_p(cols: list, dim: int, p: int) -> list:
    """Basis of the null space of the matrix whose columns are ``cols``."""
    m = len(cols)
    rr = [[cols[j][i] % p for j in range(m)] for i in range(dim)]
    piv = []
    r = 0
    for c in range(m):
        k = next((i for i in range(r, len(rr)) if rr[i][c]), None)
        if k is None:
            continue
        rr[r], rr[k] = rr[k], rr[r]
        inv = pow(rr[r][c], -1, p)
        rr[r] = [x * inv % p for x in rr[r]]
        for i in range(len(rr)):
            if i != r and rr[i][c]:
                f = rr[i][c]
                rr[i] = [(x - f * y) % p for x, y in zip(rr[i], rr[r])]
        piv.append(c)
        r += 1
    out = []
    pivset = set(piv)
    for f in range(m):
        if f in pivset:
            continue
        v = [0] * m
        v[f] = 1
        for i, c in enumerate(piv):
            v[c] = -rr[i][f] % p
        out.append(v)
    return out


def monomial_betti_of_residue(nvars: int, gens: list, p: int, steps: int) -> list:
    """Betti numbers of k over k[x]/(monomials) by iterating syzygies:
    kernel of the presentation map, then a complement of m * kernel."""
    std = standard_monomials(nvars, gens)
    pos = {e: k for k, e in enumerate(std)}
    n = len(std)

    def mul_mono(v: list, r: int, e: tuple) -> list:
        out = [0] * (r * n)
        for b in range(r):
            for k in range(n):
                c = v[b * n + k]
                if c:
                    f = tuple(a + x for a, x in zip(std[k], e))
                    j = pos.get(f)
                    if j is not None:
                        out[b * n + j] = (out[b * n + j] + c) % p
        return out

    variables = [tuple(1 if j == i else 0 for j in range(nvars)) for i in range(nvars)]

    def minimal_generators(span: list, r: int) -> list:
        ech = _DenseEchelon(p)
        for v in span:
            for x in variables:
                ech.add(mul_mono(v, r, x))
        out = []
        for v in span:
            if ech.add(v):
                out.append(v)
        return out

    unit = [0] * n
    unit[pos[(0,) * nvars]] = 1
    ideal = [mul_mono(unit, 1, e) for e in std if any(e)]
    current = minimal_generators(ideal, 1)
    betti = [1]
    r = 1
    for _ in range(steps):
        betti.append(len(current))
        g = len(current)
        if not g:
            break
        cols = [mul_mono(current[j], r, e) for j in range(g) for e in std]
        ker = nullspace_mod_p(cols, r * n, p)
        current = minimal_generators(ker, g)
        r = g
    return betti
