"""Slow, independent reference computations used only by the tests.

Nothing here imports latmax: lattices are integer matrices checked with
Fraction arithmetic, and submodules are found by testing every subspace.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product


def frac_inverse(m):
    n = len(m)
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m)]
    for c in range(n):
        pr = next(i for i in range(c, n) if a[i][c])
        a[c], a[pr] = a[pr], a[c]
        a[c] = [x / a[c][c] for x in a[c]]
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [r[n:] for r in a]


def matmul(a, b):
    return [[sum(Fraction(x) * y for x, y in zip(r, c)) for c in zip(*b)] for r in a]


def p_integral(x: Fraction, p: int) -> bool:
    return Fraction(x).denominator % p != 0


def hnf_candidates(p: int, n: int, max_e: int):
    """Lower triangular integer matrices in the canonical form (pivots p^e, entries reduced mod p^e_row)."""
    slots = [(i, j) for i in range(n) for j in range(i)]
    for pivots in product(range(max_e + 1), repeat=n):
        for vals in product(*[range(p ** pivots[i]) for i, _ in slots]):
            h = [[0] * n for _ in range(n)]
            for i in range(n):
                h[i][i] = p ** pivots[i]
            for (i, j), v in zip(slots, vals):
                h[i][j] = v
            yield h


def stable_lattice_classes(p: int, gens, max_e: int):
    """Canonical bases of primitive stable lattices L with p^max_e Z_p^n <= L <= Z_p^n."""
    n = len(gens[0])
    out = []
    for h in hnf_candidates(p, n, max_e):
        if all(x % p == 0 for r in h for x in r):
            continue
        hi = frac_inverse(h)
        if not all(p_integral(x * p**max_e, p) for r in hi for x in r):
            continue
        ok = True
        for g in gens:
            c = matmul(matmul(hi, g), h)
            if not all(p_integral(x, p) for r in c for x in r):
                ok = False
                break
        if ok:
            out.append(h)
    return out


def reduction(h, gens, p: int):
    """Matrices of the generators on L/pL in the column basis of h."""
    hi = frac_inverse(h)
    out = []
    for g in gens:
        c = matmul(matmul(hi, g), h)
        out.append([[(x.numerator * pow(x.denominator, -1, p)) % p for x in r] for r in c])
    return out


def all_subspaces(n: int, p: int):
    """Every subspace of F_p^n as a frozenset of its vectors."""
    vecs = list(product(range(p), repeat=n))
    seen = set()
    seen.add(frozenset([tuple([0] * n)]))
    frontier = list(seen)
    while frontier:
        nxt = []
        for s in frontier:
            for v in vecs:
                if v in s:
                    continue
                new = set(s)
                for w in s:
                    for c in range(1, p):
                        new.add(tuple((a + c * b) % p for a, b in zip(w, v)))
                new.add(v)
                # close under scalar multiples and sums
                changed = True
                while changed:
                    changed = False
                    for a in list(new):
                        for b in list(new):
                            s_ = tuple((x + y) % p for x, y in zip(a, b))
                            if s_ not in new:
                                new.add(s_)
                                changed = True
                fs = frozenset(new)
                if fs not in seen:
                    seen.add(fs)
                    nxt.append(fs)
        frontier = nxt
    return sorted(seen, key=lambda s: (len(s), sorted(s)))


def invariant_subspaces(gens, p: int):
    n = len(gens[0])

    def act(g, v):
        return tuple(sum(g[i][j] * v[j] for j in range(n)) % p for i in range(n))

    return [s for s in all_subspaces(n, p) if all(act(g, v) in s for g in gens for v in s)]


def socle_vectors(gens, p: int):
    """Sum of all minimal nonzero invariant subspaces, as a set of vectors."""
    subs = invariant_subspaces(gens, p)
    nonzero = [s for s in subs if len(s) > 1]
    minimal = [s for s in nonzero if not any(t < s and len(t) > 1 for t in nonzero)]
    total = {tuple([0] * len(gens[0]))}
    for s in minimal:
        total = {tuple((a + b) % p for a, b in zip(x, y)) for x in total for y in s}
    return frozenset(total)


def _vsum(a, b, p):
    return frozenset(tuple((x + y) % p for x, y in zip(u, v)) for u in a for v in b)


def minimal_subspaces(gens, p: int):
    nonzero = [s for s in invariant_subspaces(gens, p) if len(s) > 1]
    return [s for s in nonzero if not any(t < s for t in nonzero)]


def has_simple_socle(gens, p: int) -> bool:
    return len(minimal_subspaces(gens, p)) == 1


def is_decomposable(gens, p: int) -> bool:
    n = len(gens[0])
    subs = [s for s in invariant_subspaces(gens, p) if 1 < len(s) < p**n]
    zero = frozenset([tuple([0] * n)])
    return any(a & b == zero and len(_vsum(a, b, p)) == p**n for a in subs for b in subs)


def _basis(space, p):
    n = len(next(iter(space)))
    basis, spanned = [], {tuple([0] * n)}
    for v in sorted(space):
        if v not in spanned:
            basis.append(v)
            spanned = _vsum(spanned, {tuple(c * x % p for x in v) for c in range(p)}, p)
    return basis


def _trace_on(g, space, p):
    basis = _basis(space, p)
    coords = {}
    for c in product(range(p), repeat=len(basis)):
        v = tuple(sum(ci * b[i] for ci, b in zip(c, basis)) % p for i in range(len(g)))
        coords[v] = c
    tr = 0
    for k, b in enumerate(basis):
        gb = tuple(sum(g[i][j] * b[j] for j in range(len(g))) % p for i in range(len(g)))
        tr += coords[gb][k]
    return tr % p


def factor_label(gens, lower, upper, p):
    """(dim, traces of the generators) on upper/lower."""
    dim = round(math.log(len(upper) // len(lower), p))
    return (dim, tuple((_trace_on(g, upper, p) - _trace_on(g, lower, p)) % p for g in gens))


def nonsplit_length_two(gens, p):
    """Labels (socle, top) of every uniserial length-two subquotient of this module."""
    subs = invariant_subspaces(gens, p)
    out = set()
    for v1 in subs:
        for v2 in subs:
            if not v1 < v2:
                continue
            mid = [w for w in subs if v1 < w < v2]
            if len(mid) == 1:
                w = mid[0]
                out.add((factor_label(gens, v1, w, p), factor_label(gens, w, v2, p)))
    return out
