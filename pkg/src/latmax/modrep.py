"""Finite-dimensional modules over F_p[G], given by generator matrices.

Everything here is exhaustive rather than probabilistic: submodules are found
by spinning vectors, so each routine refuses to run once p^dim exceeds the
enumeration cap. Vectors are int tuples and act as columns (g.v = G v).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product

from .arith import (
    fp_det,
    fp_identity,
    fp_inverse,
    fp_kernel,
    fp_matmul,
    fp_matvec,
    fp_projective_points,
    fp_rref,
)
from .errors import CapExceeded

DEFAULT_CAP = 2**20
HOM_ENUM_CAP = 2**16


@dataclass(frozen=True)
class FpGModule:
    p: int
    dim: int
    generators: tuple
    labels: tuple = ()

    def __post_init__(self):
        gens = tuple(tuple(tuple(int(x) % self.p for x in row) for row in g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"g{i}" for i in range(len(gens))))
        for g in gens:
            if len(g) != self.dim or any(len(r) != self.dim for r in g):
                raise ValueError("generator dimensions do not match the module")
            if self.dim and fp_det(g, self.p) == 0:
                raise ValueError("generator matrices must be invertible over F_p")

    def act(self, g, v) -> tuple:
        return fp_matvec(g, v, self.p)

    def zero(self) -> "Submodule":
        return Submodule((), self.dim)

    def whole(self) -> "Submodule":
        return Submodule(fp_identity(self.dim), self.dim)


@dataclass(frozen=True)
class Submodule:
    """A subspace of F_p^ambient stored by its reduced row echelon basis."""

    basis: tuple
    ambient: int
    parent: FpGModule | None = field(default=None, compare=False, repr=False, hash=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple:
        return tuple(next(i for i, x in enumerate(r) if x) for r in self.basis)

    def sort_key(self):
        return (self.dim, tuple(x for r in self.basis for x in r))

    def reduce(self, v, p: int) -> tuple:
        v = list(v)
        for row, pc in zip(self.basis, self.pivots):
            f = v[pc]
            if f:
                v = [(a - f * b) % p for a, b in zip(v, row)]
        return tuple(v)

    def contains_vector(self, v, p: int) -> bool:
        return not any(self.reduce(v, p))

    def issubset(self, other: "Submodule", p: int) -> bool:
        return all(other.contains_vector(r, p) for r in self.basis)

    def coords(self, v) -> tuple:
        """Coordinates of a member vector in the echelon basis."""
        return tuple(v[pc] for pc in self.pivots)


def submodule(rows, ambient: int, p: int) -> Submodule:
    return Submodule(fp_rref(list(rows), p)[0] if rows else (), ambient)


def sub_sum(a: Submodule, b: Submodule, p: int) -> Submodule:
    return submodule(list(a.basis) + list(b.basis), a.ambient, p)


def sub_intersection(a: Submodule, b: Submodule, p: int) -> Submodule:
    if not a.basis or not b.basis:
        return Submodule((), a.ambient)
    # x = sum s_i a_i = sum t_j b_j
    k = len(a.basis)
    cols = [list(r) for r in a.basis] + [[-x % p for x in r] for r in b.basis]
    system = [list(c) for c in zip(*cols)]
    ker = fp_kernel(system, p, len(cols))
    vecs = []
    for sol in ker:
        v = [0] * a.ambient
        for s, row in zip(sol[:k], a.basis):
            if s:
                v = [(x + s * y) % p for x, y in zip(v, row)]
        vecs.append(v)
    return submodule(vecs, a.ambient, p)


def spin(m: FpGModule, vectors) -> Submodule:
    """Smallest submodule containing ``vectors``."""
    p = m.p
    basis = Submodule((), m.dim)
    queue = [tuple(int(x) % p for x in v) for v in vectors]
    while queue:
        v = queue.pop()
        if basis.contains_vector(v, p):
            continue
        basis = submodule(list(basis.basis) + [v], m.dim, p)
        queue.extend(m.act(g, v) for g in m.generators)
    return basis


def is_submodule(m: FpGModule, s: Submodule) -> bool:
    return all(s.contains_vector(m.act(g, v), m.p) for g in m.generators for v in s.basis)


def _check_cap(m: FpGModule, cap: int):
    if m.p**m.dim > cap:
        raise CapExceeded(f"p^dim = {m.p}^{m.dim} exceeds the enumeration cap {cap}")


def cyclic_submodules(m: FpGModule, cap: int = DEFAULT_CAP) -> list:
    _check_cap(m, cap)
    seen = {}
    for v in fp_projective_points(m.dim, m.p):
        s = spin(m, [v])
        seen.setdefault(s.basis, s)
    return sorted(seen.values(), key=Submodule.sort_key)


def all_submodules(m: FpGModule, cap: int = DEFAULT_CAP) -> list:
    """Every submodule, including 0 and M, in canonical order."""
    p = m.p
    cyc = cyclic_submodules(m, cap)
    found = {(): m.zero()}
    frontier = [m.zero()]
    while frontier:
        nxt = []
        for x in frontier:
            for c in cyc:
                s = sub_sum(x, c, p)
                if s.basis not in found:
                    found[s.basis] = s
                    nxt.append(s)
        frontier = nxt
    return sorted(found.values(), key=Submodule.sort_key)


# -- derived modules ----------------------------------------------------------


def restrict(m: FpGModule, s: Submodule) -> FpGModule:
    """The submodule s as a module in its echelon basis."""
    gens = []
    for g in m.generators:
        cols = [s.coords(m.act(g, v)) for v in s.basis]
        gens.append(tuple(zip(*cols)) if cols else ())
    return FpGModule(m.p, s.dim, tuple(gens), m.labels)


def _complement_cols(s: Submodule) -> list:
    piv = set(s.pivots)
    return [c for c in range(s.ambient) if c not in piv]


def quotient(m: FpGModule, s: Submodule) -> FpGModule:
    """M/s with basis the images of the standard vectors off the pivot columns of s."""
    comp = _complement_cols(s)
    gens = []
    for g in m.generators:
        cols = []
        for c in comp:
            e = tuple(int(i == c) for i in range(m.dim))
            r = s.reduce(m.act(g, e), m.p)
            cols.append(tuple(r[i] for i in comp))
        gens.append(tuple(zip(*cols)) if cols else ())
    return FpGModule(m.p, len(comp), tuple(gens), m.labels)


def quotient_coords(s: Submodule, v, p: int) -> tuple:
    r = s.reduce(v, p)
    return tuple(r[i] for i in _complement_cols(s))


def lift_from_quotient(s: Submodule, sub_q: Submodule, p: int) -> Submodule:
    """Preimage in M of a submodule of M/s."""
    comp = _complement_cols(s)
    rows = list(s.basis)
    for r in sub_q.basis:
        v = [0] * s.ambient
        for c, x in zip(comp, r):
            v[c] = x
        rows.append(v)
    return submodule(rows, s.ambient, p)


def image_in_quotient(s: Submodule, w: Submodule, p: int) -> Submodule:
    return submodule([quotient_coords(s, v, p) for v in w.basis], s.ambient - s.dim, p)


def embed(s: Submodule, sub_s: Submodule, p: int) -> Submodule:
    """A submodule given in the echelon coordinates of s, pushed into the ambient space."""
    rows = []
    for c in sub_s.basis:
        v = [0] * s.ambient
        for x, row in zip(c, s.basis):
            if x:
                v = [(a + x * b) % p for a, b in zip(v, row)]
        rows.append(v)
    return submodule(rows, s.ambient, p)


def in_coords(s: Submodule, w: Submodule, p: int) -> Submodule:
    """A submodule w of M contained in s, in the echelon coordinates of s."""
    return submodule([s.coords(v) for v in w.basis], s.dim, p)


def subquotient(m: FpGModule, v1: Submodule, v2: Submodule) -> FpGModule:
    r = restrict(m, v2)
    return quotient(r, in_coords(v2, v1, m.p))


def direct_sum(a: FpGModule, b: FpGModule) -> FpGModule:
    if a.p != b.p or len(a.generators) != len(b.generators):
        raise ValueError("direct sum needs matching p and generator lists")
    gens = []
    for x, y in zip(a.generators, b.generators):
        rows = [tuple(r) + (0,) * b.dim for r in x] + [(0,) * a.dim + tuple(r) for r in y]
        gens.append(tuple(rows))
    return FpGModule(a.p, a.dim + b.dim, tuple(gens), a.labels)


def dual_module(m: FpGModule) -> FpGModule:
    gens = tuple(tuple(zip(*fp_inverse(g, m.p))) for g in m.generators)
    return FpGModule(m.p, m.dim, gens, m.labels)


def conjugate(m: FpGModule, c) -> FpGModule:
    """The module with generators C g C^{-1}; C is then an isomorphism m -> result."""
    ci = fp_inverse(c, m.p)
    gens = tuple(fp_matmul(fp_matmul(c, g, m.p), ci, m.p) for g in m.generators)
    return FpGModule(m.p, m.dim, gens, m.labels)


def reorder(m: FpGModule, perm) -> FpGModule:
    return FpGModule(m.p, m.dim, tuple(m.generators[i] for i in perm), tuple(m.labels[i] for i in perm))


# -- simple modules, composition series --------------------------------------


def minimal_submodule(m: FpGModule, cap: int = DEFAULT_CAP) -> Submodule:
    """A simple submodule: the smallest cyclic one, canonically first among ties."""
    if m.dim == 0:
        raise ValueError("the zero module has no simple submodule")
    _check_cap(m, cap)
    best = None
    for v in fp_projective_points(m.dim, m.p):
        s = spin(m, [v])
        if best is None or s.sort_key() < best.sort_key():
            best = s
    return best


def composition_series(m: FpGModule, cap: int = DEFAULT_CAP) -> list:
    """0 = M_0 < M_1 < ... < M_c = M with simple quotients, built bottom-up."""
    p = m.p
    cur = m.zero()
    series = [cur]
    while cur.dim < m.dim:
        q = quotient(m, cur)
        s = minimal_submodule(q, cap)
        cur = lift_from_quotient(cur, s, p)
        series.append(cur)
    return series


def module_length(m: FpGModule, cap: int = DEFAULT_CAP) -> int:
    return len(composition_series(m, cap)) - 1


def is_simple(m: FpGModule, cap: int = DEFAULT_CAP) -> bool:
    return m.dim > 0 and minimal_submodule(m, cap).dim == m.dim


@dataclass(frozen=True)
class SimpleClass:
    id: int
    dim: int
    representative: FpGModule = field(compare=False)
    name: str = field(default="", compare=False)


def hom_space(m1: FpGModule, m2: FpGModule) -> list:
    """Basis of G-maps m1 -> m2 as n2 x n1 matrices."""
    p = m1.p
    n1, n2 = m1.dim, m2.dim
    if n1 == 0 or n2 == 0:
        return []
    nv = n1 * n2
    eqs = []
    for a, b in zip(m1.generators, m2.generators):
        # (T a - b T)[r][c] = 0
        for r in range(n2):
            for c in range(n1):
                row = [0] * nv
                for s in range(n1):
                    row[r * n1 + s] += a[s][c]
                for s in range(n2):
                    row[s * n1 + c] -= b[r][s]
                eqs.append([x % p for x in row])
    ker = fp_kernel(eqs, p, nv)
    return [tuple(tuple(v[r * n1 : (r + 1) * n1]) for r in range(n2)) for v in ker]


def _combine(basis, coeffs, p: int, rows: int, cols: int) -> tuple:
    out = [[0] * cols for _ in range(rows)]
    for c, t in zip(coeffs, basis):
        if c:
            for i in range(rows):
                for j in range(cols):
                    out[i][j] = (out[i][j] + c * t[i][j]) % p
    return tuple(tuple(r) for r in out)


def _hom_elements(basis, p: int, n: int, cap: int):
    k = len(basis)
    if p**k <= cap:
        for coeffs in product(range(p), repeat=k):
            yield _combine(basis, coeffs, p, n, n)
        return
    rng = random.Random(0)
    for _ in range(cap):
        yield _combine(basis, [rng.randrange(p) for _ in range(k)], p, n, n)
    raise CapExceeded(f"Hom space of size {p}^{k} too large to search exhaustively")


def is_isomorphic(m1: FpGModule, m2: FpGModule, cap: int = HOM_ENUM_CAP):
    """An invertible intertwiner T (T g1 = g2 T) or None."""
    if m1.p != m2.p or m1.dim != m2.dim or len(m1.generators) != len(m2.generators):
        return None
    if m1.dim == 0:
        return ()
    basis = hom_space(m1, m2)
    if not basis:
        return None
    for t in _hom_elements(basis, m1.p, m1.dim, cap):
        if fp_det(t, m1.p):
            return t
    return None


def is_indecomposable(m: FpGModule, cap: int = DEFAULT_CAP) -> bool:
    """No idempotent endomorphism besides 0 and 1."""
    if m.dim == 0:
        return False
    p, n = m.p, m.dim
    basis = hom_space(m, m)
    if p ** len(basis) > cap:
        raise CapExceeded(f"endomorphism ring of size {p}^{len(basis)} exceeds the cap")
    one = fp_identity(n)
    zero = tuple((0,) * n for _ in range(n))
    for coeffs in product(range(p), repeat=len(basis)):
        e = _combine(basis, coeffs, p, n, n)
        if e != zero and e != one and fp_matmul(e, e, p) == e:
            return False
    return True


def classify_simple(s: FpGModule, classes) -> SimpleClass | None:
    for c in classes:
        if is_isomorphic(s, c.representative) is not None:
            return c
    return None


def composition_factors(m: FpGModule, cap: int = DEFAULT_CAP, classes=None) -> list:
    """[(SimpleClass, multiplicity)] from one composition series.

    With ``classes`` given, factors are matched against those classes (and any
    new isomorphism type is appended with a fresh id); otherwise ids count from 0.
    """
    series = composition_series(m, cap)
    known = list(classes or [])
    counts = {}
    order = []
    for a, b in zip(series, series[1:]):
        f = subquotient(m, a, b)
        c = classify_simple(f, known)
        if c is None:
            c = SimpleClass(len(known), f.dim, f, f"W{len(known) + 1}")
            known.append(c)
        if c.id not in counts:
            order.append(c)
            counts[c.id] = 0
        counts[c.id] += 1
    return [(c, counts[c.id]) for c in sorted(order, key=lambda c: c.id)]


# -- radical and socle ------------------------------------------------------


def acting_algebra(m: FpGModule) -> list:
    """Basis of the image of F_p[G] in End(M), as matrices."""
    p, n = m.p, m.dim
    if n == 0:
        return []
    flat = lambda a: tuple(x for r in a for x in r)  # noqa: E731
    unflat = lambda v: tuple(tuple(v[i * n : (i + 1) * n]) for i in range(n))  # noqa: E731
    span = Submodule((), n * n)
    queue = [fp_identity(n)]
    while queue:
        a = queue.pop()
        v = flat(a)
        if span.contains_vector(v, p):
            continue
        span = submodule(list(span.basis) + [v], n * n, p)
        queue.extend(fp_matmul(g, a, p) for g in m.generators)
    return [unflat(v) for v in span.basis]


def _radical_from_series(m: FpGModule, alg: list, cap: int) -> list:
    p, n = m.p, m.dim
    series = composition_series(m, cap)
    eqs = []
    for lower, upper in zip(series, series[1:]):
        for v in upper.basis:
            images = [lower.reduce(fp_matvec(a, v, p), p) for a in alg]
            for t in range(n):
                eqs.append([img[t] for img in images])
    ker = fp_kernel(eqs, p, len(alg))
    return [_combine(alg, c, p, n, n) for c in ker]


def _radical_from_regular(m: FpGModule, alg: list, cap: int) -> list:
    """rad(A) as the intersection of the maximal left ideals of A."""
    p, n = m.p, m.dim
    k = len(alg)
    flat = lambda a: tuple(x for r in a for x in r)  # noqa: E731
    span = submodule([flat(a) for a in alg], n * n, p)
    elems = [tuple(tuple(b[i * n : (i + 1) * n]) for i in range(n)) for b in span.basis]
    gens = []
    for g in m.generators:
        cols = [span.coords(flat(fp_matmul(g, a, p))) for a in elems]
        gens.append(tuple(zip(*cols)))
    reg = FpGModule(p, k, tuple(gens))
    subs = all_submodules(reg, cap)
    proper = [s for s in subs if s.dim < k]
    maximal = [s for s in proper if not any(s.dim < t.dim and s.issubset(t, p) for t in proper)]
    rad = reg.whole()
    for s in maximal:
        rad = sub_intersection(rad, s, p)
    out = []
    for c in rad.basis:
        v = [0] * (n * n)
        for x, row in zip(c, span.basis):
            if x:
                v = [(a + x * b) % p for a, b in zip(v, row)]
        out.append(tuple(tuple(v[i * n : (i + 1) * n]) for i in range(n)))
    return out


def algebra_radical(m: FpGModule, method: str = "series", cap: int = DEFAULT_CAP) -> list:
    """Basis of the Jacobson radical of the acting algebra A.

    ``series``: elements of A pushing each layer of a composition series into
    the one below (A acts faithfully, so these form rad A).
    ``regular``: intersection of maximal left ideals, found by enumerating the
    submodules of A itself; independent of the first route.
    """
    alg = acting_algebra(m)
    if not alg:
        return []
    if method == "series":
        return _radical_from_series(m, alg, cap)
    if method == "regular":
        return _radical_from_regular(m, alg, cap)
    raise ValueError(f"unknown method {method!r}")


def socle(m: FpGModule, cap: int = DEFAULT_CAP) -> Submodule:
    """Largest semisimple submodule: the vectors killed by rad(A)."""
    if m.dim == 0:
        return m.zero()
    rad = algebra_radical(m, cap=cap)
    if not rad:
        return m.whole()
    eqs = [list(row) for r in rad for row in r]
    return Submodule(fp_kernel(eqs, m.p, m.dim), m.dim)


def radical(m: FpGModule, cap: int = DEFAULT_CAP) -> Submodule:
    """rad(M) = rad(A) M, the intersection of the maximal submodules."""
    rad = algebra_radical(m, cap=cap)
    vecs = [tuple(r[i][j] for i in range(m.dim)) for r in rad for j in range(m.dim)]
    return submodule(vecs, m.dim, m.p) if vecs else m.zero()


def cosocle(m: FpGModule, cap: int = DEFAULT_CAP) -> FpGModule:
    return quotient(m, radical(m, cap))


def is_semisimple(m: FpGModule, cap: int = DEFAULT_CAP) -> bool:
    return socle(m, cap).dim == m.dim


@dataclass(frozen=True)
class SocleFiltration:
    layers: tuple  # soc^1 < soc^2 < ... < soc^l = M

    def __len__(self):
        return len(self.layers)

    def layer(self, i: int) -> Submodule:
        """soc^i, with soc^0 the zero submodule."""
        if i == 0:
            return Submodule((), self.layers[0].ambient if self.layers else 0)
        return self.layers[i - 1]


def socle_filtration(m: FpGModule, cap: int = DEFAULT_CAP) -> SocleFiltration:
    p = m.p
    cur = m.zero()
    layers = []
    while cur.dim < m.dim:
        q = quotient(m, cur)
        cur = lift_from_quotient(cur, socle(q, cap), p)
        layers.append(cur)
    return SocleFiltration(tuple(layers))


def simple_summands(m: FpGModule, s: Submodule, cap: int = DEFAULT_CAP) -> list:
    """Split a semisimple submodule s into simple submodules of m."""
    p = m.p
    r = restrict(m, s)
    acc = r.zero()
    parts = []
    while acc.dim < r.dim:
        tbar = minimal_submodule(quotient(r, acc), cap)
        pre = lift_from_quotient(acc, tbar, p)
        chosen = None
        for c in fp_projective_points(pre.dim, p):
            v = [0] * r.dim
            for x, row in zip(c, pre.basis):
                if x:
                    v = [(a + x * b) % p for a, b in zip(v, row)]
            if acc.contains_vector(v, p):
                continue
            t = spin(r, [v])
            if t.dim == tbar.dim and sub_intersection(t, acc, p).dim == 0:
                chosen = t
                break
        if chosen is None:
            raise ValueError("submodule is not semisimple")
        parts.append(embed(s, chosen, p))
        acc = sub_sum(acc, chosen, p)
    return parts


def maximal_submodule_avoiding(m: FpGModule, v1: Submodule, v2: Submodule, subs=None,
                               cap: int = DEFAULT_CAP) -> Submodule:
    """A maximal submodule containing v1 but not v2 (canonically first among ties)."""
    p = m.p
    if subs is None:
        subs = all_submodules(m, cap)
    cands = [w for w in subs if v1.issubset(w, p) and not v2.issubset(w, p)]
    maximal = [w for w in cands if not any(w.dim < x.dim and w.issubset(x, p) for x in cands)]
    return min(maximal, key=Submodule.sort_key)


@dataclass(frozen=True)
class NonsplitWitness:
    v1: Submodule
    v2: Submodule
    sub: FpGModule  # the simple U at the bottom
    top: FpGModule  # the simple W on top
    extension: FpGModule  # V2/V1


def nonsplit_witness(m: FpGModule, level: int, top=None, cap: int = DEFAULT_CAP) -> NonsplitWitness:
    """V1 <= V2 with V2/V1 a non-split extension of a simple W in socle layer
    ``level`` by a simple U in layer ``level - 1``.

    ``top`` optionally fixes the isomorphism type of W (an FpGModule); by
    default the canonically first simple of the layer is used.
    """
    p = m.p
    filt = socle_filtration(m, cap)
    if level < 2 or level > len(filt):
        raise ValueError(f"level {level} out of range for Loewy length {len(filt)}")
    below = filt.layer(level - 2)
    mid = filt.layer(level - 1)
    upper = filt.layer(level)
    q_mid = quotient(m, mid)
    layer_top = image_in_quotient(mid, upper, p)
    candidates = simple_summands(q_mid, layer_top, cap)
    if top is not None:
        candidates = [w for w in candidates if is_isomorphic(restrict(q_mid, w), top) is not None]
        if not candidates:
            raise ValueError("requested simple does not occur in that layer")
    wbar = candidates[0]
    v2 = lift_from_quotient(mid, wbar, p)
    q_below = quotient(m, below)
    layer_mid = image_in_quotient(below, mid, p)
    parts = simple_summands(q_below, layer_mid, cap)
    for j, u in enumerate(parts):
        others = q_below.zero()
        for k, w in enumerate(parts):
            if k != j:
                others = sub_sum(others, w, p)
        v1 = lift_from_quotient(below, others, p)
        ext = subquotient(m, v1, v2)
        if not is_semisimple(ext, cap):
            return NonsplitWitness(v1, v2, restrict(q_below, u), restrict(q_mid, wbar), ext)
    raise AssertionError("no non-split witness found; socle filtration is inconsistent")
