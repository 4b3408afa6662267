"""Residual factors, the extension graph and realised extensions."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .arith import fp_det
from .building import InvariantComplex
from .maxlat import maximal_with_socle
from .modrep import (
    FpGModule,
    SimpleClass,
    Submodule,
    all_submodules,
    classify_simple,
    composition_factors,
    image_in_quotient,
    is_isomorphic,
    is_semisimple,
    lift_from_quotient,
    module_length,
    quotient,
    restrict,
    simple_summands,
    socle,
    socle_filtration,
    subquotient,
)


@dataclass(frozen=True)
class ResidualFactors:
    classes: tuple
    multiplicities: tuple

    @property
    def r(self) -> int:
        return len(self.classes)

    def multiplicity(self, cls: SimpleClass) -> int:
        return self.multiplicities[cls.id]

    def by_name(self, name: str) -> SimpleClass:
        return next(c for c in self.classes if c.name == name)

    def to_json(self):
        return [{"name": c.name, "dim": c.dim, "multiplicity": m} for c, m in zip(self.classes, self.multiplicities)]


def _invariant(m: FpGModule):
    """Isomorphism invariant of a module that ignores generator order."""
    p = m.p
    per_gen = []
    for lab, g in zip(m.labels, m.generators):
        tr = sum(g[i][i] for i in range(m.dim)) % p
        per_gen.append((lab, tr, fp_det(g, p)))
    return (m.dim, tuple(sorted(per_gen)))


def _base_name(m: FpGModule) -> str:
    p = m.p
    if m.dim == 1:
        vals = sorted((lab, g[0][0]) for lab, g in zip(m.labels, m.generators))
        if all(v == 1 for _, v in vals):
            return "trivial"
        if all(v in (1, p - 1) for _, v in vals):
            return "sign"
        return "chi(" + ",".join(f"{lab}={v}" for lab, v in vals) + ")"
    return f"W{m.dim}"


def _canonical_classes(factors):
    ordered = sorted(factors, key=lambda cm: _invariant(cm[0].representative))
    names = [_base_name(c.representative) for c, _ in ordered]
    counts = {}
    final = []
    for n in names:
        counts[n] = counts.get(n, 0) + 1
        final.append(n if names.count(n) == 1 else f"{n}#{counts[n]}")
    classes = tuple(SimpleClass(i, c.dim, c.representative, nm) for i, ((c, _), nm) in enumerate(zip(ordered, final)))
    return classes, tuple(k for _, k in ordered)


def residual_factors(rep, complex_: InvariantComplex | None = None) -> ResidualFactors:
    """Factors of the base reduction, cross-validated against every vertex of ``complex_``."""
    base = rep.base.reduction
    classes, mults = _canonical_classes(composition_factors(base, rep.cap))
    rf = ResidualFactors(classes, mults)
    if complex_ is not None:
        for lat in complex_.vertices:
            if vertex_factors(lat.reduction, rf) != mults:
                raise AssertionError("semisimplification differs between vertices")
    return rf


def vertex_factors(m: FpGModule, rf: ResidualFactors) -> tuple:
    got = composition_factors(m, classes=rf.classes)
    mult = [0] * rf.r
    for c, k in got:
        if c.id >= rf.r:
            raise AssertionError("unexpected composition factor")
        mult[c.id] = k
    return tuple(mult)


def class_of(m: FpGModule, rf: ResidualFactors) -> SimpleClass:
    c = classify_simple(m, rf.classes)
    if c is None:
        raise AssertionError("module is not one of the residual factors")
    return c


# -- extension graph ------------------------------------------------------------


@dataclass(frozen=True)
class EdgeWitness:
    vertex: object  # VertexKey
    submodule: Submodule


@dataclass(frozen=True)
class ExtensionGraph:
    nodes: tuple  # SimpleClasses
    edges: dict = field(hash=False)  # (j, i) -> tuple of EdgeWitness; j = socle, i = top

    @property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def successors(self, j: int) -> list:
        return sorted(i for (a, i) in self.edges if a == j)

    def distances(self, src: int) -> dict:
        dist = {src: 0}
        q = deque([src])
        while q:
            a = q.popleft()
            for b in self.successors(a):
                if b not in dist:
                    dist[b] = dist[a] + 1
                    q.append(b)
        return dist

    def strongly_connected(self) -> bool:
        n = len(self.nodes)
        return all(len(self.distances(i)) == n for i in range(n))

    def weakly_connected(self) -> bool:
        n = len(self.nodes)
        if n == 0:
            return True
        adj = {i: set() for i in range(n)}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        seen, stack = {0}, [0]
        while stack:
            for b in adj[stack.pop()]:
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
        return len(seen) == n


def _second_layer(m: FpGModule, cap: int):
    """Simple summands of soc^2/soc, each given by its preimage in soc^2."""
    filt = socle_filtration(m, cap)
    if len(filt) < 2:
        return []
    s1, s2 = filt.layer(1), filt.layer(2)
    q = quotient(m, s1)
    parts = simple_summands(q, image_in_quotient(s1, s2, m.p), cap)
    return [(restrict(q, w), lift_from_quotient(s1, w, m.p)) for w in parts]


def extension_graph(x: InvariantComplex, rf: ResidualFactors) -> ExtensionGraph:
    cap = x.rep.cap
    edges = {}
    for v in x.info:
        if not v.is_maximal:
            continue
        m = v.lattice.reduction
        j = class_of(restrict(m, socle(m, cap)), rf).id
        used = set()
        for top, u in _second_layer(m, cap):
            i = class_of(top, rf).id
            if i in used:
                continue
            used.add(i)
            edges.setdefault((j, i), []).append(EdgeWitness(v.key, u))
    return ExtensionGraph(rf.classes, {k: tuple(w) for k, w in sorted(edges.items())})


def check_edge_witness(m: FpGModule, u: Submodule, j: int, i: int, rf: ResidualFactors) -> bool:
    um = restrict(m, u)
    s = socle(um)
    if s.dim == um.dim:
        return False
    sm = restrict(um, s)
    try:
        return class_of(sm, rf).id == j and class_of(quotient(um, s), rf).id == i
    except AssertionError:
        return False


def _length_two_nonsplit(m: FpGModule, subs, cap):
    """(V1, V2) with V2/V1 non-split of length 2."""
    p = m.p
    for v2 in subs:
        for v1 in subs:
            if v1.dim < v2.dim and v1.issubset(v2, p):
                e = subquotient(m, v1, v2)
                if module_length(e, cap) == 2 and not is_semisimple(e, cap):
                    yield v1, v2, e


def brute_force_edges(x: InvariantComplex, rf: ResidualFactors) -> frozenset:
    """Edges from every length-2 non-split subquotient of every vertex's reduction."""
    cap = x.rep.cap
    out = set()
    for lat in x.vertices:
        m = lat.reduction
        for _, _, e in _length_two_nonsplit(m, all_submodules(m, cap), cap):
            s = socle(e, cap)
            out.add((class_of(restrict(e, s), rf).id, class_of(quotient(e, s), rf).id))
    return frozenset(out)


# -- path bound ---------------------------------------------------------------


@dataclass(frozen=True)
class PathCheck:
    source: int
    target: int
    level: int
    distance: int | None
    ok: bool


@dataclass(frozen=True)
class BellaicheReport:
    checks: tuple
    strongly_connected: bool
    weakly_connected: bool

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks) and self.strongly_connected


def socle_levels(m: FpGModule, rf: ResidualFactors, cap: int) -> dict:
    """First socle layer in which each class occurs."""
    filt = socle_filtration(m, cap)
    out = {}
    for lvl in range(1, len(filt) + 1):
        layer = subquotient(m, filt.layer(lvl - 1), filt.layer(lvl))
        for c, _ in composition_factors(layer, cap, rf.classes):
            out.setdefault(c.id, lvl)
    return out


def bellaiche_verify(rep, g: ExtensionGraph, rf: ResidualFactors) -> BellaicheReport:
    checks = []
    for ci in rf.classes:
        x, _ = maximal_with_socle(rep.base, ci, rf.multiplicity(ci), rf.classes)
        levels = socle_levels(x.lattice.reduction, rf, rep.cap)
        dist = g.distances(ci.id)
        for cj in rf.classes:
            m = levels[cj.id]
            d = dist.get(cj.id)
            checks.append(PathCheck(ci.id, cj.id, m, d, d is not None and d <= m - 1))
    return BellaicheReport(tuple(checks), g.strongly_connected(), g.weakly_connected())


# -- realised extensions ----------------------------------------------------------


@dataclass(frozen=True)
class RealisedExtension:
    module: FpGModule
    submodule: Submodule  # U inside the source reduction
    socle: Submodule  # soc(U) in U's coordinates: the embedding of W_j
    source: object  # VertexKey


@dataclass(frozen=True)
class ExtensionClasses:
    top: int
    sub: int
    classes: tuple  # one RealisedExtension per isomorphism class
    unique_expected: bool

    @property
    def ok(self) -> bool:
        return not self.unique_expected or len(self.classes) <= 1


def realised_extensions(x: InvariantComplex, rf: ResidualFactors, i: int, j: int) -> ExtensionClasses:
    """Non-split extensions of W_i by W_j inside maximal reductions with socle W_j, up to isomorphism."""
    cap = x.rep.cap
    found = []
    for v in x.info:
        if not v.is_maximal:
            continue
        m = v.lattice.reduction
        if class_of(restrict(m, socle(m, cap)), rf).id != j:
            continue
        for u in all_submodules(m, cap):
            um = restrict(m, u)
            if module_length(um, cap) != 2:
                continue
            s = socle(um, cap)
            if s.dim == um.dim:
                continue
            if class_of(restrict(um, s), rf).id != j or class_of(quotient(um, s), rf).id != i:
                continue
            if not any(is_isomorphic(um, f.module) is not None for f in found):
                found.append(RealisedExtension(um, u, s, v.key))
    unique = rf.multiplicities[i] == 1 and rf.multiplicities[j] == 1
    return ExtensionClasses(i, j, tuple(found), unique)
