"""Maximal lattices, sharp subquotients and the map theta."""

from __future__ import annotations

from dataclasses import dataclass, field

from .arith import fp_kernel, fp_matvec, from_columns
from .errors import DiameterError
from .lattice import (
    LatticeVector,
    StableLattice,
    VertexKey,
    _common,
    _member,
    contains,
    lift_residual,
    normalise_at,
    preimage_lattice,
    residual_image,
)
from .modrep import (
    DEFAULT_CAP,
    FpGModule,
    SimpleClass,
    Submodule,
    all_submodules,
    classify_simple,
    composition_series,
    is_isomorphic,
    is_simple,
    maximal_submodule_avoiding,
    restrict,
    socle,
    sub_intersection,
    sub_sum,
    subquotient,
)


@dataclass(frozen=True)
class Subquotient:
    v1: Submodule
    v2: Submodule
    parent: FpGModule = field(compare=False, repr=False)

    def module(self) -> FpGModule:
        return subquotient(self.parent, self.v1, self.v2)

    @property
    def irreducible(self) -> bool:
        return is_simple(self.module())

    def is_sharp(self, subs=None) -> bool:
        return is_sharp(self.parent, self.v1, self.v2, subs)

    def sort_key(self):
        return (self.v1.sort_key(), self.v2.sort_key())

    def to_json(self):
        return {"V1": [list(r) for r in self.v1.basis], "V2": [list(r) for r in self.v2.basis]}


@dataclass(frozen=True)
class MaximalVertex:
    key: VertexKey
    lattice: StableLattice = field(compare=False, repr=False)
    witness_vector: LatticeVector = field(compare=False)
    socle_class: SimpleClass | None = field(default=None, compare=False)


def _strictly_above(m: FpGModule, v1: Submodule, subs):
    p = m.p
    return [w for w in subs if w.dim > v1.dim and v1.issubset(w, p)]


def _minimal(subs, p):
    return [w for w in subs if not any(x.dim < w.dim and x.issubset(w, p) for x in subs)]


def is_sharp(m: FpGModule, v1: Submodule, v2: Submodule, subs=None) -> bool:
    """Every submodule strictly containing v1 contains v2."""
    if subs is None:
        subs = all_submodules(m, DEFAULT_CAP)
    p = m.p
    above = _strictly_above(m, v1, subs)
    return v2.dim > v1.dim and v1.issubset(v2, p) and all(v2.issubset(w, p) for w in above)


def sharp_subquotients(m: FpGModule, cap: int = DEFAULT_CAP, subs=None) -> list:
    """All sharp pairs: V1 whose strict over-modules have a unique minimal element V2."""
    if subs is None:
        subs = all_submodules(m, cap)
    out = []
    for v1 in subs:
        mins = _minimal(_strictly_above(m, v1, subs), m.p)
        if len(mins) == 1:
            out.append(Subquotient(v1, mins[0], m))
    return sorted(out, key=Subquotient.sort_key)


def sharp_above(m: FpGModule, q: Subquotient, cap: int = DEFAULT_CAP, subs=None) -> Subquotient:
    v1p = maximal_submodule_avoiding(m, q.v1, q.v2, subs, cap)
    return Subquotient(v1p, sub_sum(v1p, q.v2, m.p), m)


# -- maximality --------------------------------------------------------------


def is_maximal_at(lat: StableLattice, v: LatticeVector) -> bool:
    vbar = residual_image(lat, v)
    if not any(vbar):
        raise ValueError("lattice is not normalised at v")
    m = lat.reduction
    s = socle(m, lat.rep.cap)
    return is_simple(restrict(m, s), lat.rep.cap) and s.contains_vector(vbar, m.p)


def is_maximal(lat: StableLattice) -> bool:
    """Maximal for some vector, i.e. the reduction has simple socle."""
    m = lat.reduction
    return is_simple(restrict(m, socle(m, lat.rep.cap)), lat.rep.cap)


def ascend_to_maximal(lat: StableLattice, v: LatticeVector, trace: list | None = None) -> StableLattice:
    """Walk up through pi^{-1} * preimage(S) for simple S avoiding v until maximal at v."""
    cap = lat.rep.cap
    limit = lat.rep.dim * (lat.rep.max_diameter + 1)
    for _ in range(limit + 1):
        vbar = residual_image(lat, v)
        if not any(vbar):
            raise ValueError("lattice is not normalised at v")
        m = lat.reduction
        soc = socle(m, cap)
        if trace is not None:
            trace.append(lat)
        if is_simple(restrict(m, soc), cap) and soc.contains_vector(vbar, m.p):
            return lat
        # every simple submodule lies in the socle
        simples = [s for s in all_submodules(m, cap) if s.dim and is_simple(restrict(m, s), cap)]
        s = next(s for s in simples if not s.contains_vector(vbar, m.p))
        lat = preimage_lattice(lat, s).scaled(-1)
    raise DiameterError("ascent did not terminate within the diameter guard")


def maximal_vertex(lat: StableLattice, v: LatticeVector, classes=None) -> MaximalVertex:
    m = lat.reduction
    cls = None
    if classes is not None:
        cls = classify_simple(restrict(m, socle(m, lat.rep.cap)), classes)
    return MaximalVertex(lat.key, lat, v, cls)


# -- theta and its inverse -------------------------------------------------------


def theta_representative(lat: StableLattice, target: StableLattice) -> StableLattice:
    """pi^c * target with lat <= pi^c target and lat not inside pi^{c+1} target."""
    c = 0
    while not contains(target.scaled(c), lat):
        c -= 1
    while contains(target.scaled(c + 1), lat):
        c += 1
    return target.scaled(c)


def theta(lat: StableLattice, x: MaximalVertex | StableLattice) -> Subquotient:
    """(ker phi, phi^{-1}(soc)) for phi : lat/pi lat -> L_x/pi L_x."""
    target = x.lattice if isinstance(x, MaximalVertex) else x
    lx = theta_representative(lat, target)
    m = lat.reduction
    p = m.p
    wctx, _, (cl, cx) = _common([lat, lx])
    hx = from_columns(cx, lat.rep.dim)
    phi_cols = []
    for col in cl:
        c = _member(wctx, hx, col)
        if c is None:
            raise AssertionError("representative does not contain the lattice")
        phi_cols.append(tuple(wctx.residue(y) for y in c))
    phi = tuple(zip(*phi_cols))
    ker = Submodule(fp_kernel(phi, p, m.dim), m.dim)
    soc = socle(lx.reduction, lat.rep.cap)
    # x lies in phi^{-1}(soc) iff phi(x) reduces to zero modulo soc
    images = [soc.reduce(fp_matvec(phi, tuple(int(i == j) for j in range(m.dim)), p), p) for i in range(m.dim)]
    eqs = [list(r) for r in zip(*images)]
    return Subquotient(ker, Submodule(fp_kernel(eqs, p, m.dim), m.dim), m)


def realize_sharp(lat: StableLattice, q: Subquotient, classes=None) -> MaximalVertex:
    """A maximal vertex x with theta(lat, x) = q."""
    p = lat.ring.p
    u = next(r for r in q.v2.basis if not q.v1.contains_vector(r, p))
    v = lift_residual(lat, u)
    start = preimage_lattice(lat, q.v1).scaled(-1)
    start = normalise_at(start, v)
    top = ascend_to_maximal(start, v)
    return maximal_vertex(top, v, classes)


def irreducible_with_top(m: FpGModule, cls: SimpleClass, cap: int = DEFAULT_CAP) -> Subquotient:
    """An irreducible subquotient M_{i-1} < M_i of a composition series with M_i/M_{i-1} ~ cls."""
    series = composition_series(m, cap)
    for a, b in zip(series, series[1:]):
        if is_isomorphic(subquotient(m, a, b), cls.representative) is not None:
            return Subquotient(a, b, m)
    raise ValueError(f"simple class {cls.name or cls.id} is not a composition factor")


def maximal_with_socle(lat: StableLattice, cls: SimpleClass, multiplicity: int | None = None,
                       classes=None):
    """A maximal vertex whose reduction has socle ~ cls; second value flags uniqueness (m = 1)."""
    m = lat.reduction
    cap = lat.rep.cap
    q = irreducible_with_top(m, cls, cap)
    subs = all_submodules(m, cap)
    sq = sharp_above(m, q, cap, subs)
    x = realize_sharp(lat, sq, classes)
    return x, multiplicity == 1


def check_sharp_above(m: FpGModule, q: Subquotient, out: Subquotient) -> bool:
    p = m.p
    return (
        q.v2.issubset(out.v2, p)
        and sub_intersection(q.v2, out.v1, p) == q.v1
        and is_isomorphic(q.module(), out.module()) is not None
    )


__all__ = [
    "MaximalVertex",
    "Subquotient",
    "ascend_to_maximal",
    "check_sharp_above",
    "is_maximal",
    "is_maximal_at",
    "is_sharp",
    "maximal_vertex",
    "maximal_with_socle",
    "realize_sharp",
    "sharp_above",
    "sharp_subquotients",
    "theta",
    "theta_representative",
]
