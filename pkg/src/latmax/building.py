"""The invariant subcomplex X(rho) of the Bruhat-Tits building.

Vertices are homothety classes of stable lattices, found by breadth-first
search from L0: the neighbours of [L] are the classes of the lattices strictly
between pi*L and L, i.e. preimages of proper nonzero submodules of L/piL.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

from .errors import DiameterError
from .lattice import StableLattice, VertexKey, contains, intersect, preimage_lattice
from .maxlat import is_maximal, theta_representative
from .modrep import (
    all_submodules,
    composition_factors,
    composition_series,
    is_indecomposable,
    restrict,
    socle,
)

DEFAULT_MAX_VERTICES = 5000
REDUCIBLE_MSG = "possibly reducible: the invariant complex exceeds the diameter guard"


@dataclass(frozen=True)
class VertexInfo:
    key: VertexKey
    lattice: StableLattice = field(compare=False, repr=False)
    is_maximal: bool = False
    is_extremal: bool = False
    socle_classes: tuple = ()  # ((class id, multiplicity), ...)
    length: int = 0


@dataclass(frozen=True)
class InvariantComplex:
    rep: object = field(repr=False)
    vertices: tuple  # StableLattice representatives sorted by key
    edges: tuple  # index pairs (i, j), i < j
    base: int  # index of L0's class
    info: tuple = ()

    @property
    def keys(self) -> tuple:
        return tuple(v.key for v in self.vertices)

    def index(self, key: VertexKey) -> int:
        return self.keys.index(key)

    @property
    def maximal(self) -> list:
        return [v for v in self.info if v.is_maximal]

    @property
    def extremal(self) -> list:
        return [v for v in self.info if v.is_extremal]


def _neighbours(lat: StableLattice, max_diameter: int):
    m = lat.reduction
    out = []
    for u in all_submodules(m, lat.rep.cap):
        if 0 < u.dim < m.dim:
            nb = preimage_lattice(lat, u)
            if nb.diameter > max_diameter:
                raise DiameterError(REDUCIBLE_MSG)
            out.append(StableLattice(lat.rep, nb.basis, 0))
    return out


def enumerate_complex(rep, start: StableLattice | None = None, max_vertices: int = DEFAULT_MAX_VERTICES,
                      workers: int = 1) -> InvariantComplex:
    """Level-synchronous BFS over vertex keys; the result is sorted, so order and workers don't matter."""
    start = start or rep.base
    start = StableLattice(rep, start.basis, 0)
    seen = {start.key: start}
    edges = set()
    frontier = [start]
    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        while frontier:
            results = list(pool.map(lambda l: _neighbours(l, rep.max_diameter), frontier)) if pool else [
                _neighbours(l, rep.max_diameter) for l in frontier
            ]
            nxt = []
            for lat, nbs in zip(frontier, results):
                for nb in nbs:
                    edges.add(frozenset((lat.key, nb.key)))
                    if nb.key not in seen:
                        seen[nb.key] = nb
                        nxt.append(nb)
                        if len(seen) > max_vertices:
                            raise DiameterError(REDUCIBLE_MSG + f" (more than {max_vertices} vertices)")
            frontier = sorted(nxt, key=lambda l: l.key.sort_key())
    finally:
        if pool:
            pool.shutdown()
    order = sorted(seen, key=VertexKey.sort_key)
    idx = {k: i for i, k in enumerate(order)}
    e = sorted(tuple(sorted(idx[k] for k in pair)) for pair in edges)
    return InvariantComplex(rep, tuple(seen[k] for k in order), tuple(e), idx[rep.base.key])


def classify_vertices(x: InvariantComplex, classes=None) -> InvariantComplex:
    """Attach maximal/extremal flags and socle classes to every vertex."""
    cap = x.rep.cap
    infos = []
    for lat in x.vertices:
        m = lat.reduction
        soc = restrict(m, socle(m, cap))
        factors = composition_factors(soc, cap, classes)
        infos.append(VertexInfo(
            lat.key,
            lat,
            is_maximal(lat),
            is_indecomposable(m, cap),
            tuple((c.id, k) for c, k in factors),
            len(composition_series(m, cap)) - 1,
        ))
    return InvariantComplex(x.rep, x.vertices, x.edges, x.base, tuple(infos))


def simplices(x: InvariantComplex) -> list:
    """All simplices, as sorted tuples of vertex indices: chains pi L < L_1 < ... < L."""
    idx = {k: i for i, k in enumerate(x.keys)}
    out = set()
    for i, lat in enumerate(x.vertices):
        m = lat.reduction
        subs = [u for u in all_submodules(m, x.rep.cap) if 0 < u.dim < m.dim]
        keys = [idx[preimage_lattice(lat, u).key] for u in subs]

        def extend(chain, last):
            out.add(tuple(sorted({i, *(keys[j] for j in chain)})))
            for j, u in enumerate(subs):
                if u.dim > last.dim and last.issubset(u, m.p):
                    extend(chain + [j], u)

        out.add((i,))
        for j, u in enumerate(subs):
            extend([j], u)
    return sorted(out, key=lambda s: (len(s), s))


def complex_dimension(x: InvariantComplex) -> int:
    by_length = len(composition_series(x.vertices[x.base].reduction, x.rep.cap)) - 2
    by_chains = max(len(s) for s in simplices(x)) - 1
    if by_length != by_chains:
        raise AssertionError(f"dimension mismatch: length gives {by_length}, chains give {by_chains}")
    return by_length


# -- tropical hull -------------------------------------------------------------


def _intersect_all(lats):
    out = lats[0]
    for l in lats[1:]:
        out = intersect(out, l)
    return out


def _same(a: StableLattice, b: StableLattice) -> bool:
    return contains(a, b) and contains(b, a)


@dataclass(frozen=True)
class HullReport:
    reconstruction: tuple  # (vertex index, witness maximal indices, ok)
    minimality: tuple  # (maximal index, ok)
    closure_ok: bool

    @property
    def ok(self) -> bool:
        return all(r[2] for r in self.reconstruction) and all(m[1] for m in self.minimality) and self.closure_ok


def _scalings(y: StableLattice, z: StableLattice):
    """The range of c where y and pi^c z are in general position (open interval)."""
    c0 = 0
    while not contains(z.scaled(c0), y):
        c0 -= 1
    while contains(z.scaled(c0 + 1), y):
        c0 += 1
    c1 = c0
    while not contains(y, z.scaled(c1)):
        c1 += 1
    return range(c0 + 1, c1)


def pair_intersections(y: StableLattice, z: StableLattice) -> set:
    """Keys of all normalised intersections of y and z, endpoints included."""
    out = {y.key, z.key}
    for c in _scalings(y, z):
        out.add(intersect(y, z.scaled(c)).key)
    return out


def tropical_hull_verify(x: InvariantComplex) -> HullReport:
    maxi = [i for i, v in enumerate(x.info) if v.is_maximal]
    recon = []
    for i, lat in enumerate(x.vertices):
        reps = {j: theta_representative(lat, x.vertices[j]) for j in maxi}
        ok = _same(_intersect_all(list(reps.values())), lat)
        witness = list(maxi)
        if ok:
            for j in list(witness):
                trial = [k for k in witness if k != j]
                if trial and _same(_intersect_all([reps[k] for k in trial]), lat):
                    witness = trial
        recon.append((i, tuple(witness), ok))
    keys = x.keys
    pairs = {}
    for a, b in combinations(range(len(keys)), 2):
        pairs[a, b] = pair_intersections(x.vertices[a], x.vertices[b])
    mins = []
    for j in maxi:
        hit = any(keys[j] in got for (a, b), got in pairs.items() if j not in (a, b))
        mins.append((j, not hit))
    pos = {k: i for i, k in enumerate(keys)}
    hull = {pos[keys[j]] for j in maxi}
    while True:
        new = set(hull)
        for a, b in combinations(sorted(hull), 2):
            new |= {pos[k] for k in pairs[a, b]}
        if new == hull:
            break
        hull = new
    return HullReport(tuple(recon), tuple(mins), hull == set(range(len(keys))))
