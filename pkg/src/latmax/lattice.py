"""G-stable lattices in K^n.

Every lattice is stored relative to the stabilized base lattice L0 as
``pi^{-shift} * span(H)``, where H is the canonical pi-Hermite basis of a
lattice contained in L0 but not in pi*L0. Because such a lattice contains
pi^N L0 whenever its determinant valuation is below N, it is the same thing as
a submodule of (O/pi^N)^n, and all containment, membership and intersection
questions become exact finite computations. The contract is that a normalized
H has determinant valuation at most N - 2; anything deeper raises
PrecisionError so the caller can retry at a larger N.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .arith import (
    RingContext,
    adjugate,
    columns,
    determinant,
    from_columns,
    howell_columns,
    identity,
    mat_mul,
    mat_vec,
    smith_divisors,
    transpose,
    dvr_kernel,
)
from .errors import DiameterError, PrecisionError, SpecError
from .modrep import DEFAULT_CAP, FpGModule, Submodule

UNBOUNDED_MSG = "unbounded orbit — image may not stabilize a lattice"


# -- keys and vectors ---------------------------------------------------------


def _canon(ctx: RingContext, x):
    if ctx.padic:
        return x
    c = list(x)
    while c and not c[-1]:
        c.pop()
    return tuple(c)


@dataclass(frozen=True, order=True)
class VertexKey:
    """Canonical basis of the representative L with L <= L0, L not in pi*L0."""

    pivots: tuple
    entries: tuple

    def sort_key(self):
        return (sum(self.pivots), self.pivots, self.entries)

    def to_json(self):
        return {"pivots": list(self.pivots), "entries": [list(r) for r in self.entries]}

    def label(self) -> str:
        flat = ",".join(str(x) if not isinstance(x, tuple) else "t" + "".join(map(str, x)) for r in self.entries for x in r)
        return f"[{flat}]"


@dataclass(frozen=True)
class LatticeVector:
    """pi^exp * coords, with coords a primitive vector in L0 coordinates mod pi^N."""

    coords: tuple
    exp: int


# -- representations ----------------------------------------------------------


@dataclass(frozen=True)
class Representation:
    ring: RingContext
    dim: int
    generators: tuple  # in L0 coordinates, entries in O/pi^N
    inverses: tuple
    labels: tuple
    max_diameter: int = 16
    cap: int = DEFAULT_CAP
    base_exp: int = 0  # L0 = pi^base_exp * span(base_matrix) in standard coordinates
    base_matrix: tuple | None = field(default=None, compare=False)
    base_ctx: RingContext | None = field(default=None, compare=False)
    closure_steps: int = 0

    @cached_property
    def base(self) -> "StableLattice":
        return StableLattice(self, identity(self.ring, self.dim), 0)

    @cached_property
    def dual(self) -> "Representation":
        """The contragredient, in the basis dual to L0."""
        return Representation(
            self.ring,
            self.dim,
            tuple(transpose(g) for g in self.inverses),
            tuple(transpose(g) for g in self.generators),
            self.labels,
            self.max_diameter,
            self.cap,
        )

    def with_precision(self, n: int) -> "Representation":
        ctx = self.ring.with_precision(n)
        if n < self.ring.precision:
            conv = lambda m: tuple(tuple(ctx.convert(x, self.ring) for x in r) for r in m)  # noqa: E731
            return Representation(ctx, self.dim, tuple(map(conv, self.generators)),
                                  tuple(map(conv, self.inverses)), self.labels,
                                  self.max_diameter, self.cap, self.base_exp,
                                  self.base_matrix, self.base_ctx, self.closure_steps)
        raise ValueError("raising precision needs a fresh stabilization")

    def vector(self, entries) -> LatticeVector:
        """A vector of K^n in standard coordinates, rewritten in L0 coordinates."""
        if self.base_matrix is None:
            raise ValueError("this representation has no standard coordinates")
        hi = self.base_ctx
        if len(entries) != self.dim:
            raise SpecError(f"vector has {len(entries)} entries, expected {self.dim}")
        parts = [hi.split(x) for x in entries]
        nz = [k for k, raw in parts if not hi.is_zero(raw)]
        if not nz:
            raise PrecisionError("vector is zero at working precision")
        e = min(nz)
        w = [hi.zero if hi.is_zero(raw) else hi.mul_pi(raw, k - e) for k, raw in parts]
        h = self.base_matrix
        det = determinant(hi, h)
        v = hi.val(det)
        uinv = hi.unit_inv(hi.div_pi(det, v))
        y = [hi.mul(x, uinv) for x in mat_vec(hi, adjugate(hi, h), w)]
        c = min(hi.val(x) for x in y)
        if c >= hi.precision - self.ring.precision:
            raise PrecisionError("vector too deep for the working precision")
        prim = tuple(self.ring.convert(hi.div_pi(x, c), hi) for x in y)
        return LatticeVector(prim, e - self.base_exp - v + c)

    @cached_property
    def residual(self) -> FpGModule:
        return self.base.reduction


def _split_matrix(hi: RingContext, raw):
    """A K-matrix as (d, A) with A integral and primitive: raw = pi^d A."""
    parts = [[hi.split(x) for x in row] for row in raw]
    nz = [k for row in parts for k, r in row if not hi.is_zero(r)]
    if not nz:
        raise SpecError("generator is the zero matrix")
    d = min(nz)
    a = tuple(tuple(hi.zero if hi.is_zero(r) else hi.mul_pi(r, k - d) for k, r in row) for row in parts)
    return d, a


def _inverse_pair(hi: RingContext, d: int, a, slack: int):
    det = determinant(hi, a)
    w = hi.val(det)
    if w >= slack:
        raise SpecError("generator is not invertible at working precision")
    uinv = hi.unit_inv(hi.div_pi(det, w))
    adj = adjugate(hi, a)
    inv = tuple(tuple(hi.mul(x, uinv) for x in r) for r in adj)
    # adj(A) may be divisible by pi; keep the primitive part
    c = min(hi.val(x) for r in inv for x in r)
    inv = tuple(tuple(hi.div_pi(x, c) for x in r) for r in inv)
    return -d - w + c, inv


def _hnf_cols(ctx: RingContext, cols, n: int):
    out, piv = howell_columns(ctx, cols, n)
    if any(e >= ctx.precision for e in piv):
        raise PrecisionError("precision exhausted: lattice is not of full rank at working precision")
    return out, piv


def _primitive_hnf(ctx: RingContext, cols, n: int):
    """Canonical basis of pi^{-c} span(cols) with c the content; returns (cols, pivots, c)."""
    out, piv = _hnf_cols(ctx, cols, n)
    c = min(ctx.val(x) for col in out for x in col)
    if c:
        scaled = [[ctx.div_pi(x, c) for x in col] for col in out]
        pad = [[ctx.pi_pow(ctx.precision - c) if i == j else ctx.zero for i in range(n)] for j in range(n)]
        out, piv = _hnf_cols(ctx, scaled + pad, n)
    return out, piv, c


def stabilize(ring: RingContext, raw_generators, labels=None, max_diameter: int = 16,
              cap: int = DEFAULT_CAP):
    """Representation with generators in the basis of the closure L0 of the standard lattice.

    Returns (rep, L0). ``raw_generators`` are matrices of field elements in any
    form ``RingContext.split`` accepts.
    """
    if not raw_generators:
        raise SpecError("at least one generator is required")
    n = len(raw_generators[0])
    for g in raw_generators:
        if len(g) != n or any(len(r) != n for r in g):
            raise SpecError("generators must all be square of the same size")
    labels = tuple(labels) if labels else tuple(f"g{i}" for i in range(len(raw_generators)))
    N = ring.precision
    probe = ring.with_precision(N + 8)
    spread = 0
    for g in raw_generators:
        ks = [probe.split(x)[0] for r in g for x in r]
        ks = [k for k in ks if k < probe.precision]
        if ks:
            spread = max(spread, max(ks) - min(ks), abs(min(ks)))
    slack = (n + 1) * max_diameter + 4 * spread + 4 * n + 16
    hi = ring.with_precision(N + slack)
    pairs, inv_pairs = [], []
    for g in raw_generators:
        d, a = _split_matrix(hi, g)
        pairs.append((d, a))
        inv_pairs.append(_inverse_pair(hi, d, a, slack // 2))
    everything = pairs + inv_pairs

    t, h = 0, columns(identity(hi, n))
    steps = 0
    while True:
        blocks = [(t, h)]
        for d, a in everything:
            blocks.append((t + d, columns(mat_mul(hi, a, from_columns(h, n)))))
        tmin = min(e for e, _ in blocks)
        cols = [[hi.mul_pi(x, e - tmin) for x in col] for e, b in blocks for col in b]
        new_h, _, c = _primitive_hnf(hi, cols, n)
        new_t = tmin + c
        if new_t == t and new_h == h:
            break
        t, h = new_t, new_h
        steps += 1
        if -t > max_diameter:
            raise DiameterError(UNBOUNDED_MSG)

    hm = from_columns(h, n)
    det = determinant(hi, hm)
    v = hi.val(det)
    uinv = hi.unit_inv(hi.div_pi(det, v))
    adj = adjugate(hi, hm)

    def rewrite(d, a):
        c = mat_mul(hi, mat_mul(hi, adj, a), hm)
        need = v - d
        if need > 0:
            if min(hi.val(x) for r in c for x in r) < need:
                raise PrecisionError("precision exhausted while rewriting generators")
            c = tuple(tuple(hi.div_pi(x, need) for x in r) for r in c)
        elif need < 0:
            c = tuple(tuple(hi.mul_pi(x, -need) for x in r) for r in c)
        out = tuple(tuple(ring.convert(hi.mul(x, uinv), hi) for x in r) for r in c)
        if ring.val(determinant(ring, out)) != 0:
            raise PrecisionError("rewritten generator is not invertible mod pi")
        return out

    gens = tuple(rewrite(d, a) for d, a in pairs)
    invs = tuple(rewrite(d, a) for d, a in inv_pairs)
    rep = Representation(ring, n, gens, invs, labels, max_diameter, cap, t, hm, hi, steps)
    return rep, rep.base


# -- lattices -----------------------------------------------------------------


def _member(ctx: RingContext, h, y):
    """Coordinates c with H c = y (H canonical, lower triangular), or None."""
    n = len(h)
    y = list(y)
    coords = []
    for i in range(n):
        e = ctx.val(h[i][i])
        if ctx.val(y[i]) < e:
            return None
        q = ctx.div_pi(y[i], e)
        coords.append(q)
        if not ctx.is_zero(q):
            y = [ctx.sub(a, ctx.mul(q, h[r][i])) for r, a in enumerate(y)]
    return coords


@dataclass(frozen=True)
class StableLattice:
    """pi^{-shift} * span(basis), basis in L0 coordinates."""

    rep: Representation = field(repr=False)
    basis: tuple
    shift: int

    @property
    def ring(self) -> RingContext:
        return self.rep.ring

    @cached_property
    def pivots(self) -> tuple:
        return tuple(self.ring.val(self.basis[i][i]) for i in range(len(self.basis)))

    @cached_property
    def key(self) -> VertexKey:
        ctx = self.ring
        return VertexKey(self.pivots, tuple(tuple(_canon(ctx, x) for x in r) for r in self.basis))

    @cached_property
    def reduction(self) -> FpGModule:
        ctx, h = self.ring, self.basis
        gens = []
        for g in self.rep.generators:
            cols = []
            for col in columns(h):
                c = _member(ctx, h, mat_vec(ctx, g, col))
                if c is None:
                    raise AssertionError("lattice is not stable")
                cols.append(tuple(ctx.residue(x) for x in c))
            gens.append(tuple(zip(*cols)))
        return FpGModule(ctx.p, len(h), tuple(gens), self.rep.labels)

    def is_stable(self) -> bool:
        ctx, h = self.ring, self.basis
        return all(_member(ctx, h, mat_vec(ctx, g, col)) is not None
                   for g in self.rep.generators for col in columns(h))

    def scaled(self, k: int) -> "StableLattice":
        """pi^k times this lattice."""
        return StableLattice(self.rep, self.basis, self.shift - k)

    @cached_property
    def diameter(self) -> int:
        """Distance of the class from L0: the largest elementary divisor exponent."""
        return max(smith_divisors(self.ring, self.basis))

    def to_json(self) -> dict:
        return {"shift": self.shift, "key": self.key.to_json()}


def _from_columns(rep: Representation, cols, exp: int, ctx: RingContext | None = None,
                  check: bool = True) -> StableLattice:
    """Normalize pi^exp * span(cols), cols integral in L0 coordinates over ``ctx``."""
    ctx = ctx or rep.ring
    n = rep.dim
    _, piv = _hnf_cols(ctx, cols, n)
    if sum(piv) > ctx.precision - 1:
        raise PrecisionError("precision exhausted: lattice too deep to be represented faithfully")
    out, piv, c = _primitive_hnf(ctx, cols, n)
    if sum(piv) > rep.ring.precision - 2:
        raise PrecisionError(f"precision exhausted: determinant valuation {sum(piv)} needs N >= {sum(piv) + 2}")
    basis = from_columns([[rep.ring.convert(x, ctx) for x in col] for col in out], n)
    lat = StableLattice(rep, basis, -(exp + c))
    if check and not lat.is_stable():
        raise ValueError("lattice is not stable under the generators")
    return lat


def make_lattice(rep: Representation, basis_columns, exp: int = 0, check: bool = True) -> StableLattice:
    """pi^exp * span of integral L0-coordinate columns (ints, rationals, coefficient lists)."""
    ctx = rep.ring
    cols = []
    for col in basis_columns:
        parts = [ctx.split(x) for x in col]
        if any(k < 0 for k, r in parts if not ctx.is_zero(r)):
            raise SpecError("basis columns must be integral")
        cols.append([ctx.zero if ctx.is_zero(r) else ctx.mul_pi(r, k) for k, r in parts])
    return _from_columns(rep, cols, exp, check=check)


def reduce_mod_pi(lat: StableLattice) -> FpGModule:
    return lat.reduction


def _lift_vec(ctx: RingContext, h, u):
    return mat_vec(ctx, h, [ctx.lift(x) for x in u])


def preimage_lattice(lat: StableLattice, u: Submodule) -> StableLattice:
    """The lattice between pi*lat and lat whose image in lat/pi*lat is u."""
    ctx, h = lat.ring, lat.basis
    cols = [[ctx.mul_pi(x, 1) for x in col] for col in columns(h)]
    cols += [_lift_vec(ctx, h, row) for row in u.basis]
    return _from_columns(lat.rep, cols, -lat.shift)


def _common(lats):
    """Lift several lattices to one scale pi^{-K} over a context with enough room."""
    rep = lats[0].rep
    K = max(l.shift for l in lats)
    n = rep.dim
    room = max(sum(l.pivots) + n * (K - l.shift) for l in lats)
    ctx = rep.ring.with_precision(max(rep.ring.precision, n * room + 2))
    out = []
    for l in lats:
        s = K - l.shift
        out.append([[ctx.mul_pi(ctx.convert(x, rep.ring), s) for x in col] for col in columns(l.basis)])
    return ctx, K, out


def intersect(a: StableLattice, b: StableLattice) -> StableLattice:
    if a.rep is not b.rep and a.rep != b.rep:
        raise ValueError("lattices belong to different representations")
    ctx, K, (ca, cb) = _common([a, b])
    n = a.rep.dim
    neg = [[ctx.neg(x) for x in col] for col in cb]
    ker = dvr_kernel(ctx, from_columns(ca + neg, n))
    ha = from_columns(ca, n)
    cols = [mat_vec(ctx, ha, k[:n]) for k in ker]
    return _from_columns(a.rep, cols, -K, ctx)


def lattice_sum(a: StableLattice, b: StableLattice) -> StableLattice:
    ctx, K, (ca, cb) = _common([a, b])
    return _from_columns(a.rep, ca + cb, -K, ctx)


def contains(a: StableLattice, b: StableLattice) -> bool:
    """b <= a."""
    ctx, _, (ca, cb) = _common([a, b])
    ha = from_columns(ca, a.rep.dim)
    return all(_member(ctx, ha, col) is not None for col in cb)


@dataclass(frozen=True)
class Comparison:
    relation: str  # "equal", "subset", "superset", "incomparable"
    key: VertexKey
    other_key: VertexKey | None = None

    @property
    def homothetic(self) -> bool:
        return self.other_key is not None and self.key == self.other_key


def compare_and_key(a: StableLattice, b: StableLattice | None = None) -> Comparison:
    if b is None:
        return Comparison("equal", a.key)
    sub, sup = contains(b, a), contains(a, b)
    rel = "equal" if sub and sup else "subset" if sub else "superset" if sup else "incomparable"
    return Comparison(rel, a.key, b.key)


# -- vectors relative to a lattice --------------------------------------------


def _min_power_inside(lat: StableLattice, v: LatticeVector) -> int:
    ctx, h = lat.ring, lat.basis
    for s in range(ctx.precision):
        y = [ctx.mul_pi(x, s) for x in v.coords]
        if _member(ctx, h, y) is not None:
            return s
    raise PrecisionError("vector indistinguishable from 0 at working precision")


def normalise_at(lat: StableLattice, v: LatticeVector) -> StableLattice:
    """The homothetic copy containing v with v nonzero modulo pi."""
    if all(lat.ring.is_zero(x) for x in v.coords):
        raise PrecisionError("vector indistinguishable from 0 at working precision")
    s0 = _min_power_inside(lat, v)
    return StableLattice(lat.rep, lat.basis, s0 - v.exp)


def residual_image(lat: StableLattice, v: LatticeVector) -> tuple:
    """Image of v in lat/pi*lat (v must lie in lat)."""
    ctx = lat.ring
    k = v.exp + lat.shift
    if k < 0:
        raise ValueError("vector is not in the lattice")
    c = _member(ctx, lat.basis, [ctx.mul_pi(x, k) for x in v.coords])
    if c is None:
        raise ValueError("vector is not in the lattice")
    return tuple(ctx.residue(x) for x in c)


def lift_residual(lat: StableLattice, u) -> LatticeVector:
    """The vector basis . u of lat, lifting u from F_p^n with zero higher digits."""
    ctx = lat.ring
    n = lat.rep.dim
    wide = ctx.with_precision(2 * ctx.precision)
    h = tuple(tuple(wide.convert(x, ctx) for x in r) for r in lat.basis)
    y = _lift_vec(wide, h, u)
    c = min(wide.val(x) for x in y)
    if c >= ctx.precision:
        raise ValueError("cannot lift the zero vector")
    prim = tuple(ctx.convert(wide.div_pi(x, c), wide) for x in y)
    assert len(prim) == n
    return LatticeVector(prim, c - lat.shift)


def dual_lattice(lat: StableLattice) -> StableLattice:
    """{f : f(lat) <= O} in the dual representation."""
    rep, ctx = lat.rep, lat.ring
    n = rep.dim
    v = sum(lat.pivots)
    wide = ctx.with_precision(ctx.precision + n * v + 2)
    h = tuple(tuple(wide.convert(x, ctx) for x in r) for r in lat.basis)
    adj_t = transpose(adjugate(wide, h))
    return _from_columns(rep.dual, columns(adj_t), lat.shift - v, wide)


def load_representation(spec):
    """(rep, L0) from a JobSpec, a mapping or a path to a JSON job document."""
    from .arith import make_ring
    from .config import JobSpec, parse_spec

    if not isinstance(spec, JobSpec):
        spec = parse_spec(spec)
    ring = make_ring(spec.p, spec.precision, spec.flavor)
    return stabilize(ring, spec.generators, spec.labels, spec.max_diameter, spec.enumeration_cap)
