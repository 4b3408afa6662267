"""Exact arithmetic over the truncated valuation ring O/pi^N and the residue field F_p.

Two flavors of O are supported:

* ``"p-adic"``: O = Z_p, truncated to Z/p^N. Elements are ints in [0, p^N).
* ``"power-series"``: O = F_p[[t]], truncated to F_p[t]/t^N. Elements are
  tuples of N coefficients, constant term first.

Matrices are tuples of row tuples of raw elements; every function that touches
them takes the :class:`RingContext` explicitly. The residue field helpers at
the bottom work on plain int tuples mod p.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import NonUnitError, PrecisionError, SpecError

FLAVORS = ("p-adic", "power-series")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class RingContext:
    """O/pi^N for a fixed prime p, precision N and flavor."""

    p: int
    precision: int
    flavor: str = "p-adic"

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise SpecError(f"p must be prime, got {self.p!r}")
        if not isinstance(self.precision, int) or self.precision < 1:
            raise SpecError(f"precision must be >= 1, got {self.precision!r}")
        if self.flavor not in FLAVORS:
            raise SpecError(f"unknown flavor {self.flavor!r}")

    @property
    def padic(self) -> bool:
        return self.flavor == "p-adic"

    @property
    def modulus(self) -> int:
        return self.p**self.precision

    def with_precision(self, n: int) -> "RingContext":
        return RingContext(self.p, n, self.flavor)

    # -- constructors -------------------------------------------------------

    @property
    def zero(self):
        return 0 if self.padic else (0,) * self.precision

    @property
    def one(self):
        return self.from_int(1)

    def from_int(self, n: int):
        if self.padic:
            return n % self.modulus
        return (n % self.p,) + (0,) * (self.precision - 1)

    def from_coeffs(self, coeffs):
        """Power-series element from a coefficient list (constant first)."""
        if self.padic:
            raise TypeError("coefficient lists only make sense for power series")
        c = [int(x) % self.p for x in coeffs[: self.precision]]
        return tuple(c) + (0,) * (self.precision - len(c))

    def from_fraction(self, x: Fraction):
        """A p-integral rational as an element of Z/p^N."""
        x = Fraction(x)
        if x.denominator % self.p == 0:
            raise NonUnitError(f"{x} is not p-integral")
        return x.numerator * pow(x.denominator, -1, self.modulus) % self.modulus

    def convert(self, x, other: "RingContext"):
        """Re-truncate an element of ``other`` (same p, flavor) into this context."""
        if self.padic:
            return x % self.modulus
        n = self.precision
        return tuple(x[:n]) + (0,) * (n - len(x[:n]))

    # -- ring operations ----------------------------------------------------

    def add(self, a, b):
        if self.padic:
            return (a + b) % self.modulus
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        if self.padic:
            return (a - b) % self.modulus
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        if self.padic:
            return -a % self.modulus
        return tuple(-x % self.p for x in a)

    def mul(self, a, b):
        if self.padic:
            return a * b % self.modulus
        n, p = self.precision, self.p
        out = [0] * n
        for i, x in enumerate(a):
            if x:
                for j in range(n - i):
                    if b[j]:
                        out[i + j] += x * b[j]
        return tuple(c % p for c in out)

    def val(self, a) -> int:
        """pi-adic valuation; the zero element reports N."""
        if self.padic:
            if a == 0:
                return self.precision
            k = 0
            while a % self.p == 0:
                a //= self.p
                k += 1
            return k
        for k, c in enumerate(a):
            if c:
                return k
        return self.precision

    def is_zero(self, a) -> bool:
        return a == 0 if self.padic else not any(a)

    def mul_pi(self, a, k: int):
        """pi^k * a for k >= 0."""
        if k >= self.precision:
            return self.zero
        if self.padic:
            return a * self.p**k % self.modulus
        return (0,) * k + tuple(a[: self.precision - k])

    def div_pi(self, a, k: int):
        """a / pi^k, requiring val(a) >= k. High digits that are not determined come out 0."""
        if k == 0:
            return a
        if self.val(a) < k:
            raise NonUnitError(f"element of valuation {self.val(a)} is not divisible by pi^{k}")
        if self.padic:
            return a // self.p**k
        return tuple(a[k:]) + (0,) * k

    def divmod_pi(self, a, e: int):
        """Split a = q*pi^e + r with r the canonical residue mod pi^e."""
        if self.padic:
            q, r = divmod(a, self.p**e)
            return q, r
        n = self.precision
        return tuple(a[e:]) + (0,) * e, tuple(a[:e]) + (0,) * (n - e)

    def unit_inv(self, a):
        if self.val(a) != 0:
            raise NonUnitError("cannot invert a non-unit")
        if self.padic:
            return pow(a, -1, self.modulus)
        p, n = self.p, self.precision
        b0 = pow(a[0], -1, p)
        b = [b0]
        for k in range(1, n):
            s = sum(a[i] * b[k - i] for i in range(1, k + 1))
            b.append(-b0 * s % p)
        return tuple(b)

    def pi_pow(self, k: int):
        return self.mul_pi(self.one, k)

    def residue(self, a) -> int:
        return a % self.p if self.padic else a[0]

    def lift(self, r: int):
        return self.from_int(int(r) % self.p)

    def split(self, x):
        """Write a field element as pi^k * (integral element); returns (k, raw).

        Accepts ints, Fractions and "a/b" strings (p-adic), and coefficient
        lists or ``{"coeffs": [...], "shift": k}`` dicts (power series, the dict
        meaning t^k times the polynomial). Zero comes back as (N, zero).
        """
        if self.padic:
            if isinstance(x, str):
                try:
                    x = Fraction(x)
                except ValueError as exc:
                    raise SpecError(f"not a rational number: {x!r}") from exc
            if not isinstance(x, (int, Fraction)) or isinstance(x, bool):
                raise SpecError(f"p-adic entries must be integers or rationals, got {x!r}")
            x = Fraction(x)
            if x == 0:
                return self.precision, self.zero
            k = 0
            num, den = x.numerator, x.denominator
            while num % self.p == 0:
                num //= self.p
                k += 1
            while den % self.p == 0:
                den //= self.p
                k -= 1
            return k, self.from_fraction(Fraction(num, den))
        shift = 0
        if isinstance(x, dict):
            shift = int(x.get("shift", 0))
            x = x.get("coeffs")
        if isinstance(x, int) and not isinstance(x, bool):
            x = [x]
        if not isinstance(x, (list, tuple)) or not all(isinstance(c, int) for c in x):
            raise SpecError(f"power-series entries must be coefficient lists, got {x!r}")
        coeffs = [c % self.p for c in x]
        lead = next((i for i, c in enumerate(coeffs) if c), None)
        if lead is None:
            return self.precision, self.zero
        return shift + lead, self.from_coeffs(coeffs[lead:])

    def show(self, a):
        """JSON-friendly rendering of an element."""
        if self.padic:
            return a
        return list(a)


def make_ring(p: int, precision: int = 16, flavor: str = "p-adic") -> RingContext:
    return RingContext(p, precision, flavor)


# -- scalar wrappers ----------------------------------------------------------


@dataclass(frozen=True)
class DVRScalar:
    """An element of O/pi^N with operator overloads."""

    value: object
    ctx: RingContext

    @classmethod
    def of(cls, ctx: RingContext, x) -> "DVRScalar":
        if isinstance(x, int):
            return cls(ctx.from_int(x), ctx)
        if isinstance(x, Fraction):
            return cls(ctx.from_fraction(x), ctx)
        return cls(ctx.from_coeffs(x), ctx)

    def _other(self, other):
        if isinstance(other, DVRScalar):
            if other.ctx != self.ctx:
                raise ValueError("scalars from different rings")
            return other.value
        return DVRScalar.of(self.ctx, other).value

    def __add__(self, other):
        return DVRScalar(self.ctx.add(self.value, self._other(other)), self.ctx)

    __radd__ = __add__

    def __sub__(self, other):
        return DVRScalar(self.ctx.sub(self.value, self._other(other)), self.ctx)

    def __mul__(self, other):
        return DVRScalar(self.ctx.mul(self.value, self._other(other)), self.ctx)

    __rmul__ = __mul__

    def __neg__(self):
        return DVRScalar(self.ctx.neg(self.value), self.ctx)

    def valuation(self) -> int:
        return self.ctx.val(self.value)

    def inverse(self) -> "DVRScalar":
        return DVRScalar(self.ctx.unit_inv(self.value), self.ctx)

    def shift(self, k: int) -> "DVRScalar":
        """Multiply by pi^k; negative k divides and needs valuation >= -k."""
        if k >= 0:
            return DVRScalar(self.ctx.mul_pi(self.value, k), self.ctx)
        if self.valuation() < -k:
            raise PrecisionError(f"cannot shift by {k}: valuation is {self.valuation()}")
        return DVRScalar(self.ctx.div_pi(self.value, -k), self.ctx)

    def residue(self) -> "ResidueScalar":
        return ResidueScalar(self.ctx.residue(self.value), self.ctx.p)


@dataclass(frozen=True)
class ResidueScalar:
    value: int
    p: int

    def __post_init__(self):
        if not 0 <= self.value < self.p:
            raise ValueError(f"{self.value} is not a canonical residue mod {self.p}")

    def lift(self, ctx: RingContext) -> DVRScalar:
        return DVRScalar(ctx.lift(self.value), ctx)


def scalar_op(a: DVRScalar, b: DVRScalar | None, op: str, k: int = 0):
    """Dispatch by name: add, mul, neg, inv, val, shift."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    if op == "val":
        return a.valuation()
    if op == "shift":
        return a.shift(k)
    raise ValueError(f"unknown op {op!r}")


def residue(x: DVRScalar) -> ResidueScalar:
    return x.residue()


def lift(r: ResidueScalar, ctx: RingContext) -> DVRScalar:
    return r.lift(ctx)


# -- matrices over O/pi^N -----------------------------------------------------


def mat(ctx: RingContext, rows) -> tuple:
    """Integer (or rational) nested lists to a matrix over ``ctx``."""
    out = []
    for row in rows:
        r = []
        for x in row:
            if isinstance(x, (list, tuple)):
                r.append(ctx.from_coeffs(x))
            elif isinstance(x, Fraction):
                r.append(ctx.from_fraction(x))
            else:
                r.append(ctx.from_int(x))
        out.append(tuple(r))
    return tuple(out)


def identity(ctx: RingContext, n: int) -> tuple:
    return tuple(tuple(ctx.one if i == j else ctx.zero for j in range(n)) for i in range(n))


def transpose(m) -> tuple:
    return tuple(zip(*m)) if m else ()


def columns(m) -> list:
    return [list(c) for c in zip(*m)] if m else []


def from_columns(cols, nrows: int | None = None) -> tuple:
    if not cols:
        return tuple(() for _ in range(nrows or 0))
    return tuple(tuple(c[i] for c in cols) for i in range(len(cols[0])))


def mat_mul(ctx: RingContext, a, b) -> tuple:
    bt = transpose(b)
    out = []
    for row in a:
        r = []
        for col in bt:
            s = ctx.zero
            for x, y in zip(row, col):
                s = ctx.add(s, ctx.mul(x, y))
            r.append(s)
        out.append(tuple(r))
    return tuple(out)


def mat_vec(ctx: RingContext, a, v) -> list:
    out = []
    for row in a:
        s = ctx.zero
        for x, y in zip(row, v):
            s = ctx.add(s, ctx.mul(x, y))
        out.append(s)
    return out


def mat_scale_pi(ctx: RingContext, a, k: int) -> tuple:
    return tuple(tuple(ctx.mul_pi(x, k) for x in row) for row in a)


def min_valuation(ctx: RingContext, m) -> int:
    return min((ctx.val(x) for row in m for x in row), default=ctx.precision)


def determinant(ctx: RingContext, m):
    """Laplace expansion; fine for the small dimensions used here."""
    n = len(m)
    if n == 0:
        return ctx.one
    if n == 1:
        return m[0][0]
    total = ctx.zero
    for j in range(n):
        if ctx.is_zero(m[0][j]):
            continue
        minor = tuple(row[:j] + row[j + 1 :] for row in m[1:])
        term = ctx.mul(m[0][j], determinant(ctx, minor))
        total = ctx.add(total, term) if j % 2 == 0 else ctx.sub(total, term)
    return total


def adjugate(ctx: RingContext, m) -> tuple:
    n = len(m)
    if n == 1:
        return ((ctx.one,),)
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = tuple(
                tuple(row[c] for c in range(n) if c != j) for r, row in enumerate(m) if r != i
            )
            d = determinant(ctx, minor)
            adj[j][i] = d if (i + j) % 2 == 0 else ctx.neg(d)
    return tuple(tuple(r) for r in adj)


def _howell(ctx: RingContext, cols, nrows: int, coefs=None):
    """Column echelon form with saturation over O/pi^N.

    Returns (pivot_columns, pivot_valuations, pivot_coefs). Column i has its
    pivot pi^{e_i} in row i and zeros above; e_i = N marks a zero column.
    The saturation step makes the result a Howell form: for every k, the
    elements of the span vanishing in rows < k are spanned by columns >= k.
    Entries below a pivot are reduced modulo the pivot of their row.
    """
    N = ctx.precision
    work = [list(c) for c in cols]
    track = coefs is not None
    wcoef = [list(c) for c in coefs] if track else None
    m = len(coefs[0]) if track and coefs else 0
    out, piv, outc = [], [], []
    for i in range(nrows):
        best, bestv = None, N
        for idx, c in enumerate(work):
            v = ctx.val(c[i])
            if v < bestv:
                best, bestv = idx, v
        if best is None:
            out.append([ctx.zero] * nrows)
            piv.append(N)
            outc.append([ctx.zero] * m if track else None)
            continue
        c = work.pop(best)
        cc = wcoef.pop(best) if track else None
        v = bestv
        uinv = ctx.unit_inv(ctx.div_pi(c[i], v))
        c = [ctx.mul(x, uinv) for x in c]
        if track:
            cc = [ctx.mul(x, uinv) for x in cc]
        for k, other in enumerate(work):
            if ctx.is_zero(other[i]):
                continue
            q = ctx.div_pi(other[i], v)
            work[k] = [ctx.sub(x, ctx.mul(q, y)) for x, y in zip(other, c)]
            if track:
                wcoef[k] = [ctx.sub(x, ctx.mul(q, y)) for x, y in zip(wcoef[k], cc)]
        if v > 0:
            sat = [ctx.mul_pi(x, N - v) for x in c]
            if any(not ctx.is_zero(x) for x in sat):
                work.append(sat)
                if track:
                    wcoef.append([ctx.mul_pi(x, N - v) for x in cc])
        work = [w for w in work if any(not ctx.is_zero(x) for x in w)] if not track else work
        out.append(c)
        piv.append(v)
        outc.append(cc)
    for i in range(nrows):
        e = piv[i]
        if e >= N:
            continue
        for j in range(i):
            x = out[j][i]
            if ctx.is_zero(x):
                continue
            q, _ = ctx.divmod_pi(x, e)
            if ctx.is_zero(q):
                continue
            out[j] = [ctx.sub(a, ctx.mul(q, b)) for a, b in zip(out[j], out[i])]
            if track:
                outc[j] = [ctx.sub(a, ctx.mul(q, b)) for a, b in zip(outc[j], outc[i])]
    return out, piv, outc


def howell_columns(ctx: RingContext, cols, nrows: int):
    """Canonical (Howell) column basis of the O/pi^N-span of ``cols``: (columns, pivots)."""
    out, piv, _ = _howell(ctx, cols, nrows)
    return out, piv


def pi_hnf(ctx: RingContext, m):
    """Column pi-Hermite form of an n x k matrix of full row rank at precision.

    Returns (H, U) with H = M U (mod pi^N), H lower triangular with pivots
    pi^{e_i} on the diagonal, zeros above, and every entry below a pivot
    reduced modulo the pivot of its row. H is the canonical basis of the
    column span. Raises PrecisionError when some pivot valuation reaches N.
    """
    n = len(m)
    cols = columns(m)
    k = len(cols)
    coefs = [[ctx.one if a == b else ctx.zero for a in range(k)] for b in range(k)]
    out, piv, outc = _howell(ctx, cols, n, coefs)
    if any(e >= ctx.precision for e in piv):
        raise PrecisionError("precision exhausted: a pivot has valuation >= N")
    return from_columns(out, n), from_columns(outc, k)


def hnf_pivots(ctx: RingContext, h) -> list:
    return [ctx.val(h[i][i]) for i in range(len(h))]


def dvr_kernel(ctx: RingContext, a) -> list:
    """Generators of {x : A x = 0} in (O/pi^N)^k, for A an n x k matrix."""
    n = len(a)
    cols = columns(a)
    k = len(cols)
    stacked = [
        c + [ctx.one if r == j else ctx.zero for r in range(k)] for j, c in enumerate(cols)
    ]
    out, _ = howell_columns(ctx, stacked, n + k)
    gens = []
    for c in out[n:]:
        if all(ctx.is_zero(x) for x in c[:n]) and any(not ctx.is_zero(x) for x in c[n:]):
            gens.append(c[n:])
    return gens


def smith_divisors(ctx: RingContext, m) -> list:
    """Valuations e_1 <= ... <= e_n of the elementary divisors of a square matrix."""
    a = [list(row) for row in m]
    n = len(a)
    N = ctx.precision
    out = []
    for k in range(n):
        best, bv = None, N
        for i in range(k, n):
            for j in range(k, n):
                v = ctx.val(a[i][j])
                if v < bv:
                    best, bv = (i, j), v
        if best is None:
            raise PrecisionError("precision exhausted: matrix is singular at working precision")
        i, j = best
        a[k], a[i] = a[i], a[k]
        for row in a:
            row[k], row[j] = row[j], row[k]
        uinv = ctx.unit_inv(ctx.div_pi(a[k][k], bv))
        a[k] = [ctx.mul(x, uinv) for x in a[k]]
        for r in range(k + 1, n):
            if ctx.is_zero(a[r][k]):
                continue
            q = ctx.div_pi(a[r][k], bv)
            a[r] = [ctx.sub(x, ctx.mul(q, y)) for x, y in zip(a[r], a[k])]
        for c in range(k + 1, n):
            if not ctx.is_zero(a[k][c]):
                a[k][c] = ctx.zero
        out.append(bv)
    return out


# -- residue field linear algebra --------------------------------------------
# Vectors are int tuples in [0, p); matrices are tuples of rows.


def fp_rref(rows, p: int):
    """Reduced row echelon form over F_p. Returns (nonzero rows, pivot columns)."""
    m = [[x % p for x in r] for r in rows]
    if not m:
        return (), ()
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return tuple(tuple(row) for row in m[:r]), tuple(pivots)


def fp_rank(rows, p: int) -> int:
    return len(fp_rref(rows, p)[0])


def fp_matmul(a, b, p: int) -> tuple:
    bt = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) % p for col in bt) for row in a)


def fp_matvec(a, v, p: int) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) % p for row in a)


def fp_identity(n: int) -> tuple:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def fp_det(a, p: int) -> int:
    m = [list(r) for r in a]
    n = len(m)
    det = 1
    for c in range(n):
        pr = next((i for i in range(c, n) if m[i][c] % p), None)
        if pr is None:
            return 0
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            det = -det
        det = det * m[c][c] % p
        inv = pow(m[c][c], -1, p)
        for i in range(c + 1, n):
            f = m[i][c] * inv % p
            if f:
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[c])]
    return det % p


def fp_inverse(a, p: int) -> tuple:
    n = len(a)
    aug = [list(r) + list(e) for r, e in zip(a, fp_identity(n))]
    red, piv = fp_rref(aug, p)
    if piv[:n] != tuple(range(n)) or len(red) < n:
        raise ZeroDivisionError("matrix is singular over F_p")
    return tuple(tuple(r[n:]) for r in red)


def fp_kernel(a, p: int, ncols: int | None = None) -> tuple:
    """Basis (RREF rows) of {x : A x = 0}."""
    if ncols is None:
        ncols = len(a[0]) if a else 0
    red, piv = fp_rref(a, p) if a else ((), ())
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for row, pc in zip(red, piv):
            x[pc] = -row[f] % p
        basis.append(x)
    return fp_rref(basis, p)[0] if basis else ()


def residue_kernel_solve(m, p: int, b=None, ncols: int | None = None):
    """Kernel basis of M, or (particular solution, kernel basis) / None when b is given."""
    if ncols is None:
        ncols = len(m[0]) if m else 0
    ker = fp_kernel(m, p, ncols)
    if b is None:
        return ker
    aug = [list(r) + [bi % p] for r, bi in zip(m, b)]
    red, piv = fp_rref(aug, p) if aug else ((), ())
    if ncols in piv:
        return None
    x = [0] * ncols
    for row, pc in zip(red, piv):
        x[pc] = row[ncols]
    return tuple(x), ker


def fp_vectors(dim: int, p: int):
    """All vectors of F_p^dim in lexicographic order."""
    return product(range(p), repeat=dim)


def fp_projective_points(dim: int, p: int):
    """One representative per line: first nonzero coordinate equal to 1."""
    for v in product(range(p), repeat=dim):
        nz = next((x for x in v if x), None)
        if nz == 1:
            yield v
