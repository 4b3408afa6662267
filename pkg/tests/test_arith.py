from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from latmax.arith import (
    DVRScalar,
    ResidueScalar,
    adjugate,
    determinant,
    dvr_kernel,
    fp_det,
    fp_inverse,
    fp_kernel,
    fp_matmul,
    fp_projective_points,
    fp_rank,
    howell_columns,
    identity,
    make_ring,
    mat,
    mat_mul,
    mat_vec,
    pi_hnf,
    residue_kernel_solve,
    scalar_op,
    smith_divisors,
)
from latmax.errors import NonUnitError, PrecisionError, SpecError

R3 = make_ring(3, 16)
PS2 = make_ring(2, 8, "power-series")


def test_context_validation():
    with pytest.raises(SpecError):
        make_ring(4)
    with pytest.raises(SpecError):
        make_ring(3, 0)
    with pytest.raises(SpecError):
        make_ring(3, 4, "laurent")


def test_inverse_of_two_mod_3_16():
    assert R3.unit_inv(2) == (3**16 + 1) // 2
    with pytest.raises(NonUnitError):
        R3.unit_inv(3)


def test_valuations():
    assert R3.val(18) == 2
    assert R3.val(0) == 16
    assert PS2.val(PS2.from_coeffs([0, 0, 1])) == 2


def test_split_rationals_and_series():
    assert R3.split(Fraction(2, 9)) == (-2, 2)
    assert R3.split("18") == (2, 2)
    k, raw = PS2.split({"coeffs": [0, 1, 1], "shift": -3})
    assert k == -2 and raw == PS2.from_coeffs([1, 1])


def test_power_series_inverse_of_one_plus_t():
    a = PS2.from_coeffs([1, 1])
    # 1/(1+t) = 1 + t + t^2 + ... in characteristic 2
    assert PS2.unit_inv(a) == (1,) * 8


def test_scalar_wrapper():
    a, b = DVRScalar.of(R3, 5), DVRScalar.of(R3, 9)
    assert scalar_op(a, b, "add").value == 14
    assert scalar_op(a, b, "val") == 0
    assert scalar_op(b, None, "shift", -2).value == 1
    with pytest.raises(PrecisionError):
        b.shift(-3)
    assert (a * a.inverse()).value == 1
    r = a.residue()
    assert r == ResidueScalar(2, 3)
    assert r.lift(R3).value == 2
    with pytest.raises(ValueError):
        ResidueScalar(3, 3)


def test_hnf_of_canonical_input_is_itself():
    m = mat(R3, [[3, 0], [0, 1]])
    h, _ = pi_hnf(R3, m)
    # already lower triangular with reduced entries
    assert h == ((3, 0), (0, 1))


def test_hnf_reduces_below_pivots():
    m = mat(R3, [[1, 0], [5, 9]])
    h, u = pi_hnf(R3, m)
    assert h == ((1, 0), (5, 9))
    assert mat_mul(R3, m, u) == h
    m2 = mat(R3, [[1, 1], [0, 9]])
    h2, _ = pi_hnf(R3, m2)
    assert h2 == ((1, 0), (0, 9))


def test_hnf_precision_exhausted():
    with pytest.raises(PrecisionError):
        pi_hnf(make_ring(3, 4), mat(make_ring(3, 4), [[1, 0], [0, 81]]))


def test_smith_divisors():
    assert smith_divisors(R3, mat(R3, [[3, 3], [0, 3]])) == [1, 1]
    assert smith_divisors(R3, mat(R3, [[1, 0], [0, 9]])) == [0, 2]
    assert smith_divisors(R3, mat(R3, [[0, 9], [1, 0]])) == [0, 2]


def test_determinant_and_adjugate():
    m = mat(R3, [[2, 1], [7, 4]])
    assert determinant(R3, m) == 1
    assert mat_mul(R3, m, adjugate(R3, m)) == identity(R3, 2)


def test_dvr_kernel():
    a = mat(R3, [[3, 0], [0, 1]])
    ker = dvr_kernel(R3, a)
    # kernel of multiplication by 3 in Z/3^16 is generated by 3^15
    assert len(ker) == 1
    assert R3.val(ker[0][0]) == 15 and R3.is_zero(ker[0][1])


def test_fp_kernel_frozen():
    assert fp_kernel([[1, 1], [2, 2]], 3) == ((1, 2),)
    assert residue_kernel_solve([[1, 1]], 3, [2]) == ((2, 0), ((1, 2),))
    assert residue_kernel_solve([[1, 1], [1, 1]], 3, [0, 1]) is None


def test_fp_inverse_and_det():
    a = ((1, 2), (0, 1))
    assert fp_matmul(a, fp_inverse(a, 3), 3) == ((1, 0), (0, 1))
    assert fp_det(((0, 1), (1, 0)), 3) == 2
    with pytest.raises(ZeroDivisionError):
        fp_inverse(((1, 1), (1, 1)), 2)


def test_projective_points_count():
    assert len(list(fp_projective_points(3, 2))) == 7
    assert len(list(fp_projective_points(2, 3))) == 4


ints = st.integers(min_value=-(10**12), max_value=10**12)


@given(ints, ints, ints)
def test_ring_axioms_padic(a, b, c):
    x, y, z = (R3.from_int(t) for t in (a, b, c))
    assert R3.mul(x, R3.add(y, z)) == R3.add(R3.mul(x, y), R3.mul(x, z))
    assert R3.sub(R3.add(x, y), y) == x
    assert R3.mul(x, y) == R3.from_int(a * b)


coeffs = st.lists(st.integers(0, 1), min_size=8, max_size=8)


@given(coeffs, coeffs)
def test_power_series_valuation_additive(a, b):
    x, y = PS2.from_coeffs(a), PS2.from_coeffs(b)
    prod = PS2.mul(x, y)
    if PS2.val(x) + PS2.val(y) < 8:
        assert PS2.val(prod) == PS2.val(x) + PS2.val(y)
    else:
        assert PS2.is_zero(prod)


@given(st.integers(1, 3**10).filter(lambda n: n % 3))
def test_unit_inverse(n):
    assert R3.mul(R3.from_int(n), R3.unit_inv(R3.from_int(n))) == 1


small = st.integers(-20, 20)


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_hnf_spans_same_module(rows):
    ctx = make_ring(2, 12)
    m = mat(ctx, rows)
    if determinant(ctx, m) == 0 or ctx.val(determinant(ctx, m)) > 6:
        return
    h, u = pi_hnf(ctx, m)
    assert mat_mul(ctx, m, u) == h
    for i in range(3):
        for j in range(i + 1, 3):
            assert h[i][j] == 0
        e = ctx.val(h[i][i])
        assert h[i][i] == 2**e
        for j in range(i):
            assert 0 <= h[i][j] < 2**e
    assert sum(ctx.val(h[i][i]) for i in range(3)) == ctx.val(determinant(ctx, m))
    # canonical: a second basis of the same module gives the same form
    shuffled = tuple(tuple(r[k] for k in (2, 0, 1)) for r in m)
    assert pi_hnf(ctx, shuffled)[0] == h


@given(st.lists(st.lists(small, min_size=2, max_size=2), min_size=2, max_size=2))
def test_smith_matches_gcd_of_entries(rows):
    ctx = make_ring(3, 12)
    m = mat(ctx, rows)
    d = determinant(ctx, m)
    if ctx.is_zero(d) or ctx.val(d) >= 10:
        return
    e = smith_divisors(ctx, m)
    assert e[0] == min(ctx.val(x) for r in m for x in r)
    assert sum(e) == ctx.val(d)


@given(st.lists(st.lists(st.integers(0, 2), min_size=4, max_size=4), min_size=1, max_size=4))
def test_fp_rank_nullity(rows):
    k = fp_kernel(rows, 3, 4)
    assert fp_rank(rows, 3) + len(k) == 4
    for v in k:
        assert all(sum(a * b for a, b in zip(r, v)) % 3 == 0 for r in rows)


def test_howell_columns_canonical():
    cols, piv = howell_columns(R3, [[3, 6], [0, 9]], 2)
    assert piv == [1, 2]
    assert mat_vec(R3, ((1, 0), (0, 1)), [1, 1]) == [1, 1]


def test_hnf_documented_examples():
    # same span as [[1,0],[0,3]]; the pivot order follows the lower triangular convention
    assert pi_hnf(R3, mat(R3, [[3, 0], [0, 1]]))[0] == ((3, 0), (0, 1))
    assert pi_hnf(R3, identity(R3, 2))[0] == identity(R3, 2)
    r4 = make_ring(3, 4)
    assert pi_hnf(r4, mat(r4, [[3, 3], [0, 3]]))[0] == ((3, 0), (0, 3))
