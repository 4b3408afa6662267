import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import fixture_path
from latmax.errors import DiameterError, PrecisionError
from latmax.lattice import (
    compare_and_key,
    contains,
    dual_lattice,
    intersect,
    lattice_sum,
    lift_residual,
    load_representation,
    normalise_at,
    preimage_lattice,
    residual_image,
)
from latmax.modrep import socle

REP1, BASE1 = load_representation(fixture_path("fix1"))


def test_standard_lattice_is_already_stable():
    assert BASE1.key.pivots == (0, 0)
    assert REP1.closure_steps == 0
    assert BASE1.is_stable()


def test_preimage_of_socle():
    p = preimage_lattice(BASE1, socle(BASE1.reduction))
    assert p.key.to_json() == {"pivots": [0, 1], "entries": [[1, 0], [2, 3]]}
    assert p.key.label() == "[1,0,2,3]"
    assert compare_and_key(BASE1, p).relation == "superset"
    assert compare_and_key(BASE1, p.scaled(-1)).relation == "subset"
    assert compare_and_key(p, p.scaled(2)).homothetic


def test_intersection_and_sum():
    up = preimage_lattice(BASE1, socle(BASE1.reduction)).scaled(-1)
    assert intersect(BASE1, up).key == BASE1.key
    s = lattice_sum(BASE1, up)
    assert s.key == up.key and s.shift == up.shift
    assert contains(up, BASE1) and not contains(BASE1, up)


def test_normalise_at_shifts():
    assert normalise_at(BASE1, REP1.vector([1, 0])).shift == 0
    assert normalise_at(BASE1, REP1.vector(["1/3", 0])).shift == 1
    assert normalise_at(BASE1, REP1.vector([3, 0])).shift == -1
    with pytest.raises(PrecisionError):
        REP1.vector([0, 0])


def test_conjugated_input_recovers_fixture():
    rep, base = load_representation(fixture_path("fix1c"))
    assert rep.closure_steps == 1
    assert rep.base_exp == -1
    assert base.reduction.generators == BASE1.reduction.generators


def test_unbounded_orbit_raises():
    with pytest.raises(DiameterError, match="unbounded orbit"):
        load_representation(fixture_path("unbounded_orbit.json"))


def test_dual_is_involutive():
    p = preimage_lattice(BASE1, socle(BASE1.reduction))
    d = dual_lattice(p)
    assert d.is_stable()
    dd = dual_lattice(d)
    assert dd.key == p.key and dd.shift == p.shift


def test_power_series_fixture_loads():
    rep, base = load_representation(fixture_path("fix5"))
    assert base.is_stable()
    assert rep.ring.flavor == "power-series"


entries = st.integers(-30, 30)


@given(st.tuples(entries, entries).filter(any))
def test_normalised_vector_is_nonzero_mod_pi(v):
    vec = REP1.vector(list(v))
    lat = normalise_at(BASE1, vec)
    r = residual_image(lat, vec)
    assert any(r)
    back = lift_residual(lat, r)
    # the lift agrees with v modulo pi times the lattice
    assert residual_image(lat, back) == r


@given(st.integers(0, 1), st.integers(-3, 3), st.integers(-3, 3))
def test_intersection_is_greatest_lower_bound(which, s1, s2):
    p = preimage_lattice(BASE1, socle(BASE1.reduction))
    a = (BASE1, p)[which].scaled(s1)
    b = p.scaled(s2)
    i = intersect(a, b)
    s = lattice_sum(a, b)
    assert contains(a, i) and contains(b, i)
    assert contains(s, a) and contains(s, b)
    assert i.is_stable() and s.is_stable()
