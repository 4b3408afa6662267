from functools import lru_cache
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latmax.arith import fp_det
from latmax.errors import CapExceeded
from latmax.modrep import (
    FpGModule,
    algebra_radical,
    all_submodules,
    composition_factors,
    composition_series,
    conjugate,
    cosocle,
    direct_sum,
    dual_module,
    is_indecomposable,
    is_isomorphic,
    is_semisimple,
    is_simple,
    module_length,
    nonsplit_witness,
    quotient,
    radical,
    reorder,
    restrict,
    socle,
    socle_filtration,
    submodule,
)
from oracles import invariant_subspaces, socle_vectors

# residual modules of the three base fixtures
M1 = FpGModule(3, 2, (((0, 2), (1, 2)), ((2, 1), (0, 1))), ("a", "b"))
M2 = FpGModule(2, 2, (((0, 1), (1, 1)), ((1, 1), (0, 1))), ("a", "b"))
M3 = FpGModule(2, 3, (((1, 1, 0), (0, 1, 0), (0, 0, 1)), ((0, 0, 1), (1, 0, 1), (0, 1, 1))), ("s", "c"))


def span(sub, p):
    out = set()
    for c in product(range(p), repeat=sub.dim):
        v = [0] * sub.ambient
        for x, row in zip(c, sub.basis):
            v = [(a + x * b) % p for a, b in zip(v, row)]
        out.add(tuple(v))
    return frozenset(out)


def test_fix1_submodule_lattice():
    subs = all_submodules(M1)
    assert [s.basis for s in subs] == [(), ((1, 2),), ((1, 0), (0, 1))]
    assert socle(M1).basis == ((1, 2),)
    assert radical(M1).basis == ((1, 2),)
    assert not is_semisimple(M1)
    assert is_indecomposable(M1)
    w = nonsplit_witness(M1, 2)
    assert w.v1.dim == 0 and w.v2.dim == 2


def test_fix2_simple_and_fix3_socle():
    assert is_simple(M2)
    assert module_length(M2) == 1
    assert socle(M3).basis == ((1, 0, 1),)
    assert len(socle_filtration(M3)) == 2
    facs = composition_factors(M3)
    assert sorted((c.dim, k) for c, k in facs) == [(1, 1), (2, 1)]


def test_witness_level_out_of_range():
    with pytest.raises(ValueError):
        nonsplit_witness(M1, 3)
    with pytest.raises(ValueError):
        nonsplit_witness(M2, 2)


def test_cap_exceeded():
    triv = FpGModule(2, 12, (tuple(tuple(int(i == j) for j in range(12)) for i in range(12)),))
    with pytest.raises(CapExceeded):
        all_submodules(triv, cap=1000)


def test_isomorphism_under_conjugation_and_reorder():
    c = ((1, 1), (0, 1))
    assert is_isomorphic(M1, conjugate(M1, c)) is not None
    r = reorder(M1, (1, 0))
    assert r.labels == ("b", "a")
    assert not is_isomorphic(M1, direct_sum(restrict(M1, socle(M1)), quotient(M1, socle(M1))))


def test_radical_two_routes_fixed():
    for m in (M1, M2, M3):
        assert algebra_radical(m, "series") == algebra_radical(m, "regular")


@lru_cache(maxsize=None)
def general_linear(p, n):
    return [g for g in (tuple(zip(*[iter(e)] * n)) for e in product(range(p), repeat=n * n)) if fp_det(g, p)]


@st.composite
def modules(draw):
    p = draw(st.sampled_from([2, 3]))
    n = draw(st.integers(1, 3))
    k = draw(st.integers(1, 2))
    gens = tuple(draw(st.sampled_from(general_linear(p, n))) for _ in range(k))
    return FpGModule(p, n, gens)


@given(modules())
def test_submodules_match_brute_force(m):
    got = {span(s, m.p) for s in all_submodules(m)}
    want = set(invariant_subspaces(m.generators, m.p))
    assert got == want


@given(modules())
def test_socle_matches_brute_force(m):
    assert span(socle(m), m.p) == socle_vectors(m.generators, m.p)


@settings(max_examples=20)
@given(modules())
def test_radical_routes_agree(m):
    assert algebra_radical(m, "series") == algebra_radical(m, "regular")


@given(modules())
def test_cosocle_dual_to_socle_of_dual(m):
    # rad(M) is the annihilator of soc(M*)
    assert radical(m).dim + socle(dual_module(m)).dim == m.dim
    assert is_isomorphic(cosocle(m), dual_module(restrict(dual_module(m), socle(dual_module(m))))) is not None


@given(modules())
def test_composition_series_and_filtration(m):
    series = composition_series(m)
    for a, b in zip(series, series[1:]):
        assert a.issubset(b, m.p) and a.dim < b.dim
    filt = socle_filtration(m)
    assert filt.layer(len(filt)).dim == m.dim
    total = sum(k * c.dim for c, k in composition_factors(m))
    assert total == m.dim


@given(modules())
def test_nonsplit_witness_when_loewy_length_at_least_two(m):
    filt = socle_filtration(m)
    for level in range(2, len(filt) + 1):
        w = nonsplit_witness(m, level)
        assert w.v1.issubset(w.v2, m.p)
        assert is_simple(w.sub) and is_simple(w.top)
        assert not is_semisimple(w.extension)
        assert w.extension.dim == w.sub.dim + w.top.dim


def test_submodule_helpers():
    s = submodule([(2, 1)], 2, 3)
    assert s.basis == ((1, 2),)
    assert s.contains_vector((2, 1), 3)
