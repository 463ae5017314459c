from fractions import Fraction

from hypothesis import given, settings, strategies as st
import pytest

from tstruct_lab.core.complexes import (
    ChainMap,
    TruncationSide,
    brutal_truncate,
    cech_tilde,
    cech_triangle,
    cohomology,
    cohomology_map,
    compact_dual,
    direct_sum,
    cone,
    hom_derived,
    is_acyclic,
    is_quasi_isomorphism,
    koszul,
    koszul_powers_tower,
    make_complex,
    map_into_sum,
    map_out_of_sum,
    power_sequence,
    primary_component,
    primary_decomposition,
    projective_replacement,
    same_cohomology,
    shift,
    soft_truncate,
    stalk,
    tensor_complexes,
    tower_colimit,
    zero_complex,
)
from tstruct_lab.core.modules import FinModule, ModuleMap, hom_module, tensor_modules
from tstruct_lab.core.ring import SpecSubset, make_ideal, make_ring
from tstruct_lab.errors import DomainError, NotAComplexError, StabilizationError
from tstruct_lab.lab import brute_force
from tstruct_lab.lab.generators import random_complex, random_free_complex

mult = ModuleMap.scalar


def factors(X):
    return {k: m.factors for k, m in cohomology(X).entries}


def test_complex_rejects_nonzero_composite(z4):
    r4 = FinModule.free(z4)
    identity = ModuleMap.identity(r4)
    with pytest.raises(NotAComplexError, match="d o d != 0"):
        make_complex(z4, 0, [r4, r4, r4], [identity, identity])


def test_zero_ends_are_trimmed(z12, r12):
    zero = FinModule.zero(z12)
    X = make_complex(
        z12, -2, [zero, r12, zero], [ModuleMap.zero(zero, r12), ModuleMap.zero(r12, zero)]
    )
    assert X == stalk(r12, -1)


def test_shift(r12):
    X = shift(stalk(r12, 0), 1)
    assert (X.min_degree, X.max_degree) == (-1, -1)


def test_shift_signs_differential(z12):
    K = koszul(z12, [2])
    assert shift(K, 1).diffs[0].matrix == ((10,),)
    assert shift(K, 2).diffs == K.diffs


def test_cone_of_multiplication_is_koszul(z12, r12):
    f = ChainMap(stalk(r12, 0), stalk(r12, 0), ((0, mult(r12, 2)),))
    C = cone(f).complex
    assert (C.min_degree, C.max_degree) == (-1, 0)
    assert same_cohomology(C, koszul(z12, [2]))


def test_cone_edge_cases(z12):
    X = koszul(z12, [2])
    zero = zero_complex(z12)
    assert same_cohomology(cone(ChainMap.zero(zero, X)).complex, X)
    assert is_acyclic(cone(ChainMap.identity(X)).complex)
    assert is_quasi_isomorphism(ChainMap.identity(X))


def test_chain_map_must_commute(z12, r12):
    K = koszul(z12, [2])
    with pytest.raises(DomainError, match="does not commute"):
        ChainMap(K, stalk(r12, 0), ((0, ModuleMap.identity(r12)),))


def test_soft_truncation_keeps_cocycles(z12):
    X = shift(koszul(z12, [2]), -1)
    low = soft_truncate(X, 0, TruncationSide.LE)
    assert low.complex == stalk(FinModule.cyclic(z12, 2), 0)
    assert brute_force.image_elements(low.map.component(0)) == {(0,), (6,)}

    high = soft_truncate(X, 0, TruncationSide.GT)
    assert factors(high.complex) == {1: (2,)}
    assert same_cohomology(cone(low.map).complex, high.complex)


def test_brutal_truncation(z12, r12):
    K = koszul(z12, [2])
    assert brutal_truncate(K, -1, TruncationSide.LE) == stalk(r12, -1)
    assert brutal_truncate(K, -1, TruncationSide.GT) == stalk(r12, 0)


def test_tensor_of_stalks(z12):
    X = stalk(FinModule.cyclic(z12, 4), 0)
    Y = stalk(FinModule.cyclic(z12, 6), 0)
    assert factors(tensor_complexes(X, Y)) == {0: (2,)}


def test_cohomology_of_koszul(z12, r12):
    assert factors(koszul(z12, [2])) == {-1: (2,), 0: (2,)}
    assert koszul(z12, []) == stalk(r12, 0)
    both = koszul(z12, [2, 3])
    assert len(both.coords) == 3
    assert is_acyclic(both)


def test_cohomology_of_stalk(z12):
    m = FinModule(z12, (2, 6))
    assert factors(stalk(m, 3)) == {3: (2, 6)}


def test_cech_tilde(z12, r12):
    C = cech_tilde(z12, [2])
    assert [m.factors for m in C.coords] == [(12,), (3,)]
    assert factors(C) == {0: (4,)}
    assert cech_tilde(z12, []) == stalk(r12, 0)
    assert factors(cech_tilde(z12, [6])) == {0: (12,)}


@pytest.mark.parametrize(
    "generator, tilde, cech",
    [
        (2, {0: (4,)}, {0: (3,)}),
        (1, {}, {0: (12,)}),
        (12, {0: (12,)}, {}),
    ],
)
def test_cech_triangle(z12, generator, tilde, cech):
    triangle = cech_triangle(z12, make_ideal(z12, generator))
    assert factors(triangle.tilde) == tilde
    assert factors(triangle.cech) == cech


def test_projective_replacement_of_z2(z4):
    X = stalk(FinModule.cyclic(z4, 2), 0)
    replacement = projective_replacement(X, -2)
    P = replacement.complex
    assert P.is_free
    assert (P.min_degree, P.max_degree) == (-2, 0)
    assert cohomology(P).at(0).factors == (2,)
    assert cohomology(P).at(-1).is_zero


def test_projective_replacement_of_free_complex(z12, r12):
    R = stalk(r12, 0)
    assert projective_replacement(R, 0).complex == R
    K = koszul(z12, [2])
    assert same_cohomology(projective_replacement(K, -3).complex, K)


def test_replacement_floor_above_top(z12, r12):
    with pytest.raises(DomainError, match="lies above the top degree"):
        projective_replacement(stalk(r12, 0), 2)


def test_hom_derived(z4, z12, r12):
    K = koszul(z12, [2])
    z2 = stalk(FinModule.cyclic(z12, 2), 0)
    assert hom_derived(K, z2, 0).factors == (2,)
    for k in (-1, 0):
        assert hom_derived(stalk(r12, 0), K, k) == cohomology(K).at(k)

    small = stalk(FinModule.cyclic(z4, 2), 0)
    for k in range(4):
        assert hom_derived(small, small, k).factors == (2,)
    assert hom_derived(small, small, -1).is_zero


def test_compact_dual_of_koszul(z12):
    dual = compact_dual(koszul(z12, [2]))
    assert (dual.min_degree, dual.max_degree) == (0, 1)
    assert dual.is_free
    assert dual.diffs[0].matrix in (((2,),), ((10,),))
    assert factors(dual) == {0: (2,), 1: (2,)}


def test_compact_dual_needs_free_coordinates(z12):
    with pytest.raises(DomainError, match="free coordinates"):
        compact_dual(stalk(FinModule.cyclic(z12, 2), 0))


def test_tower_colimits(z12):
    z4 = FinModule.cyclic(z12, 4)
    assert tower_colimit([z4] * 3, [mult(z4, 2)] * 2).is_zero
    assert tower_colimit([z4] * 3, [mult(z4, 3)] * 2).factors == (4,)
    m = FinModule(z12, (2, 6))
    assert tower_colimit([m] * 3, [ModuleMap.identity(m)] * 2).is_isomorphic(m)


def test_short_towers_ending_in_isomorphisms(z12, r12):
    z4 = FinModule.cyclic(z12, 4)
    assert tower_colimit([z4], []).is_isomorphic(z4)
    assert tower_colimit([z4, z4], [ModuleMap.identity(z4)]).is_isomorphic(z4)
    onto = ModuleMap(r12, z4, ((1,),))
    assert tower_colimit([r12, z4, z4], [onto, mult(z4, 3)]).factors == (4,)


def test_tower_without_periodic_tail(z12, r12):
    z4, z2 = FinModule.cyclic(z12, 4), FinModule.cyclic(z12, 2)
    maps = [ModuleMap(r12, z4, ((1,),)), ModuleMap(z4, z2, ((1,),))]
    with pytest.raises(StabilizationError, match="tower did not stabilize"):
        tower_colimit([r12, z4, z2], maps)


def test_power_sequence(z12):
    assert power_sequence(z12, 2) == (1, 2)
    assert power_sequence(z12, 1) == (0, 1)


def test_koszul_tower_recovers_cech_cohomology(z12):
    tower = koszul_powers_tower(z12, 2)
    cech = cohomology(cech_tilde(z12, [2]))
    for n in (0, 1):
        maps = [cohomology_map(f, n) for f in tower.maps]
        modules = [maps[0].source] + [f.target for f in maps]
        assert tower_colimit(modules, maps).is_isomorphic(cech.at(n))


def test_primary_decomposition_splits_cohomology(z12):
    X = stalk(FinModule.free(z12), 1)
    parts = [c.complex for c in primary_decomposition(X)]
    assert [factors(P) for P in parts] == [{1: (4,)}, {1: (3,)}]


rings = st.sampled_from([4, 12, 30, 36])
seeds = st.integers(min_value=0, max_value=10_000)


def _euler(orders):
    value = Fraction(1)
    for k, order in orders:
        value *= Fraction(order) ** (-1 if k % 2 else 1)
    return value


@settings(max_examples=40, deadline=None)
@given(rings, seeds)
def test_cohomology_orders_match_enumeration(n, seed):
    X = random_complex(make_ring(n), seed=seed)
    expected = {k: v for k, v in brute_force.cohomology_orders(X).items() if v > 1}
    assert {k: m.order for k, m in cohomology(X).entries} == expected


@settings(max_examples=40, deadline=None)
@given(rings, seeds)
def test_euler_characteristic(n, seed):
    X = random_complex(make_ring(n), seed=seed)
    chain = _euler((k, X.module(k).order) for k in X.degrees)
    assert _euler((k, m.order) for k, m in cohomology(X).entries) == chain


@settings(max_examples=30, deadline=None)
@given(rings, seeds, st.integers(min_value=-1, max_value=1))
def test_truncation_triangle_is_exact(n, seed, cut):
    X = random_complex(make_ring(n), seed=seed)
    low = soft_truncate(X, cut, TruncationSide.LE)
    high = soft_truncate(X, cut, TruncationSide.GT)
    assert same_cohomology(cone(low.map).complex, high.complex)
    assert _euler(
        (k, m.order) for k, m in cohomology(cone(low.map).complex).entries
    ) * _euler((k, m.order) for k, m in cohomology(low.complex).entries) == _euler(
        (k, m.order) for k, m in cohomology(X).entries
    )


def test_direct_sum_of_complexes(z12, r12):
    S = direct_sum(koszul(z12, [2]), stalk(FinModule.cyclic(z12, 3), 1))
    assert factors(S) == {-1: (2,), 0: (2,), 1: (3,)}
    assert direct_sum(zero_complex(z12)).is_zero


def test_maps_into_and_out_of_sums(z12, r12):
    R = stalk(r12, 0)
    diagonal = map_into_sum([ChainMap.identity(R), ChainMap.identity(R)])
    assert diagonal.target.module(0).factors == (12, 12)
    fold = map_out_of_sum([ChainMap.identity(R), ChainMap.identity(R)])
    assert fold.compose(diagonal).component(0) == mult(r12, 2)


def test_primary_component(z12):
    X = koszul(z12, [6])
    two = primary_component(X, SpecSubset(z12, frozenset([2])))
    assert factors(two.complex) == {-1: (2,), 0: (2,)}
    assert is_quasi_isomorphism(two.projection.compose(two.inclusion))


@settings(max_examples=25, deadline=None)
@given(rings, seeds, st.integers(min_value=-1, max_value=2))
def test_hom_derived_ignores_extra_margin(n, seed, k):
    ring = make_ring(n)
    X = random_complex(ring, seed=seed)
    Y = random_complex(ring, seed=seed + 1)
    assert hom_derived(X, Y, k) == hom_derived(X, Y, k, margin=3)


def modules_over(n):
    divisors = make_ring(n).nonunit_divisors()
    return st.lists(st.sampled_from(divisors), min_size=1, max_size=2).map(
        lambda fs: FinModule(make_ring(n), tuple(sorted(fs)))
    )


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([12, 36]).flatmap(lambda n: st.tuples(*[modules_over(n)] * 3)))
def test_tensor_hom_adjunction(triple):
    M, N, K = triple
    lhs = hom_module(tensor_modules(M, N).module, K).module
    rhs = hom_module(M, hom_module(N, K).module).module
    assert lhs.is_isomorphic(rhs)
    assert lhs.order == brute_force.hom_count(tensor_modules(M, N).module, K)


@settings(max_examples=40, deadline=None)
@given(rings, seeds)
def test_tensoring_with_the_ring_keeps_cohomology(n, seed):
    ring = make_ring(n)
    X = random_complex(ring, seed=seed)
    assert same_cohomology(tensor_complexes(X, stalk(FinModule.free(ring), 0)), X)
    assert same_cohomology(tensor_complexes(stalk(FinModule.free(ring), 0), X), X)


def test_compact_dual_commutes_with_shift(z12):
    K2 = koszul(z12, [2])
    assert same_cohomology(compact_dual(shift(K2, -1)), shift(compact_dual(K2), 1))
    assert factors(compact_dual(shift(K2, -1))) == {-1: (2,), 0: (2,)}


@settings(max_examples=30, deadline=None)
@given(rings, seeds, st.integers(min_value=-2, max_value=2))
def test_compact_dual_laws(n, seed, k):
    S = random_free_complex(make_ring(n), seed=seed)
    assert same_cohomology(compact_dual(compact_dual(S)), S)
    assert same_cohomology(compact_dual(shift(S, k)), shift(compact_dual(S), -k))
