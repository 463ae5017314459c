import math

from hypothesis import given, settings, strategies as st
import pytest

from tstruct_lab.core.complexes import (
    cohomology,
    hom_derived,
    is_acyclic,
    koszul,
    same_cohomology,
    shift,
    stalk,
    zero_complex,
)
from tstruct_lab.core.modules import FinModule, injective_envelope
from tstruct_lab.core.ring import SpecSubset, make_ring
from tstruct_lab.core.tstructures import (
    Boundedness,
    ThomasonFiltration,
    classify_boundedness,
    coaisle_verdicts,
    constant_filtration,
    coresolve_in_coaisle,
    filtration_of_generators,
    generators_of,
    in_aisle,
    in_co_t_coaisle,
    in_co_t_coaisle_hom,
    in_coaisle_cech,
    in_coaisle_hom,
    in_coaisle_reduced,
    intermediate_window,
    koszul_aisle_approximation,
    localizing_subset,
    make_filtration,
    stalk_hom_check,
    standard_filtration,
    truncate_t,
)
from tstruct_lab.errors import DomainError, PreconditionError
from tstruct_lab.lab.generators import enumerate_filtrations, random_complex


def factors(X):
    return {k: m.factors for k, m in cohomology(X).entries}


def cyclic_stalk(ring, d, degree):
    return stalk(FinModule.cyclic(ring, d), degree)


# Filtrations


def test_filtration_from_jumps(z12):
    phi = make_filtration(z12, {"jumps": [[0, [2, 3]], [1, [2]]]})
    assert phi.as_dict() == {2: 1, 3: 0}
    assert phi.at(-5).primes == {2, 3}
    assert phi.at(1).primes == {2}
    assert phi.at(2).primes == frozenset()


def test_filtration_jumps_must_decrease(z12):
    with pytest.raises(DomainError, match="not decreasing"):
        make_filtration(z12, {"jumps": [[0, [2]], [1, [2, 3]]]})
    with pytest.raises(DomainError, match="strictly increase"):
        make_filtration(z12, {"jumps": [[1, [2]], [0, [2]]]})


def test_filtration_from_cutoffs(z12):
    phi = make_filtration(z12, {"cutoffs": {2: "+inf"}})
    assert phi.cutoff(2) == math.inf
    assert phi.cutoff(3) == -math.inf
    assert all(phi.at(n).primes == {2} for n in range(-5, 6))
    assert phi.constant_subset() == SpecSubset(z12, frozenset([2]))


def test_filtration_rejects_unknown_prime(z12):
    with pytest.raises(DomainError, match="unknown prime 5"):
        ThomasonFiltration(z12, ((5, 0),))


def test_standard_filtration(z12):
    assert standard_filtration(z12).as_dict() == {2: 0, 3: 0}
    assert str(standard_filtration(z12, -1)) == "{2:-1, 3:-1}"


# Aisle and coaisles


def test_in_aisle(z12, phi):
    assert in_aisle(cyclic_stalk(z12, 4, 1), phi)
    verdict = in_aisle(cyclic_stalk(z12, 3, 1), phi)
    assert not verdict
    assert verdict.witness == (3, 1)
    assert in_aisle(zero_complex(z12), phi)
    assert in_aisle(shift(koszul(z12, [2]), 1), phi)


def test_in_coaisle_cech(z12, r12, phi):
    assert in_coaisle_cech(cyclic_stalk(z12, 3, 1), phi)
    verdict = in_coaisle_cech(stalk(r12, 0), phi)
    assert not verdict
    assert verdict.witness[1] == 0
    assert in_coaisle_cech(zero_complex(z12), phi)


def test_in_coaisle_hom(z12):
    psi = ThomasonFiltration(z12, ((2, 0),))
    verdict = in_coaisle_hom(cyclic_stalk(z12, 2, 0), psi)
    assert not verdict
    assert verdict.witness == (2, 0)
    assert in_coaisle_hom(cyclic_stalk(z12, 2, 1), psi)


def test_in_coaisle_reduced(z12, phi):
    assert in_coaisle_reduced(cyclic_stalk(z12, 3, 1), phi)
    verdict = in_coaisle_reduced(shift(koszul(z12, [3]), -1), phi)
    assert not verdict
    assert verdict.witness == (3, 0)
    assert in_coaisle_reduced(zero_complex(z12), phi)


def test_worked_coaisle_verdicts_agree(z12, r12, phi):
    for X in (cyclic_stalk(z12, 3, 1), stalk(r12, 0), shift(koszul(z12, [3]), -1)):
        verdicts = coaisle_verdicts(X, phi, strict=True)
        assert len({v.member for v in verdicts}) == 1


def test_oracles_check_the_ring(z4, phi):
    with pytest.raises(DomainError, match="ring mismatch"):
        in_aisle(cyclic_stalk(z4, 2, 0), phi)


@pytest.mark.parametrize(
    "d, degree, expected", [(3, 0, True), (2, -1, True), (2, 0, False)]
)
def test_co_t_coaisle(z12, d, degree, expected):
    psi = ThomasonFiltration(z12, ((2, 0),))
    X = cyclic_stalk(z12, d, degree)
    assert in_co_t_coaisle(X, psi).member is expected
    assert in_co_t_coaisle_hom(X, psi).member is expected


filtrations_12 = enumerate_filtrations(make_ring(12), (-1, 1), minus_infinity=True)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_coaisle_oracles_agree_on_random_complexes(seed):
    ring = make_ring(12)
    X = random_complex(ring, seed=seed)
    for psi in filtrations_12:
        coaisle_verdicts(X, psi, strict=True)
        assert in_co_t_coaisle(X, psi).member == in_co_t_coaisle_hom(X, psi).member


# Truncation


def test_truncate_koszul(z12, phi):
    t = truncate_t(shift(koszul(z12, [3]), -1), phi)
    assert factors(t.u_part) == {0: (3,)}
    assert factors(t.v_part) == {1: (3,)}
    assert t.evidence.verified


def test_truncate_splits_stalk(z12, r12, phi):
    t = truncate_t(stalk(r12, 1), phi)
    assert factors(t.u_part) == {1: (4,)}
    assert factors(t.v_part) == {1: (3,)}
    assert is_acyclic(t.witness)
    assert t.v_map.compose(t.u_map).is_zero()


def test_truncate_aisle_object(z12, phi):
    X = cyclic_stalk(z12, 4, 1)
    t = truncate_t(X, phi)
    assert same_cohomology(t.u_part, X)
    assert is_acyclic(t.v_part)


def test_truncate_constant_filtration_matches_cech(z12, r12):
    psi = constant_filtration(z12, SpecSubset(z12, frozenset([2])))
    t = truncate_t(stalk(r12, 0), psi)
    assert t.evidence.localization_agrees is True
    assert factors(t.u_part) == {0: (4,)}


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.sampled_from(filtrations_12))
def test_truncation_parts_are_orthogonal(seed, psi):
    X = random_complex(make_ring(12), seed=seed)
    t = truncate_t(X, psi)
    assert t.evidence.verified
    assert hom_derived(t.u_part, t.v_part, 0).is_zero


@settings(max_examples=40, deadline=None)
@given(
    st.integers(min_value=0, max_value=10_000),
    st.integers(min_value=0, max_value=10_000),
    st.sampled_from(filtrations_12),
)
def test_aisle_is_orthogonal_to_coaisle(seed_u, seed_v, psi):
    ring = make_ring(12)
    U = random_complex(ring, seed=seed_u)
    if not in_aisle(U, psi):
        U = truncate_t(U, psi).u_part
    V = random_complex(ring, seed=seed_v)
    if not in_coaisle_reduced(V, psi):
        V = truncate_t(V, psi).v_part
    assert in_aisle(U, psi) and in_coaisle_reduced(V, psi)
    for k in (0, -1, -2):
        assert hom_derived(U, V, k).is_zero


# Generators


def test_generators_of(z12, phi):
    assert generators_of(phi) == [shift(koszul(z12, [2]), -1), koszul(z12, [3])]
    standard = ThomasonFiltration(z12, ((2, 0), (3, 0)))
    assert generators_of(standard) == [koszul(z12, [2]), koszul(z12, [3])]
    with pytest.raises(DomainError, match=r"\+inf cutoff"):
        generators_of(ThomasonFiltration(z12, ((2, math.inf),)))


def test_filtration_of_generators(z12, z30, r12, phi):
    assert filtration_of_generators(z12, [shift(koszul(z12, [2]), -1), koszul(z12, [3])]) == phi
    assert filtration_of_generators(z12, [stalk(r12, 0)]).as_dict() == {2: 0, 3: 0}
    empty = filtration_of_generators(z30, [])
    assert all(c == -math.inf for _, c in empty.cutoffs)


@pytest.mark.parametrize("n", [4, 12, 30])
def test_round_trip_over_window(n):
    ring = make_ring(n)
    for psi in enumerate_filtrations(ring, (-1, 1), minus_infinity=True):
        assert filtration_of_generators(ring, generators_of(psi)) == psi


# Boundedness


@pytest.mark.parametrize(
    "cutoffs, kind, intermediate",
    [
        (((2, 1), (3, 0)), Boundedness.BOUNDED, True),
        (((2, 1), (3, -math.inf)), Boundedness.BOUNDED_ABOVE, False),
        (((2, math.inf), (3, 0)), Boundedness.BOUNDED_BELOW, False),
        (((2, math.inf), (3, -math.inf)), Boundedness.NEITHER, False),
    ],
)
def test_classify_boundedness(z12, cutoffs, kind, intermediate):
    report = classify_boundedness(ThomasonFiltration(z12, cutoffs))
    assert report.kind is kind
    assert report.is_intermediate is intermediate


def test_intermediate_window(z12, phi):
    assert intermediate_window(phi) == (1, 2)
    with pytest.raises(DomainError, match="not bounded"):
        intermediate_window(ThomasonFiltration(z12, ((2, 1),)))


# Injectives


def test_stalk_hom_check_koszul(z12):
    check = stalk_hom_check(koszul(z12, [2]), FinModule.cyclic(z12, 4), 0)
    assert check.lhs.factors == (2,)
    assert check.rhs.factors == (2,)
    assert check.bijective


def test_stalk_hom_check_edge_cases(z12, r12):
    below = stalk_hom_check(cyclic_stalk(z12, 4, 1), FinModule.cyclic(z12, 4), 0)
    assert below.lhs.is_zero and below.rhs.is_zero and below.bijective

    E = FinModule.cyclic(z12, 3)
    free = stalk_hom_check(stalk(r12, 0), E, 0)
    assert free.lhs.is_isomorphic(E)
    assert free.rhs.is_isomorphic(E)
    assert free.bijective


def test_stalk_hom_check_needs_injective(z12):
    with pytest.raises(DomainError, match="not injective"):
        stalk_hom_check(koszul(z12, [2]), FinModule.cyclic(z12, 2), 0)


def test_realize_lifts_the_envelope(z4):
    X = cyclic_stalk(z4, 2, 0)
    envelope = injective_envelope(FinModule.cyclic(z4, 2))
    check = stalk_hom_check(X, envelope.module, 0)
    g = check.realize(envelope.embedding)
    assert not g.is_zero()


def test_coresolution_is_periodic(z4):
    psi = ThomasonFiltration(z4, ((2, -1),))
    res = coresolve_in_coaisle(cyclic_stalk(z4, 2, 0), psi, 3)
    assert [(s.envelope.factors, s.degree) for s in res.steps] == [
        ((4,), 0),
        ((4,), 1),
        ((4,), 2),
    ]
    assert all(v.member for s in res.steps for v in s.verdicts)
    assert not res.terminated


def test_coresolution_of_free_module_terminates(z4):
    psi = ThomasonFiltration(z4, ((2, -1),))
    res = coresolve_in_coaisle(stalk(FinModule.free(z4), 0), psi, 3)
    assert [(s.envelope.factors, s.degree) for s in res.steps] == [((4,), 0)]
    assert res.terminated


def test_coresolution_needs_a_coaisle_object(z4):
    psi = ThomasonFiltration(z4, ((2, -1),))
    with pytest.raises(PreconditionError, match="not in the coaisle"):
        coresolve_in_coaisle(cyclic_stalk(z4, 2, -1), psi, 3)


def test_coresolution_needs_a_cutoff_bounded_below_on_the_support(z12):
    psi = ThomasonFiltration(z12, ((2, -math.inf), (3, 0)))
    with pytest.raises(PreconditionError, match=r"not bounded below at \[2\]"):
        coresolve_in_coaisle(cyclic_stalk(z12, 4, 0), psi, 2)
    res = coresolve_in_coaisle(cyclic_stalk(z12, 3, 1), psi, 2)
    assert [(s.envelope.factors, s.degree) for s in res.steps] == [((3,), 1)]
    assert res.terminated


def test_localizing_subset(z12, phi):
    assert localizing_subset(phi) is None
    P = SpecSubset(z12, frozenset([3]))
    assert localizing_subset(constant_filtration(z12, P)) == P


@pytest.mark.parametrize("d", [2, 3, 6])
@settings(max_examples=15, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000))
def test_koszul_approximation_matches_truncation(d, seed):
    ring = make_ring(12)
    X = random_complex(ring, seed=seed)
    psi = ThomasonFiltration(ring, tuple((p, 0) for p in (2, 3) if d % p == 0))
    assert same_cohomology(koszul_aisle_approximation(X, d), truncate_t(X, psi).u_part)
