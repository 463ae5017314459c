from hypothesis import given, strategies as st
import pytest

from tstruct_lab.core.ring import (
    SpecSubset,
    crt_idempotents,
    divisor_of_subset,
    localize_away,
    make_ideal,
    make_ring,
    subset_idempotent,
    v_set,
)
from tstruct_lab.errors import DomainError


def test_make_ring_factors_modulus():
    assert make_ring(12).primes == ((2, 2), (3, 1))
    assert make_ring(7).primes == ((7, 1),)
    assert make_ring(30).spec == (2, 3, 5)


@pytest.mark.parametrize("n", [1, 0, -5])
def test_make_ring_rejects_small_modulus(n):
    with pytest.raises(DomainError, match="modulus too small"):
        make_ring(n)


def test_make_ring_rejects_non_integers():
    with pytest.raises(DomainError, match="overflow policy"):
        make_ring(12.0)


def test_ideals_are_canonical(z12):
    assert make_ideal(z12, 8).generator == 4
    assert make_ideal(z12, -3).generator == 3
    assert make_ideal(z12, 0).is_zero
    assert make_ideal(z12, 5).is_unit
    assert (make_ideal(z12, 4) + make_ideal(z12, 6)).generator == 2
    assert (make_ideal(z12, 2) * make_ideal(z12, 3)).generator == 6


@pytest.mark.parametrize(
    "x, primes", [(6, {2, 3}), (1, set()), (4, {2}), (0, {2, 3})]
)
def test_v_set(z12, x, primes):
    assert v_set(z12, make_ideal(z12, x)).primes == primes


@pytest.mark.parametrize("primes, generator", [({2, 3}, 6), (set(), 1), ({2}, 2)])
def test_divisor_of_subset(z12, primes, generator):
    ideal = divisor_of_subset(z12, SpecSubset(z12, frozenset(primes)))
    assert ideal.generator == generator
    assert v_set(z12, ideal).primes == primes


def test_spec_subset_rejects_foreign_primes(z12):
    with pytest.raises(DomainError, match="unknown prime"):
        SpecSubset(z12, frozenset([5]))


def test_localize_away(z12):
    away_two = localize_away(z12, 2)
    assert away_two.modulus == 3
    assert away_two.ring == make_ring(3)
    assert away_two.project(7) == 1

    assert localize_away(z12, 1).modulus == 12

    away_six = localize_away(z12, 6)
    assert away_six.is_zero
    assert away_six.ring is None


def test_crt_idempotents(z12, z36):
    assert crt_idempotents(z12) == {2: 9, 3: 4}
    assert crt_idempotents(make_ring(7)) == {7: 1}
    assert crt_idempotents(z36) == {2: 9, 3: 28}


@given(st.integers(min_value=2, max_value=400))
def test_idempotents_are_orthogonal_and_complete(n):
    ring = make_ring(n)
    es = crt_idempotents(ring)
    assert sum(es.values()) % n == 1
    for p, e in es.items():
        assert (e * e) % n == e
        for q, f in es.items():
            if p != q:
                assert (e * f) % n == 0
    assert subset_idempotent(ring, ring.spec) == 1 % n
