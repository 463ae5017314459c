import random

from hypothesis import given, settings, strategies as st
import pytest

from tstruct_lab.core.modules import (
    FinModule,
    ModuleMap,
    cokernel,
    direct_sum_modules,
    hom_module,
    image,
    injective_envelope,
    is_essential,
    is_injective_module,
    kernel,
    subquotient,
    support,
    tensor_modules,
    torsion_part,
)
from tstruct_lab.core.ring import SpecSubset, make_ring
from tstruct_lab.errors import DomainError, NotAComplexError
from tstruct_lab.lab import brute_force
from tstruct_lab.lab.generators import random_map

mult = ModuleMap.scalar


def test_module_factors_must_divide_modulus(z12):
    with pytest.raises(DomainError, match="must exceed 1 and divide 12"):
        FinModule(z12, (5,))
    assert FinModule.cyclic(z12, 1).is_zero
    assert FinModule.cyclic(z12, 8).factors == (4,)
    assert FinModule.cyclic(z12, 0).is_free


def test_canonical_form(z12):
    assert FinModule(z12, (4, 3)).canonical().factors == (12,)
    assert FinModule(z12, (2, 6)).canonical().factors == (2, 6)
    assert FinModule(z12, (6, 4)).elementary_divisors() == [4, 2, 3]


def test_ill_defined_entry_is_rejected(z12):
    with pytest.raises(DomainError, match=r"entry \(0,0\) = 1 is not well-defined"):
        ModuleMap(FinModule.cyclic(z12, 2), FinModule.cyclic(z12, 4), ((1,),))


def test_kernel_of_multiplication_by_six(r12):
    ker = kernel(mult(r12, 6))
    assert ker.module.factors == (6,)
    assert brute_force.image_elements(ker.inclusion) == {(k,) for k in range(0, 12, 2)}


def test_kernel_edge_cases(z4):
    r4 = FinModule.free(z4)
    assert kernel(ModuleMap.identity(r4)).module.is_zero
    ker = kernel(ModuleMap.zero(r4, r4))
    assert ker.module.factors == (4,)
    assert brute_force.image_elements(ker.inclusion) == {(k,) for k in range(4)}


def test_cokernel(z4):
    r4 = FinModule.free(z4)
    assert cokernel(mult(r4, 2)).module.factors == (2,)
    assert cokernel(ModuleMap.identity(r4)).module.is_zero
    assert cokernel(ModuleMap.zero(FinModule.zero(z4), r4)).module == r4


def test_subquotients(z4, r12):
    assert subquotient(mult(r12, 2), mult(r12, 6)).module.is_zero
    assert subquotient(mult(r12, 4), mult(r12, 3)).module.is_zero
    r4 = FinModule.free(z4)
    zero = ModuleMap.zero(r4, r4)
    assert subquotient(zero, zero).module.factors == (4,)


def test_subquotient_needs_a_complex(z4):
    r4 = FinModule.free(z4)
    with pytest.raises(NotAComplexError, match="not a complex at this degree"):
        subquotient(ModuleMap.identity(r4), ModuleMap.identity(r4))


def test_tensor_gcd_rule(z12, r12):
    z4, z6, z3 = (FinModule.cyclic(z12, d) for d in (4, 6, 3))
    assert tensor_modules(z4, z6).module.factors == (2,)
    assert tensor_modules(r12, z6).module == z6
    assert tensor_modules(z4, z3).module.is_zero


def test_hom_gcd_rule(z12, r12):
    z4, z6, z3 = (FinModule.cyclic(z12, d) for d in (4, 6, 3))
    assert hom_module(z4, z6).module.factors == (2,)
    assert hom_module(r12, z6).module == z6
    assert hom_module(z3, z4).module.is_zero


def test_hom_elements_are_maps(z12):
    z4, z6 = FinModule.cyclic(z12, 4), FinModule.cyclic(z12, 6)
    hom = hom_module(z4, z6)
    f = hom.to_map((1,))
    assert f.matrix == ((3,),)
    assert hom.from_map(f) == (1,)


def test_support(z12):
    assert support(FinModule.cyclic(z12, 6)).primes == {2, 3}
    assert support(FinModule.zero(z12)).primes == frozenset()
    assert support(FinModule(z12, (4, 4))).primes == {2}


def test_torsion_part(z12):
    z6 = FinModule.cyclic(z12, 6)
    part = torsion_part(z6, SpecSubset(z12, frozenset([2])))
    assert part.module.factors == (2,)
    assert brute_force.image_elements(part.inclusion) == {(0,), (3,)}

    m = FinModule(z12, (4, 6))
    assert torsion_part(m, SpecSubset.full(z12)).module.is_isomorphic(m)
    assert torsion_part(m, SpecSubset.empty(z12)).module.is_zero


def test_injective_envelope(z12):
    env = injective_envelope(FinModule.cyclic(z12, 2))
    assert env.module.factors == (4,)
    assert env.embedding.matrix == ((2,),)

    assert injective_envelope(FinModule.free(z12)).module.factors == (4, 3)
    assert injective_envelope(FinModule.zero(z12)).module.is_zero


def test_injectivity(z12):
    assert is_injective_module(FinModule(z12, (4, 3, 12)))
    assert not is_injective_module(FinModule.cyclic(z12, 2))
    assert not is_injective_module(FinModule.cyclic(z12, 6))


@pytest.mark.parametrize("n", [4, 12, 36])
def test_envelopes_are_essential(n):
    ring = make_ring(n)
    for d in ring.nonunit_divisors():
        env = injective_envelope(FinModule.cyclic(ring, d))
        assert is_injective_module(env.module)
        assert is_essential(env.embedding)
        assert brute_force.is_essential(env.embedding)


def test_non_essential_embedding(z12):
    # Z/2 into Z/4 (+) Z/2 misses the socle of the second summand
    source = FinModule.cyclic(z12, 2)
    target = FinModule(z12, (4, 2))
    f = ModuleMap(source, target, ((2,), (0,)))
    assert not is_essential(f)
    assert not brute_force.is_essential(f)


small_rings = st.sampled_from([4, 6, 12, 18])
seeds = st.integers(min_value=0, max_value=10_000)


def _random_module(rng, ring):
    divisors = ring.nonunit_divisors()
    return FinModule(ring, tuple(rng.choice(divisors) for _ in range(rng.randint(0, 2))))


@settings(max_examples=60, deadline=None)
@given(small_rings, seeds)
def test_kernel_image_cokernel_orders(n, seed):
    ring = make_ring(n)
    rng = random.Random(seed)
    f = random_map(rng, _random_module(rng, ring), _random_module(rng, ring))
    ker, im, coker = kernel(f), image(f), cokernel(f)
    hit = brute_force.image_elements(f)
    assert ker.module.order == len(brute_force.kernel_elements(f))
    assert im.module.order == len(hit)
    assert coker.module.order * len(hit) == f.target.order
    assert ker.module.order * im.module.order == f.source.order
    assert f.compose(ker.inclusion).is_zero()
    assert coker.projection.compose(f).is_zero()


@settings(max_examples=40, deadline=None)
@given(small_rings, seeds)
def test_tensor_and_hom_orders(n, seed):
    ring = make_ring(n)
    rng = random.Random(seed)
    m, k = _random_module(rng, ring), _random_module(rng, ring)
    assert tensor_modules(m, k).module.order == brute_force.tensor_order(m, k)
    assert hom_module(m, k).module.order == brute_force.hom_count(m, k)


def test_preimage(r12):
    f = mult(r12, 4)
    x = f.preimage((8,))
    assert f.apply(x) == (8,)
    assert f.preimage((2,)) is None


def test_direct_sum_modules(z12):
    m = direct_sum_modules(FinModule.cyclic(z12, 4), FinModule.cyclic(z12, 3))
    assert m.factors == (4, 3)
    assert m.canonical().factors == (12,)
