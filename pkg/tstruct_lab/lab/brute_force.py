"""
Element enumeration over small modules.

A second computation path for facts the Smith-form code derives: every
function here walks the elements of the modules involved.
"""

import itertools
import math
from math import gcd, prod
from typing import Iterable, Iterator, List, Set, Tuple

from ..config import LabConfig
from ..core.complexes import Complex
from ..core.modules import Element, FinModule, ModuleMap
from ..core.ring import CyclicRing
from ..core.tstructures import ThomasonFiltration


def elements(module: FinModule) -> Iterator[Element]:
    return itertools.product(*(range(d) for d in module.factors))


def kernel_elements(f: ModuleMap) -> List[Element]:
    zero = (0,) * f.target.rank
    return [x for x in elements(f.source) if f.apply(x) == zero]


def image_elements(f: ModuleMap) -> Set[Element]:
    return {f.apply(x) for x in elements(f.source)}


def annihilated(module: FinModule, d: int) -> int:
    """|{y in M : d y = 0}|."""
    return prod(gcd(d, e) for e in module.factors)


def hom_count(source: FinModule, target: FinModule) -> int:
    """|Hom(M, N)|: each generator of order d goes to an element killed by d."""
    return prod(annihilated(target, d) for d in source.factors)


def tensor_order(left: FinModule, right: FinModule) -> int:
    return prod(gcd(d, e) for d in left.factors for e in right.factors)


def is_essential(embedding: ModuleMap) -> bool:
    """Injective and every nonzero element of E has a nonzero multiple in the image."""
    if len(kernel_elements(embedding)) != 1:
        return False
    n = embedding.target.ring.modulus
    target = embedding.target
    hit = image_elements(embedding)
    zero = (0,) * target.rank
    for y in elements(target):
        if y == zero:
            continue
        multiples = {target.reduce(tuple(r * a for a in y)) for r in range(n)}
        if not any(m != zero and m in hit for m in multiples):
            return False
    return True


def cohomology_orders(X: Complex) -> dict:
    """|H^n| = |ker d^n| / |im d^{n-1}| for every degree of X."""
    orders = {}
    for k in X.degrees:
        cycles = len(kernel_elements(X.diff(k)))
        boundaries = len(image_elements(X.diff(k - 1)))
        orders[k] = cycles // boundaries
    return orders


def submodule_generated(module: FinModule, vectors) -> Set[Element]:
    """The submodule spanned by the given elements."""
    n = module.ring.modulus
    span = {(0,) * module.rank}
    for v in vectors:
        span = {
            module.reduce(tuple(a + r * b for a, b in zip(s, v)))
            for s in span
            for r in range(n)
        }
    return span


def primary_cohomology_orders(X: Complex) -> dict:
    """|H^n(X)_p| for every degree n and prime p, from p-power torsion cycles and boundaries."""
    ring = X.ring
    orders = {}
    for k in X.degrees:
        zero = (0,) * X.module(k).rank
        for p in ring.spec:
            e = ring.prime_power(p)

            def torsion(x, e=e, k=k):
                return X.module(k).reduce(tuple(e * a for a in x)) == zero

            cycles = sum(1 for x in kernel_elements(X.diff(k)) if torsion(x))
            boundaries = sum(1 for x in image_elements(X.diff(k - 1)) if torsion(x))
            orders[(k, p)] = cycles // boundaries
    return orders


def aisle_member(X: Complex, phi: ThomasonFiltration) -> bool:
    """Every nonzero p-part of H^n sits at n <= cutoff(p)."""
    return all(
        order == 1 or k <= phi.cutoff(p)
        for (k, p), order in primary_cohomology_orders(X).items()
    )


def coaisle_member(X: Complex, phi: ThomasonFiltration) -> bool:
    """Every nonzero p-part of H^n sits at n > cutoff(p)."""
    return all(
        order == 1 or k > phi.cutoff(p)
        for (k, p), order in primary_cohomology_orders(X).items()
    )


def enumerable(X: Complex) -> bool:
    return all(X.module(k).order <= LabConfig.BRUTE_FORCE_MAX_ORDER for k in X.degrees)


def support_cutoffs(ring: CyclicRing, complexes: Iterable[Complex]) -> Tuple:
    """Per prime, the top degree where some complex has a nonzero p-part."""
    cutoffs = {p: -math.inf for p in ring.spec}
    for X in complexes:
        for (k, p), order in primary_cohomology_orders(X).items():
            if order > 1:
                cutoffs[p] = max(cutoffs[p], k)
    return tuple(cutoffs.items())
