"""
Seeded instance generators: random complexes and enumerated filtrations.
"""

import itertools
import math
import random
from typing import List, Optional, Sequence, Tuple

from ..config import LabConfig
from ..core.complexes import Complex, make_complex, zero_complex
from ..core.modules import FinModule, ModuleMap, cokernel
from ..core.ring import CyclicRing
from ..core.tstructures import ThomasonFiltration
from ..errors import DomainError


def random_map(
    rng: random.Random,
    source: FinModule,
    target: FinModule,
    zero_rate: float = LabConfig.RANDOM_ZERO_ENTRY_RATE,
) -> ModuleMap:
    """A uniformly sampled well-defined map with some entries forced to zero."""
    rows = []
    for e in target.factors:
        row = []
        for d in source.factors:
            g = math.gcd(d, e)
            if rng.random() < zero_rate:
                row.append(0)
            else:
                row.append((e // g) * rng.randrange(g))
        rows.append(tuple(row))
    return ModuleMap(source, target, tuple(rows))


def _random_module(rng: random.Random, ring: CyclicRing, max_factors: int) -> FinModule:
    choices = ring.nonunit_divisors()
    count = rng.randint(0, max_factors)
    return FinModule(ring, tuple(rng.choice(choices) for _ in range(count)))


def _complex_from_modules(
    rng: random.Random, ring: CyclicRing, low: int, modules: Sequence[FinModule]
) -> Complex:
    """
    Differentials chosen bottom-up: d^k = g o (X^k -> coker d^{k-1}) for a
    random g, so d^k o d^{k-1} = 0 by construction.
    """
    diffs: List[ModuleMap] = []
    for k in range(len(modules) - 1):
        source, target = modules[k], modules[k + 1]
        if not diffs:
            diffs.append(random_map(rng, source, target))
            continue
        coker = cokernel(diffs[-1])
        g = random_map(rng, coker.module, target)
        diffs.append(g.compose(coker.projection))
    return make_complex(ring, low, modules, diffs)


def random_complex(
    ring: CyclicRing,
    degree_range: Tuple[int, int] = LabConfig.RANDOM_DEGREE_RANGE,
    max_factors: int = LabConfig.RANDOM_MAX_FACTORS,
    seed: Optional[int] = None,
    rng: Optional[random.Random] = None,
) -> Complex:
    """
    A valid bounded complex in the given degree range.

    Args:
        ring: Base ring
        degree_range: Inclusive (low, high)
        max_factors: Upper bound on cyclic factors per coordinate
        seed: Seed for a fresh generator (ignored when rng is given)
        rng: Generator to draw from

    Returns:
        A complex with d o d = 0, deterministic in the seed
    """
    low, high = degree_range
    if high < low:
        raise DomainError(f"empty degree range {degree_range}")
    if max_factors < 0:
        raise DomainError("max_factors must be non-negative")
    rng = rng or random.Random(seed)
    if max_factors == 0:
        return zero_complex(ring)
    modules = [_random_module(rng, ring, max_factors) for _ in range(low, high + 1)]
    return _complex_from_modules(rng, ring, low, modules)


def random_free_complex(
    ring: CyclicRing,
    degree_range: Tuple[int, int] = LabConfig.RANDOM_DEGREE_RANGE,
    max_rank: int = LabConfig.RANDOM_MAX_FACTORS,
    seed: Optional[int] = None,
    rng: Optional[random.Random] = None,
) -> Complex:
    """Like random_complex, with free coordinates of rank at most max_rank."""
    low, high = degree_range
    if high < low:
        raise DomainError(f"empty degree range {degree_range}")
    rng = rng or random.Random(seed)
    modules = [
        FinModule.free(ring, rng.randint(0, max_rank)) for _ in range(low, high + 1)
    ]
    return _complex_from_modules(rng, ring, low, modules)


def enumerate_filtrations(
    ring: CyclicRing,
    window: Tuple[int, int],
    minus_infinity: bool = False,
    plus_infinity: bool = False,
) -> List[ThomasonFiltration]:
    """
    Every cutoff map with values in [a, b], optionally with -inf / +inf.

    The count is (b - a + 1 + extras) ** (number of primes).
    """
    a, b = window
    if a > b:
        raise DomainError(f"empty window {window}")
    values: List = list(range(a, b + 1))
    if minus_infinity:
        values.insert(0, -math.inf)
    if plus_infinity:
        values.append(math.inf)
    return [
        ThomasonFiltration(ring, tuple(zip(ring.spec, combo)))
        for combo in itertools.product(values, repeat=len(ring.spec))
    ]
