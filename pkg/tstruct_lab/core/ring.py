"""
Arithmetic of the base ring Z/n: its prime spectrum, ideals, localizations
and Chinese-remainder idempotents.

Every ideal of Z/n is principal, so ideals are stored by the canonical
generator gcd(lift, n), a divisor of n. The zero ideal is stored as n.
"""

from dataclasses import dataclass
from math import gcd, prod
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from sympy import divisors, factorint
from sympy.ntheory.modular import crt

from ..errors import DomainError


@dataclass(frozen=True)
class CyclicRing:
    """The ring Z/n together with its factored spectrum."""

    modulus: int
    primes: Tuple[Tuple[int, int], ...]  # (p, e) ascending, n = prod p^e

    @property
    def spec(self) -> Tuple[int, ...]:
        """Prime ideals of Z/n, named by the primes dividing n."""
        return tuple(p for p, _ in self.primes)

    def exponent(self, p: int) -> int:
        """Exponent of p in the modulus (0 if p does not divide it)."""
        for q, e in self.primes:
            if q == p:
                return e
        return 0

    def prime_power(self, p: int) -> int:
        """Full p-primary part p^e of the modulus."""
        return p ** self.exponent(p)

    def reduce(self, x: int) -> int:
        """Reduce an integer lift into [0, n)."""
        return int(x) % self.modulus

    def divisors(self) -> List[int]:
        """All positive divisors of the modulus, ascending."""
        return [int(d) for d in divisors(self.modulus)]

    def nonunit_divisors(self) -> List[int]:
        """Canonical generators of all proper ideals (the zero ideal included)."""
        return [d for d in self.divisors() if d != 1]

    def __str__(self) -> str:
        return f"Z/{self.modulus}"


def make_ring(n: int) -> CyclicRing:
    """
    Build Z/n with its factored spectrum.

    Integers are Python arbitrary-precision values; nothing wraps around.

    Args:
        n: Modulus, at least 2

    Returns:
        The factored ring
    """
    if isinstance(n, bool) or not isinstance(n, int):
        raise DomainError(f"modulus must be an integer, got {n!r} (overflow policy)")
    if n < 2:
        raise DomainError(f"modulus too small: {n}")
    factors = factorint(n)
    primes = tuple(sorted((int(p), int(e)) for p, e in factors.items()))
    return CyclicRing(modulus=n, primes=primes)


@dataclass(frozen=True)
class Ideal:
    """A principal ideal (generator) of Z/n with generator dividing n."""

    ring: CyclicRing
    generator: int

    def __post_init__(self):
        canonical = gcd(int(self.generator), self.ring.modulus)
        object.__setattr__(self, "generator", canonical or self.ring.modulus)

    @property
    def is_unit(self) -> bool:
        return self.generator == 1

    @property
    def is_zero(self) -> bool:
        return self.generator == self.ring.modulus

    def __mul__(self, other: "Ideal") -> "Ideal":
        _check_same_ring(self.ring, other.ring)
        return Ideal(self.ring, self.generator * other.generator)

    def __add__(self, other: "Ideal") -> "Ideal":
        _check_same_ring(self.ring, other.ring)
        return Ideal(self.ring, gcd(self.generator, other.generator))

    def __str__(self) -> str:
        return f"({self.generator})"


def make_ideal(ring: CyclicRing, x: int) -> Ideal:
    """The ideal generated by the class of x; canonicalized to gcd(x, n)."""
    return Ideal(ring, ring.reduce(x))


@dataclass(frozen=True)
class SpecSubset:
    """
    A subset of Spec(Z/n).

    Z/n is artinian, so every subset of its spectrum is Thomason.
    """

    ring: CyclicRing
    primes: FrozenSet[int] = frozenset()

    def __post_init__(self):
        primes = frozenset(int(p) for p in self.primes)
        unknown = primes - set(self.ring.spec)
        if unknown:
            raise DomainError(
                f"unknown prime(s) {sorted(unknown)} for {self.ring}"
            )
        object.__setattr__(self, "primes", primes)

    @classmethod
    def full(cls, ring: CyclicRing) -> "SpecSubset":
        return cls(ring, frozenset(ring.spec))

    @classmethod
    def empty(cls, ring: CyclicRing) -> "SpecSubset":
        return cls(ring, frozenset())

    def issubset(self, other: "SpecSubset") -> bool:
        return self.primes <= other.primes

    def __or__(self, other: "SpecSubset") -> "SpecSubset":
        return SpecSubset(self.ring, self.primes | other.primes)

    def __and__(self, other: "SpecSubset") -> "SpecSubset":
        return SpecSubset(self.ring, self.primes & other.primes)

    def __contains__(self, p: int) -> bool:
        return p in self.primes

    def __len__(self) -> int:
        return len(self.primes)

    def sorted(self) -> List[int]:
        return sorted(self.primes)

    def __str__(self) -> str:
        return "{" + ",".join(str(p) for p in self.sorted()) + "}"


def v_set(ring: CyclicRing, ideal: Ideal) -> SpecSubset:
    """V(I): primes containing I, i.e. primes dividing the canonical generator."""
    _check_same_ring(ring, ideal.ring)
    return SpecSubset(ring, frozenset(p for p in ring.spec if ideal.generator % p == 0))


def divisor_of_subset(ring: CyclicRing, subset: SpecSubset) -> Ideal:
    """Radical generator d_P = prod of P, so that V(d_P) = P."""
    _check_same_ring(ring, subset.ring)
    return Ideal(ring, prod(subset.primes))


@dataclass(frozen=True)
class Localization:
    """
    R[x^-1] for R = Z/n, realized as the quotient Z/m.

    m is the product of the primary parts of n at primes not dividing x;
    m == 1 encodes the zero ring.
    """

    source: CyclicRing
    element: int
    modulus: int

    @property
    def is_zero(self) -> bool:
        return self.modulus == 1

    @property
    def ring(self) -> Optional[CyclicRing]:
        """The localized ring, or None for the zero ring."""
        if self.is_zero:
            return None
        return make_ring(self.modulus)

    def project(self, a: int) -> int:
        """The canonical surjection Z/n -> Z/m."""
        return int(a) % self.modulus


def localize_away(ring: CyclicRing, x: int) -> Localization:
    """
    Invert x in Z/n.

    Args:
        ring: Base ring
        x: Ring element (any integer lift)

    Returns:
        The localization with its projection data
    """
    x = ring.reduce(x)
    m = prod(p**e for p, e in ring.primes if x % p != 0)
    return Localization(source=ring, element=x, modulus=m)


def crt_idempotents(ring: CyclicRing) -> Dict[int, int]:
    """
    Orthogonal idempotents e_p with e_p = 1 mod p^e and 0 mod the other
    primary parts.
    """
    powers = [p**e for p, e in ring.primes]
    idempotents = {}
    for index, (p, _) in enumerate(ring.primes):
        residues = [1 if i == index else 0 for i in range(len(powers))]
        value, _ = crt(powers, residues)
        idempotents[p] = int(value) % ring.modulus
    return idempotents


def subset_idempotent(ring: CyclicRing, primes: Iterable[int]) -> int:
    """Sum of e_p over the given primes; projects onto the P-primary part."""
    idempotents = crt_idempotents(ring)
    return sum(idempotents[p] for p in primes) % ring.modulus


def _check_same_ring(a: CyclicRing, b: CyclicRing):
    if a != b:
        raise DomainError(f"ring mismatch: {a} vs {b}")
