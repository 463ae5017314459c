"""
Bounded cochain complexes of Z/n-modules.

Sign conventions:
    shift:   X[k]^n = X^{n+k}, differential multiplied by (-1)^k
    tensor:  d = d_X (x) 1 + (-1)^i 1 (x) d_Y on X^i (x) Y^j
    hom:     d(f) = d_Y o f - (-1)^n f o d_X in degree n
    cone:    cone^n = X^{n+1} (+) Y^n, d = [[-d_X, 0], [f, d_Y]]
"""

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from ..config import LabConfig
from ..errors import DomainError, NotAComplexError, StabilizationError
from .modules import (
    FinModule,
    HomModule,
    ModuleMap,
    Subquotient,
    TensorProduct,
    block_map,
    hom_contravariant,
    hom_covariant,
    hom_module,
    image,
    kernel,
    cokernel,
    split_rows,
    subquotient,
    tensor_maps,
    tensor_modules,
    torsion_part,
)
from .ring import CyclicRing, SpecSubset, localize_away


class TruncationSide(Enum):
    """Which half of a truncation to keep."""

    LE = "<="
    GT = ">"

    @classmethod
    def parse(cls, text: str) -> "TruncationSide":
        aliases = {"<=": cls.LE, "le": cls.LE, ">": cls.GT, "gt": cls.GT}
        try:
            return aliases[text.strip().lower()]
        except KeyError:
            raise DomainError(f"unknown truncation side: {text!r}") from None


@dataclass(frozen=True)
class Complex:
    """
    A bounded cochain complex.

    coords[i] sits in degree min_degree + i and diffs[i] is the differential
    leaving it. Zero modules at both ends are trimmed on construction, so
    structurally equal complexes compare equal.
    """

    ring: CyclicRing
    min_degree: int = 0
    coords: Tuple[FinModule, ...] = ()
    diffs: Tuple[ModuleMap, ...] = ()

    def __post_init__(self):
        coords = tuple(self.coords)
        diffs = tuple(self.diffs)
        expected = max(len(coords) - 1, 0)
        if len(diffs) != expected:
            raise DomainError(
                f"{len(coords)} coordinates need {expected} differentials, got {len(diffs)}"
            )
        for m in coords:
            if m.ring != self.ring:
                raise DomainError(f"ring mismatch: {m.ring} vs {self.ring}")
        for i, d in enumerate(diffs):
            if d.source != coords[i] or d.target != coords[i + 1]:
                raise DomainError(
                    f"differential in degree {self.min_degree + i} does not match its coordinates"
                )
        for i in range(len(diffs) - 1):
            if not diffs[i + 1].compose(diffs[i]).is_zero():
                raise NotAComplexError(
                    f"d o d != 0 at degree {self.min_degree + i}"
                )

        low = self.min_degree
        while coords and coords[0].is_zero:
            coords, diffs, low = coords[1:], diffs[1:], low + 1
        while coords and coords[-1].is_zero:
            coords, diffs = coords[:-1], diffs[:-1]
        if not coords:
            low = 0
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "diffs", diffs)
        object.__setattr__(self, "min_degree", low)

    @property
    def max_degree(self) -> int:
        """Top nonzero coordinate (min_degree - 1 for the zero complex)."""
        return self.min_degree + len(self.coords) - 1

    @property
    def degrees(self) -> range:
        return range(self.min_degree, self.max_degree + 1)

    @property
    def is_zero(self) -> bool:
        return not self.coords

    @property
    def is_free(self) -> bool:
        return all(m.is_free for m in self.coords)

    def module(self, k: int) -> FinModule:
        if self.min_degree <= k <= self.max_degree:
            return self.coords[k - self.min_degree]
        return FinModule.zero(self.ring)

    def diff(self, k: int) -> ModuleMap:
        """d^k : X^k -> X^{k+1}."""
        if self.min_degree <= k < self.max_degree:
            return self.diffs[k - self.min_degree]
        return ModuleMap.zero(self.module(k), self.module(k + 1))

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = [f"[{k}] {self.module(k)}" for k in self.degrees]
        return " -> ".join(parts)


def make_complex(
    ring: CyclicRing,
    min_degree: int,
    coords: Sequence[FinModule],
    diffs: Sequence[ModuleMap],
) -> Complex:
    return Complex(ring, min_degree, tuple(coords), tuple(diffs))


def zero_complex(ring: CyclicRing) -> Complex:
    return Complex(ring)


def stalk(module: FinModule, degree: int = 0) -> Complex:
    """M concentrated in a single degree."""
    return Complex(module.ring, degree, (module,), ())


def _assemble(
    ring: CyclicRing, low: int, high: int, module_at, diff_at
) -> Complex:
    """Build a complex over [low, high] from per-degree callables."""
    if high < low:
        return zero_complex(ring)
    coords = [module_at(k) for k in range(low, high + 1)]
    diffs = [diff_at(k) for k in range(low, high)]
    return make_complex(ring, low, coords, diffs)


@dataclass(frozen=True)
class ChainMap:
    """A morphism of complexes given by its nonzero components."""

    source: Complex
    target: Complex
    components: Tuple[Tuple[int, ModuleMap], ...] = ()

    def __post_init__(self):
        items = (
            self.components.items()
            if isinstance(self.components, Mapping)
            else self.components
        )
        kept = []
        for k, f in sorted(items, key=lambda kv: kv[0]):
            if f.source != self.source.module(k) or f.target != self.target.module(k):
                raise DomainError(f"chain map component in degree {k} has wrong modules")
            if f.source.rank and f.target.rank:
                kept.append((k, f))
        object.__setattr__(self, "components", tuple(kept))

        low = min(self.source.min_degree, self.target.min_degree) - 1
        high = max(self.source.max_degree, self.target.max_degree) + 1
        for k in range(low, high):
            left = self.target.diff(k).compose(self.component(k))
            right = self.component(k + 1).compose(self.source.diff(k))
            if not (left + -right).is_zero():
                raise DomainError(f"chain map does not commute with d in degree {k}")

    @classmethod
    def zero(cls, source: Complex, target: Complex) -> "ChainMap":
        return cls(source, target, ())

    @classmethod
    def identity(cls, complex_: Complex) -> "ChainMap":
        return cls(
            complex_,
            complex_,
            tuple((k, ModuleMap.identity(complex_.module(k))) for k in complex_.degrees),
        )

    def component(self, k: int) -> ModuleMap:
        for degree, f in self.components:
            if degree == k:
                return f
        return ModuleMap.zero(self.source.module(k), self.target.module(k))

    def compose(self, inner: "ChainMap") -> "ChainMap":
        """self o inner."""
        if inner.target != self.source:
            raise DomainError("composition of chain maps with mismatched complexes")
        degrees = set(inner.source.degrees) | set(self.target.degrees)
        return ChainMap(
            inner.source,
            self.target,
            tuple((k, self.component(k).compose(inner.component(k))) for k in degrees),
        )

    def __add__(self, other: "ChainMap") -> "ChainMap":
        if (self.source, self.target) != (other.source, other.target):
            raise DomainError("sum of chain maps with mismatched complexes")
        degrees = set(self.source.degrees)
        return ChainMap(
            self.source,
            self.target,
            tuple((k, self.component(k) + other.component(k)) for k in degrees),
        )

    def __neg__(self) -> "ChainMap":
        return ChainMap(
            self.source, self.target, tuple((k, -f) for k, f in self.components)
        )

    def is_zero(self) -> bool:
        return all(f.is_zero() for _, f in self.components)


@dataclass(frozen=True)
class GradedModule:
    """Finitely supported degree -> module assignment (zero entries dropped)."""

    ring: CyclicRing
    entries: Tuple[Tuple[int, FinModule], ...] = ()

    def __post_init__(self):
        items = (
            self.entries.items() if isinstance(self.entries, Mapping) else self.entries
        )
        kept = tuple(sorted((k, m) for k, m in items if not m.is_zero))
        object.__setattr__(self, "entries", kept)

    def at(self, k: int) -> FinModule:
        for degree, m in self.entries:
            if degree == k:
                return m
        return FinModule.zero(self.ring)

    @property
    def is_zero(self) -> bool:
        return not self.entries

    @property
    def inf(self):
        """Lowest nonzero degree; +inf when everything vanishes."""
        return self.entries[0][0] if self.entries else math.inf

    @property
    def sup(self):
        """Highest nonzero degree; -inf when everything vanishes."""
        return self.entries[-1][0] if self.entries else -math.inf

    def degrees(self) -> List[int]:
        return [k for k, _ in self.entries]

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        return ", ".join(f"H^{k} = {m}" for k, m in self.entries)


def shift(X: Complex, k: int) -> Complex:
    """X[k]: degrees move down by k, differentials pick up (-1)^k."""
    sign = -1 if k % 2 else 1
    diffs = tuple(d.scale(sign) for d in X.diffs) if sign == -1 else X.diffs
    return Complex(X.ring, X.min_degree - k, X.coords, diffs)


def shift_map(f: ChainMap, k: int) -> ChainMap:
    return ChainMap(
        shift(f.source, k),
        shift(f.target, k),
        tuple((d - k, g) for d, g in f.components),
    )


@dataclass(frozen=True)
class Cone:
    """cone(f) with the triangle maps Y -> cone(f) -> X[1]."""

    complex: Complex
    inclusion: ChainMap
    projection: ChainMap


def cone(f: ChainMap) -> Cone:
    """
    Mapping cone of f : X -> Y.

    Args:
        f: A valid chain map

    Returns:
        Cone record with the inclusion of Y and projection onto X[1]
    """
    X, Y, ring = f.source, f.target, f.source.ring
    if X.is_zero and Y.is_zero:
        zero = zero_complex(ring)
        return Cone(zero, ChainMap.zero(Y, zero), ChainMap.zero(zero, shift(X, 1)))

    def parts(k):
        return [X.module(k + 1), Y.module(k)]

    def module_at(k):
        a, b = parts(k)
        return FinModule(ring, a.factors + b.factors)

    def diff_at(k):
        return block_map(
            parts(k),
            parts(k + 1),
            {
                (0, 0): -X.diff(k + 1),
                (1, 0): f.component(k + 1),
                (1, 1): Y.diff(k),
            },
            ring,
        )

    low = min(X.min_degree - 1, Y.min_degree)
    high = max(X.max_degree - 1, Y.max_degree)
    C = _assemble(ring, low, high, module_at, diff_at)
    X1 = shift(X, 1)
    inclusion = ChainMap(
        Y,
        C,
        tuple(
            (k, block_map([Y.module(k)], parts(k), {(1, 0): ModuleMap.identity(Y.module(k))}, ring))
            for k in Y.degrees
        ),
    )
    projection = ChainMap(
        C,
        X1,
        tuple(
            (k, block_map(parts(k), [X1.module(k)], {(0, 0): ModuleMap.identity(X1.module(k))}, ring))
            for k in X1.degrees
        ),
    )
    return Cone(C, inclusion, projection)


@dataclass(frozen=True)
class Truncation:
    """A soft truncation with its comparison map (into X for <=, out of X for >)."""

    complex: Complex
    side: TruncationSide
    degree: int
    map: ChainMap


def soft_truncate(X: Complex, n: int, side: TruncationSide) -> Truncation:
    """
    tau^{<=n} X -> X or X -> tau^{>n} X.

    tau^{<=n} keeps X^k for k < n and ker d^n in degree n; tau^{>n} keeps
    X^{n+1}/im d^n in degree n+1 and X^k above.
    """
    ring = X.ring
    if side is TruncationSide.LE:
        if n >= X.max_degree:
            return Truncation(X, side, n, ChainMap.identity(X))
        if n < X.min_degree:
            zero = zero_complex(ring)
            return Truncation(zero, side, n, ChainMap.zero(zero, X))
        ker = kernel(X.diff(n))
        coords = [X.module(k) for k in range(X.min_degree, n)] + [ker.module]
        diffs = [X.diff(k) for k in range(X.min_degree, n - 1)]
        if n > X.min_degree:
            diffs.append(ker.lift(X.diff(n - 1)))
        T = make_complex(ring, X.min_degree, coords, diffs)
        components = [(k, ModuleMap.identity(X.module(k))) for k in range(X.min_degree, n)]
        components.append((n, ker.inclusion))
        return Truncation(T, side, n, ChainMap(T, X, tuple(components)))

    if n < X.min_degree:
        return Truncation(X, side, n, ChainMap.identity(X))
    if n >= X.max_degree:
        zero = zero_complex(ring)
        return Truncation(zero, side, n, ChainMap.zero(X, zero))
    coker = cokernel(X.diff(n))
    coords = [coker.module] + [X.module(k) for k in range(n + 2, X.max_degree + 1)]
    diffs = [coker.descend(X.diff(n + 1))] + [
        X.diff(k) for k in range(n + 2, X.max_degree)
    ]
    if len(coords) == 1:
        diffs = []
    T = make_complex(ring, n + 1, coords, diffs)
    components = [(n + 1, coker.projection)] + [
        (k, ModuleMap.identity(X.module(k))) for k in range(n + 2, X.max_degree + 1)
    ]
    return Truncation(T, side, n, ChainMap(X, T, tuple(components)))


def brutal_truncate(X: Complex, n: int, side: TruncationSide) -> Complex:
    """sigma^{<=n} / sigma^{>n}: keep coordinates at-or-below / strictly above n."""
    if side is TruncationSide.LE:
        high = min(n, X.max_degree)
        return _assemble(X.ring, X.min_degree, high, X.module, X.diff)
    low = max(n + 1, X.min_degree)
    return _assemble(X.ring, low, X.max_degree, X.module, X.diff)


def _tensor_layout(X: Complex, Y: Complex) -> Dict[int, List[Tuple[int, TensorProduct]]]:
    layout: Dict[int, List[Tuple[int, TensorProduct]]] = {}
    for i in X.degrees:
        for j in Y.degrees:
            layout.setdefault(i + j, []).append(
                (i, tensor_modules(X.module(i), Y.module(j)))
            )
    return layout


@lru_cache(maxsize=LabConfig.PROFILE_CACHE_SIZE)
def tensor_complexes(X: Complex, Y: Complex) -> Complex:
    """Total complex of X (x) Y with the Koszul sign on 1 (x) d_Y."""
    if X.ring != Y.ring:
        raise DomainError(f"ring mismatch: {X.ring} vs {Y.ring}")
    ring = X.ring
    if X.is_zero or Y.is_zero:
        return zero_complex(ring)
    layout = _tensor_layout(X, Y)

    def module_at(n):
        return FinModule(ring, tuple(d for _, t in layout[n] for d in t.module.factors))

    def diff_at(n):
        sources, targets = layout[n], layout[n + 1]
        target_pos = {i: pos for pos, (i, _) in enumerate(targets)}
        blocks = {}
        for s, (i, t) in enumerate(sources):
            j = n - i
            if i + 1 in target_pos:
                pos = target_pos[i + 1]
                blocks[(pos, s)] = tensor_maps(
                    X.diff(i), ModuleMap.identity(Y.module(j)), t, targets[pos][1]
                )
            if i in target_pos:
                pos = target_pos[i]
                g = tensor_maps(
                    ModuleMap.identity(X.module(i)), Y.diff(j), t, targets[pos][1]
                )
                blocks[(pos, s)] = g.scale(-1) if i % 2 else g
        return block_map(
            [t.module for _, t in sources], [t.module for _, t in targets], blocks, ring
        )

    low = X.min_degree + Y.min_degree
    high = X.max_degree + Y.max_degree
    return _assemble(ring, low, high, module_at, diff_at)


def tensor_chain_maps(f: ChainMap, g: ChainMap) -> ChainMap:
    """f (x) g between the total complexes."""
    source = tensor_complexes(f.source, g.source)
    target = tensor_complexes(f.target, g.target)
    if source.is_zero or target.is_zero:
        return ChainMap.zero(source, target)
    ring = source.ring
    src_layout = _tensor_layout(f.source, g.source)
    tgt_layout = _tensor_layout(f.target, g.target)
    components = []
    for n in source.degrees:
        sources = src_layout.get(n, [])
        targets = tgt_layout.get(n, [])
        target_pos = {i: pos for pos, (i, _) in enumerate(targets)}
        blocks = {}
        for s, (i, t) in enumerate(sources):
            if i in target_pos:
                pos = target_pos[i]
                blocks[(pos, s)] = tensor_maps(
                    f.component(i), g.component(n - i), t, targets[pos][1]
                )
        components.append(
            (
                n,
                block_map(
                    [t.module for _, t in sources],
                    [t.module for _, t in targets],
                    blocks,
                    ring,
                ),
            )
        )
    return ChainMap(source, target, tuple(components))


@dataclass(frozen=True)
class HomComplex:
    """Hom^.(X, Y) with the summand layout of every degree."""

    complex: Complex
    source: Complex
    target: Complex
    layout: Tuple[Tuple[int, Tuple[Tuple[int, HomModule], ...]], ...]

    def summands(self, n: int) -> Tuple[Tuple[int, HomModule], ...]:
        for degree, parts in self.layout:
            if degree == n:
                return parts
        return ()

    def components(self, n: int, element: Sequence[int]) -> Dict[int, ModuleMap]:
        """Split a degree-n element into maps X^i -> Y^{i+n}."""
        maps, offset = {}, 0
        for i, hom in self.summands(n):
            width = hom.module.rank
            maps[i] = hom.to_map(element[offset : offset + width])
            offset += width
        return maps

    def chain_map(self, n: int, element: Sequence[int]) -> ChainMap:
        """A degree-n cocycle as a chain map X -> Y[n]."""
        shifted = shift(self.target, n)
        return ChainMap(
            self.source, shifted, tuple(self.components(n, element).items())
        )


@lru_cache(maxsize=LabConfig.PROFILE_CACHE_SIZE)
def hom_data(X: Complex, Y: Complex) -> HomComplex:
    """Hom^.(X, Y) with d(f) = d_Y o f - (-1)^n f o d_X."""
    if X.ring != Y.ring:
        raise DomainError(f"ring mismatch: {X.ring} vs {Y.ring}")
    ring = X.ring
    if X.is_zero or Y.is_zero:
        return HomComplex(zero_complex(ring), X, Y, ())
    low = Y.min_degree - X.max_degree
    high = Y.max_degree - X.min_degree
    layout: Dict[int, List[Tuple[int, HomModule]]] = {}
    for n in range(low, high + 1):
        layout[n] = [
            (i, hom_module(X.module(i), Y.module(i + n)))
            for i in X.degrees
            if i + n in Y.degrees
        ]

    def module_at(n):
        return FinModule(ring, tuple(d for _, h in layout[n] for d in h.module.factors))

    def diff_at(n):
        sources, targets = layout[n], layout[n + 1]
        target_pos = {i: pos for pos, (i, _) in enumerate(targets)}
        sign = 1 if n % 2 else -1  # -(-1)^n
        blocks = {}
        for s, (i, h) in enumerate(sources):
            if i in target_pos:
                pos = target_pos[i]
                blocks[(pos, s)] = hom_covariant(h, Y.diff(i + n), targets[pos][1])
            if i - 1 in target_pos:
                pos = target_pos[i - 1]
                g = hom_contravariant(h, X.diff(i - 1), targets[pos][1])
                blocks[(pos, s)] = g.scale(sign)
        return block_map(
            [h.module for _, h in sources], [h.module for _, h in targets], blocks, ring
        )

    complex_ = _assemble(ring, low, high, module_at, diff_at)
    frozen = tuple((n, tuple(parts)) for n, parts in sorted(layout.items()))
    return HomComplex(complex_, X, Y, frozen)


def hom_complex(X: Complex, Y: Complex) -> Complex:
    return hom_data(X, Y).complex


@lru_cache(maxsize=LabConfig.PROFILE_CACHE_SIZE)
def cohomology_data(X: Complex) -> Dict[int, Subquotient]:
    """H^n as subquotients ker d^n / im d^{n-1}, keyed by degree. Do not mutate."""
    return {k: subquotient(X.diff(k - 1), X.diff(k)) for k in X.degrees}


def cohomology(X: Complex) -> GradedModule:
    """
    Cohomology modules in canonical form.

    Args:
        X: A bounded complex

    Returns:
        GradedModule with inf/sup of X
    """
    data = cohomology_data(X)
    return GradedModule(X.ring, tuple((k, h.module) for k, h in data.items()))


def cohomology_map(f: ChainMap, n: int) -> ModuleMap:
    """H^n(f) on canonical generators."""
    src = cohomology_data(f.source).get(n)
    tgt = cohomology_data(f.target).get(n)
    source = src.module if src else FinModule.zero(f.source.ring)
    target = tgt.module if tgt else FinModule.zero(f.target.ring)
    if source.is_zero or target.is_zero:
        return ModuleMap.zero(source, target)
    fn = f.component(n)
    columns = [tgt.coordinates(fn.apply(rep)) for rep in src.representatives]
    return ModuleMap.from_columns(source, target, columns)


def is_acyclic(X: Complex) -> bool:
    return cohomology(X).is_zero


def is_quasi_isomorphism(f: ChainMap) -> bool:
    """f has acyclic cone."""
    return is_acyclic(cone(f).complex)


def same_cohomology(X: Complex, Y: Complex) -> bool:
    return cohomology(X) == cohomology(Y)


def direct_sum(*complexes: Complex) -> Complex:
    if not complexes:
        raise DomainError("direct sum of no complexes needs a ring")
    ring = complexes[0].ring
    nonzero = [X for X in complexes if not X.is_zero]
    if not nonzero:
        return zero_complex(ring)
    low = min(X.min_degree for X in nonzero)
    high = max(X.max_degree for X in nonzero)

    def module_at(k):
        return FinModule(ring, tuple(d for X in complexes for d in X.module(k).factors))

    def diff_at(k):
        return block_map(
            [X.module(k) for X in complexes],
            [X.module(k + 1) for X in complexes],
            {(i, i): X.diff(k) for i, X in enumerate(complexes)},
            ring,
        )

    return _assemble(ring, low, high, module_at, diff_at)


def map_out_of_sum(maps: Sequence[ChainMap]) -> ChainMap:
    """(f_1, ..., f_r) : X_1 (+) ... (+) X_r -> Y."""
    target = maps[0].target
    ring = target.ring
    source = direct_sum(*(f.source for f in maps))
    components = []
    for k in source.degrees:
        components.append(
            (
                k,
                block_map(
                    [f.source.module(k) for f in maps],
                    [target.module(k)],
                    {(0, i): f.component(k) for i, f in enumerate(maps)},
                    ring,
                ),
            )
        )
    return ChainMap(source, target, tuple(components))


def map_into_sum(maps: Sequence[ChainMap]) -> ChainMap:
    """(f_1, ..., f_r)^T : X -> Y_1 (+) ... (+) Y_r."""
    source = maps[0].source
    ring = source.ring
    target = direct_sum(*(f.target for f in maps))
    components = []
    for k in source.degrees:
        components.append(
            (
                k,
                block_map(
                    [source.module(k)],
                    [f.target.module(k) for f in maps],
                    {(i, 0): f.component(k) for i, f in enumerate(maps)},
                    ring,
                ),
            )
        )
    return ChainMap(source, target, tuple(components))


@dataclass(frozen=True)
class PrimaryComponent:
    """Gamma_P X with the split inclusion and projection."""

    primes: SpecSubset
    complex: Complex
    inclusion: ChainMap
    projection: ChainMap


@lru_cache(maxsize=LabConfig.PROFILE_CACHE_SIZE)
def primary_component(X: Complex, primes: SpecSubset) -> PrimaryComponent:
    """The P-primary summand of X, cut out by the CRT idempotent."""
    ring = X.ring
    parts = {k: torsion_part(X.module(k), primes) for k in X.degrees}
    if not parts:
        zero = zero_complex(ring)
        return PrimaryComponent(primes, zero, ChainMap.zero(zero, X), ChainMap.zero(X, zero))

    def part(k):
        return parts.get(k) or torsion_part(X.module(k), primes)

    def diff_at(k):
        return part(k + 1).projection.compose(X.diff(k)).compose(part(k).inclusion)

    G = _assemble(ring, X.min_degree, X.max_degree, lambda k: part(k).module, diff_at)
    inclusion = ChainMap(G, X, tuple((k, p.inclusion) for k, p in parts.items()))
    projection = ChainMap(X, G, tuple((k, p.projection) for k, p in parts.items()))
    return PrimaryComponent(primes, G, inclusion, projection)


def primary_decomposition(X: Complex) -> List[PrimaryComponent]:
    """X = (+)_p Gamma_p X."""
    ring = X.ring
    return [primary_component(X, SpecSubset(ring, frozenset([p]))) for p in ring.spec]


def _two_term(ring: CyclicRing, low: int, target: FinModule, entry: int) -> Complex:
    source = FinModule.free(ring)
    d = ModuleMap(source, target, ((entry,),) if target.rank else ())
    return make_complex(ring, low, [source, target], [d])


def koszul(ring: CyclicRing, xs: Iterable[int]) -> Complex:
    """K(x_1, ..., x_r) = (x)_i [R --x_i--> R] in degrees -1, 0; R[0] for r = 0."""
    result = stalk(FinModule.free(ring), 0)
    for x in xs:
        factor = _two_term(ring, -1, FinModule.free(ring), ring.reduce(x))
        result = tensor_complexes(result, factor)
    return result


def cech_tilde(ring: CyclicRing, xs: Iterable[int]) -> Complex:
    """
    Infinite Koszul complex (x)_i [R -> R[x_i^-1]] in degrees 0, 1.

    Each localization is the quotient Z/m of the ring; the zero ring drops out.
    """
    result = stalk(FinModule.free(ring), 0)
    for x in xs:
        loc = localize_away(ring, x)
        factor = _two_term(ring, 0, FinModule.cyclic(ring, loc.modulus), 1)
        result = tensor_complexes(result, factor)
    return result


@dataclass(frozen=True)
class CechTriangle:
    """Cech~(I) -> R[0] -> Cech(I) -> Cech~(I)[1]."""

    tilde: Complex
    unit: Complex
    cech: Complex
    augmentation: ChainMap
    cone: Cone


def cech_triangle(ring: CyclicRing, ideal) -> CechTriangle:
    """The localization triangle of an ideal, built on its canonical generator."""
    tilde = cech_tilde(ring, [ideal.generator])
    unit = stalk(FinModule.free(ring), 0)
    augmentation = ChainMap(
        tilde, unit, ((0, ModuleMap.identity(FinModule.free(ring))),)
    )
    c = cone(augmentation)
    return CechTriangle(tilde, unit, c.complex, augmentation, c)


@dataclass(frozen=True)
class ProjectiveReplacement:
    complex: Complex
    map: ChainMap
    floor: int


@lru_cache(maxsize=LabConfig.PROFILE_CACHE_SIZE)
def projective_replacement(X: Complex, floor: int) -> ProjectiveReplacement:
    """
    Free complex P in degrees [floor, max_degree(X)] with P -> X whose cone
    is exact in every degree >= floor.

    Built top-down: P^k is a free cover of the cocycles
    {(x, p) in X^k (+) P^{k+1} : d x = phi(p), d p = 0}.

    Raises:
        DomainError: if floor lies above the top coordinate of X
    """
    ring = X.ring
    if X.is_zero:
        zero = zero_complex(ring)
        return ProjectiveReplacement(zero, ChainMap.zero(zero, X), floor)
    if floor > X.max_degree:
        raise DomainError(
            f"replacement floor {floor} lies above the top degree {X.max_degree}"
        )
    if X.is_free and floor <= X.min_degree:
        return ProjectiveReplacement(X, ChainMap.identity(X), floor)

    top = X.max_degree
    P: Dict[int, FinModule] = {top + 1: FinModule.zero(ring), top + 2: FinModule.zero(ring)}
    d: Dict[int, ModuleMap] = {top + 1: ModuleMap.zero(P[top + 1], P[top + 2])}
    phi: Dict[int, ModuleMap] = {top + 1: ModuleMap.zero(P[top + 1], X.module(top + 1))}
    for k in range(top, floor - 1, -1):
        here = [X.module(k), P[k + 1]]
        there = [X.module(k + 1), P[k + 2]]
        constraint = block_map(
            here,
            there,
            {(0, 0): X.diff(k), (0, 1): -phi[k + 1], (1, 1): d[k + 1]},
            ring,
        )
        cycles = kernel(constraint)
        P[k] = FinModule.free(ring, cycles.module.rank)
        cover = ModuleMap(P[k], cycles.inclusion.target, cycles.inclusion.matrix)
        phi[k], d[k] = split_rows(cover, here)

    Pc = make_complex(
        ring,
        floor,
        [P[k] for k in range(floor, top + 1)],
        [d[k] for k in range(floor, top)],
    )
    to_x = ChainMap(Pc, X, tuple((k, phi[k]) for k in range(floor, top + 1)))
    return ProjectiveReplacement(Pc, to_x, floor)


@lru_cache(maxsize=LabConfig.PROFILE_CACHE_SIZE)
def hom_derived(X: Complex, Y: Complex, k: int, margin: Optional[int] = None) -> FinModule:
    """
    Hom_{D(R)}(X, Y[k]) = H^k Hom^.(P, Y) for a free replacement P of X.

    Args:
        X: Source complex
        Y: Target complex
        k: Shift
        margin: Degrees below the analytic floor (default LabConfig.PROJECTIVE_MARGIN)

    Returns:
        The Hom module in canonical form
    """
    if margin is None:
        margin = LabConfig.PROJECTIVE_MARGIN
    ring = X.ring
    if X.is_zero or Y.is_zero:
        return FinModule.zero(ring)
    floor = Y.min_degree - k - margin
    if floor > X.max_degree:
        return FinModule.zero(ring)
    P = projective_replacement(X, floor).complex
    return cohomology(hom_complex(P, Y)).at(k)


def compact_dual(S: Complex) -> Complex:
    """S* = Hom^.(S, R[0]) for a complex of free modules."""
    if not S.is_free:
        raise DomainError("compact dual needs free coordinates")
    return hom_complex(S, stalk(FinModule.free(S.ring), 0))


def tower_colimit(modules: Sequence[FinModule], maps: Sequence[ModuleMap]) -> FinModule:
    """
    Colimit of a finite tower M_0 -> M_1 -> ... whose tail repeats.

    The tail must either repeat (equal objects and maps) for two full periods
    inside the window, or end in a run of isomorphisms returning to an object
    already seen. A single object is its own colimit. The colimit is
    M_N / ker f^K for the period endomorphism f at a stable index N and K past
    the Fitting index.

    Raises:
        StabilizationError: if no periodic tail is found
    """
    if len(maps) != len(modules) - 1:
        raise DomainError("a tower needs one map fewer than objects")
    for i, f in enumerate(maps):
        if f.source != modules[i] or f.target != modules[i + 1]:
            raise DomainError(f"tower map {i} does not match its objects")
    if not maps:
        return modules[0].canonical()

    found = _periodic_tail(modules, maps)
    if found is None:
        raise StabilizationError("tower did not stabilize")
    start, period = found
    M = modules[start]
    f = ModuleMap.identity(M)
    for i in range(start, start + period):
        f = maps[i].compose(f)

    power = f
    order = kernel(power).module.order
    while True:
        nxt = f.compose(power)
        nxt_order = kernel(nxt).module.order
        if nxt_order == order:
            break
        power, order = nxt, nxt_order
    return image(power).module.canonical()


def _periodic_tail(
    modules: Sequence[FinModule], maps: Sequence[ModuleMap]
) -> Optional[Tuple[int, int]]:
    length = len(maps)
    for period in range(1, length // 2 + 1):
        for start in range(0, length - 2 * period + 1):
            if all(
                modules[i] == modules[i + period] and maps[i] == maps[i + period]
                for i in range(start, length - period)
            ):
                return start, period
    for period in range(1, length + 1):
        start = length - period
        if modules[start] == modules[length] and all(
            _is_isomorphism(maps[i]) for i in range(start, length)
        ):
            return start, period
    return None


def _is_isomorphism(f: ModuleMap) -> bool:
    return kernel(f).module.is_zero and f.source.order == f.target.order


def power_sequence(ring: CyclicRing, x: int) -> Tuple[int, int]:
    """(pre-period, period) of m -> x^m mod n for m >= 1."""
    seen: Dict[int, int] = {}
    m, value = 1, ring.reduce(x)
    while value not in seen:
        seen[value] = m
        m += 1
        value = (value * x) % ring.modulus
    return seen[value] - 1, m - seen[value]


@dataclass(frozen=True)
class KoszulTower:
    """K(x)* -> K(x^2)* -> ... with transition maps (id, mult-x)."""

    element: int
    complexes: Tuple[Complex, ...]
    maps: Tuple[ChainMap, ...]


def koszul_powers_tower(ring: CyclicRing, x: int, length: Optional[int] = None) -> KoszulTower:
    """
    The dual Koszul tower of x.

    The default length covers the pre-period of the powers of x plus two
    full periods, which is what tower_colimit needs.
    """
    x = ring.reduce(x)
    if length is None:
        pre, period = power_sequence(ring, x)
        length = pre + 2 * period + 2
    complexes = [
        compact_dual(koszul(ring, [pow(x, m, ring.modulus)])) for m in range(1, length + 1)
    ]
    maps = []
    for source, target in zip(complexes, complexes[1:]):
        free = FinModule.free(ring)
        maps.append(
            ChainMap(
                source,
                target,
                (
                    (0, ModuleMap.identity(free)),
                    (1, ModuleMap.scalar(free, x)),
                ),
            )
        )
    return KoszulTower(x, tuple(complexes), tuple(maps))
