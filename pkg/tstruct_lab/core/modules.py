"""
Finitely generated Z/n-modules and their homomorphisms.

A module is a list of cyclic factors Z/d_j (d_j | n, d_j >= 2); a map is an
integer matrix with rows indexed by target factors and columns by source
factors. Kernels, cokernels, images and subquotients are lifted to integer
lattices and brought back in invariant-factor form via Smith normal form.
"""

from dataclasses import dataclass, field
from math import gcd, prod
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..errors import DomainError, NotAComplexError
from .ring import CyclicRing, SpecSubset, crt_idempotents, subset_idempotent
from .smith import (
    LatticeQuotient,
    integer_kernel,
    lattice_quotient,
    solve_integer,
)

Element = Tuple[int, ...]


@dataclass(frozen=True)
class FinModule:
    """The module Z/d_1 (+) ... (+) Z/d_k over Z/n."""

    ring: CyclicRing
    factors: Tuple[int, ...] = ()

    def __post_init__(self):
        factors = tuple(int(d) for d in self.factors)
        for d in factors:
            if d < 2 or self.ring.modulus % d != 0:
                raise DomainError(
                    f"factor {d} must exceed 1 and divide {self.ring.modulus}"
                )
        object.__setattr__(self, "factors", factors)

    @classmethod
    def zero(cls, ring: CyclicRing) -> "FinModule":
        return cls(ring, ())

    @classmethod
    def free(cls, ring: CyclicRing, rank: int = 1) -> "FinModule":
        return cls(ring, (ring.modulus,) * rank)

    @classmethod
    def cyclic(cls, ring: CyclicRing, d: int) -> "FinModule":
        """R/(d) for a divisor d; the zero module when d == 1."""
        d = gcd(int(d), ring.modulus) or ring.modulus
        return cls(ring, (d,) if d > 1 else ())

    @property
    def rank(self) -> int:
        """Number of cyclic factors (not an invariant)."""
        return len(self.factors)

    @property
    def is_zero(self) -> bool:
        return not self.factors

    @property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def is_free(self) -> bool:
        return all(d == self.ring.modulus for d in self.factors)

    def elementary_divisors(self) -> List[int]:
        """Prime-power decomposition, sorted by prime then descending power."""
        powers = []
        for p, _ in self.ring.primes:
            for d in self.factors:
                q = _p_part(d, p)
                if q > 1:
                    powers.append((p, -q))
        return [-q for _, q in sorted(powers)]

    def canonical(self) -> "FinModule":
        """Invariant-factor form d_1 | d_2 | ... (ascending)."""
        columns: Dict[int, List[int]] = {}
        for p, _ in self.ring.primes:
            powers = sorted(
                (_p_part(d, p) for d in self.factors if d % p == 0), reverse=True
            )
            columns[p] = powers
        length = max((len(v) for v in columns.values()), default=0)
        invariants = []
        for i in range(length):
            invariants.append(
                prod(v[i] for v in columns.values() if i < len(v))
            )
        return FinModule(self.ring, tuple(sorted(invariants)))

    def is_isomorphic(self, other: "FinModule") -> bool:
        return self.canonical().factors == other.canonical().factors

    def contains(self, x: Sequence[int]) -> bool:
        return len(x) == self.rank

    def reduce(self, x: Sequence[int]) -> Element:
        return tuple(int(a) % d for a, d in zip(x, self.factors))

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        return " (+) ".join(f"Z/{d}" for d in self.factors)


def direct_sum_modules(*modules: FinModule) -> FinModule:
    if not modules:
        raise DomainError("direct sum of no modules needs a ring")
    ring = modules[0].ring
    for m in modules:
        _check_ring(ring, m.ring)
    return FinModule(ring, tuple(d for m in modules for d in m.factors))


@dataclass(frozen=True)
class ModuleMap:
    """A homomorphism given by a matrix (rows = target factors)."""

    source: FinModule
    target: FinModule
    matrix: Tuple[Tuple[int, ...], ...] = ()

    def __post_init__(self):
        _check_ring(self.source.ring, self.target.ring)
        rows = [tuple(int(a) for a in row) for row in self.matrix]
        if not rows and self.target.rank:
            rows = [()] * self.target.rank
        if len(rows) != self.target.rank:
            raise DomainError(
                f"matrix has {len(rows)} rows, target has {self.target.rank} factors"
            )
        reduced = []
        for i, row in enumerate(rows):
            if len(row) == 0 and self.source.rank:
                row = (0,) * self.source.rank
            if len(row) != self.source.rank:
                raise DomainError(
                    f"row {i} has {len(row)} entries, source has {self.source.rank} factors"
                )
            e = self.target.factors[i]
            new_row = []
            for j, a in enumerate(row):
                d = self.source.factors[j]
                step = e // gcd(e, d)
                if a % step != 0:
                    raise DomainError(
                        f"entry ({i},{j}) = {a} is not well-defined Z/{d} -> Z/{e}: "
                        f"must be a multiple of {step}"
                    )
                new_row.append(a % e)
            reduced.append(tuple(new_row))
        object.__setattr__(self, "matrix", tuple(reduced))

    @classmethod
    def zero(cls, source: FinModule, target: FinModule) -> "ModuleMap":
        return cls(source, target, tuple((0,) * source.rank for _ in target.factors))

    @classmethod
    def identity(cls, module: FinModule) -> "ModuleMap":
        return cls.scalar(module, 1)

    @classmethod
    def scalar(cls, module: FinModule, c: int) -> "ModuleMap":
        """Multiplication by the ring element c."""
        k = module.rank
        return cls(
            module,
            module,
            tuple(tuple(c if i == j else 0 for j in range(k)) for i in range(k)),
        )

    @classmethod
    def from_columns(
        cls, source: FinModule, target: FinModule, columns: Sequence[Sequence[int]]
    ) -> "ModuleMap":
        rows = tuple(
            tuple(int(col[i]) for col in columns) for i in range(target.rank)
        )
        return cls(source, target, rows)

    def column(self, j: int) -> Element:
        return tuple(row[j] for row in self.matrix)

    def apply(self, x: Sequence[int]) -> Element:
        return tuple(
            sum(a * b for a, b in zip(row, x)) % e
            for row, e in zip(self.matrix, self.target.factors)
        )

    def compose(self, inner: "ModuleMap") -> "ModuleMap":
        """self o inner."""
        if inner.target != self.source:
            raise DomainError("composition of maps with mismatched modules")
        k = inner.source.rank
        rows = []
        for row in self.matrix:
            rows.append(
                tuple(
                    sum(row[t] * inner.matrix[t][j] for t in range(len(row)))
                    for j in range(k)
                )
            )
        return ModuleMap(inner.source, self.target, tuple(rows))

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        if (self.source, self.target) != (other.source, other.target):
            raise DomainError("sum of maps with mismatched modules")
        return ModuleMap(
            self.source,
            self.target,
            tuple(
                tuple(a + b for a, b in zip(r, s))
                for r, s in zip(self.matrix, other.matrix)
            ),
        )

    def scale(self, c: int) -> "ModuleMap":
        return ModuleMap(
            self.source,
            self.target,
            tuple(tuple(c * a for a in row) for row in self.matrix),
        )

    def __neg__(self) -> "ModuleMap":
        return self.scale(-1)

    def is_zero(self) -> bool:
        return all(a == 0 for row in self.matrix for a in row)

    def preimage(self, b: Sequence[int]) -> Optional[Element]:
        """Some x with f(x) = b, or None if b is not in the image."""
        k, m = self.source.rank, self.target.rank
        if m == 0:
            return (0,) * k
        system = [
            list(self.matrix[i]) + [self.target.factors[i] if c == i else 0 for c in range(m)]
            for i in range(m)
        ]
        solution = solve_integer(system, k + m, [int(a) for a in b])
        if solution is None:
            return None
        return self.source.reduce(solution[:k])


def block_map(
    sources: Sequence[FinModule],
    targets: Sequence[FinModule],
    blocks: Dict[Tuple[int, int], ModuleMap],
    ring: CyclicRing,
) -> ModuleMap:
    """
    Assemble a map between direct sums from blocks keyed by (target, source).
    Missing blocks are zero.
    """
    source = FinModule(ring, tuple(d for m in sources for d in m.factors))
    target = FinModule(ring, tuple(d for m in targets for d in m.factors))
    src_offsets = _offsets(sources)
    tgt_offsets = _offsets(targets)
    rows = [[0] * source.rank for _ in range(target.rank)]
    for (t, s), block in blocks.items():
        if block.source != sources[s] or block.target != targets[t]:
            raise DomainError(f"block ({t},{s}) does not match the summands")
        for i, row in enumerate(block.matrix):
            for j, a in enumerate(row):
                rows[tgt_offsets[t] + i][src_offsets[s] + j] = a
    return ModuleMap(source, target, tuple(tuple(r) for r in rows))


def split_rows(f: ModuleMap, targets: Sequence[FinModule]) -> List[ModuleMap]:
    """Components of a map into a direct sum."""
    pieces = []
    offset = 0
    for t in targets:
        rows = f.matrix[offset : offset + t.rank]
        pieces.append(ModuleMap(f.source, t, rows))
        offset += t.rank
    return pieces


def _offsets(parts: Sequence[FinModule]) -> List[int]:
    offsets, total = [], 0
    for m in parts:
        offsets.append(total)
        total += m.rank
    return offsets


@dataclass(frozen=True)
class Kernel:
    """ker(f) with its inclusion; lift() factors maps through it."""

    module: FinModule
    inclusion: ModuleMap
    lattice: LatticeQuotient = field(repr=False)

    def coordinates(self, x: Sequence[int]) -> Element:
        return self.lattice.coordinates(x)

    def lift(self, g: ModuleMap) -> ModuleMap:
        """The unique g' with inclusion o g' = g (g must land in the kernel)."""
        columns = [self.coordinates(g.column(j)) for j in range(g.source.rank)]
        return ModuleMap.from_columns(g.source, self.module, columns)


@dataclass(frozen=True)
class Cokernel:
    """coker(f) with its projection; descend() factors maps through it."""

    module: FinModule
    projection: ModuleMap
    lattice: LatticeQuotient = field(repr=False)

    def descend(self, g: ModuleMap) -> ModuleMap:
        """The unique g' with g' o projection = g (g must kill the image)."""
        columns = [g.apply(v) for v in self.lattice.generators]
        return ModuleMap.from_columns(self.module, g.target, columns)


@dataclass(frozen=True)
class Image:
    """im(f) with inclusion and the corestriction source -> im(f)."""

    module: FinModule
    inclusion: ModuleMap
    corestriction: ModuleMap


@dataclass(frozen=True)
class Subquotient:
    """ker(f_out) / im(f_in) with the quotient map from the kernel."""

    module: FinModule
    kernel: Kernel
    projection: ModuleMap
    lattice: LatticeQuotient = field(repr=False)

    @property
    def representatives(self) -> Tuple[Element, ...]:
        """Cocycle representatives (ambient coordinates) of the generators."""
        return self.lattice.generators

    def coordinates(self, x: Sequence[int]) -> Element:
        """Class of a cocycle x (ambient coordinates)."""
        return self.lattice.coordinates(x)


def _kernel_lattice(f: ModuleMap) -> List[List[int]]:
    """Generators of {x in Z^k : f(x) = 0 in the target}, ambient coordinates."""
    k, m = f.source.rank, f.target.rank
    if m == 0:
        return [[1 if i == j else 0 for i in range(k)] for j in range(k)]
    system = [
        list(f.matrix[i]) + [f.target.factors[i] if c == i else 0 for c in range(m)]
        for i in range(m)
    ]
    return [z[:k] for z in integer_kernel(system, k + m)]


def _relations(module: FinModule) -> List[List[int]]:
    k = module.rank
    return [[d if i == j else 0 for i in range(k)] for j, d in enumerate(module.factors)]


def kernel(f: ModuleMap) -> Kernel:
    """
    Kernel of f in invariant-factor form with its inclusion.

    Args:
        f: A well-defined map

    Returns:
        Kernel record (module, inclusion, lift helper)
    """
    source = f.source
    lattice = lattice_quotient(_kernel_lattice(f), _relations(source), source.rank)
    module = FinModule(source.ring, lattice.factors)
    inclusion = ModuleMap.from_columns(module, source, lattice.generators)
    return Kernel(module, inclusion, lattice)


def cokernel(f: ModuleMap) -> Cokernel:
    """Cokernel of f in invariant-factor form with its projection."""
    target = f.target
    m = target.rank
    unit = [[1 if i == j else 0 for i in range(m)] for j in range(m)]
    relations = [list(f.column(j)) for j in range(f.source.rank)] + _relations(target)
    lattice = lattice_quotient(unit, relations, m)
    module = FinModule(target.ring, lattice.factors)
    projection = ModuleMap.from_columns(
        target, module, [lattice.coordinates(u) for u in unit]
    )
    return Cokernel(module, projection, lattice)


def image(f: ModuleMap) -> Image:
    """Image of f with inclusion and corestriction."""
    target = f.target
    m = target.rank
    span = [list(f.column(j)) for j in range(f.source.rank)] + _relations(target)
    lattice = lattice_quotient(span, _relations(target), m)
    module = FinModule(target.ring, lattice.factors)
    inclusion = ModuleMap.from_columns(module, target, lattice.generators)
    corestriction = ModuleMap.from_columns(
        f.source, module, [lattice.coordinates(f.column(j)) for j in range(f.source.rank)]
    )
    return Image(module, inclusion, corestriction)


def subquotient(f_in: ModuleMap, f_out: ModuleMap) -> Subquotient:
    """
    H = ker(f_out) / im(f_in) in one call.

    Raises:
        NotAComplexError: if f_out o f_in != 0
    """
    if f_in.target != f_out.source:
        raise DomainError("subquotient of maps with mismatched modules")
    if not f_out.compose(f_in).is_zero():
        raise NotAComplexError("not a complex at this degree: f_out o f_in != 0")
    middle = f_in.target
    ker = kernel(f_out)
    relations = [list(f_in.column(j)) for j in range(f_in.source.rank)] + _relations(middle)
    lattice = lattice_quotient(_kernel_lattice(f_out), relations, middle.rank)
    module = FinModule(middle.ring, lattice.factors)
    projection = ModuleMap.from_columns(
        ker.module,
        module,
        [lattice.coordinates(ker.inclusion.column(j)) for j in range(ker.module.rank)],
    )
    return Subquotient(module, ker, projection, lattice)


@dataclass(frozen=True)
class TensorProduct:
    """M (x) N = (+)_{j,k} Z/gcd(d_j, e_k) with the (j,k) -> position index."""

    left: FinModule
    right: FinModule
    module: FinModule
    index: Tuple[Tuple[Tuple[int, int], int], ...]

    def position(self, j: int, k: int) -> Optional[int]:
        return dict(self.index).get((j, k))

    @property
    def canonical(self) -> FinModule:
        return self.module.canonical()


def tensor_modules(left: FinModule, right: FinModule) -> TensorProduct:
    """
    Tensor product of two modules over the same ring.

    Zero summands (coprime factor pairs) are dropped from the factor list.
    """
    _check_ring(left.ring, right.ring)
    factors, index = [], []
    for j, d in enumerate(left.factors):
        for k, e in enumerate(right.factors):
            g = gcd(d, e)
            if g > 1:
                index.append(((j, k), len(factors)))
                factors.append(g)
    return TensorProduct(left, right, FinModule(left.ring, tuple(factors)), tuple(index))


def tensor_maps(
    f: ModuleMap, g: ModuleMap, source: TensorProduct, target: TensorProduct
) -> ModuleMap:
    """f (x) g between the given tensor products."""
    rows = [[0] * source.module.rank for _ in range(target.module.rank)]
    target_index = dict(target.index)
    for (j, k), col in source.index:
        for i in range(f.target.rank):
            a = f.matrix[i][j]
            if a == 0:
                continue
            for l in range(g.target.rank):
                b = g.matrix[l][k]
                row = target_index.get((i, l))
                if row is not None and b:
                    rows[row][col] += a * b
    return ModuleMap(source.module, target.module, tuple(tuple(r) for r in rows))


@dataclass(frozen=True)
class HomModule:
    """
    Hom(M, N) = (+)_{j,k} Z/gcd(d_j, e_k).

    The generator at (j,k) sends the j-th generator of M to e_k/gcd * (k-th
    generator of N) and every other generator to zero.
    """

    source: FinModule
    target: FinModule
    module: FinModule
    index: Tuple[Tuple[Tuple[int, int], int], ...]

    def to_map(self, element: Sequence[int]) -> ModuleMap:
        rows = [[0] * self.source.rank for _ in range(self.target.rank)]
        for (j, k), pos in self.index:
            e = self.target.factors[k]
            step = e // gcd(self.source.factors[j], e)
            rows[k][j] = element[pos] * step
        return ModuleMap(self.source, self.target, tuple(tuple(r) for r in rows))

    def from_map(self, f: ModuleMap) -> Element:
        if f.source != self.source or f.target != self.target:
            raise DomainError("map does not belong to this Hom module")
        element = [0] * self.module.rank
        for (j, k), pos in self.index:
            e = self.target.factors[k]
            g = gcd(self.source.factors[j], e)
            element[pos] = (f.matrix[k][j] // (e // g)) % g
        return tuple(element)


def hom_module(source: FinModule, target: FinModule) -> HomModule:
    """Hom_R(M, N) with evaluation data."""
    _check_ring(source.ring, target.ring)
    factors, index = [], []
    for j, d in enumerate(source.factors):
        for k, e in enumerate(target.factors):
            g = gcd(d, e)
            if g > 1:
                index.append(((j, k), len(factors)))
                factors.append(g)
    return HomModule(source, target, FinModule(source.ring, tuple(factors)), tuple(index))


def hom_covariant(hom: HomModule, phi: ModuleMap, result: HomModule) -> ModuleMap:
    """Hom(M, phi): Hom(M, N) -> Hom(M, N'), f -> phi o f."""
    return _hom_induced(hom, result, lambda f: phi.compose(f))


def hom_contravariant(hom: HomModule, psi: ModuleMap, result: HomModule) -> ModuleMap:
    """Hom(psi, N): Hom(M, N) -> Hom(M', N), f -> f o psi."""
    return _hom_induced(hom, result, lambda f: f.compose(psi))


def _hom_induced(source: HomModule, target: HomModule, fn) -> ModuleMap:
    columns = []
    for pos in range(source.module.rank):
        unit = [1 if i == pos else 0 for i in range(source.module.rank)]
        columns.append(target.from_map(fn(source.to_map(unit))))
    return ModuleMap.from_columns(source.module, target.module, columns)


def support(module: FinModule) -> SpecSubset:
    """Primes dividing some cyclic factor."""
    return SpecSubset(
        module.ring,
        frozenset(p for p in module.ring.spec if any(d % p == 0 for d in module.factors)),
    )


@dataclass(frozen=True)
class TorsionPart:
    """The P-primary summand with its inclusion and the idempotent projection."""

    primes: SpecSubset
    module: FinModule
    inclusion: ModuleMap
    projection: ModuleMap


def torsion_part(module: FinModule, primes: SpecSubset) -> TorsionPart:
    """
    Largest submodule supported in P: the image of the idempotent e_P.
    """
    e = subset_idempotent(module.ring, primes.primes)
    im = image(ModuleMap.scalar(module, e))
    return TorsionPart(primes, im.module, im.inclusion, im.corestriction)


def primary_decomposition(module: FinModule) -> List[TorsionPart]:
    """M = (+)_p Gamma_p M; inclusions o projections sum to the identity."""
    ring = module.ring
    return [torsion_part(module, SpecSubset(ring, frozenset([p]))) for p in ring.spec]


@dataclass(frozen=True)
class Envelope:
    module: FinModule
    embedding: ModuleMap


def injective_envelope(module: FinModule) -> Envelope:
    """
    E(Z/d) = (+)_{p | d} Z/p^{e_p}, embedded by 1 -> p^{e_p - v_p(d)}.
    """
    ring = module.ring
    factors, columns = [], []
    for d in module.factors:
        entries = []
        for p, e in ring.primes:
            v = _valuation(d, p)
            if v:
                factors.append(p**e)
                entries.append((len(factors) - 1, p ** (e - v)))
        columns.append(entries)
    envelope = FinModule(ring, tuple(factors))
    rows = [[0] * module.rank for _ in factors]
    for j, entries in enumerate(columns):
        for i, a in entries:
            rows[i][j] = a
    return Envelope(envelope, ModuleMap(module, envelope, tuple(tuple(r) for r in rows)))


def is_injective_module(module: FinModule) -> bool:
    """Every nonzero prime-power part of every factor is the full p^{e_p}."""
    ring = module.ring
    return all(
        _valuation(d, p) in (0, e) for d in module.factors for p, e in ring.primes
    )


def is_essential(embedding: ModuleMap) -> bool:
    """
    Monomorphism whose image contains the socle of the target.
    """
    if not kernel(embedding).module.is_zero:
        return False
    projection = cokernel(embedding).projection
    target = embedding.target
    for j, d in enumerate(target.factors):
        for p in target.ring.spec:
            if d % p == 0:
                socle = [0] * target.rank
                socle[j] = d // p
                if any(projection.apply(socle)):
                    return False
    return True


def _valuation(d: int, p: int) -> int:
    v = 0
    while d % p == 0:
        d //= p
        v += 1
    return v


def _p_part(d: int, p: int) -> int:
    return p ** _valuation(d, p)


def _check_ring(a: CyclicRing, b: CyclicRing):
    if a != b:
        raise DomainError(f"ring mismatch: {a} vs {b}")
