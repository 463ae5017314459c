"""
Thomason filtrations and the compactly generated t-structures they classify.

A filtration is stored by per-prime cutoffs n_p = sup{n : p in Phi(n)} in
Z u {-inf, +inf}. Membership in the aisle is decided by supports of
cohomology; membership in the coaisle by three independent oracles (Cech
tensor, derived Hom out of Koszul complexes, per-prime truncation) which must
always agree.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from ..config import LabConfig
from ..errors import DomainError, OracleDisagreement, PreconditionError, VerificationError
from ..managers.log_manager import logger
from .complexes import (
    ChainMap,
    Complex,
    TruncationSide,
    cech_tilde,
    cohomology,
    cohomology_data,
    compact_dual,
    cone,
    hom_data,
    hom_derived,
    is_acyclic,
    koszul,
    map_into_sum,
    map_out_of_sum,
    primary_component,
    same_cohomology,
    shift,
    soft_truncate,
    stalk,
    tensor_complexes,
)
from .modules import (
    FinModule,
    ModuleMap,
    block_map,
    hom_module,
    injective_envelope,
    is_injective_module,
    kernel,
    support,
)
from .ring import CyclicRing, SpecSubset, divisor_of_subset, v_set, make_ideal

Cutoff = Union[int, float]

# The support description of the aisle is only valid over noetherian rings.
SUPPORT_CRITERION_NOETHERIAN_ONLY = True


class Oracle(Enum):
    AISLE = "aisle"
    COAISLE_CECH = "coaisle-cech"
    COAISLE_HOM = "coaisle-hom"
    COAISLE_REDUCED = "coaisle-reduced"
    CO_T_COAISLE = "co-t-coaisle"
    CO_T_COAISLE_HOM = "co-t-coaisle-hom"


class Boundedness(Enum):
    BOUNDED = "bounded"
    BOUNDED_BELOW = "bounded_below"
    BOUNDED_ABOVE = "bounded_above"
    NEITHER = "neither"


def format_cutoff(value: Cutoff) -> str:
    if value == math.inf:
        return "+inf"
    if value == -math.inf:
        return "-inf"
    return str(int(value))


@dataclass(frozen=True)
class ThomasonFiltration:
    """Phi(n) = {p : n <= n_p}; decreasing in n by construction."""

    ring: CyclicRing
    cutoffs: Tuple[Tuple[int, Cutoff], ...]

    def __post_init__(self):
        items = (
            self.cutoffs.items() if isinstance(self.cutoffs, Mapping) else self.cutoffs
        )
        given = {}
        for p, value in items:
            p = int(p)
            if p not in self.ring.spec:
                raise DomainError(f"unknown prime {p} for {self.ring}")
            given[p] = _normalize_cutoff(value)
        normalized = tuple((p, given.get(p, -math.inf)) for p in self.ring.spec)
        object.__setattr__(self, "cutoffs", normalized)

    def cutoff(self, p: int) -> Cutoff:
        return dict(self.cutoffs)[p]

    def at(self, n: int) -> SpecSubset:
        """The subset Phi(n)."""
        return SpecSubset(
            self.ring, frozenset(p for p, c in self.cutoffs if n <= c)
        )

    def divisor_cutoff(self, d: int) -> Cutoff:
        """n_d = min{n_p : p in V(d)} for a nonunit divisor d."""
        primes = v_set(self.ring, make_ideal(self.ring, d)).primes
        if not primes:
            raise DomainError(f"{d} generates the unit ideal")
        return min(self.cutoff(p) for p in primes)

    @property
    def finite_values(self) -> List[int]:
        return [int(c) for _, c in self.cutoffs if math.isfinite(c)]

    def constant_subset(self) -> Optional[SpecSubset]:
        """P when Phi(n) = P for every n, else None."""
        if all(abs(c) == math.inf for _, c in self.cutoffs):
            return SpecSubset(
                self.ring, frozenset(p for p, c in self.cutoffs if c == math.inf)
            )
        return None

    def as_dict(self) -> Dict[int, Cutoff]:
        return dict(self.cutoffs)

    def __str__(self) -> str:
        inner = ", ".join(f"{p}:{format_cutoff(c)}" for p, c in self.cutoffs)
        return "{" + inner + "}"


def _normalize_cutoff(value) -> Cutoff:
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("+inf", "inf"):
            return math.inf
        if text == "-inf":
            return -math.inf
        try:
            return int(text)
        except ValueError:
            raise DomainError(f"bad cutoff {value!r}") from None
    if isinstance(value, float):
        if math.isinf(value):
            return value
        if value.is_integer():
            return int(value)
        raise DomainError(f"bad cutoff {value!r}")
    if isinstance(value, bool) or not isinstance(value, int):
        raise DomainError(f"bad cutoff {value!r}")
    return value


def make_filtration(ring: CyclicRing, spec_form: Mapping) -> ThomasonFiltration:
    """
    Normalize a filtration description to cutoffs.

    Accepted forms:
        {"cutoffs": {p: n_p}}  (missing primes are -inf)
        {"jumps": [[n_0, P_0], [n_1, P_1], ...], "below": P, "above": P}

    In the jump form Phi(n) = P_i for n_i <= n < n_{i+1}, Phi(n) = above past
    the last jump and Phi(n) = below before the first. "below" defaults to
    P_0 and "above" to the empty set.

    Raises:
        DomainError: on an increasing jump list or an unknown prime
    """
    if "cutoffs" in spec_form:
        return ThomasonFiltration(ring, tuple(dict(spec_form["cutoffs"]).items()))
    if "jumps" not in spec_form:
        raise DomainError("filtration needs 'cutoffs' or 'jumps'")

    jumps = [(int(n), _subset(ring, primes)) for n, primes in spec_form["jumps"]]
    if not jumps:
        raise DomainError("jump list is empty")
    degrees = [n for n, _ in jumps]
    if any(b <= a for a, b in zip(degrees, degrees[1:])):
        raise DomainError("jump degrees must strictly increase")
    below = _subset(ring, spec_form.get("below", jumps[0][1]))
    above = _subset(ring, spec_form.get("above", ()))
    chain = [below] + [s for _, s in jumps] + [above]
    for bigger, smaller in zip(chain, chain[1:]):
        if not smaller.issubset(bigger):
            raise DomainError(
                f"filtration is not decreasing: {smaller} is not inside {bigger}"
            )

    cutoffs = {}
    for p in ring.spec:
        if p in above:
            cutoffs[p] = math.inf
            continue
        last = None
        for i, (_, s) in enumerate(jumps):
            if p in s:
                last = i
        if last is None:
            cutoffs[p] = degrees[0] - 1 if p in below else -math.inf
        elif last + 1 < len(jumps):
            cutoffs[p] = degrees[last + 1] - 1
        else:
            cutoffs[p] = degrees[-1]
    return ThomasonFiltration(ring, tuple(cutoffs.items()))


def _subset(ring: CyclicRing, value) -> SpecSubset:
    if isinstance(value, SpecSubset):
        return value
    if isinstance(value, str):
        if value.strip().lower() == "spec":
            return SpecSubset.full(ring)
        value = [int(t) for t in value.strip("[]{} ").split(",") if t.strip()]
    return SpecSubset(ring, frozenset(int(p) for p in value))


def standard_filtration(ring: CyclicRing, k: int = 0) -> ThomasonFiltration:
    """Phi(n) = Spec for n <= k and empty above; its aisle is D^{<=k}."""
    return ThomasonFiltration(ring, tuple((p, k) for p in ring.spec))


def constant_filtration(ring: CyclicRing, primes: SpecSubset) -> ThomasonFiltration:
    """Phi(n) = P for all n: the localizing pair supported on P."""
    return ThomasonFiltration(
        ring, tuple((p, math.inf if p in primes else -math.inf) for p in ring.spec)
    )


def localizing_subset(phi: ThomasonFiltration) -> Optional[SpecSubset]:
    return phi.constant_subset()


@dataclass(frozen=True)
class Verdict:
    """Outcome of one membership oracle; witness is (divisor or prime, degree)."""

    oracle: Oracle
    member: bool
    witness: Optional[Tuple[int, Cutoff]] = None
    report: Tuple[Tuple[int, str, str, bool], ...] = ()

    def __bool__(self) -> bool:
        return self.member


def _above(inf_value: Cutoff, cutoff: Cutoff) -> bool:
    """Cohomology starting at inf_value lies in D^{>cutoff}."""
    if cutoff == -math.inf:
        return True
    if cutoff == math.inf:
        return inf_value == math.inf
    return inf_value > cutoff


def _below(sup_value: Cutoff, bound: Cutoff) -> bool:
    """Cohomology ending at sup_value lies in D^{<bound}."""
    if bound == math.inf:
        return True
    if bound == -math.inf:
        return sup_value == -math.inf
    return sup_value < bound


def _check_ring(X: Complex, phi: ThomasonFiltration):
    if X.ring != phi.ring:
        raise DomainError(f"ring mismatch: {X.ring} vs {phi.ring}")


def in_aisle(X: Complex, phi: ThomasonFiltration) -> Verdict:
    """
    Supp H^n(X) inside Phi(n) for every n.

    Only valid as the aisle over noetherian rings
    (see SUPPORT_CRITERION_NOETHERIAN_ONLY).
    """
    _check_ring(X, phi)
    rows, witness = [], None
    for n, h in cohomology(X).entries:
        supp, allowed = support(h), phi.at(n)
        ok = supp.issubset(allowed)
        rows.append((n, str(supp), str(allowed), ok))
        if not ok and witness is None:
            witness = (min(supp.primes - allowed.primes), n)
    return Verdict(Oracle.AISLE, witness is None, witness, tuple(rows))


@lru_cache(maxsize=LabConfig.PROFILE_CACHE_SIZE)
def cech_profile(X: Complex) -> Tuple[Tuple[int, Cutoff], ...]:
    """(d, inf H(Cech~(d) (x) X)) for every nonunit divisor d."""
    return tuple(
        (d, cohomology(tensor_complexes(cech_tilde(X.ring, [d]), X)).inf)
        for d in X.ring.nonunit_divisors()
    )


@lru_cache(maxsize=LabConfig.PROFILE_CACHE_SIZE)
def koszul_hom_profile(X: Complex) -> Tuple[Tuple[int, Cutoff], ...]:
    """
    (d, least k with Hom_D(K(d), X[k]) != 0) for every nonunit divisor d.

    Only k in [inf X - 3, sup X + 1] can contribute; +inf when all vanish.
    """
    h = cohomology(X)
    profile = []
    for d in X.ring.nonunit_divisors():
        first: Cutoff = math.inf
        if not h.is_zero:
            K = koszul(X.ring, [d])
            for k in range(h.inf - len(K.coords) - 1, h.sup + 2):
                if not hom_derived(K, X, k).is_zero:
                    first = k
                    break
        profile.append((d, first))
    return tuple(profile)


@lru_cache(maxsize=LabConfig.PROFILE_CACHE_SIZE)
def primary_profile(X: Complex) -> Tuple[Tuple[int, Cutoff], ...]:
    """(p, inf H(Gamma_p X)) for every prime p."""
    ring = X.ring
    return tuple(
        (p, cohomology(primary_component(X, SpecSubset(ring, frozenset([p]))).complex).inf)
        for p in ring.spec
    )


@lru_cache(maxsize=LabConfig.PROFILE_CACHE_SIZE)
def koszul_tensor_profile(X: Complex) -> Tuple[Tuple[int, Cutoff], ...]:
    """(d, sup H(K(d) (x) X)) for every nonunit divisor d."""
    return tuple(
        (d, cohomology(tensor_complexes(koszul(X.ring, [d]), X)).sup)
        for d in X.ring.nonunit_divisors()
    )


def in_coaisle_cech(X: Complex, phi: ThomasonFiltration) -> Verdict:
    """Cech~(d) (x) X in D^{>n_d} for every nonunit divisor d."""
    _check_ring(X, phi)
    for d, inf_value in cech_profile(X):
        cutoff = phi.divisor_cutoff(d)
        if not _above(inf_value, cutoff):
            return Verdict(Oracle.COAISLE_CECH, False, (d, inf_value))
    return Verdict(Oracle.COAISLE_CECH, True)


def in_coaisle_hom(X: Complex, phi: ThomasonFiltration) -> Verdict:
    """Hom_D(K(d), X[k]) = 0 for every nonunit divisor d and k <= n_d."""
    _check_ring(X, phi)
    for d, first in koszul_hom_profile(X):
        cutoff = phi.divisor_cutoff(d)
        if first != math.inf and first <= cutoff:
            return Verdict(Oracle.COAISLE_HOM, False, (d, first))
    return Verdict(Oracle.COAISLE_HOM, True)


def in_coaisle_reduced(X: Complex, phi: ThomasonFiltration) -> Verdict:
    """Gamma_p X in D^{>n_p} for every prime p."""
    _check_ring(X, phi)
    for p, inf_value in primary_profile(X):
        if not _above(inf_value, phi.cutoff(p)):
            return Verdict(Oracle.COAISLE_REDUCED, False, (p, inf_value))
    return Verdict(Oracle.COAISLE_REDUCED, True)


def coaisle_verdicts(
    X: Complex, phi: ThomasonFiltration, strict: bool = False
) -> List[Verdict]:
    """
    All three coaisle oracles.

    Raises:
        OracleDisagreement: when strict and the verdicts differ
    """
    verdicts = [in_coaisle_cech(X, phi), in_coaisle_hom(X, phi), in_coaisle_reduced(X, phi)]
    if strict and len({v.member for v in verdicts}) > 1:
        detail = ", ".join(f"{v.oracle.value}={v.member}" for v in verdicts)
        logger.error(f"Coaisle oracles disagree on {X} for {phi}: {detail}")
        raise OracleDisagreement(f"coaisle oracles disagree: {detail}")
    return verdicts


def in_co_t_coaisle(X: Complex, phi: ThomasonFiltration) -> Verdict:
    """K(d) (x) X in D^{<-n_d} for every nonunit divisor d."""
    _check_ring(X, phi)
    for d, sup_value in koszul_tensor_profile(X):
        cutoff = phi.divisor_cutoff(d)
        if not _below(sup_value, -cutoff):
            return Verdict(Oracle.CO_T_COAISLE, False, (d, sup_value))
    return Verdict(Oracle.CO_T_COAISLE, True)


def in_co_t_coaisle_hom(X: Complex, phi: ThomasonFiltration) -> Verdict:
    """
    Hom_D(K(d)*[n], X) = 0 for every nonunit divisor d and n <= n_d.

    Only n in [-sup X - 1, -inf X + 2] can contribute.
    """
    _check_ring(X, phi)
    h = cohomology(X)
    if h.is_zero:
        return Verdict(Oracle.CO_T_COAISLE_HOM, True)
    for d in X.ring.nonunit_divisors():
        cutoff = phi.divisor_cutoff(d)
        if cutoff == -math.inf:
            continue
        dual = compact_dual(koszul(X.ring, [d]))
        top = -h.inf + 2 if cutoff == math.inf else min(int(cutoff), -h.inf + 2)
        for n in range(-h.sup - 1, top + 1):
            if not hom_derived(shift(dual, n), X, 0).is_zero:
                return Verdict(Oracle.CO_T_COAISLE_HOM, False, (d, n))
    return Verdict(Oracle.CO_T_COAISLE_HOM, True)


@dataclass(frozen=True)
class TriangleEvidence:
    aisle: Verdict
    coaisle: Tuple[Verdict, ...]
    composite_zero: bool
    cone_acyclic: bool
    localization_agrees: Optional[bool] = None

    @property
    def verified(self) -> bool:
        return (
            self.aisle.member
            and all(v.member for v in self.coaisle)
            and self.composite_zero
            and self.cone_acyclic
            and self.localization_agrees is not False
        )


@dataclass(frozen=True)
class TruncationTriangle:
    """tau_U X -> X -> tau_V X with its verification evidence."""

    u_part: Complex
    input: Complex
    v_part: Complex
    u_map: ChainMap
    v_map: ChainMap
    witness: Complex
    evidence: TriangleEvidence


def _clamp(cutoff: Cutoff, X: Complex) -> int:
    if cutoff == math.inf:
        return X.max_degree
    if cutoff == -math.inf:
        return X.min_degree - 1
    return int(cutoff)


def truncate_t(X: Complex, phi: ThomasonFiltration) -> TruncationTriangle:
    """
    Approximation triangle of X for the t-structure of phi.

    tau_U X = (+)_p tau^{<=n_p} Gamma_p X and tau_V X = (+)_p tau^{>n_p} Gamma_p X;
    every part of the triangle is checked against the oracles.

    Raises:
        VerificationError: if any check fails
    """
    _check_ring(X, phi)
    ring = X.ring
    u_maps, v_maps = [], []
    for p in ring.spec:
        gamma = primary_component(X, SpecSubset(ring, frozenset([p])))
        n = _clamp(phi.cutoff(p), gamma.complex)
        low = soft_truncate(gamma.complex, n, TruncationSide.LE)
        high = soft_truncate(gamma.complex, n, TruncationSide.GT)
        u_maps.append(gamma.inclusion.compose(low.map))
        v_maps.append(high.map.compose(gamma.projection))

    u = map_out_of_sum(u_maps)
    v = map_into_sum(v_maps)
    U, V = u.source, v.target

    c = cone(u)
    def parts(k):
        return [U.module(k + 1), X.module(k)]

    to_v = ChainMap(
        c.complex,
        V,
        tuple(
            (k, block_map(parts(k),[V.module(k)], {(0, 1): v.component(k)}, ring))
            for k in c.complex.degrees
        ),
    )
    witness = cone(to_v).complex

    localization = None
    constant = phi.constant_subset()
    if constant is not None:
        d = divisor_of_subset(ring, constant).generator
        localization = same_cohomology(U, tensor_complexes(cech_tilde(ring, [d]), X))

    evidence = TriangleEvidence(
        aisle=in_aisle(U, phi),
        coaisle=tuple(coaisle_verdicts(V, phi)),
        composite_zero=v.compose(u).is_zero(),
        cone_acyclic=is_acyclic(witness),
        localization_agrees=localization,
    )
    if not evidence.verified:
        logger.error(f"Truncation of {X} for {phi} failed verification: {evidence}")
        raise VerificationError(f"truncation triangle failed verification for {phi}")
    logger.debug(f"Truncated {X} for {phi}: U = {cohomology(U)}, V = {cohomology(V)}")
    return TruncationTriangle(U, X, V, u, v, witness, evidence)


def koszul_aisle_approximation(X: Complex, d: int) -> Complex:
    """tau^{<=0}(Cech~(d) (x) X), the aisle(K(d)) approximation of X."""
    T = tensor_complexes(cech_tilde(X.ring, [d]), X)
    return soft_truncate(T, 0, TruncationSide.LE).complex


def generators_of(phi: ThomasonFiltration) -> List[Complex]:
    """
    K(p)[-n_p] for every prime with finite cutoff.

    Raises:
        DomainError: if some cutoff is +inf
    """
    if any(c == math.inf for _, c in phi.cutoffs):
        raise DomainError("+inf cutoff has no finite generator list")
    return [
        shift(koszul(phi.ring, [p]), -int(c))
        for p, c in phi.cutoffs
        if c != -math.inf
    ]


def filtration_of_generators(
    ring: CyclicRing, gens: Sequence[Complex]
) -> ThomasonFiltration:
    """n_p = max{i : p in Supp H^i(S) for some generator S}."""
    cutoffs: Dict[int, Cutoff] = {p: -math.inf for p in ring.spec}
    for S in gens:
        if S.ring != ring:
            raise DomainError(f"ring mismatch: {S.ring} vs {ring}")
        for n, h in cohomology(S).entries:
            for p in support(h).primes:
                cutoffs[p] = max(cutoffs[p], n)
    return ThomasonFiltration(ring, tuple(cutoffs.items()))


@dataclass(frozen=True)
class BoundednessReport:
    kind: Boundedness
    is_intermediate: bool


def classify_boundedness(phi: ThomasonFiltration) -> BoundednessReport:
    values = [c for _, c in phi.cutoffs]
    below = all(c != -math.inf for c in values)
    above = all(c != math.inf for c in values)
    if below and above:
        kind = Boundedness.BOUNDED
    elif below:
        kind = Boundedness.BOUNDED_BELOW
    elif above:
        kind = Boundedness.BOUNDED_ABOVE
    else:
        kind = Boundedness.NEITHER
    return BoundednessReport(kind, kind is Boundedness.BOUNDED)


def intermediate_window(phi: ThomasonFiltration) -> Tuple[int, int]:
    """(lo, hi) with D^{>=hi} inside V_Phi inside D^{>=lo}; bounded Phi only."""
    if not classify_boundedness(phi).is_intermediate:
        raise DomainError(f"{phi} is not bounded")
    values = phi.finite_values
    return min(values) + 1, max(values) + 1


@dataclass(frozen=True)
class StalkHomCheck:
    """
    phi : Hom_K(X, E[-n]) -> Hom_R(H^n X, E), f -> H^n(f).

    comparison is phi on canonical generators of both sides.
    """

    complex: Complex
    envelope: FinModule
    degree: int
    lhs: FinModule
    rhs: FinModule
    comparison: ModuleMap
    bijective: bool
    _hom: object = field(repr=False, compare=False, default=None)
    _classes: Tuple = field(repr=False, compare=False, default=())

    def realize(self, g: ModuleMap) -> ChainMap:
        """A chain map X -> E[-n] inducing g : H^n X -> E."""
        target_hom = hom_module(g.source, g.target)
        element = target_hom.from_map(g)
        coords = self.comparison.preimage(element)
        if coords is None:
            raise VerificationError("map is not induced by a chain map")
        width = self._hom.complex.module(0).rank
        cocycle = [0] * width
        for c, rep in zip(coords, self._classes):
            for i in range(width):
                cocycle[i] += c * rep[i]
        return self._hom.chain_map(0, cocycle)


def stalk_hom_check(X: Complex, E: FinModule, n: int) -> StalkHomCheck:
    """
    Compare Hom_K(X, E[-n]) with Hom_R(H^n X, E) for an injective E.

    Raises:
        DomainError: if E is not injective
    """
    if not is_injective_module(E):
        raise DomainError(f"{E} is not injective")
    ring = X.ring
    target = stalk(E, n)
    hom = hom_data(X, target)
    h0 = cohomology_data(hom.complex).get(0)
    hn = cohomology_data(X).get(n)
    lhs = h0.module if h0 else FinModule.zero(ring)
    hn_module = hn.module if hn else FinModule.zero(ring)
    rhs_hom = hom_module(hn_module, E)

    columns = []
    classes = h0.representatives if h0 else ()
    for rep in classes:
        f = hom.components(0, rep).get(n, ModuleMap.zero(X.module(n), E))
        induced = ModuleMap.from_columns(
            hn_module, E, [f.apply(r) for r in hn.representatives] if hn else []
        )
        columns.append(rhs_hom.from_map(induced))
    comparison = ModuleMap.from_columns(lhs, rhs_hom.module, columns)
    bijective = (
        kernel(comparison).module.is_zero and lhs.order == rhs_hom.module.order
    )
    return StalkHomCheck(
        X, E, n, lhs, rhs_hom.module, comparison, bijective, hom, tuple(classes)
    )


@dataclass(frozen=True)
class CoresolutionStep:
    envelope: FinModule
    degree: int
    verdicts: Tuple[Verdict, ...]


@dataclass(frozen=True)
class Coresolution:
    steps: Tuple[CoresolutionStep, ...]
    remainder: Complex
    terminated: bool


def coresolve_in_coaisle(X: Complex, phi: ThomasonFiltration, depth: int) -> Coresolution:
    """
    Peel injective stalks off a coaisle object.

    X_{i+1} = cone(X_i -> E_i[-k_i])[-1] with E_i the injective envelope of the
    lowest cohomology H^{k_i}(X_i). Every stalk E_i[-k_i] must pass all
    coaisle oracles.

    Raises:
        PreconditionError: if X is not in the coaisle, or phi is -inf at a
            prime in the support of H(X)
        VerificationError: if a step breaks an invariant
    """
    if not in_coaisle_reduced(X, phi):
        raise PreconditionError(f"{X} is not in the coaisle of {phi}")
    supp = {p for _, h in cohomology(X).entries for p in support(h).primes}
    unbounded = sorted(p for p in supp if phi.cutoff(p) == -math.inf)
    if unbounded:
        raise PreconditionError(
            f"{phi} is not bounded below at {unbounded} on the support of {X}"
        )
    steps = []
    current = X
    for _ in range(depth):
        h = cohomology(current)
        if h.is_zero:
            break
        k = h.inf
        envelope = injective_envelope(h.at(k))
        check = stalk_hom_check(current, envelope.module, k)
        if not check.bijective:
            raise VerificationError(f"stalk comparison is not bijective in degree {k}")
        g = check.realize(envelope.embedding)
        nxt = shift(cone(g).complex, -1)
        if not cohomology(nxt).inf > k:
            raise VerificationError(f"coresolution did not raise the degree past {k}")
        verdicts = tuple(coaisle_verdicts(stalk(envelope.module, k), phi))
        if not all(v.member for v in verdicts):
            raise VerificationError(f"stalk {envelope.module}[{-k}] left the coaisle")
        steps.append(CoresolutionStep(envelope.module, k, verdicts))
        logger.debug(f"Coresolution step at degree {k}: E = {envelope.module}")
        current = nxt
    return Coresolution(tuple(steps), current, is_acyclic(current))
