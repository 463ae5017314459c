"""
Property families run by the suite.

Each family is a generator of CaseResult over one ring. Cases draw their
randomness from a generator seeded by (seed, family, modulus, index), so a
case is reproducible on its own and under any parallel schedule.
"""

import math
import random
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Callable, Dict, Iterator, List, Optional, Tuple

from ..config import LabConfig, SuiteConfig
from ..core.complexes import (
    ChainMap,
    Complex,
    cech_tilde,
    cohomology,
    cohomology_map,
    compact_dual,
    hom_derived,
    koszul,
    koszul_powers_tower,
    same_cohomology,
    shift,
    stalk,
    tensor_chain_maps,
    tensor_complexes,
    tower_colimit,
)
from ..core.modules import (
    FinModule,
    hom_covariant,
    hom_module,
    injective_envelope,
    is_essential,
    is_injective_module,
    support,
    tensor_modules,
)
from ..core.ring import CyclicRing, make_ideal, v_set
from ..core.tstructures import (
    ThomasonFiltration,
    coaisle_verdicts,
    coresolve_in_coaisle,
    filtration_of_generators,
    generators_of,
    in_aisle,
    in_co_t_coaisle,
    in_co_t_coaisle_hom,
    stalk_hom_check,
    truncate_t,
)
from ..errors import LabError, PreconditionError
from ..loaders.json_loader import DocumentLoader
from ..managers.log_manager import logger
from . import brute_force
from .generators import enumerate_filtrations, random_complex, random_free_complex


@dataclass(frozen=True)
class CaseResult:
    family: str
    modulus: int
    index: int
    passed: bool
    exhibit: Dict = field(default_factory=dict)


def case_rng(seed: int, family: str, modulus: int, index: int) -> random.Random:
    return random.Random(f"{seed}:{family}:{modulus}:{index}")


def _corpus(ring: CyclicRing, seed: int, family: str, size: int) -> Iterator[Tuple[int, Complex]]:
    for i in range(size):
        yield i, random_complex(ring, rng=case_rng(seed, family, ring.modulus, i))


def _case(
    family: str,
    ring: CyclicRing,
    index: int,
    check: Callable[[], Tuple[bool, str]],
    inputs: Callable[[], Dict],
) -> CaseResult:
    """Run one check; a LabError is a failed case, not a crash."""
    try:
        passed, detail = check()
    except LabError as exc:
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    if passed:
        return CaseResult(family, ring.modulus, index, True)
    logger.debug(f"{family} case {index} over {ring} failed: {detail}")
    exhibit = {"family": family, "modulus": ring.modulus, "case": index, "detail": detail}
    exhibit.update(inputs())
    return CaseResult(family, ring.modulus, index, False, exhibit)


def _complex_doc(X: Complex) -> Dict:
    return {"complex": DocumentLoader.serialize_complex(X)}


def _pair_doc(X: Complex, phi: ThomasonFiltration) -> Dict:
    return {
        "complex": DocumentLoader.serialize_complex(X),
        "filtration": DocumentLoader.serialize_filtration(phi),
    }


def _filtration_doc(phi: ThomasonFiltration) -> Dict:
    return {"filtration": DocumentLoader.serialize_filtration(phi)}


# Families


def koszul_family(ring: CyclicRing, config: SuiteConfig) -> Iterator[CaseResult]:
    """H^0(K(d)) = R/(d) and Supp H^k(K(d)) inside V(d)."""
    for i, d in enumerate(ring.nonunit_divisors()):

        def check(d=d):
            h = cohomology(koszul(ring, [d]))
            if not h.at(0).is_isomorphic(FinModule.cyclic(ring, d)):
                return False, f"H^0(K({d})) = {h.at(0)}"
            allowed = v_set(ring, make_ideal(ring, d))
            for k, m in h.entries:
                if not support(m).issubset(allowed):
                    return False, f"Supp H^{k}(K({d})) = {support(m)} not in {allowed}"
            return True, ""

        yield _case("koszul", ring, i, check, lambda d=d: {"divisor": d})


def oracle_agreement_family(ring: CyclicRing, config: SuiteConfig) -> Iterator[CaseResult]:
    """Cech, Koszul-Hom and primary coaisle oracles agree."""
    filtrations = enumerate_filtrations(ring, config.window, minus_infinity=True)
    for i, X in _corpus(ring, config.seed, "corpus", config.oracle_corpus):
        for j, phi in enumerate(filtrations):

            def check(X=X, phi=phi):
                verdicts = coaisle_verdicts(X, phi)
                members = {v.oracle.value: v.member for v in verdicts}
                return len(set(members.values())) == 1, f"verdicts {members}"

            yield _case(
                "oracle_agreement",
                ring,
                i * len(filtrations) + j,
                check,
                lambda X=X, phi=phi: _pair_doc(X, phi),
            )


def co_t_duality_family(ring: CyclicRing, config: SuiteConfig) -> Iterator[CaseResult]:
    """The tensor formula for the co-t-coaisle matches the Hom perp of the compact duals."""
    filtrations = enumerate_filtrations(ring, config.window, minus_infinity=True)
    for i, X in _corpus(ring, config.seed, "corpus", config.oracle_corpus):
        for j, phi in enumerate(filtrations):

            def check(X=X, phi=phi):
                tensor = in_co_t_coaisle(X, phi)
                perp = in_co_t_coaisle_hom(X, phi)
                return (
                    tensor.member == perp.member,
                    f"tensor={tensor.member} {tensor.witness}, hom={perp.member} {perp.witness}",
                )

            yield _case(
                "co_t_duality",
                ring,
                i * len(filtrations) + j,
                check,
                lambda X=X, phi=phi: _pair_doc(X, phi),
            )


def round_trip_family(ring: CyclicRing, config: SuiteConfig) -> Iterator[CaseResult]:
    """filtration_of_generators(generators_of(phi)) == phi."""
    for i, phi in enumerate(enumerate_filtrations(ring, config.window)):

        def check(phi=phi):
            back = filtration_of_generators(ring, generators_of(phi))
            return back == phi, f"round trip gave {back}"

        yield _case("round_trip", ring, i, check, lambda phi=phi: _filtration_doc(phi))


def minimality_family(ring: CyclicRing, config: SuiteConfig) -> Iterator[CaseResult]:
    """phi is pointwise least among enumerated psi whose aisle holds its generators."""
    finite = enumerate_filtrations(ring, config.window)
    candidates = enumerate_filtrations(ring, config.window, minus_infinity=True)
    for i, phi in enumerate(finite):

        def check(phi=phi):
            gens = generators_of(phi)
            if not all(in_aisle(S, phi) for S in gens):
                return False, "generators leave their own aisle"
            for psi in candidates:
                if all(in_aisle(S, psi) for S in gens) and any(
                    phi.cutoff(p) > psi.cutoff(p) for p in ring.spec
                ):
                    return False, f"{psi} holds the generators but is smaller"
            return True, ""

        yield _case("minimality", ring, i, check, lambda phi=phi: _filtration_doc(phi))


def generation_family(ring: CyclicRing, config: SuiteConfig) -> Iterator[CaseResult]:
    """K(d), R/(d), R/(d^2) and R/(d^3) generate the same aisle."""
    for i, d in enumerate(ring.nonunit_divisors()):

        def check(d=d):
            families = {
                "K(d)": [koszul(ring, [d])],
                "R/(d)": [stalk(FinModule.cyclic(ring, d), 0)],
                "R/(d^2)": [stalk(FinModule.cyclic(ring, d**2), 0)],
                "R/(d^3)": [stalk(FinModule.cyclic(ring, d**3), 0)],
            }
            images = {
                name: filtration_of_generators(ring, gens) for name, gens in families.items()
            }
            distinct = set(images.values())
            return len(distinct) == 1, ", ".join(f"{k}: {v}" for k, v in images.items())

        yield _case("generation", ring, i, check, lambda d=d: {"divisor": d})


def _random_filtration(rng: random.Random, filtrations: List[ThomasonFiltration]):
    return filtrations[rng.randrange(len(filtrations))]


def truncation_family(ring: CyclicRing, config: SuiteConfig) -> Iterator[CaseResult]:
    """Truncation triangles verify and Hom_D(U, V) vanishes."""
    filtrations = enumerate_filtrations(ring, config.window, minus_infinity=True)
    for i in range(config.truncation_corpus):
        rng = case_rng(config.seed, "truncation", ring.modulus, i)
        X = random_complex(ring, rng=rng)
        phi = _random_filtration(rng, filtrations)

        def check(X=X, phi=phi):
            t = truncate_t(X, phi)
            hom = hom_derived(t.u_part, t.v_part, 0)
            return hom.is_zero, f"Hom_D(U, V) = {hom}"

        yield _case("truncation", ring, i, check, lambda X=X, phi=phi: _pair_doc(X, phi))


def _cohomology_support(X: Complex) -> set:
    return {p for _, h in cohomology(X).entries for p in support(h).primes}


def _indecomposable_injectives(ring: CyclicRing) -> List[FinModule]:
    return [FinModule.cyclic(ring, ring.prime_power(p)) for p in ring.spec]


def stalk_hom_family(ring: CyclicRing, config: SuiteConfig) -> Iterator[CaseResult]:
    """f -> H^n(f) is a bijection Hom_K(X, E[-n]) -> Hom(H^n X, E)."""
    injectives = _indecomposable_injectives(ring)
    for i, X in _corpus(ring, config.seed, "stalk_hom", config.stalk_corpus):

        def check(X=X):
            h = cohomology(X)
            for E in injectives:
                for n in X.degrees:
                    result = stalk_hom_check(X, E, n)
                    if not result.bijective:
                        return False, f"comparison not bijective for {E} in degree {n}"
                    if result.lhs.order != brute_force.hom_count(h.at(n), E):
                        return False, f"|Hom_K| = {result.lhs.order} for {E} in degree {n}"
            return True, ""

        yield _case("stalk_hom", ring, i, check, lambda X=X: _complex_doc(X))


def coresolution_family(ring: CyclicRing, config: SuiteConfig) -> Iterator[CaseResult]:
    """Envelope stalks of a coaisle object stay in the coaisle, and coresolution succeeds."""
    filtrations = enumerate_filtrations(ring, config.window, minus_infinity=True)
    for i in range(config.coresolution_corpus):
        rng = case_rng(config.seed, "coresolution", ring.modulus, i)
        X = random_complex(ring, rng=rng)
        phi = _random_filtration(rng, filtrations)

        def check(X=X, phi=phi):
            V = truncate_t(X, phi).v_part
            h = cohomology(V)
            if h.is_zero:
                return True, ""
            k = h.inf
            envelope = injective_envelope(h.at(k)).module
            verdicts = coaisle_verdicts(stalk(envelope, k), phi)
            if not all(verdicts):
                return False, f"stalk {envelope}[{-k}] rejected: {verdicts}"
            if any(phi.cutoff(p) == -math.inf for p in _cohomology_support(V)):
                try:
                    coresolve_in_coaisle(V, phi, config.depth)
                except PreconditionError:
                    return True, ""
                return False, f"coresolution accepted {phi}, unbounded below on the support"
            coresolve_in_coaisle(V, phi, config.depth)
            return True, ""

        yield _case("coresolution", ring, i, check, lambda X=X, phi=phi: _pair_doc(X, phi))


def _tower_cohomology(tower, X: Complex, n: int):
    identity = ChainMap.identity(X)
    maps = [cohomology_map(tensor_chain_maps(t, identity), n) for t in tower.maps]
    modules = [maps[0].source] + [f.target for f in maps]
    return modules, maps


def cech_colimit_family(ring: CyclicRing, config: SuiteConfig) -> Iterator[CaseResult]:
    """H^n(Cech~(x) (x) X) is the colimit of H^n(K(x^m)* (x) X)."""
    index = 0
    for i, X in _corpus(ring, config.seed, "cech_colimit", config.colimit_corpus):
        for x in range(ring.modulus):

            def check(X=X, x=x):
                tower = koszul_powers_tower(ring, x)
                lhs = cohomology(tensor_complexes(cech_tilde(ring, [x]), X))
                for n in range(X.min_degree - 1, X.max_degree + 2):
                    modules, maps = _tower_cohomology(tower, X, n)
                    colim = tower_colimit(modules, maps)
                    if not colim.is_isomorphic(lhs.at(n)):
                        return False, f"degree {n}: Cech gives {lhs.at(n)}, colimit {colim}"
                return True, ""

            yield _case(
                "cech_colimit",
                ring,
                index,
                check,
                lambda X=X, x=x: dict(_complex_doc(X), element=x),
            )
            index += 1


def rigidity_family(ring: CyclicRing, config: SuiteConfig) -> Iterator[CaseResult]:
    """
    A free complex in degrees <= 0 tensored into the aisle stays in the aisle.

    A drawn complex outside the aisle of the drawn filtration is replaced by
    its aisle part, so every case tests a member.
    """
    filtrations = enumerate_filtrations(ring, config.window, minus_infinity=True)
    for i in range(config.rigidity_corpus):
        rng = case_rng(config.seed, "rigidity", ring.modulus, i)
        X = random_free_complex(ring, (-1, 0), rng=rng)
        U = random_complex(ring, rng=rng)
        phi = _random_filtration(rng, filtrations)

        def check(X=X, U=U, phi=phi):
            if not in_aisle(U, phi):
                U = truncate_t(U, phi).u_part
            if not in_aisle(U, phi):
                return False, f"aisle part of U left the aisle of {phi}"
            product = tensor_complexes(X, U)
            verdict = in_aisle(product, phi)
            if brute_force.enumerable(product):
                if verdict.member != brute_force.aisle_member(product, phi):
                    return False, "aisle oracle and element count disagree on X (x) U"
            return verdict.member, f"witness {verdict.witness} for {phi}"

        yield _case(
            "rigidity",
            ring,
            i,
            check,
            lambda X=X, U=U, phi=phi: {
                "free": DocumentLoader.serialize_complex(X),
                "complex": DocumentLoader.serialize_complex(U),
                "filtration": DocumentLoader.serialize_filtration(phi),
            },
        )


def _projectives(ring: CyclicRing) -> List[FinModule]:
    """Sums of CRT-component frees, up to PROJECTIVE_MAX_SUMMANDS of them."""
    blocks = sorted({ring.modulus} | {ring.prime_power(p) for p in ring.spec})
    return [
        FinModule(ring, combo)
        for size in range(1, LabConfig.PROJECTIVE_MAX_SUMMANDS + 1)
        for combo in combinations_with_replacement(blocks, size)
    ]


def injective_hom_family(ring: CyclicRing, config: SuiteConfig) -> Iterator[CaseResult]:
    """Hom(P, E) is injective and Hom(P, envelope) is an envelope."""
    divisors = ring.nonunit_divisors()
    modules = [FinModule(ring, (d,)) for d in divisors]
    modules += [FinModule(ring, (a, b)) for a in divisors for b in divisors if a <= b]
    index = 0
    for P in _projectives(ring):
        for M in modules:

            def check(P=P, M=M):
                env = injective_envelope(M)
                hom_e = hom_module(P, env.module)
                if not is_injective_module(hom_e.module):
                    return False, f"Hom({P}, {env.module}) = {hom_e.module} is not injective"
                induced = hom_covariant(hom_module(P, M), env.embedding, hom_e)
                if not is_essential(induced):
                    return False, f"Hom({P}, -) of the envelope of {M} is not essential"
                return True, ""

            yield _case(
                "injective_hom",
                ring,
                index,
                check,
                lambda P=P, M=M: {
                    "projective": DocumentLoader.serialize_module(P),
                    "module": DocumentLoader.serialize_module(M),
                },
            )
            index += 1


def orthogonality_family(ring: CyclicRing, config: SuiteConfig) -> Iterator[CaseResult]:
    """Hom_D(U, V[k]) vanishes for k <= 0 with U and V cut from unrelated complexes."""
    filtrations = enumerate_filtrations(ring, config.window, minus_infinity=True)
    for i in range(config.truncation_corpus):
        rng = case_rng(config.seed, "orthogonality", ring.modulus, i)
        X = random_complex(ring, rng=rng)
        Y = random_complex(ring, rng=rng)
        phi = _random_filtration(rng, filtrations)

        def check(X=X, Y=Y, phi=phi):
            U = X if in_aisle(X, phi) else truncate_t(X, phi).u_part
            V = Y if all(coaisle_verdicts(Y, phi)) else truncate_t(Y, phi).v_part
            for k in (0, -1):
                hom = hom_derived(U, V, k)
                if not hom.is_zero:
                    return False, f"Hom_D(U, V[{k}]) = {hom}"
            return True, ""

        yield _case(
            "orthogonality",
            ring,
            i,
            check,
            lambda X=X, Y=Y, phi=phi: dict(
                _pair_doc(X, phi), other=DocumentLoader.serialize_complex(Y)
            ),
        )


def adjunction_family(ring: CyclicRing, config: SuiteConfig) -> Iterator[CaseResult]:
    """Hom(M (x) N, K) = Hom(M, Hom(N, K)) over all cyclic triples."""
    cyclics = [FinModule.cyclic(ring, d) for d in ring.nonunit_divisors()]
    index = 0
    for M in cyclics:
        for N in cyclics:
            for K in cyclics:

                def check(M=M, N=N, K=K):
                    product = tensor_modules(M, N).module
                    lhs = hom_module(product, K).module
                    rhs = hom_module(M, hom_module(N, K).module).module
                    if lhs.order != brute_force.hom_count(product, K):
                        return False, f"|Hom({product}, {K})| = {lhs.order} by Smith form"
                    return lhs.is_isomorphic(rhs), f"{lhs} against {rhs}"

                yield _case(
                    "adjunction",
                    ring,
                    index,
                    check,
                    lambda M=M, N=N, K=K: {
                        "modules": [DocumentLoader.serialize_module(A) for A in (M, N, K)]
                    },
                )
                index += 1


def kunneth_family(ring: CyclicRing, config: SuiteConfig) -> Iterator[CaseResult]:
    """X (x) R[0] has the cohomology of X."""
    unit = stalk(FinModule.free(ring), 0)
    for i, X in _corpus(ring, config.seed, "kunneth", config.oracle_corpus):

        def check(X=X):
            product = tensor_complexes(X, unit)
            return same_cohomology(product, X), f"H(X (x) R) = {cohomology(product)}"

        yield _case("kunneth", ring, i, check, lambda X=X: _complex_doc(X))


def compact_dual_family(ring: CyclicRing, config: SuiteConfig) -> Iterator[CaseResult]:
    """(S*)* has the cohomology of S, and (S[k])* that of S*[-k]."""
    for i in range(config.rigidity_corpus):
        rng = case_rng(config.seed, "compact_dual", ring.modulus, i)
        S = random_free_complex(ring, rng=rng)
        k = rng.randint(-2, 2)

        def check(S=S, k=k):
            if not same_cohomology(compact_dual(compact_dual(S)), S):
                return False, "double dual changed cohomology"
            if not same_cohomology(compact_dual(shift(S, k)), shift(compact_dual(S), -k)):
                return False, f"dual does not turn [{k}] into [{-k}]"
            return True, ""

        yield _case(
            "compact_dual", ring, i, check, lambda S=S, k=k: dict(_complex_doc(S), shift=k)
        )


FAMILIES: Dict[str, Callable[[CyclicRing, SuiteConfig], Iterator[CaseResult]]] = {
    "koszul": koszul_family,
    "oracle_agreement": oracle_agreement_family,
    "round_trip": round_trip_family,
    "minimality": minimality_family,
    "generation": generation_family,
    "truncation": truncation_family,
    "stalk_hom": stalk_hom_family,
    "coresolution": coresolution_family,
    "cech_colimit": cech_colimit_family,
    "co_t_duality": co_t_duality_family,
    "rigidity": rigidity_family,
    "injective_hom": injective_hom_family,
    "orthogonality": orthogonality_family,
    "adjunction": adjunction_family,
    "kunneth": kunneth_family,
    "compact_dual": compact_dual_family,
}


def family(name: str) -> Optional[Callable[[CyclicRing, SuiteConfig], Iterator[CaseResult]]]:
    return FAMILIES.get(name)
