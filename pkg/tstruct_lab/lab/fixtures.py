"""
Worked examples pinned as executable fixtures.

Each fixture computes its value through the library and, where the modules
are small enough, recomputes a cardinality by element enumeration.
"""

import math
from dataclasses import dataclass
from typing import Any, Callable, List, Optional

from ..core.complexes import (
    ChainMap,
    TruncationSide,
    cech_tilde,
    cech_triangle,
    cohomology,
    compact_dual,
    cone,
    hom_complex,
    hom_derived,
    koszul,
    projective_replacement,
    shift,
    soft_truncate,
    stalk,
    tower_colimit,
)
from ..core.modules import (
    FinModule,
    ModuleMap,
    cokernel,
    hom_module,
    injective_envelope,
    kernel,
    subquotient,
    tensor_modules,
    torsion_part,
)
from ..core.ring import SpecSubset, crt_idempotents, localize_away, make_ideal, make_ring
from ..core.smith import smith_normal_form
from ..core.tstructures import (
    ThomasonFiltration,
    coaisle_verdicts,
    coresolve_in_coaisle,
    filtration_of_generators,
    generators_of,
    in_coaisle_reduced,
    stalk_hom_check,
    truncate_t,
)
from . import brute_force
from .generators import enumerate_filtrations


@dataclass(frozen=True)
class Fixture:
    name: str
    description: str
    expected: Any
    compute: Callable[[], Any]
    oracle: Optional[Callable[[], Any]] = None
    oracle_expected: Any = None


@dataclass(frozen=True)
class FixtureResult:
    name: str
    passed: bool
    value: Any
    oracle_value: Any = None


def run_fixture(fixture: Fixture) -> FixtureResult:
    value = fixture.compute()
    passed = value == fixture.expected
    oracle_value = None
    if fixture.oracle is not None:
        oracle_value = fixture.oracle()
        passed = passed and oracle_value == fixture.oracle_expected
    return FixtureResult(fixture.name, passed, value, oracle_value)


def _factors(module: FinModule) -> List[int]:
    return list(module.canonical().factors)


def _cohomology_factors(X) -> dict:
    return {k: _factors(m) for k, m in cohomology(X).entries}


def _orders(X) -> dict:
    return {k: v for k, v in brute_force.cohomology_orders(X).items() if v > 1}


def worked_examples() -> List[Fixture]:
    """The fixture set, in a stable order."""
    z4, z12, z30, z36 = make_ring(4), make_ring(12), make_ring(30), make_ring(36)
    r12 = FinModule.free(z12)
    mult = ModuleMap.scalar
    phi = ThomasonFiltration(z12, ((2, 1), (3, 0)))
    K2, K3 = koszul(z12, [2]), koszul(z12, [3])
    z2_12 = stalk(FinModule.cyclic(z12, 2), 0)
    z2_4 = stalk(FinModule.cyclic(z4, 2), 0)
    periodic = ThomasonFiltration(z4, ((2, -1),))

    def snf_diagonal(matrix):
        return smith_normal_form(matrix).diagonal

    def trunc_split():
        t = truncate_t(stalk(r12, 1), phi)
        return {
            "u": _cohomology_factors(t.u_part),
            "v": _cohomology_factors(t.v_part),
        }

    def trunc_split_by_count():
        t = truncate_t(stalk(r12, 1), phi)
        return [
            brute_force.aisle_member(t.u_part, phi),
            brute_force.coaisle_member(t.v_part, phi),
            _orders(t.u_part),
            _orders(t.v_part),
        ]

    def trunc_koszul3():
        t = truncate_t(shift(K3, -1), phi)
        return {
            "u": _cohomology_factors(t.u_part),
            "v": _cohomology_factors(t.v_part),
        }

    def reduced_koszul3():
        verdict = in_coaisle_reduced(shift(K3, -1), phi)
        return (verdict.member, verdict.witness)

    def low_koszul2():
        return soft_truncate(shift(K2, -1), 0, TruncationSide.LE).complex

    def coresolution_ladder():
        res = coresolve_in_coaisle(z2_4, periodic, 3)
        return [(_factors(s.envelope), s.degree) for s in res.steps]

    def coresolution_by_count():
        res = coresolve_in_coaisle(z2_4, periodic, 3)
        return [
            brute_force.coaisle_member(stalk(s.envelope, s.degree), periodic)
            for s in res.steps
        ]

    def cone_of_two():
        f = ChainMap(stalk(r12, 0), stalk(r12, 0), ((0, mult(r12, 2)),))
        return cone(f).complex

    def triangles():
        out = {}
        for g in (2, 1, 12):
            t = cech_triangle(z12, make_ideal(z12, g))
            out[g] = (_cohomology_factors(t.tilde), _cohomology_factors(t.cech))
        return out

    def replacement_of_z2():
        P = projective_replacement(z2_4, -2).complex
        return [P.is_free, _factors(cohomology(P).at(0)), _factors(cohomology(P).at(-1))]

    def replacement_by_count():
        orders = brute_force.cohomology_orders(projective_replacement(z2_4, -2).complex)
        return [orders[0], orders[-1]]

    def stalk_check():
        check = stalk_hom_check(koszul(z12, [2]), FinModule.cyclic(z12, 4), 0)
        return (_factors(check.lhs), _factors(check.rhs), check.bijective)

    return [
        Fixture(
            "snf-2x2",
            "Smith form of [[2,0],[1,2]]",
            [1, 4],
            lambda: snf_diagonal([[2, 0], [1, 2]]),
        ),
        Fixture(
            "snf-6-4",
            "Smith form of [[6,4],[4,6]]",
            [2, 10],
            lambda: snf_diagonal([[6, 4], [4, 6]]),
        ),
        Fixture(
            "crt-12",
            "CRT idempotents of Z/12",
            {2: 9, 3: 4},
            lambda: crt_idempotents(z12),
        ),
        Fixture(
            "kernel-mult6",
            "ker(6 : Z/12 -> Z/12)",
            [6],
            lambda: _factors(kernel(mult(r12, 6)).module),
            lambda: len(brute_force.kernel_elements(mult(r12, 6))),
            6,
        ),
        Fixture(
            "cokernel-mult2",
            "coker(2 : Z/4 -> Z/4)",
            [2],
            lambda: _factors(cokernel(mult(FinModule.free(z4), 2)).module),
            lambda: 4 // len(brute_force.image_elements(mult(FinModule.free(z4), 2))),
            2,
        ),
        Fixture(
            "subquotient-2-6",
            "ker(6) / im(2) on Z/12",
            [],
            lambda: _factors(subquotient(mult(r12, 2), mult(r12, 6)).module),
            lambda: len(brute_force.kernel_elements(mult(r12, 6)))
            // len(brute_force.image_elements(mult(r12, 2))),
            1,
        ),
        Fixture(
            "tensor-4-6",
            "Z/4 (x) Z/6 over Z/12",
            [2],
            lambda: _factors(
                tensor_modules(FinModule.cyclic(z12, 4), FinModule.cyclic(z12, 6)).module
            ),
            lambda: brute_force.tensor_order(
                FinModule.cyclic(z12, 4), FinModule.cyclic(z12, 6)
            ),
            2,
        ),
        Fixture(
            "hom-4-6",
            "Hom(Z/4, Z/6) over Z/12",
            [2],
            lambda: _factors(
                hom_module(FinModule.cyclic(z12, 4), FinModule.cyclic(z12, 6)).module
            ),
            lambda: brute_force.hom_count(
                FinModule.cyclic(z12, 4), FinModule.cyclic(z12, 6)
            ),
            2,
        ),
        Fixture(
            "torsion-6-at-2",
            "2-primary part of Z/6 over Z/12",
            [2],
            lambda: _factors(
                torsion_part(FinModule.cyclic(z12, 6), SpecSubset(z12, frozenset([2]))).module
            ),
            lambda: len(brute_force.image_elements(mult(FinModule.cyclic(z12, 6), 9))),
            2,
        ),
        Fixture(
            "envelope-z2",
            "injective envelope of Z/2 over Z/12",
            [4],
            lambda: _factors(injective_envelope(FinModule.cyclic(z12, 2)).module),
            lambda: brute_force.is_essential(
                injective_envelope(FinModule.cyclic(z12, 2)).embedding
            ),
            True,
        ),
        Fixture(
            "koszul-H0",
            "cohomology of K(2) over Z/12",
            {-1: [2], 0: [2]},
            lambda: _cohomology_factors(koszul(z12, [2])),
            lambda: brute_force.cohomology_orders(koszul(z12, [2])),
            {-1: 2, 0: 2},
        ),
        Fixture(
            "koszul-2-3",
            "K(2,3) over Z/12 is acyclic",
            {},
            lambda: _cohomology_factors(koszul(z12, [2, 3])),
        ),
        Fixture(
            "cech-H0",
            "cohomology of Cech~(2) over Z/12",
            {0: [4]},
            lambda: _cohomology_factors(cech_tilde(z12, [2])),
            lambda: brute_force.cohomology_orders(cech_tilde(z12, [2])),
            {0: 4, 1: 1},
        ),
        Fixture(
            "hom-derived-koszul",
            "Hom_D(K(2), Z/2[0]) over Z/12",
            [2],
            lambda: _factors(hom_derived(K2, z2_12, 0)),
            lambda: brute_force.cohomology_orders(hom_complex(K2, z2_12))[0],
            2,
        ),
        Fixture(
            "hom-derived-periodic",
            "Hom_D(Z/2, Z/2[3]) over Z/4",
            [2],
            lambda: _factors(hom_derived(z2_4, z2_4, 3)),
            lambda: brute_force.cohomology_orders(
                hom_complex(projective_replacement(z2_4, -5).complex, z2_4)
            )[3],
            2,
        ),
        Fixture(
            "tower-nilpotent",
            "colim of Z/4 --2--> Z/4 --2--> Z/4 over Z/12",
            [],
            lambda: _factors(
                tower_colimit(
                    [FinModule.cyclic(z12, 4)] * 3,
                    [mult(FinModule.cyclic(z12, 4), 2)] * 2,
                )
            ),
        ),
        Fixture(
            "tower-unit",
            "colim of Z/4 --3--> Z/4 --3--> Z/4 over Z/12",
            [4],
            lambda: _factors(
                tower_colimit(
                    [FinModule.cyclic(z12, 4)] * 3,
                    [mult(FinModule.cyclic(z12, 4), 3)] * 2,
                )
            ),
            lambda: len(brute_force.image_elements(mult(FinModule.cyclic(z12, 4), 9))),
            4,
        ),
        Fixture(
            "tower-constant",
            "colim of the one-step identity tower on Z/4",
            [4],
            lambda: _factors(
                tower_colimit(
                    [FinModule.cyclic(z12, 4)] * 2,
                    [ModuleMap.identity(FinModule.cyclic(z12, 4))],
                )
            ),
        ),
        Fixture(
            "member-z3",
            "Z/3[-1] lies in the coaisle of {2:1, 3:0}",
            [True, True, True],
            lambda: [
                v.member for v in coaisle_verdicts(stalk(FinModule.cyclic(z12, 3), 1), phi)
            ],
            lambda: brute_force.coaisle_member(stalk(FinModule.cyclic(z12, 3), 1), phi),
            True,
        ),
        Fixture(
            "member-r",
            "R[0] does not lie in the coaisle of {2:1, 3:0}",
            [False, False, False],
            lambda: [v.member for v in coaisle_verdicts(stalk(r12, 0), phi)],
            lambda: brute_force.coaisle_member(stalk(r12, 0), phi),
            False,
        ),
        Fixture(
            "member-koszul3",
            "K(3)[-1] leaves the coaisle of {2:1, 3:0} at (3, 0)",
            (False, (3, 0)),
            reduced_koszul3,
            lambda: brute_force.coaisle_member(shift(K3, -1), phi),
            False,
        ),
        Fixture(
            "trunc-split",
            "truncation of Z/12[-1] for {2:1, 3:0}",
            {"u": {1: [4]}, "v": {1: [3]}},
            trunc_split,
            trunc_split_by_count,
            [True, True, {1: 4}, {1: 3}],
        ),
        Fixture(
            "trunc-koszul3",
            "truncation of K(3)[-1] for {2:1, 3:0}",
            {"u": {0: [3]}, "v": {1: [3]}},
            trunc_koszul3,
        ),
        Fixture(
            "soft-trunc-koszul",
            "tau<=0 of K(2)[-1] over Z/12",
            {0: [2]},
            lambda: _cohomology_factors(low_koszul2()),
            lambda: _orders(low_koszul2()),
            {0: 2},
        ),
        Fixture(
            "classify",
            "filtration generated by K(2)[-1] and K(3)[0]",
            ((2, 1), (3, 0)),
            lambda: filtration_of_generators(z12, [shift(K2, -1), K3]).cutoffs,
            lambda: brute_force.support_cutoffs(z12, [shift(K2, -1), K3]),
            ((2, 1), (3, 0)),
        ),
        Fixture(
            "classify-empty",
            "the empty generator list over Z/30",
            ((2, -math.inf), (3, -math.inf), (5, -math.inf)),
            lambda: filtration_of_generators(z30, []).cutoffs,
        ),
        Fixture(
            "generators",
            "generators of {2:1, 3:0} are K(2)[-1] and K(3)[0]",
            [{0: [2], 1: [2]}, {-1: [3], 0: [3]}],
            lambda: [_cohomology_factors(S) for S in generators_of(phi)],
            lambda: [_orders(S) for S in generators_of(phi)],
            [{0: 2, 1: 2}, {-1: 3, 0: 3}],
        ),
        Fixture(
            "enumerate-counts",
            "filtrations of Z/12 on [-1,1] with -inf, and on [-2,2] without",
            [16, 25],
            lambda: [
                len(enumerate_filtrations(z12, (-1, 1), minus_infinity=True)),
                len(enumerate_filtrations(z12, (-2, 2))),
            ],
        ),
        Fixture(
            "stalk-hom",
            "Hom_K(K(2), Z/4[0]) against Hom(H^0, Z/4) over Z/12",
            ([2], [2], True),
            stalk_check,
            lambda: brute_force.hom_count(FinModule.cyclic(z12, 2), FinModule.cyclic(z12, 4)),
            2,
        ),
        Fixture(
            "coresolve-periodic",
            "coresolution of Z/2[0] over Z/4 for {2:-1}",
            [([4], 0), ([4], 1), ([4], 2)],
            coresolution_ladder,
            coresolution_by_count,
            [True, True, True],
        ),
        Fixture(
            "localize-away",
            "Z/12 with 2, 1 and 6 inverted",
            [3, 12, 1],
            lambda: [localize_away(z12, x).modulus for x in (2, 1, 6)],
        ),
        Fixture(
            "crt-36",
            "CRT idempotents of Z/36",
            {2: 9, 3: 28},
            lambda: crt_idempotents(z36),
        ),
        Fixture(
            "cone-mult2",
            "cone of 2 : R[0] -> R[0] over Z/12",
            {-1: [2], 0: [2]},
            lambda: _cohomology_factors(cone_of_two()),
            lambda: _orders(cone_of_two()),
            {-1: 2, 0: 2},
        ),
        Fixture(
            "hom-complex-koszul",
            "Hom.(K(2), Z/2[0]) over Z/12",
            {0: [2], 1: [2]},
            lambda: _cohomology_factors(hom_complex(K2, z2_12)),
            lambda: _orders(hom_complex(K2, z2_12)),
            {0: 2, 1: 2},
        ),
        Fixture(
            "replacement-z2",
            "free replacement of Z/2 over Z/4 down to degree -2",
            [True, [2], []],
            replacement_of_z2,
            replacement_by_count,
            [2, 1],
        ),
        Fixture(
            "cech-triangles",
            "Cech triangles of the ideals (2), (1) and (12) over Z/12",
            {2: ({0: [4]}, {0: [3]}), 1: ({}, {0: [12]}), 12: ({0: [12]}, {})},
            triangles,
        ),
        Fixture(
            "compact-dual-koszul",
            "K(2)* over Z/12",
            {0: [2], 1: [2]},
            lambda: _cohomology_factors(compact_dual(K2)),
            lambda: _orders(compact_dual(K2)),
            {0: 2, 1: 2},
        ),
        Fixture(
            "compact-dual-shift",
            "(K(2)[-1])* over Z/12",
            {-1: [2], 0: [2]},
            lambda: _cohomology_factors(compact_dual(shift(K2, -1))),
            lambda: _orders(compact_dual(shift(K2, -1))),
            {-1: 2, 0: 2},
        ),
    ]
