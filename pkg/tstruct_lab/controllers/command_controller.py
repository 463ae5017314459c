"""
Command controller: resolves the inputs of a command, runs the library
operation behind its verb and wraps the result in an output document.
"""

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .. import __version__
from ..config import LabConfig, SuiteConfig
from ..core.complexes import (
    Complex,
    cech_tilde,
    cech_triangle,
    cohomology,
    koszul,
)
from ..core.ring import CyclicRing, make_ideal
from ..core.tstructures import (
    ThomasonFiltration,
    classify_boundedness,
    coaisle_verdicts,
    coresolve_in_coaisle,
    filtration_of_generators,
    generators_of,
    in_aisle,
    in_co_t_coaisle,
    in_co_t_coaisle_hom,
    intermediate_window,
    truncate_t,
    Verdict,
)
from ..errors import DomainError, LabError, OracleDisagreement, ParseError, VerificationError
from ..lab.fixtures import run_fixture, worked_examples
from ..lab.generators import enumerate_filtrations
from ..loaders.json_loader import DocumentLoader
from ..managers.log_manager import logger
from ..managers.suite_manager import run_suite

VERBS = (
    "koszul",
    "cech",
    "cohomology",
    "member",
    "truncate",
    "classify",
    "generate",
    "resolve",
    "enumerate",
    "selftest",
)

SIDES = ("aisle", "coaisle", "co-t", "all")

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_DEFECT = 3


@dataclass
class Command:
    """
    A parsed command line.

    options holds flag values as given (strings or ints); a document read
    with --in supplies any input the flags leave out.
    """

    verb: str
    ring: Optional[int] = None
    options: Dict[str, Any] = field(default_factory=dict)
    document: Optional[Dict[str, Any]] = None


class CommandController:
    """Dispatches commands to library operations."""

    def __init__(self, suite_defaults: Optional[SuiteConfig] = None):
        self.suite_defaults = suite_defaults or SuiteConfig()
        self.handlers = {verb: getattr(self, f"_{verb}") for verb in VERBS}

    def dispatch(self, command: Command) -> Tuple[int, Dict[str, Any]]:
        """
        Run a command.

        Returns:
            (exit status, output document). 0 on success, 2 on bad input or a
            domain error, 3 when an internal cross-check fails.
        """
        try:
            if command.verb not in self.handlers:
                raise ParseError(f"unknown verb '{command.verb}'", "/verb")
            status, body = self.handlers[command.verb](command)
        except (DomainError, ParseError) as exc:
            return self.reject(command, exc)
        except VerificationError as exc:
            logger.error(f"{command.verb}: internal check failed: {exc}")
            return EXIT_DEFECT, {**response_header(command), "error": _error_doc(exc)}
        return status, {**response_header(command), **body}

    def reject(self, command: Command, exc: LabError) -> Tuple[int, Dict[str, Any]]:
        """Error document for input that never reached a handler, or that a handler refused."""
        logger.error(f"{command.verb}: {exc}")
        return EXIT_DOMAIN, {**response_header(command), "error": _error_doc(exc)}

    # Input resolution

    def _raw(self, command: Command, name: str, required: bool = True) -> Any:
        value = command.options.get(name)
        if value is None and command.document is not None:
            value = command.document.get(name)
        if value is None and required:
            raise ParseError(f"missing input '{name}'", f"/{name}")
        return value

    def _ring(self, command: Command) -> CyclicRing:
        value = command.ring
        if value is None:
            value = self._raw(command, "ring")
        return DocumentLoader.parse_ring(value, "/ring")

    def _complex(self, command: Command, ring: CyclicRing) -> Complex:
        return DocumentLoader.parse_complex(
            ring, _maybe_json(self._raw(command, "complex")), "/complex"
        )

    def _filtration(self, command: Command, ring: CyclicRing) -> ThomasonFiltration:
        return DocumentLoader.parse_filtration(
            ring, _maybe_json(self._raw(command, "filtration")), "/filtration"
        )

    def _elements(self, command: Command) -> List[int]:
        raw = _maybe_json(self._raw(command, "elements"))
        if isinstance(raw, int) and not isinstance(raw, bool):
            return [raw]
        if isinstance(raw, str):
            try:
                return [int(t) for t in raw.replace(" ", "").split(",") if t]
            except ValueError as exc:
                raise ParseError(f"bad element list {raw!r}", "/elements") from exc
        if isinstance(raw, list) and all(isinstance(x, int) for x in raw):
            return list(raw)
        raise ParseError("elements must be a list of integers", "/elements")

    def _window(self, command: Command) -> Tuple[int, int]:
        raw = command.options.get("window")
        if raw is None:
            return self.suite_defaults.window
        return parse_window(raw)

    # Verbs

    def _koszul(self, command: Command):
        ring = self._ring(command)
        X = koszul(ring, self._elements(command))
        return EXIT_OK, _complex_report(X)

    def _cech(self, command: Command):
        ring = self._ring(command)
        elements = self._elements(command)
        X = cech_tilde(ring, elements)
        ideal_value = self._raw(command, "ideal", required=False)
        if ideal_value is not None:
            generator = _integer(ideal_value, "/ideal")
        else:
            generator = math.gcd(*elements, ring.modulus)
        triangle = cech_triangle(ring, make_ideal(ring, generator))
        body = _complex_report(X)
        body["triangle"] = {
            "ideal": make_ideal(ring, generator).generator,
            "tilde": _complex_report(triangle.tilde),
            "unit": _complex_report(triangle.unit),
            "cech": _complex_report(triangle.cech),
        }
        return EXIT_OK, body

    def _cohomology(self, command: Command):
        ring = self._ring(command)
        X = self._complex(command, ring)
        return EXIT_OK, _complex_report(X)

    def _member(self, command: Command):
        ring = self._ring(command)
        X = self._complex(command, ring)
        phi = self._filtration(command, ring)
        side = command.options.get("side") or "all"
        if side not in SIDES:
            raise ParseError(f"side must be one of {', '.join(SIDES)}", "/side")

        verdicts: List[Verdict] = []
        agreement = None
        if side in ("aisle", "all"):
            verdicts.append(in_aisle(X, phi))
        if side in ("coaisle", "all"):
            coaisle = coaisle_verdicts(X, phi)
            verdicts.extend(coaisle)
            agreement = len({v.member for v in coaisle}) == 1
        if side in ("co-t", "all"):
            verdicts.extend([in_co_t_coaisle(X, phi), in_co_t_coaisle_hom(X, phi)])

        body = {
            "filtration": DocumentLoader.serialize_filtration(phi),
            "verdicts": [_verdict_doc(v) for v in verdicts],
            "coaisle_agreement": agreement,
        }
        if agreement is False:
            detail = disagreement_detail(coaisle)
            logger.error(f"Coaisle oracles disagree on {X} for {phi}: {detail}")
            return EXIT_DEFECT, {**body, "error": _error_doc(OracleDisagreement(detail))}
        return EXIT_OK, body

    def _truncate(self, command: Command):
        ring = self._ring(command)
        X = self._complex(command, ring)
        phi = self._filtration(command, ring)
        t = truncate_t(X, phi)
        evidence = t.evidence
        return EXIT_OK, {
            "filtration": DocumentLoader.serialize_filtration(phi),
            "u_part": _complex_report(t.u_part),
            "v_part": _complex_report(t.v_part),
            "evidence": {
                "aisle": _verdict_doc(evidence.aisle),
                "coaisle": [_verdict_doc(v) for v in evidence.coaisle],
                "composite_zero": evidence.composite_zero,
                "cone_acyclic": evidence.cone_acyclic,
                "localization_agrees": evidence.localization_agrees,
                "verified": evidence.verified,
            },
        }

    def _classify(self, command: Command):
        ring = self._ring(command)
        gens = DocumentLoader.parse_complex_list(
            ring, _maybe_json(self._raw(command, "gens")), "/gens"
        )
        phi = filtration_of_generators(ring, gens)
        return EXIT_OK, {
            "filtration": DocumentLoader.serialize_filtration(phi),
            **_boundedness_doc(phi),
        }

    def _generate(self, command: Command):
        ring = self._ring(command)
        phi = self._filtration(command, ring)
        gens = generators_of(phi)
        shorthand = [
            f"K({p})[{-int(c)}]" for p, c in phi.cutoffs if c != -math.inf
        ]
        return EXIT_OK, {
            "filtration": DocumentLoader.serialize_filtration(phi),
            "generators": shorthand,
            "complexes": [DocumentLoader.serialize_complex(S) for S in gens],
        }

    def _resolve(self, command: Command):
        ring = self._ring(command)
        X = self._complex(command, ring)
        phi = self._filtration(command, ring)
        depth = command.options.get("depth")
        depth = LabConfig.CORESOLUTION_DEPTH if depth is None else _integer(depth, "/depth")
        res = coresolve_in_coaisle(X, phi, depth)
        return EXIT_OK, {
            "filtration": DocumentLoader.serialize_filtration(phi),
            "depth": depth,
            "steps": [
                {
                    "envelope": DocumentLoader.serialize_module(step.envelope),
                    "degree": step.degree,
                    "verdicts": [_verdict_doc(v) for v in step.verdicts],
                }
                for step in res.steps
            ],
            "terminated": res.terminated,
            "remainder": _complex_report(res.remainder),
        }

    def _enumerate(self, command: Command):
        ring = self._ring(command)
        window = self._window(command)
        filtrations = enumerate_filtrations(
            ring,
            window,
            minus_infinity=bool(command.options.get("minus_inf")),
            plus_infinity=bool(command.options.get("plus_inf")),
        )
        return EXIT_OK, {
            "window": list(window),
            "count": len(filtrations),
            "filtrations": [DocumentLoader.serialize_filtration(f) for f in filtrations],
        }

    def _selftest(self, command: Command):
        config = self.suite_defaults
        raw = self._raw(command, "config", required=False)
        if raw is not None:
            config = SuiteConfig.from_dict(raw if isinstance(raw, dict) else DocumentLoader.read(raw))
        overrides = {
            key: command.options[key]
            for key in ("seed", "jobs", "depth")
            if command.options.get(key) is not None
        }
        if command.options.get("window") is not None:
            overrides["window"] = parse_window(command.options["window"])
        if command.ring is not None:
            overrides["rings"] = (command.ring,)
        if overrides:
            config = SuiteConfig.from_dict({**config.as_dict(), **_listify(overrides)})

        fixtures = [run_fixture(f) for f in worked_examples()]
        failed_fixtures = [f.name for f in fixtures if not f.passed]
        for name in failed_fixtures:
            logger.error(f"Fixture {name} failed")
        report = run_suite(config)
        body = {
            "report": report.to_dict(),
            "fixtures": {
                "run": len(fixtures),
                "passed": len(fixtures) - len(failed_fixtures),
                "failed": failed_fixtures,
            },
        }
        status = EXIT_OK if not report.failed and not failed_fixtures else EXIT_DEFECT
        return status, body


def response_header(command: Command) -> Dict[str, Any]:
    return {
        "tool": LabConfig.TOOL_NAME,
        "version": __version__,
        "schema": LabConfig.SCHEMA_VERSION,
        "verb": command.verb,
        "input_hash": input_hash(command),
    }


def disagreement_detail(coaisle: Sequence[Verdict]) -> str:
    """The coaisle verdicts that broke ranks, against the majority answer."""
    votes = [v.member for v in coaisle]
    majority = votes.count(True) * 2 > len(votes)
    dissent = [v for v in coaisle if v.member != majority] or coaisle
    agreed = ", ".join(v.oracle.value for v in coaisle if v.member == majority)
    detail = ", ".join(f"{v.oracle.value}={v.member}" for v in dissent)
    return f"{detail} against {agreed}={majority}" if agreed else detail


def input_hash(command: Command) -> str:
    """sha256 over the verb, ring, flags and input document, in canonical JSON."""
    payload = {
        "verb": command.verb,
        "ring": command.ring,
        "options": command.options,
        "document": command.document,
    }
    text = json.dumps(payload, sort_keys=True, default=str, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def parse_window(raw: Any) -> Tuple[int, int]:
    """'a:b' or [a, b]."""
    try:
        if isinstance(raw, str):
            a, b = raw.split(":")
            return int(a), int(b)
        a, b = raw
        return int(a), int(b)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"window must look like a:b, got {raw!r}", "/window") from exc


def _integer(raw: Any, pointer: str) -> int:
    try:
        return int(raw)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"expected an integer, got {raw!r}", pointer) from exc


def _maybe_json(raw: Any) -> Any:
    """Decode strings that hold JSON objects or lists; leave shorthand as is."""
    if isinstance(raw, str) and raw.strip()[:1] in ("{", "["):
        try:
            return json.loads(raw)
        except json.JSONDecodeError:
            return raw
    return raw


def _listify(values: Dict[str, Any]) -> Dict[str, Any]:
    return {k: list(v) if isinstance(v, tuple) else v for k, v in values.items()}


def _complex_report(X: Complex) -> Dict:
    return {
        "complex": DocumentLoader.serialize_complex(X),
        "cohomology": DocumentLoader.serialize_graded(cohomology(X)),
    }


def _verdict_doc(v: Verdict) -> Dict:
    doc = {"oracle": v.oracle.value, "member": v.member}
    if v.witness is not None:
        doc["witness"] = [v.witness[0], DocumentLoader.serialize_cutoff(v.witness[1])]
    return doc


def _boundedness_doc(phi: ThomasonFiltration) -> Dict:
    report = classify_boundedness(phi)
    doc = {"boundedness": report.kind.value, "intermediate": report.is_intermediate}
    if report.is_intermediate:
        doc["window"] = list(intermediate_window(phi))
    return doc


def _error_doc(exc: LabError) -> Dict:
    doc = {"type": type(exc).__name__, "message": str(exc)}
    pointer = getattr(exc, "pointer", None)
    if pointer:
        doc["pointer"] = pointer
    return doc
