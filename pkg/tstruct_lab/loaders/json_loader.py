"""
JSON documents <-> typed laboratory values.

Every parse error carries a JSON pointer to the offending field. Complexes
may also be written with shorthand strings, expanded before parsing:

    stalk(d,[n])      Z/d concentrated in degree n
    koszul(d)[k]      K(d)[k]   (also K(d)[k])
    cech(d)[k]        Cech~(d)[k]
    R[k]              the free module of rank one, shifted
"""

import json
import re
import sys
from pathlib import Path
from typing import Any, Dict, List, Mapping, Union

from ..core.complexes import (
    Complex,
    GradedModule,
    cech_tilde,
    direct_sum,
    koszul,
    make_complex,
    shift,
    stalk,
)
from ..core.modules import FinModule, ModuleMap
from ..core.ring import CyclicRing, make_ring
from ..core.tstructures import ThomasonFiltration, format_cutoff, make_filtration
from ..errors import DomainError, ParseError
from ..managers.log_manager import logger

_SUGAR = re.compile(
    r"^\s*(?P<name>stalk|koszul|K|cech|R)"
    r"\s*(?:\((?P<args>[^()]*)\))?"
    r"\s*(?:\[(?P<shift>[+-]?\d+)\])?\s*$"
)


class DocumentLoader:
    """Parses and serializes the JSON documents used on the command line."""

    @staticmethod
    def read(source: str) -> Any:
        """
        Load a JSON document from a path, or from stdin when source is "-".

        Raises:
            ParseError: if the input is unreadable or not JSON
        """
        try:
            if source == "-":
                text = sys.stdin.read()
            else:
                text = Path(source).read_text()
        except OSError as exc:
            raise ParseError(f"cannot read input {source!r}: {exc}") from exc
        logger.debug(f"Read {len(text)} bytes from {source}")
        return DocumentLoader.loads(text)

    @staticmethod
    def loads(text: str) -> Any:
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg} (line {exc.lineno})") from exc

    # Parsing

    @staticmethod
    def parse_ring(doc: Any, pointer: str = "") -> CyclicRing:
        if isinstance(doc, int) and not isinstance(doc, bool):
            modulus = doc
            at = pointer
        else:
            modulus = _field(doc, "modulus", pointer)
            at = f"{pointer}/modulus"
        try:
            return make_ring(modulus)
        except DomainError as exc:
            raise ParseError(str(exc), at) from exc

    @staticmethod
    def parse_module(ring: CyclicRing, doc: Any, pointer: str = "") -> FinModule:
        factors = _field(doc, "factors", pointer)
        if not isinstance(factors, list) or not all(_is_int(d) for d in factors):
            raise ParseError("factors must be a list of integers", f"{pointer}/factors")
        try:
            return FinModule(ring, tuple(factors))
        except DomainError as exc:
            raise ParseError(str(exc), f"{pointer}/factors") from exc

    @staticmethod
    def parse_map(
        source: FinModule, target: FinModule, doc: Any, pointer: str = ""
    ) -> ModuleMap:
        matrix = _field(doc, "matrix", pointer)
        if not isinstance(matrix, list) or not all(
            isinstance(row, list) and all(_is_int(a) for a in row) for row in matrix
        ):
            raise ParseError("matrix must be a list of integer rows", f"{pointer}/matrix")
        try:
            return ModuleMap(source, target, tuple(tuple(row) for row in matrix))
        except DomainError as exc:
            raise ParseError(str(exc), f"{pointer}/matrix") from exc

    @staticmethod
    def parse_complex(ring: CyclicRing, doc: Any, pointer: str = "") -> Complex:
        """A complex literal or a shorthand string."""
        if isinstance(doc, str):
            return DocumentLoader.expand_sugar(ring, doc, pointer)
        low = _field(doc, "min_degree", pointer)
        if not _is_int(low):
            raise ParseError("min_degree must be an integer", f"{pointer}/min_degree")
        raw_modules = _field(doc, "modules", pointer)
        if not isinstance(raw_modules, list):
            raise ParseError("modules must be a list", f"{pointer}/modules")
        modules = [
            DocumentLoader.parse_module(ring, m, f"{pointer}/modules/{i}")
            for i, m in enumerate(raw_modules)
        ]
        raw_diffs = doc.get("differentials", []) if isinstance(doc, Mapping) else []
        if not isinstance(raw_diffs, list) or len(raw_diffs) != max(len(modules) - 1, 0):
            raise ParseError(
                f"expected {max(len(modules) - 1, 0)} differentials",
                f"{pointer}/differentials",
            )
        diffs = [
            DocumentLoader.parse_map(
                modules[i], modules[i + 1], d, f"{pointer}/differentials/{i}"
            )
            for i, d in enumerate(raw_diffs)
        ]
        try:
            return make_complex(ring, low, modules, diffs)
        except DomainError as exc:
            raise ParseError(str(exc), f"{pointer}/differentials") from exc

    @staticmethod
    def expand_sugar(ring: CyclicRing, text: str, pointer: str = "") -> Complex:
        """Expand a shorthand complex string."""
        match = _SUGAR.match(text)
        if not match:
            raise ParseError(f"unrecognized complex shorthand {text!r}", pointer)
        name, args, k = match.group("name"), match.group("args"), match.group("shift")
        k = int(k) if k else 0
        try:
            if name == "R":
                return shift(stalk(FinModule.free(ring), 0), k)
            if args is None:
                raise ParseError(f"{name} needs arguments", pointer)
            if name == "stalk":
                return shift(_stalk_sugar(ring, args, pointer), k)
            elements = [int(a) for a in args.split(",") if a.strip()]
            if name in ("koszul", "K"):
                return shift(koszul(ring, elements), k)
            return shift(cech_tilde(ring, elements), k)
        except ValueError as exc:
            raise ParseError(f"bad shorthand {text!r}: {exc}", pointer) from exc

    @staticmethod
    def parse_complex_list(ring: CyclicRing, doc: Any, pointer: str = "") -> List[Complex]:
        """A JSON list of complexes, or a bracketed list of shorthand strings."""
        if isinstance(doc, str):
            items = _split_top_level(doc.strip())
        elif isinstance(doc, list):
            items = doc
        else:
            raise ParseError("generators must be a list", pointer)
        return [
            DocumentLoader.parse_complex(ring, item, f"{pointer}/{i}")
            for i, item in enumerate(items)
        ]

    @staticmethod
    def parse_filtration(ring: CyclicRing, doc: Any, pointer: str = "") -> ThomasonFiltration:
        if not isinstance(doc, Mapping):
            raise ParseError("filtration must be an object", pointer)
        try:
            if "cutoffs" in doc:
                raw = doc["cutoffs"]
                if isinstance(raw, Mapping):
                    return make_filtration(ring, {"cutoffs": raw})
                if not isinstance(raw, list):
                    raise ParseError("cutoffs must be a list", f"{pointer}/cutoffs")
                cutoffs = {}
                for i, entry in enumerate(raw):
                    at = f"{pointer}/cutoffs/{i}"
                    cutoffs[_field(entry, "prime", at)] = _field(entry, "top", at)
                return make_filtration(ring, {"cutoffs": cutoffs})
            return make_filtration(ring, doc)
        except DomainError as exc:
            raise ParseError(str(exc), pointer) from exc
        except (TypeError, ValueError) as exc:
            raise ParseError(f"malformed filtration: {exc}", pointer) from exc

    # Serialization

    @staticmethod
    def serialize_ring(ring: CyclicRing) -> Dict:
        return {"modulus": ring.modulus}

    @staticmethod
    def serialize_module(module: FinModule) -> Dict:
        return {"factors": list(module.factors)}

    @staticmethod
    def serialize_map(f: ModuleMap) -> Dict:
        return {
            "source": DocumentLoader.serialize_module(f.source),
            "target": DocumentLoader.serialize_module(f.target),
            "matrix": [list(row) for row in f.matrix],
        }

    @staticmethod
    def serialize_complex(X: Complex) -> Dict:
        return {
            "min_degree": X.min_degree,
            "modules": [DocumentLoader.serialize_module(m) for m in X.coords],
            "differentials": [{"matrix": [list(r) for r in d.matrix]} for d in X.diffs],
        }

    @staticmethod
    def serialize_filtration(phi: ThomasonFiltration) -> Dict:
        return {
            "cutoffs": [
                {"prime": p, "top": DocumentLoader.serialize_cutoff(c)} for p, c in phi.cutoffs
            ]
        }

    @staticmethod
    def serialize_cutoff(value) -> Union[int, str]:
        return value if isinstance(value, int) else format_cutoff(value)

    @staticmethod
    def serialize_graded(h: GradedModule) -> List[Dict]:
        return [
            {"degree": k, "module": DocumentLoader.serialize_module(m)}
            for k, m in h.entries
        ]


def _stalk_sugar(ring: CyclicRing, args: str, pointer: str) -> Complex:
    match = re.match(r"^\s*([+-]?\d+)\s*(?:,\s*\[([^\]]*)\])?\s*$", args)
    if not match:
        raise ParseError(f"bad stalk arguments {args!r}", pointer)
    d = int(match.group(1))
    degrees = [int(t) for t in (match.group(2) or "0").split(",") if t.strip()]
    module = FinModule.cyclic(ring, d)
    try:
        return direct_sum(*(stalk(module, n) for n in degrees))
    except DomainError as exc:
        raise ParseError(str(exc), pointer) from exc


def _split_top_level(text: str) -> List[str]:
    """Split '[a, b(c, d)[1]]' at commas outside brackets."""
    if text.startswith("[") and text.endswith("]"):
        text = text[1:-1]
    items, depth, current = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            items.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
    tail = "".join(current).strip()
    if tail:
        items.append(tail)
    return items


def _field(doc: Any, name: str, pointer: str) -> Any:
    if not isinstance(doc, Mapping):
        raise ParseError("expected an object", pointer)
    if name not in doc:
        raise ParseError(f"missing field '{name}'", f"{pointer}/{name}")
    return doc[name]


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)
