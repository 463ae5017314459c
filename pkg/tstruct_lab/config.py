from dataclasses import dataclass, fields
from typing import Any, Dict, Mapping, Tuple

from .errors import ParseError


class LabConfig:
    """Configuration settings for the t-structure laboratory."""

    # Rings exercised by the default suite: single-prime non-reduced,
    # two-prime mixed, three-prime square-free, two-prime deeper nilpotency
    DEFAULT_RINGS = (4, 12, 30, 36)

    # Cutoff window for enumerated filtrations
    DEFAULT_WINDOW = (-2, 2)

    # Corpus sizes per ring
    ORACLE_CORPUS_SIZE = 500
    TRUNCATION_CORPUS_SIZE = 500
    STALK_CORPUS_SIZE = 200
    CORESOLUTION_CORPUS_SIZE = 200
    COLIMIT_CORPUS_SIZE = 100
    RIGIDITY_CORPUS_SIZE = 100

    DEFAULT_SEED = 1
    CORESOLUTION_DEPTH = 5

    # Random complexes
    RANDOM_DEGREE_RANGE = (-1, 1)
    RANDOM_MAX_FACTORS = 2
    RANDOM_ZERO_ENTRY_RATE = 0.3

    # Largest number of summands in the projectives fed to Hom(P, -)
    PROJECTIVE_MAX_SUMMANDS = 3

    # Element enumeration only runs on complexes whose terms are this small
    BRUTE_FORCE_MAX_ORDER = 4096

    # Extra degrees below the analytic floor when replacing by free complexes
    PROJECTIVE_MARGIN = 2

    # Check U*A*V == D, unimodularity and the divisibility chain on every call
    VERIFY_SMITH = True

    # Profiles of complexes are cached across filtration sweeps
    PROFILE_CACHE_SIZE = 8192

    # JSON documents
    SCHEMA_VERSION = 1
    TOOL_NAME = "tstruct-lab"


PROPERTY_FAMILIES = (
    "koszul",
    "oracle_agreement",
    "round_trip",
    "minimality",
    "generation",
    "truncation",
    "stalk_hom",
    "coresolution",
    "cech_colimit",
    "co_t_duality",
    "rigidity",
    "injective_hom",
    "orthogonality",
    "adjunction",
    "kunneth",
    "compact_dual",
)


@dataclass(frozen=True)
class SuiteConfig:
    """One suite run. Fields left out of a config document fall back to LabConfig."""

    rings: Tuple[int, ...] = LabConfig.DEFAULT_RINGS
    window: Tuple[int, int] = LabConfig.DEFAULT_WINDOW
    seed: int = LabConfig.DEFAULT_SEED
    properties: Tuple[str, ...] = PROPERTY_FAMILIES
    oracle_corpus: int = LabConfig.ORACLE_CORPUS_SIZE
    truncation_corpus: int = LabConfig.TRUNCATION_CORPUS_SIZE
    stalk_corpus: int = LabConfig.STALK_CORPUS_SIZE
    coresolution_corpus: int = LabConfig.CORESOLUTION_CORPUS_SIZE
    colimit_corpus: int = LabConfig.COLIMIT_CORPUS_SIZE
    rigidity_corpus: int = LabConfig.RIGIDITY_CORPUS_SIZE
    depth: int = LabConfig.CORESOLUTION_DEPTH
    jobs: int = 1

    def __post_init__(self):
        unknown = [p for p in self.properties if p not in PROPERTY_FAMILIES]
        if unknown:
            raise ParseError(f"unknown property families {unknown}", "/properties")
        a, b = self.window
        if a > b:
            raise ParseError(f"empty window {self.window}", "/window")
        if self.jobs < 1:
            raise ParseError("jobs must be at least 1", "/jobs")

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "SuiteConfig":
        """
        Build a config from a JSON document.

        Raises:
            ParseError: on unknown keys or ill-typed values
        """
        if not isinstance(doc, Mapping):
            raise ParseError("suite config must be an object")
        known = {f.name: f for f in fields(cls)}
        values: Dict[str, Any] = {}
        for key, value in doc.items():
            if key == "schema":
                if value != LabConfig.SCHEMA_VERSION:
                    raise ParseError(f"unsupported schema {value!r}", "/schema")
                continue
            if key not in known:
                raise ParseError(f"unknown config key '{key}'", f"/{key}")
            if key in ("rings", "properties", "window"):
                if not isinstance(value, list):
                    raise ParseError(f"{key} must be a list", f"/{key}")
                value = tuple(value)
            elif not isinstance(value, int) or isinstance(value, bool):
                raise ParseError(f"{key} must be an integer", f"/{key}")
            values[key] = value
        if "window" in values and len(values["window"]) != 2:
            raise ParseError("window must have two entries", "/window")
        return cls(**values)

    def as_dict(self) -> Dict[str, Any]:
        doc = {f.name: getattr(self, f.name) for f in fields(self)}
        for key in ("rings", "properties", "window"):
            doc[key] = list(doc[key])
        return doc
