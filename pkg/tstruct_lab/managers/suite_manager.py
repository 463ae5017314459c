"""
Suite runner: executes property families over the configured rings and
aggregates the outcome into a versioned report.
"""

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from .. import __version__
from ..config import LabConfig, SuiteConfig
from ..core.ring import make_ring
from ..lab.properties import FAMILIES
from .log_manager import logger


@dataclass(frozen=True)
class FamilyTally:
    family: str
    modulus: int
    run: int
    passed: int
    exhibits: Tuple[Dict, ...] = ()

    @property
    def failed(self) -> int:
        return self.run - self.passed


@dataclass
class SuiteReport:
    """Counts, failure exhibits and the inputs needed to reproduce them."""

    seed: int
    rings: List[int]
    config: Dict
    tallies: List[FamilyTally] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def run(self) -> int:
        return sum(t.run for t in self.tallies)

    @property
    def passed(self) -> int:
        return sum(t.passed for t in self.tallies)

    @property
    def failed(self) -> int:
        return self.run - self.passed

    @property
    def exhibits(self) -> List[Dict]:
        return [e for t in self.tallies for e in t.exhibits]

    def family_counts(self) -> Dict[str, Dict[str, int]]:
        counts: Dict[str, Dict[str, int]] = {}
        for t in self.tallies:
            entry = counts.setdefault(t.family, {"run": 0, "passed": 0, "failed": 0})
            entry["run"] += t.run
            entry["passed"] += t.passed
            entry["failed"] += t.failed
        return counts

    def to_dict(self) -> Dict:
        return {
            "schema": LabConfig.SCHEMA_VERSION,
            "tool": LabConfig.TOOL_NAME,
            "version": __version__,
            "seed": self.seed,
            "rings": [f"Z/{n}" for n in self.rings],
            "config": self.config,
            "counts": {"run": self.run, "passed": self.passed, "failed": self.failed},
            "families": self.family_counts(),
            "exhibits": self.exhibits,
            "wall_time": round(self.wall_time, 3),
        }


def run_family(name: str, modulus: int, config: SuiteConfig) -> FamilyTally:
    """Run one family over one ring; top-level so worker processes can pickle it."""
    ring = make_ring(modulus)
    run = passed = 0
    exhibits = []
    for case in FAMILIES[name](ring, config):
        run += 1
        if case.passed:
            passed += 1
        else:
            exhibits.append(case.exhibit)
    return FamilyTally(name, modulus, run, passed, tuple(exhibits))


def run_suite(config: SuiteConfig) -> SuiteReport:
    """
    Execute the selected property families.

    Failing cases are recorded as exhibits; only a malformed config raises.

    Args:
        config: Rings, window, corpus sizes, seed and family selection

    Returns:
        SuiteReport ordered by (family, ring), independent of the job count
    """
    tasks = [(name, n) for name in config.properties for n in config.rings]
    logger.info(
        f"Running {len(config.properties)} families over rings {list(config.rings)} "
        f"(seed {config.seed}, {config.jobs} job(s))"
    )
    start = time.perf_counter()
    tallies: List[FamilyTally] = []
    if config.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            futures = [pool.submit(run_family, name, n, config) for name, n in tasks]
            for (name, n), future in zip(tasks, futures):
                tallies.append(future.result())
                _log_tally(tallies[-1])
    else:
        for name, n in tasks:
            tallies.append(run_family(name, n, config))
            _log_tally(tallies[-1])

    report = SuiteReport(
        seed=config.seed,
        rings=list(config.rings),
        config=config.as_dict(),
        tallies=tallies,
        wall_time=time.perf_counter() - start,
    )
    if report.failed:
        logger.error(f"Suite finished with {report.failed} failure(s) out of {report.run}")
    else:
        logger.info(f"Suite passed: {report.run} cases in {report.wall_time:.1f}s")
    return report


def _log_tally(tally: FamilyTally):
    message = f"{tally.family} over Z/{tally.modulus}: {tally.passed}/{tally.run} passed"
    if tally.failed:
        logger.warning(message)
    else:
        logger.info(message)
