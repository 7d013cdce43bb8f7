"""
Check reports - the single currency every verification returns

Each row names what was checked, where the expected value comes from and how
the computed value compares. Rows serialize to the JSON schema
{"check", "citation", "expected", "provenance", "computed", "status", "ms"}
plus an optional "note".
"""
from contextlib import contextmanager
from datetime import datetime, timezone
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional
import json
import logging
import math
import time

import pandas as pd
from pydantic import BaseModel, Field, field_serializer

logger = logging.getLogger("sigcy.report")


class Status(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    FLAGGED = "flagged-discrepancy"
    SKIPPED = "skipped"


class Provenance(str, Enum):
    PAPER = "PAPER"
    TRIVIAL = "TRIVIAL"
    DERIVED = "DERIVED"


def _plain(value: Any) -> Any:
    """JSON-friendly view of computed values (Fractions, tuples, numpy scalars)"""
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else str(value)
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value, key=str) if isinstance(value, (set, frozenset)) else value
        return [_plain(v) for v in items]
    if hasattr(value, "item") and callable(value.item):
        return value.item()
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


class CheckReport(BaseModel):
    """One verification row"""
    check: str
    citation: str
    expected: Any = None
    provenance: Provenance = Provenance.DERIVED
    computed: Any = None
    status: Status
    ms: int = 0
    note: Optional[str] = None

    @field_serializer("expected", "computed")
    def _serialize_value(self, value: Any) -> Any:
        return _plain(value)

    @property
    def failed(self) -> bool:
        return self.status == Status.FAIL

    @property
    def passed(self) -> bool:
        return self.status == Status.PASS

    def row(self) -> Dict[str, Any]:
        data = self.model_dump(mode="json")
        if data.get("note") is None:
            data.pop("note", None)
        return data


def values_match(expected: Any, computed: Any, tol: Optional[float] = None) -> bool:
    """Exact equality, or |computed - expected| <= tol for numerics"""
    if tol is None:
        return expected == computed
    if isinstance(expected, (list, tuple)):
        return len(expected) == len(computed) and all(
            values_match(e, c, tol) for e, c in zip(expected, computed))
    try:
        return math.isfinite(abs(computed - expected)) and abs(computed - expected) <= tol
    except TypeError:
        return expected == computed


def compare(check: str, citation: str, expected: Any, computed: Any,
            provenance: Provenance = Provenance.DERIVED, tol: Optional[float] = None,
            flag_on_mismatch: bool = False, note: Optional[str] = None,
            ms: int = 0) -> CheckReport:
    """
    Build a row from an expected/computed pair.

    Args:
        flag_on_mismatch: a mismatch against a known misprint is reported as
            flagged-discrepancy instead of fail

    Returns:
        CheckReport with status pass, fail or flagged-discrepancy
    """
    if values_match(expected, computed, tol):
        status = Status.PASS
    else:
        status = Status.FLAGGED if flag_on_mismatch else Status.FAIL
    report = CheckReport(check=check, citation=citation, expected=expected,
                         provenance=provenance, computed=computed, status=status, ms=ms,
                         note=note)
    _log_row(report)
    return report


def flagged(check: str, citation: str, expected: Any, computed: Any,
            provenance: Provenance = Provenance.PAPER, note: Optional[str] = None,
            ms: int = 0) -> CheckReport:
    """A row recording a disagreement with a stated value that does not fail the run"""
    report = CheckReport(check=check, citation=citation, expected=expected,
                         provenance=provenance, computed=computed, status=Status.FLAGGED,
                         ms=ms, note=note)
    _log_row(report)
    return report


def info(check: str, citation: str, computed: Any, note: str, ms: int = 0) -> CheckReport:
    """Informational row: a value is reported without an asserted expectation"""
    report = CheckReport(check=check, citation=citation, computed=computed,
                         status=Status.SKIPPED, note=note, ms=ms)
    _log_row(report)
    return report


def failure(check: str, citation: str, error: BaseException, ms: int = 0) -> CheckReport:
    """Row for a check that raised"""
    report = CheckReport(check=check, citation=citation, status=Status.FAIL, ms=ms,
                         note=f"{type(error).__name__}: {error}")
    _log_row(report)
    return report


def _log_row(report: CheckReport) -> None:
    if report.status == Status.FAIL:
        logger.error(f"FAIL {report.check}: expected {report.expected!r}, "
                     f"computed {report.computed!r} {report.note or ''}")
    elif report.status == Status.FLAGGED:
        logger.warning(f"FLAGGED {report.check}: {report.note or ''}")
    else:
        logger.debug(f"{report.status.value} {report.check}")


class CheckTimer:
    """Wall-clock milliseconds for a block"""

    def __init__(self):
        self.start = time.perf_counter()

    @property
    def ms(self) -> int:
        return int(round((time.perf_counter() - self.start) * 1000))


@contextmanager
def timed() -> Iterator[CheckTimer]:
    yield CheckTimer()


def stamp(rows: List[CheckReport], ms: int) -> List[CheckReport]:
    """Attach an elapsed time to rows that do not carry one yet"""
    for row in rows:
        if not row.ms:
            row.ms = ms
    return rows


class RunReport(BaseModel):
    """Consolidated result of a run"""
    version: str
    code_version: str
    seed: int
    created_at: str = Field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))
    config: Dict[str, Any] = Field(default_factory=dict)
    checks: List[CheckReport] = Field(default_factory=list)

    def extend(self, rows: List[CheckReport]) -> None:
        self.checks.extend(rows)

    @property
    def summary(self) -> Dict[str, int]:
        counts = {status.value: 0 for status in Status}
        for row in self.checks:
            counts[row.status.value] += 1
        return counts

    @property
    def exit_code(self) -> int:
        return 1 if any(row.failed for row in self.checks) else 0

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([row.row() for row in self.checks],
                            columns=["check", "status", "expected", "computed", "ms"])

    def to_json(self) -> str:
        payload = {
            "version": self.version,
            "code_version": self.code_version,
            "seed": self.seed,
            "created_at": self.created_at,
            "config": _plain(self.config),
            "summary": self.summary,
            "checks": [row.row() for row in self.checks],
        }
        return json.dumps(payload, indent=2)

    def write(self, path: str) -> Path:
        out = Path(path)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(self.to_json())
        logger.info(f"Report written to {out}")
        return out
