"""
Verification reports

Per-point residual records, the report container, and the JSON / CSV /
text codecs. JSON carries full binary64 values and no timestamps, so the
same run always serialises to the same bytes.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

SCHEMA_VERSION = "1"
CSV_HEADER = ["id", "point", "lhs", "rhs", "rel_residual", "pass"]


def format_point(point: Dict[str, Any]) -> str:
    """Stable text form of a parameter point, keys sorted."""
    parts = []
    for key in sorted(point):
        value = point[key]
        parts.append(f"{key}={value:g}" if isinstance(value, float) else f"{key}={value}")
    return ";".join(parts)


@dataclass
class PointResult:
    """One identity evaluated at one parameter point."""
    identity_id: str
    point: Dict[str, Any]
    lhs: float
    rhs: float
    lhs_err: float
    rhs_err: float
    abs_residual: float
    rel_residual: float
    tolerance: float
    passed: bool
    reason: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.identity_id,
            "point": dict(self.point),
            "lhs": _finite_or_none(self.lhs),
            "rhs": _finite_or_none(self.rhs),
            "lhs_err": _finite_or_none(self.lhs_err),
            "rhs_err": _finite_or_none(self.rhs_err),
            "abs_residual": _finite_or_none(self.abs_residual),
            "rel_residual": _finite_or_none(self.rel_residual),
            "tolerance": self.tolerance,
            "pass": self.passed,
            "reason": self.reason,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PointResult":
        return cls(
            identity_id=data["id"],
            point=dict(data["point"]),
            lhs=_none_to_nan(data.get("lhs")),
            rhs=_none_to_nan(data.get("rhs")),
            lhs_err=_none_to_nan(data.get("lhs_err")),
            rhs_err=_none_to_nan(data.get("rhs_err")),
            abs_residual=_none_to_nan(data.get("abs_residual")),
            rel_residual=_none_to_nan(data.get("rel_residual")),
            tolerance=float(data["tolerance"]),
            passed=bool(data["pass"]),
            reason=data.get("reason", ""),
        )


def _finite_or_none(value: float) -> Optional[float]:
    return value if value is not None and math.isfinite(value) else None


def _none_to_nan(value: Optional[float]) -> float:
    return math.nan if value is None else float(value)


@dataclass
class VerificationReport:
    """Residuals of a verification run with pass/fail per point."""
    profile: str
    results: List[PointResult] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION

    @property
    def n_pass(self) -> int:
        return sum(1 for r in self.results if r.passed)

    @property
    def n_fail(self) -> int:
        return sum(1 for r in self.results if not r.passed)

    @property
    def worst_rel(self) -> float:
        finite = [r.rel_residual for r in self.results if math.isfinite(r.rel_residual)]
        if len(finite) < len(self.results):
            return math.inf
        return max(finite, default=0.0)

    @property
    def all_passed(self) -> bool:
        return self.n_fail == 0

    def summary(self) -> Dict[str, Any]:
        return {"n_pass": self.n_pass, "n_fail": self.n_fail,
                "worst_rel": _finite_or_none(self.worst_rel)}

    def failures(self) -> List[PointResult]:
        return [r for r in self.results if not r.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "profile": self.profile,
            "summary": self.summary(),
            "metadata": self.metadata,
            "results": [r.to_dict() for r in self.results],
        }


class ReportCodec:
    """Serialise and parse verification reports."""

    @staticmethod
    def to_json(report: VerificationReport) -> str:
        """
        Encode a report as JSON.

        Args:
            report: VerificationReport to encode

        Returns:
            JSON text with sorted keys and a trailing newline
        """
        return json.dumps(report.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"

    @staticmethod
    def from_json(text: str) -> VerificationReport:
        """
        Decode a report written by to_json.

        Args:
            text: JSON text

        Returns:
            VerificationReport

        Raises:
            ValueError: malformed JSON or unsupported schema version
        """
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ValueError(f"report is not valid JSON: {e}") from e
        if not isinstance(data, dict) or "results" not in data:
            raise ValueError("report has no results section")
        version = str(data.get("schema_version", ""))
        if version != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema version '{version}'")
        return VerificationReport(
            profile=data.get("profile", ""),
            results=[PointResult.from_dict(r) for r in data["results"]],
            metadata=data.get("metadata", {}),
            schema_version=version,
        )

    @staticmethod
    def to_csv(report: VerificationReport) -> str:
        """Summary rows: id, point, lhs, rhs, rel_residual, pass."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in report.results:
            writer.writerow([r.identity_id, format_point(r.point), repr(r.lhs), repr(r.rhs),
                             repr(r.rel_residual), "true" if r.passed else "false"])
        return buffer.getvalue()

    @staticmethod
    def to_text(report: VerificationReport, precision: int = 12) -> str:
        """Human-readable table, values rounded to `precision` significant digits."""
        lines = [f"profile: {report.profile}", "=" * 50]
        for r in report.results:
            mark = "✅" if r.passed else "❌"
            line = (f"{mark} {r.identity_id:<14} {format_point(r.point):<32} "
                    f"lhs={r.lhs:.{precision}g} rhs={r.rhs:.{precision}g} "
                    f"rel={r.rel_residual:.2e}")
            if r.reason:
                line += f"  ({r.reason})"
            lines.append(line)
        lines.append("=" * 50)
        worst = report.worst_rel
        lines.append(f"📊 {report.n_pass} passed, {report.n_fail} failed, worst rel residual {worst:.2e}")
        return "\n".join(lines) + "\n"
