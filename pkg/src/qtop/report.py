"""Uniform result records for identity checks.

Every verifier returns one or more CheckResult records; suites aggregate
them into a Report that serializes deterministically.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckResult:
    """Outcome of a single identity check.

    ``identity`` is a human-readable statement of the relation tested
    (e.g. "R12 R13 R23 = R23 R13 R12 on fund-3 legs"); ``residual`` is the
    max-abs deviation (exact backend reports 0.0 for an exact match and
    1.0 for any mismatch).
    """

    check_id: str
    identity: str
    residual: float
    tol: float
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.residual < self.tol

    def to_json(self) -> dict:
        out = {
            "check": self.check_id,
            "identity": self.identity,
            "residual": float(self.residual),
            "tolerance": float(self.tol),
            "pass": bool(self.ok),
            "seconds": round(self.seconds, 6),
        }
        if self.details:
            out["details"] = {k: (float(v) if isinstance(v, (int, float)) else v)
                              for k, v in self.details.items()}
        return out


def worst(results) -> float:
    """Largest residual in a collection of CheckResults."""
    return max((r.residual for r in results), default=0.0)
