"""Verification record type shared by the means checks and the harness."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

__all__ = ["STATUSES", "VerificationRecord"]

STATUSES = ("holds", "equality", "violated", "hypothesis_failed", "undefined")


@dataclass(frozen=True)
class VerificationRecord:
    """One evaluated inequality instance: lhs <= rhs with margin = rhs - lhs.

    ``lam`` and ``q`` are None for claims without that parameter; lhs, rhs
    and margin are None when the hypothesis failed or evaluation was
    undefined.  ``exact`` is True when the status was decided in rational
    arithmetic or at 50-digit precision rather than in doubles.
    """

    claim: str
    function: str
    a: float
    b: float
    lam: Optional[float]
    q: Optional[float]
    lhs: Optional[float]
    rhs: Optional[float]
    margin: Optional[float]
    status: str
    exact: bool

    def __post_init__(self) -> None:
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    def sort_key(self):
        return (
            self.claim,
            self.function,
            self.a,
            self.b,
            -1.0 if self.lam is None else self.lam,
            -1.0 if self.q is None else self.q,
        )

    def as_dict(self) -> dict:
        return {
            "claim": self.claim,
            "function": self.function,
            "a": self.a,
            "b": self.b,
            "lambda": self.lam,
            "q": self.q,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "status": self.status,
            "exact": self.exact,
        }
