"""Compliance reports and the package's exception types."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

DEFAULT_TOL = 1e-9


def default_tol() -> float:
    """Comparison tolerance, overridable through ``SKOROMAP_TOL``."""
    raw = os.environ.get("SKOROMAP_TOL")
    if raw is None:
        return DEFAULT_TOL
    tol = float(raw)
    if not tol >= 0.0:
        raise ValueError(f"SKOROMAP_TOL must be a nonnegative number, got {raw!r}")
    return tol


class DomainError(ValueError):
    """Argument outside the domain of an operation (bad time, grid, band...)."""


class ConvergenceError(RuntimeError):
    """Fixed-point iteration did not stabilise within the iteration cap."""

    def __init__(self, message, eta_l=None, eta_u=None, iterations=None):
        super().__init__(message)
        self.eta_l = eta_l
        self.eta_u = eta_u
        self.iterations = iterations


class GeneratorError(RuntimeError):
    """A scenario generator produced data violating its own contract."""


@dataclass(frozen=True)
class Violation:
    index: int
    condition: str
    magnitude: float


@dataclass
class ComplianceReport:
    """Evidence that a set of pointwise conditions held (or did not).

    ``max_deviation`` is the largest amount by which any checked quantity
    missed its target, whether or not it exceeded the tolerance. For
    inequalities this is the excess over the bound, floored at zero.
    """

    name: str = ""
    violations: list[Violation] = field(default_factory=list)
    max_deviation: float = 0.0
    checked: int = 0
    metrics: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def record(self, condition: str, deviations, tol: float, offset: int = 0) -> None:
        """Register an array of deviations; entries above ``tol`` are violations.

        ``deviations[k]`` belongs to grid index ``k + offset``.
        """
        dev = np.asarray(deviations, dtype=float)
        self.checked += dev.size
        if dev.size == 0:
            return
        self.max_deviation = max(self.max_deviation, float(np.max(dev)), 0.0)
        for k in np.flatnonzero(dev > tol):
            self.violations.append(Violation(int(k) + offset, condition, float(dev[k])))

    def add(self, index: int, condition: str, magnitude: float) -> None:
        self.violations.append(Violation(index, condition, float(magnitude)))
        self.max_deviation = max(self.max_deviation, float(magnitude))

    def merge(self, other: "ComplianceReport") -> "ComplianceReport":
        return ComplianceReport(
            name=self.name or other.name,
            violations=self.violations + other.violations,
            max_deviation=max(self.max_deviation, other.max_deviation),
            checked=self.checked + other.checked,
            metrics={**self.metrics, **other.metrics},
        )

    def conditions(self) -> set[str]:
        return {v.condition for v in self.violations}

    def summary(self) -> str:
        status = "PASS" if self.passed else f"FAIL ({len(self.violations)} violations)"
        return f"{self.name or 'report'}: {status}, max deviation {self.max_deviation:.3g}"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "max_deviation": self.max_deviation,
            "metrics": self.metrics,
            "violations": [
                {"index": v.index, "condition": v.condition, "magnitude": v.magnitude}
                for v in self.violations
            ],
        }
