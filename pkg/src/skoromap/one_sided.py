"""One-sided reflection at a lower barrier ``z`` or an upper barrier ``a``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cadlag_path import StepPath
from .report import ComplianceReport, DomainError, default_tol


@dataclass(frozen=True)
class OneSidedSolution:
    """Constrained path ``phi`` and its nondecreasing regulator ``eta``.

    For the lower map ``phi = psi + eta``; for the upper map ``phi = psi - eta``.
    """

    phi: StepPath
    eta: StepPath


def gamma_lower(psi: StepPath, z: float = 0.0) -> OneSidedSolution:
    """Reflect ``psi`` at ``z`` from below.

    ``eta(t_k) = max_{j<=k} [z - psi(t_j)]^+`` is a running maximum, so the
    whole map is one pass.
    """
    gap = np.maximum(float(z) - psi.values, 0.0)
    eta = np.maximum.accumulate(gap)
    phi = psi.values + eta
    return OneSidedSolution(psi.with_values(phi), psi.with_values(eta))


def gamma_upper(psi: StepPath, a: float) -> OneSidedSolution:
    """Reflect ``psi`` at ``a`` from above; mirror image of :func:`gamma_lower`.

    Evaluated as ``a - gamma_lower(a - psi, 0)`` so the mirror identity holds
    bit for bit.
    """
    a = float(a)
    lower = gamma_lower(psi.with_values(a - psi.values), 0.0)
    return OneSidedSolution(psi.with_values(a - lower.phi.values), lower.eta)


def check_complementarity_one_sided(
    sol: OneSidedSolution,
    barrier: float,
    side: str = "lower",
    tol: float | None = None,
) -> ComplianceReport:
    """Regulator increments may only occur while ``phi`` sits on the barrier.

    Also checks that ``phi`` stays on the admissible side and that ``eta``
    never decreases.
    """
    if side not in ("lower", "upper"):
        raise DomainError(f"side must be 'lower' or 'upper', got {side!r}")
    if not sol.phi.same_grid(sol.eta):
        raise DomainError("phi and eta are not on the same grid")
    tol = default_tol() if tol is None else tol
    phi, eta = sol.phi.values, sol.eta.values
    rep = ComplianceReport(name=f"complementarity_{side}")

    steps = np.diff(eta, prepend=0.0)
    off_barrier = np.abs(phi - barrier)
    pushing = steps > tol
    rep.record("complementarity", np.where(pushing, off_barrier, 0.0), tol)
    rep.record("monotone", -steps, tol)
    if side == "lower":
        rep.record("range", barrier - phi, tol)
    else:
        rep.record("range", phi - barrier, tol)
    return rep
