"""Reference implementations for differential testing.

Nothing here is fast and nothing in the library's main path calls into it.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .cadlag_path import StepPath, as_band
from .report import ComplianceReport, ConvergenceError, DomainError, default_tol
from .two_sided import TwoSidedSolution

__all__ = [
    "ComplianceReport",
    "fixed_point_regulators",
    "lambda_naive",
    "verify_solution",
]


def fixed_point_regulators(psi: StepPath, band, max_iter: int | None = None):
    """Solve the coupled regulator equations by alternating substitution.

    Starting from zero, alternately set::

        eta_u(t) = sup_{s<=t} [psi(s) + eta_l(s) - a]^+
        eta_l(t) = sup_{s<=t} [z + eta_u(s) - psi(s)]^+

    Both iterates only ever grow, and the loop stops at the first pass that
    changes no grid value (exact comparison).

    Returns
    -------
    eta_l, eta_u : StepPath
    iterations : int
        Number of passes, including the final unchanged one.

    Raises
    ------
    ConvergenceError
        If no fixed point is reached within ``max_iter`` passes
        (default ``2n + 2``); the last iterates are attached.
    """
    band = as_band(band)
    x = psi.values
    n = x.size
    if max_iter is None:
        max_iter = 2 * n + 2
    if max_iter < 1:
        raise DomainError("max_iter must be at least 1")
    eta_l = np.zeros(n)
    eta_u = np.zeros(n)
    for it in range(1, max_iter + 1):
        new_u = np.maximum.accumulate(np.maximum(x + eta_l - band.a, 0.0))
        new_l = np.maximum.accumulate(np.maximum(band.z + new_u - x, 0.0))
        if np.array_equal(new_u, eta_u) and np.array_equal(new_l, eta_l):
            return psi.with_values(eta_l), psi.with_values(eta_u), it
        eta_l, eta_u = new_l, new_u
    raise ConvergenceError(
        f"no fixed point after {max_iter} passes",
        eta_l=psi.with_values(eta_l),
        eta_u=psi.with_values(eta_u),
        iterations=max_iter,
    )


def lambda_naive(phi: StepPath, band) -> StepPath:
    """Band correction evaluated literally over all grid pairs, O(n^2)."""
    band = as_band(band)
    return phi.with_values(_kernels.lambda_naive(phi.values, band.z, band.a))


def verify_solution(psi: StepPath, sol: TwoSidedSolution, band, tol: float | None = None) -> ComplianceReport:
    """Check a candidate two-sided solution condition by condition.

    Condition names in the report:

    ``decomposition``
        ``phibar = psi + eta_l - eta_u`` (and ``etabar = eta_l - eta_u``).
    ``range``
        ``z <= phibar <= a``.
    ``monotone_l`` / ``monotone_u``
        Both pushes nondecreasing, starting from zero before time 0.
    ``complementarity_l`` / ``complementarity_u``
        A push grows only while ``phibar`` is on its barrier.
    ``both_push``
        No grid step with both pushes growing.
    ``initial``
        ``eta_l(0) = [z - psi(0)]^+`` and ``eta_u(0) = [psi(0) - a]^+``.
    """
    band = as_band(band)
    tol = default_tol() if tol is None else tol
    paths = (sol.phibar, sol.etabar, sol.eta_l, sol.eta_u)
    if not all(psi.same_grid(p) for p in paths):
        raise DomainError("candidate solution is not on the input grid")
    x = psi.values
    phibar, etabar = sol.phibar.values, sol.etabar.values
    eta_l, eta_u = sol.eta_l.values, sol.eta_u.values
    rep = ComplianceReport(name="two_sided_solution")

    rep.record("decomposition", np.abs(phibar - (x + eta_l - eta_u)), tol)
    rep.record("decomposition", np.abs(etabar - (eta_l - eta_u)), tol)
    rep.record("range", np.maximum(band.z - phibar, phibar - band.a), tol)

    d_l = np.diff(eta_l, prepend=0.0)
    d_u = np.diff(eta_u, prepend=0.0)
    rep.record("monotone_l", -d_l, tol)
    rep.record("monotone_u", -d_u, tol)
    rep.record("complementarity_l", np.where(d_l > tol, np.abs(phibar - band.z), 0.0), tol)
    rep.record("complementarity_u", np.where(d_u > tol, np.abs(phibar - band.a), 0.0), tol)
    rep.record("both_push", np.minimum(d_l, d_u), tol)

    rep.record("initial", [abs(eta_l[0] - max(band.z - x[0], 0.0))], tol)
    rep.record("initial", [abs(eta_u[0] - max(x[0] - band.a, 0.0))], tol)
    return rep
