"""Two-sided reflection on a band ``[z, a]``.

The constrained path is obtained by reflecting at the lower barrier first and
then subtracting the running "clipped excess" correction::

    phibar = Lambda_{z,a}(Gamma_z(psi))
    Lambda_{z,a}(phi)(t) = phi(t) - sup_{s<=t} [(phi(s)-a)^+ ^ inf_{u in [s,t]} (phi(u)-z)]

On a grid the correction obeys ``M_k = max(min(M_{k-1}, phi_k - z),
min((phi_k - a)^+, phi_k - z))``, so both stages fuse into a single pass with
two scalars of state. Three slower evaluators are kept for cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .cadlag_path import Band, StepPath, as_band
from .report import ComplianceReport, DomainError, default_tol

METHODS = ("streaming", "naive", "remark15", "clip")


@dataclass(frozen=True)
class TwoSidedSolution:
    """``phibar = psi + eta_l - eta_u`` with ``etabar = eta_l - eta_u``."""

    phibar: StepPath
    etabar: StepPath
    eta_l: StepPath
    eta_u: StepPath


@dataclass(frozen=True)
class CrossingSchedule:
    """Alternating switch times ``sigma_0 < tau_1 < sigma_1 < tau_2 < ...``.

    Only finite entries are stored; the first missing entry is the ``+inf``
    that terminates the alternation. ``tau_0 = 0`` is implicit.
    ``sigma_idx``/``tau_idx`` are the matching grid indices.
    """

    sigma: tuple[float, ...]
    tau: tuple[float, ...]
    sigma_idx: tuple[int, ...] = ()
    tau_idx: tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.tau) not in (len(self.sigma), len(self.sigma) - 1) and self.sigma:
            raise DomainError("sigma and tau must alternate")
        if not self.sigma and self.tau:
            raise DomainError("tau entries require a finite sigma_0")
        seq = []
        for k, s in enumerate(self.sigma):
            seq.append(s)
            if k < len(self.tau):
                seq.append(self.tau[k])
        if any(not b > a for a, b in zip(seq, seq[1:])):
            raise DomainError("switch times must be strictly increasing")

    def sigma_at(self, k: int) -> float:
        return self.sigma[k] if k < len(self.sigma) else math.inf

    def tau_at(self, k: int) -> float:
        """``tau_k`` for ``k >= 1`` (``tau_0 = 0``)."""
        if k == 0:
            return 0.0
        return self.tau[k - 1] if k - 1 < len(self.tau) else math.inf


def _require_nonnegative(phi: StepPath) -> None:
    if phi.values.size and phi.values.min() < 0:
        k = int(np.argmin(phi.values))
        raise DomainError(f"path must be nonnegative, value {phi.values[k]!r} at index {k}")


def lambda_map(phi: StepPath, band) -> StepPath:
    """``Lambda_{z,a}(phi)``; the identity on paths already inside the band."""
    band = as_band(band)
    offset = _kernels.lambda_offset(phi.values, band.z, band.a)
    return phi.with_values(phi.values - offset)


def _phibar(values: np.ndarray, band: Band, method: str) -> np.ndarray:
    z, a = band.z, band.a
    if method == "streaming":
        return _kernels.reflect_fused(values, z, a)
    if method == "naive":
        return _kernels.lambda_naive(_kernels.gamma_lower_naive(values, z), z, a)
    if method == "remark15":
        return _kernels.alt_form_naive(values, z, a)
    if method == "clip":
        return _kernels.reflect_clip(values, z, a)
    raise DomainError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")


def reflect(psi: StepPath, band, method: str = "streaming") -> TwoSidedSolution:
    """Solve the two-sided Skorokhod problem for ``psi`` on ``band``.

    Parameters
    ----------
    psi : StepPath
        Unconstrained input.
    band : Band or (z, a)
        Target interval.
    method : {"streaming", "naive", "remark15", "clip"}
        ``streaming`` is the fused O(n) pass. ``naive`` evaluates the
        composed suprema literally in O(n^2); ``remark15`` evaluates the
        alternative closed form literally in O(n^2); ``clip`` runs the
        increment-projection recursion. All four agree up to rounding.
    """
    band = as_band(band)
    x = psi.values
    phibar = _phibar(x, band, method)
    eta_l, eta_u = _kernels.split_regulator(x, phibar)
    # Outputs of finite inputs are finite, so the grid checks can be skipped.
    wrap = lambda v: StepPath._trusted(psi.times, v, psi.horizon)  # noqa: E731
    return TwoSidedSolution(
        phibar=wrap(phibar),
        etabar=wrap(phibar - x),
        eta_l=wrap(eta_l),
        eta_u=wrap(eta_u),
    )


def decompose_regulator(psi: StepPath, phibar: StepPath) -> tuple[StepPath, StepPath]:
    """Split ``phibar - psi`` into its lower and upper pushes.

    Each grid increment of the net regulator goes to ``eta_l`` when positive
    and to ``eta_u`` when negative. A single step of a step path never needs
    both barriers, so this split is the minimal one.
    """
    if not psi.same_grid(phibar):
        raise DomainError("psi and phibar are not on the same grid")
    eta_l, eta_u = _kernels.split_regulator(psi.values, phibar.values)
    return psi.with_values(eta_l), psi.with_values(eta_u)


def constraining_term(phi: StepPath, a: float) -> StepPath:
    """``C(t) = sup_{s<=t} [(phi(s)-a)^+ ^ inf_{u in [s,t]} phi(u)]`` for ``phi >= 0``."""
    _require_nonnegative(phi)
    return phi.with_values(_kernels.lambda_offset(phi.values, 0.0, float(a)))


def crossing_schedule(phi: StepPath, a: float) -> CrossingSchedule:
    """Scan the grid for the alternating switch times of a nonnegative path.

    ``sigma_0`` is the first time ``phi >= a``. Each ``tau_k`` is the first
    time ``phi`` falls at least ``a`` below its running maximum since
    ``sigma_{k-1}``; each ``sigma_k`` the first time ``phi`` rises at least
    ``a`` above its running minimum since ``tau_k``. Ties trigger.
    """
    _require_nonnegative(phi)
    a = float(a)
    if not a > 0:
        raise DomainError(f"level a must be positive, got {a!r}")
    v = phi.values
    n = v.size
    sigma_idx: list[int] = []
    tau_idx: list[int] = []

    above = np.flatnonzero(v - a >= 0)
    if above.size == 0:
        return CrossingSchedule((), ())
    k = int(above[0])
    sigma_idx.append(k)
    looking_for_tau = True
    extreme = v[k]
    k += 1
    while k < n:
        x = v[k]
        if looking_for_tau:
            if x > extreme:
                extreme = x
            if x <= extreme - a:
                tau_idx.append(k)
                looking_for_tau = False
                extreme = x
        else:
            if x < extreme:
                extreme = x
            if x - a >= extreme:
                sigma_idx.append(k)
                looking_for_tau = True
                extreme = x
        k += 1
    t = phi.times
    return CrossingSchedule(
        sigma=tuple(float(t[i]) for i in sigma_idx),
        tau=tuple(float(t[i]) for i in tau_idx),
        sigma_idx=tuple(sigma_idx),
        tau_idx=tuple(tau_idx),
    )


def c_from_schedule(phi: StepPath, a: float, sched: CrossingSchedule) -> StepPath:
    """Assemble the constraining term piecewise from the switch times.

    Zero before ``sigma_0``; on ``[sigma_{k-1}, tau_k)`` the running maximum of
    ``(phi - a)^+`` started at ``sigma_{k-1}``; on ``[tau_k, sigma_k)`` the
    running minimum of ``phi`` started at ``tau_k``.
    """
    expected = crossing_schedule(phi, a)
    if (tuple(sched.sigma), tuple(sched.tau)) != (expected.sigma, expected.tau):
        raise DomainError("crossing schedule is inconsistent with the path")
    v = phi.values
    out = np.zeros_like(v)
    excess = np.maximum(v - float(a), 0.0)
    bounds = []
    for k, s in enumerate(expected.sigma_idx):
        bounds.append((s, "up"))
        if k < len(expected.tau_idx):
            bounds.append((expected.tau_idx[k], "down"))
    for j, (start, kind) in enumerate(bounds):
        stop = bounds[j + 1][0] if j + 1 < len(bounds) else v.size
        if kind == "up":
            out[start:stop] = np.maximum.accumulate(excess[start:stop])
        else:
            out[start:stop] = np.minimum.accumulate(v[start:stop])
    return phi.with_values(out)


def reflect_symmetric_check(
    psi: StepPath,
    band,
    sol: TwoSidedSolution | None = None,
    tol: float | None = None,
    method: str = "streaming",
) -> ComplianceReport:
    """Mirror test: reflecting ``z + a - psi`` must mirror the solution and swap the pushes.

    ``sol`` defaults to ``reflect(psi, band)``; pass a candidate to test it.
    """
    band = as_band(band)
    tol = default_tol() if tol is None else tol
    if sol is None:
        sol = reflect(psi, band, method)
    mid = band.z + band.a
    mirror = reflect(psi.with_values(mid - psi.values), band, method)
    rep = ComplianceReport(name="mirror_symmetry")
    rep.record("mirror_phibar", np.abs(sol.phibar.values - (mid - mirror.phibar.values)), tol)
    rep.record("mirror_eta_l", np.abs(mirror.eta_l.values - sol.eta_u.values), tol)
    rep.record("mirror_eta_u", np.abs(mirror.eta_u.values - sol.eta_l.values), tol)
    return rep
