"""Random path generators and executable inequality checks.

Every check returns a :class:`ComplianceReport`. The randomized suites at the
bottom draw one *record* per scenario (a JSON-able dict holding the generator
specs, band and constants), so any failing scenario can be written to disk
and replayed on its own with :func:`run_record`.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .cadlag_path import StepPath, as_band, merged_grid, oscillation, shift, uniform_distance
from .one_sided import check_complementarity_one_sided, gamma_lower, gamma_upper
from .oracle import fixed_point_regulators, lambda_naive, verify_solution
from .report import ComplianceReport, DomainError, GeneratorError, default_tol
from .two_sided import (
    METHODS,
    c_from_schedule,
    constraining_term,
    crossing_schedule,
    lambda_map,
    reflect,
    reflect_symmetric_check,
)


@dataclass(frozen=True)
class PathGenSpec:
    """Recipe for a pseudo-random step path; equal specs give equal paths.

    ``n`` jump times are uniform on ``(0, T)``; increments are Gaussian with
    standard deviation ``jump_scale`` (or, with ``lattice``, integer
    multiples of ``jump_scale`` in ``{-2..2}``) plus ``drift``.
    """

    seed: int
    n: int
    jump_scale: float = 1.0
    drift: float = 0.0
    start: float = 0.0
    T: float = 1.0
    lattice: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("n must be at least 1")
        if not self.jump_scale >= 0:
            raise DomainError("jump_scale must be nonnegative")
        if not self.T > 0:
            raise DomainError("T must be positive")


def _increments(spec: PathGenSpec):
    rng = np.random.default_rng(spec.seed)
    jumps = np.unique(rng.uniform(0.0, spec.T, spec.n))
    jumps = jumps[(jumps > 0) & (jumps < spec.T)]
    if spec.lattice:
        steps = rng.integers(-2, 3, jumps.size) * spec.jump_scale
    else:
        steps = rng.normal(0.0, 1.0, jumps.size) * spec.jump_scale
    return np.concatenate(([0.0], jumps)), steps, rng


def gen_step_path(spec: PathGenSpec) -> StepPath:
    times, steps, _ = _increments(spec)
    values = spec.start + np.concatenate(([0.0], np.cumsum(steps + spec.drift)))
    return StepPath(times, values, spec.T)


def gen_nondecreasing_path(spec: PathGenSpec) -> StepPath:
    """Like :func:`gen_step_path` with every increment replaced by its absolute value."""
    times, steps, _ = _increments(spec)
    values = spec.start + np.concatenate(([0.0], np.cumsum(np.abs(steps + spec.drift))))
    if np.any(np.diff(values) < 0):
        raise GeneratorError("nondecreasing generator produced a decrease")
    return StepPath(times, values, spec.T)


@dataclass(frozen=True)
class ComparisonScenario:
    """Two inputs ``c0 + psi`` and ``c0' + psi'`` with ``psi = psi' + nu``.

    ``mix_seed`` drives the random sandwich ``psi' <= psi <= psi' + nu`` used
    by the one-sided check.
    """

    psi_prime: StepPath
    nu: StepPath
    c0: float
    c0_prime: float
    band: object
    mix_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "band", as_band(self.band))
        if self.psi_prime.values[0] != 0.0:
            raise DomainError("psi' must start at 0")
        if self.nu.values[0] < 0 or np.any(np.diff(self.nu.values) < 0):
            raise DomainError("nu must be nonnegative and nondecreasing")

    def on_grid(self):
        """``(psi', nu, psi)`` resampled to the merged grid."""
        grid = merged_grid(self.psi_prime, self.nu)
        T = max(self.psi_prime.horizon, self.nu.horizon)
        pp = self.psi_prime.resample(grid, T)
        nu = self.nu.resample(grid, T)
        return pp, nu, pp.with_values(pp.values + nu.values)

    def sandwich(self):
        """``(psi', nu, psi)`` with ``psi`` drawn uniformly between ``psi'`` and ``psi' + nu``."""
        pp, nu, _ = self.on_grid()
        u = np.random.default_rng(self.mix_seed).uniform(0.0, 1.0, nu.values.size)
        psi = pp.values + u * nu.values
        psi[0] = 0.0
        if np.any(psi < pp.values) or np.any(psi > pp.values + nu.values):
            raise GeneratorError("sandwich draw left the [psi', psi' + nu] corridor")
        return pp, nu, pp.with_values(psi)


# --- individual checks -------------------------------------------------------

def check_lipschitz_uniform(psi1: StepPath, psi2: StepPath, band, tol: float | None = None) -> ComplianceReport:
    """Both the band correction and the two-sided map are 2-Lipschitz in sup norm.

    ``metrics`` holds the distance ratios (``nan`` when the inputs coincide).
    """
    band = as_band(band)
    tol = default_tol() if tol is None else tol
    T = max(psi1.horizon, psi2.horizon)
    d_in = uniform_distance(psi1, psi2, T)
    d_lam = uniform_distance(lambda_map(psi1, band), lambda_map(psi2, band), T)
    d_ref = uniform_distance(reflect(psi1, band).phibar, reflect(psi2, band).phibar, T)
    rep = ComplianceReport(name="lipschitz_uniform")
    rep.record("lambda_lipschitz", [d_lam - 2 * d_in], tol)
    rep.record("reflect_lipschitz", [d_ref - 2 * d_in], tol)
    ratio = (lambda d: d / d_in if d_in > 0 else math.nan)
    rep.metrics.update(input_distance=d_in, lambda_ratio=ratio(d_lam), reflect_ratio=ratio(d_ref))
    return rep


def _order(rep, name, lower, middle, upper, tol):
    """Record ``lower <= middle <= upper`` pointwise."""
    if lower is not None:
        rep.record(name, lower - middle, tol)
    if upper is not None:
        rep.record(name, middle - upper, tol)


def check_comparison_two_sided(sc: ComparisonScenario, tol: float | None = None) -> ComplianceReport:
    """Order relations between the solutions for ``c0 + psi`` and ``c0' + psi'``.

    With ``p = [c0 - c0']^+``, ``q = [c0' - c0]^+`` and band width ``w``:

    * pushes: ``eta_l - q <= eta_l' <= eta_l + nu + p`` and
      ``eta_u' - q <= eta_u <= eta_u' + nu + p``;
    * net regulator: ``-q <= etabar' - etabar <= p + nu``, and the coarser
      ``-2q <= etabar' - etabar <= 2 nu + 2p``;
    * paths: ``max(-p - nu, -w) <= phibar' - phibar <= min(q, w)``, and the
      coarser ``max(-|c0' - c0| - nu, -w) <= phibar' - phibar <= min(|c0' - c0| + nu, w)``.

    For a band ``[z, a]`` with ``z != 0`` the width ``a - z`` stands in for
    ``a``; this is the translated form of the ``[0, a]`` statements.
    """
    tol = default_tol() if tol is None else tol
    band = sc.band
    w = band.width
    pp, nu, psi = sc.on_grid()
    s = reflect(psi.with_values(sc.c0 + psi.values), band)
    sp = reflect(pp.with_values(sc.c0_prime + pp.values), band)
    p = max(sc.c0 - sc.c0_prime, 0.0)
    q = max(sc.c0_prime - sc.c0, 0.0)
    c = abs(sc.c0_prime - sc.c0)
    v = nu.values
    el, eu, e, f = s.eta_l.values, s.eta_u.values, s.etabar.values, s.phibar.values
    el2, eu2, e2, f2 = sp.eta_l.values, sp.eta_u.values, sp.etabar.values, sp.phibar.values

    rep = ComplianceReport(name="comparison_two_sided")
    _order(rep, "lower_push_order", el - q, el2, el + v + p, tol)
    _order(rep, "upper_push_order", eu2 - q, eu, eu2 + v + p, tol)
    _order(rep, "net_regulator_order", e - q, e2, e + v + p, tol)
    _order(rep, "path_order", np.maximum(-p - v, -w), f2 - f, np.minimum(q, w), tol)
    _order(rep, "coarse_net_regulator_order", e - 2 * q, e2, e + 2 * v + 2 * p, tol)
    _order(rep, "coarse_path_order", np.maximum(-c - v, -w), f2 - f, np.minimum(c + v, w), tol)
    return rep


def check_comparison_one_sided(sc: ComparisonScenario, sandwich: bool = False,
                               tol: float | None = None) -> ComplianceReport:
    """Order relations for reflection at the lower barrier only.

    With ``psi' <= psi <= psi' + nu``: ``eta - q <= eta' <= eta + nu + p`` and
    ``phi' - nu - q <= phi <= phi' + nu + p``. When ``psi = psi' + nu``
    exactly, also ``phi' - q <= phi <= phi' + nu + p``.
    """
    tol = default_tol() if tol is None else tol
    z = sc.band.z
    pp, nu, psi = sc.sandwich() if sandwich else sc.on_grid()
    s = gamma_lower(psi.with_values(sc.c0 + psi.values), z)
    sp = gamma_lower(pp.with_values(sc.c0_prime + pp.values), z)
    p = max(sc.c0 - sc.c0_prime, 0.0)
    q = max(sc.c0_prime - sc.c0, 0.0)
    v = nu.values
    eta, eta2 = s.eta.values, sp.eta.values
    phi, phi2 = s.phi.values, sp.phi.values

    rep = ComplianceReport(name="comparison_one_sided" + ("_sandwich" if sandwich else ""))
    _order(rep, "regulator_order", eta - q, eta2, eta + v + p, tol)
    _order(rep, "path_order", phi2 - v - q, phi, phi2 + v + p, tol)
    if not sandwich:
        _order(rep, "exact_path_order", phi2 - q, phi, phi2 + v + p, tol)
    return rep


def check_shift(psi: StepPath, band, alpha: float, tol: float | None = None) -> ComplianceReport:
    """Restarting any of the three maps at a grid time reproduces the tail.

    ``Gamma(x(alpha) + [t -> psi(alpha + t) - psi(alpha)])`` must equal
    ``x(alpha + .)`` for the two-sided map and both one-sided maps.
    """
    band = as_band(band)
    tol = default_tol() if tol is None else tol
    k = int(np.searchsorted(psi.times, alpha))
    if k >= psi.times.size or psi.times[k] != alpha:
        raise DomainError(f"alpha={alpha!r} is not a grid time")
    inc = shift(psi, alpha)
    rep = ComplianceReport(name="shift")

    full = reflect(psi, band).phibar.values
    tail = reflect(inc.with_values(full[k] + inc.values), band).phibar.values
    rep.record("shift_two_sided", np.abs(tail - full[k:]), tol, offset=k)

    lo = gamma_lower(psi, band.z).phi.values
    tail = gamma_lower(inc.with_values(lo[k] + inc.values), band.z).phi.values
    rep.record("shift_lower", np.abs(tail - lo[k:]), tol, offset=k)

    up = gamma_upper(psi, band.a).phi.values
    tail = gamma_upper(inc.with_values(up[k] + inc.values), band.a).phi.values
    rep.record("shift_upper", np.abs(tail - up[k:]), tol, offset=k)
    return rep


def check_oscillation(phi: StepPath, band, windows, tol: float | None = None) -> ComplianceReport:
    """Over every window the corrected path oscillates at most twice as much as ``phi``."""
    band = as_band(band)
    tol = default_tol() if tol is None else tol
    lam = lambda_map(phi, band)
    rep = ComplianceReport(name="oscillation")
    worst = 0.0
    for j, (t1, t2) in enumerate(windows):
        o_in = oscillation(phi, t1, t2)
        o_out = oscillation(lam, t1, t2)
        rep.record("oscillation_bound", [o_out - 2 * o_in], tol, offset=j)
        if o_in > 0:
            worst = max(worst, o_out / o_in)
    rep.metrics["max_ratio"] = worst
    return rep


def check_construction(phi: StepPath, a: float, tol: float | None = None) -> ComplianceReport:
    """Switch-time assembly of the constraining term and its structural facts.

    For nonnegative ``phi``: the piecewise assembly equals the direct
    formula exactly; the corrected path is 0 at every ``tau_k`` and ``a``
    at every ``sigma_k``; ``(phi - a)^+ <= C <= phi``; ``C`` is nondecreasing
    on ``[sigma_{k-1}, tau_k)`` and nonincreasing on ``[tau_k, sigma_k)`` with
    the seam relations ``C(tau_k-) >= phi(tau_k) = C(tau_k)`` and
    ``C(sigma_k-) <= phi(sigma_k) - a = C(sigma_k)``; ``C`` only rises while
    the corrected path sits at ``a`` and only falls while it sits at 0.
    """
    tol = default_tol() if tol is None else tol
    a = float(a)
    v = phi.values
    sched = crossing_schedule(phi, a)
    C = constraining_term(phi, a).values
    Cs = c_from_schedule(phi, a, sched).values
    bar = v - C
    rep = ComplianceReport(name="construction")
    rep.record("schedule_assembly_exact", np.where(C == Cs, 0.0, np.inf), 0.0)
    rep.record("naive_agreement", np.abs(bar - lambda_naive(phi, (0.0, a)).values), tol)
    rep.record("lower_bound", np.maximum(v - a, 0.0) - C, 0.0)
    rep.record("upper_bound", C - v, 0.0)
    rep.record("range", np.maximum(-bar, bar - a), tol)
    rep.record("zero_at_tau", np.abs(bar[list(sched.tau_idx)]), tol)
    rep.record("top_at_sigma", np.abs(bar[list(sched.sigma_idx)] - a), tol)

    seams = sorted([(i, "up") for i in sched.sigma_idx] + [(i, "down") for i in sched.tau_idx])
    if seams:
        rep.record("zero_before_sigma0", np.abs(C[: seams[0][0]]), 0.0)
    for j, (start, kind) in enumerate(seams):
        stop = seams[j + 1][0] if j + 1 < len(seams) else v.size
        seg = np.diff(C[start:stop])
        prev = C[start - 1] if start > 0 else 0.0
        if kind == "up":
            rep.record("increasing_segment", -seg, 0.0, offset=start + 1)
            rep.record("sigma_seam", [prev - (v[start] - a), abs(C[start] - (v[start] - a))], 0.0)
        else:
            rep.record("decreasing_segment", seg, 0.0, offset=start + 1)
            rep.record("tau_seam", [v[start] - prev, abs(C[start] - v[start])], 0.0)

    dC = np.diff(C, prepend=0.0)
    rep.record("rise_only_at_top", np.where(dC > tol, np.abs(bar - a), 0.0), tol)
    rep.record("fall_only_at_zero", np.where(dC < -tol, np.abs(bar), 0.0), tol)
    return rep


# --- randomized suites -------------------------------------------------------

def child_seed(seed: int, index: int) -> int:
    """64-bit seed for scenario ``index`` of a sweep, independent of execution order."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(index),))
    return int(ss.generate_state(1, np.uint64)[0])


def _draw_band(rng, lattice: bool):
    if lattice:
        z = float(rng.integers(-3, 3)) if rng.random() < 0.5 else 0.0
        return [z, z + float(rng.integers(1, 5))]
    z = 0.0 if rng.random() < 0.5 else float(rng.uniform(-5, 5))
    return [z, z + float(rng.choice([rng.uniform(0.05, 1.0), rng.uniform(1.0, 10.0)]))]


def _draw_spec(rng, n_max: int, band, start=None, lattice=False, T=None) -> dict:
    z, a = band
    w = a - z
    if start is None:
        if lattice:
            start = float(rng.integers(int(z - w) - 1, int(a + w) + 2))
        else:
            start = float(rng.uniform(z - 1.5 * w, a + 1.5 * w))
    scale = float(w * rng.choice([0.05, 0.3, 1.0, 3.0]))
    drift = float(rng.choice([0.0, 0.0, 1.0, -1.0]) * rng.uniform(0, 0.2) * scale)
    if lattice:
        scale, drift = 1.0, 0.0
    return asdict(PathGenSpec(
        seed=int(rng.integers(0, 2**63)),
        n=int(rng.integers(1, n_max + 1)),
        jump_scale=scale,
        drift=drift,
        start=start,
        T=float(T if T is not None else rng.choice([1.0, float(rng.uniform(0.5, 10.0))])),
        lattice=bool(lattice),
    ))


def draw_record(check: str, seed: int, n_max: int = 512) -> dict:
    """Replayable description of one random scenario for ``check``."""
    rng = np.random.default_rng(seed)
    lattice = bool(rng.random() < 0.25)
    band = _draw_band(rng, lattice)
    rec = {"check": check, "seed": int(seed), "band": band, "specs": [], "constants": {}}
    if check == "comparison":
        T = float(rng.uniform(0.5, 5.0))
        psi_spec = _draw_spec(rng, n_max, band, start=0.0, lattice=lattice, T=T)
        nu_spec = _draw_spec(rng, n_max, band, start=0.0, lattice=lattice, T=T)
        nu_spec["drift"] = abs(nu_spec["drift"])
        if rng.random() < 0.1:
            nu_spec["jump_scale"] = 0.0
        w = band[1] - band[0]
        if lattice:
            c0 = float(rng.integers(int(band[0] - w) - 1, int(band[1] + w) + 2))
        else:
            c0 = float(rng.uniform(band[0] - w, band[1] + w))
        c0p = c0 if rng.random() < 0.2 else (
            float(rng.integers(int(band[0] - w) - 1, int(band[1] + w) + 2)) if lattice
            else float(rng.uniform(band[0] - w, band[1] + w)))
        rec["specs"] = [psi_spec, nu_spec]
        rec["constants"] = {"c0": c0, "c0_prime": c0p, "mix_seed": int(rng.integers(0, 2**63))}
    elif check == "lipschitz":
        base = _draw_spec(rng, n_max, band, lattice=lattice)
        other = dict(base)
        # perturb: same grid with jittered increments, or an independent path
        mode = rng.choice(["jitter", "independent", "shifted"])
        other["seed"] = int(rng.integers(0, 2**63))
        rec["specs"] = [base, other]
        rec["constants"] = {"mode": str(mode), "eps": float(rng.choice([1e-3, 0.1, 1.0])) * (band[1] - band[0])}
    elif check == "oscillation":
        rec["specs"] = [_draw_spec(rng, n_max, band, lattice=lattice)]
        T = rec["specs"][0]["T"]
        wins = np.sort(rng.uniform(0, T, size=(4, 2)), axis=1)
        wins[0] = [0.0, T]
        rec["constants"] = {"windows": wins.tolist()}
    else:
        rec["specs"] = [_draw_spec(rng, n_max, band, lattice=lattice)]
        rec["constants"] = {"alpha_seed": int(rng.integers(0, 2**63))}
    return rec


def _lipschitz_pair(rec):
    base, other = rec["specs"]
    p1 = gen_step_path(PathGenSpec(**base))
    mode, eps = rec["constants"]["mode"], rec["constants"]["eps"]
    rng = np.random.default_rng(other["seed"])
    if mode == "jitter":
        p2 = p1.with_values(p1.values + rng.uniform(-eps, eps, p1.values.size))
    elif mode == "shifted":
        p2 = p1.with_values(p1.values + eps * (rng.random() - 0.5))
    else:
        p2 = gen_step_path(PathGenSpec(**other))
    return p1, p2


def _scenario(rec) -> ComparisonScenario:
    psi_spec, nu_spec = rec["specs"]
    k = rec["constants"]
    return ComparisonScenario(
        psi_prime=gen_step_path(PathGenSpec(**psi_spec)),
        nu=gen_nondecreasing_path(PathGenSpec(**nu_spec)),
        c0=k["c0"],
        c0_prime=k["c0_prime"],
        band=rec["band"],
        mix_seed=k["mix_seed"],
    )


def _run_four_way(rec, tol):
    psi = gen_step_path(PathGenSpec(**rec["specs"][0]))
    ref = reflect(psi, rec["band"], "streaming").phibar
    rep = ComplianceReport(name="four_way")
    for m in METHODS[1:]:
        rep.record(f"agree_{m}", [uniform_distance(ref, reflect(psi, rec["band"], m).phibar)], tol)
    return rep


def _run_oracle(rec, tol):
    psi = gen_step_path(PathGenSpec(**rec["specs"][0]))
    sol = reflect(psi, rec["band"])
    eta_l, eta_u, iters = fixed_point_regulators(psi, rec["band"])
    rep = ComplianceReport(name="fixed_point_oracle")
    rep.record("eta_l_agreement", np.abs(eta_l.values - sol.eta_l.values), tol)
    rep.record("eta_u_agreement", np.abs(eta_u.values - sol.eta_u.values), tol)
    rep.record("iteration_cap", [iters - (2 * len(psi) + 2)], 0.0)
    rep.metrics["iterations"] = iters
    return rep


def _run_construction(rec, tol):
    psi = gen_step_path(PathGenSpec(**rec["specs"][0]))
    band = as_band(rec["band"])
    phi = gamma_lower(psi.with_values(psi.values - band.z), 0.0).phi
    return check_construction(phi, band.width, tol)


def _run_lipschitz(rec, tol):
    p1, p2 = _lipschitz_pair(rec)
    return check_lipschitz_uniform(p1, p2, rec["band"], tol)


def _run_comparison(rec, tol):
    sc = _scenario(rec)
    rep = check_comparison_two_sided(sc, tol)
    rep = rep.merge(check_comparison_one_sided(sc, sandwich=False, tol=tol))
    rep = rep.merge(check_comparison_one_sided(sc, sandwich=True, tol=tol))
    rep.name = "comparison"
    return rep


def _run_structure(rec, tol):
    psi = gen_step_path(PathGenSpec(**rec["specs"][0]))
    band = as_band(rec["band"])
    sol = reflect(psi, band)
    rep = verify_solution(psi, sol, band, tol)
    rep = rep.merge(reflect_symmetric_check(psi, band, sol=sol, tol=tol))
    lo = gamma_lower(psi, band.z)
    rep = rep.merge(check_complementarity_one_sided(lo, band.z, "lower", tol))
    up = gamma_upper(psi, band.a)
    rep = rep.merge(check_complementarity_one_sided(up, band.a, "upper", tol))
    rng = np.random.default_rng(rec["constants"]["alpha_seed"])
    for alpha in rng.choice(psi.times, size=8):
        rep = rep.merge(check_shift(psi, band, float(alpha), tol))
    rep.name = "structure"
    return rep


def _run_oscillation(rec, tol):
    phi = gen_step_path(PathGenSpec(**rec["specs"][0]))
    return check_oscillation(phi, rec["band"], rec["constants"]["windows"], tol)


SUITES = {
    "four_way": _run_four_way,
    "oracle": _run_oracle,
    "construction": _run_construction,
    "lipschitz": _run_lipschitz,
    "comparison": _run_comparison,
    "structure": _run_structure,
    "oscillation": _run_oscillation,
}


def run_record(rec: dict, tol: float | None = None, inject_fault: bool = False) -> ComplianceReport:
    """Re-run the single scenario described by ``rec``."""
    tol = default_tol() if tol is None else tol
    rep = SUITES[rec["check"]](rec, tol)
    if inject_fault:
        rep.add(0, "injected_fault", 1.0)
    return rep


@dataclass
class SuiteResult:
    name: str
    scenarios: int
    passed: int
    max_deviation: float
    failures: list
    metrics: dict

    @property
    def ok(self) -> bool:
        return not self.failures


def run_suite(name: str, seed: int, scenarios: int, n_max: int = 512,
              tol: float | None = None, inject_fault: bool = False) -> SuiteResult:
    """Sweep ``scenarios`` random records through check ``name``.

    Failures are returned as ``(record, report)`` pairs ordered by scenario
    index. With ``inject_fault`` the first scenario is reported as failing,
    which exercises the failure plumbing end to end.
    """
    if scenarios < 1:
        raise DomainError("scenarios must be at least 1")
    tol = default_tol() if tol is None else tol
    failures = []
    worst = 0.0
    metrics: dict = {}
    for i in range(scenarios):
        rec = draw_record(name, child_seed(seed, i), n_max)
        rec["index"] = i
        rep = run_record(rec, tol, inject_fault=inject_fault and i == 0)
        worst = max(worst, rep.max_deviation)
        for key, val in rep.metrics.items():
            if isinstance(val, (int, float)) and not math.isnan(val):
                metrics[f"max_{key}"] = max(metrics.get(f"max_{key}", -math.inf), val)
        if not rep.passed:
            failures.append((rec, rep))
    return SuiteResult(name, scenarios, scenarios - len(failures), worst, failures, metrics)


def tightness_pair():
    """Two paths on [0, 1] at unit sup distance whose corrections on [0, 2] are 2 apart."""
    phi1 = StepPath([0.0], [2.0], 1.0)
    phi2 = StepPath([0.0, 0.5], [3.0, 1.0], 1.0)
    return phi1, phi2, (0.0, 2.0)


def search_lipschitz_tightness(seed: int, trials: int = 2000, n_max: int = 64):
    """Random local search for a pair with a large two-sided distance ratio.

    Each trial bumps a random path up by ``eps`` on one grid cell and down by
    ``eps`` afterwards, which is the shape that nearly doubles the distance.
    Returns ``(ratio, psi1, psi2, band)`` for the best pair found.
    """
    rng = np.random.default_rng(seed)
    best = (0.0, None, None, None)
    for _ in range(trials):
        band = _draw_band(rng, False)
        p1 = gen_step_path(PathGenSpec(**_draw_spec(rng, n_max, band)))
        if len(p1) < 2:
            continue
        eps = float(rng.uniform(0.01, 1.0)) * (band[1] - band[0])
        j = int(rng.integers(0, len(p1) - 1))
        bump = np.zeros(len(p1))
        bump[j] = eps
        bump[j + 1:] = -eps
        p2 = p1.with_values(p1.values + bump)
        rep = check_lipschitz_uniform(p1, p2, band)
        r = rep.metrics["reflect_ratio"]
        if r > best[0]:
            best = (r, p1, p2, band)
    return best
