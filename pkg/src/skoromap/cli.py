"""Command-line interface: ``skoromap {map,decompose,verify,properties,simulate,bench}``.

Exit status is 0 on success, 1 when a property or verification fails and 2
for usage, parse or domain errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import oracle, properties, queue_sim, two_sided
from .cadlag_path import Band, PathParseError, StepPath, read_path
from .one_sided import gamma_lower
from .report import DomainError, default_tol

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")


def _band(args) -> Band:
    for name in ("lower", "upper"):
        if not math.isfinite(getattr(args, name)):
            raise DomainError(f"--{name} must be finite")
    return Band(args.lower, args.upper)


def _columns_csv(cols: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(cols))
    for row in zip(*cols.values()):
        w.writerow([repr(float(x)) for x in row])
    return buf.getvalue()


def _solve(psi: StepPath, band: Band, method: str):
    if method == "fixedpoint":
        eta_l, eta_u, _ = oracle.fixed_point_regulators(psi, band)
        phibar = psi.with_values(psi.values + eta_l.values - eta_u.values)
        return phibar, eta_l, eta_u
    sol = two_sided.reflect(psi, band, method)
    return sol.phibar, sol.eta_l, sol.eta_u


def cmd_map(args) -> int:
    psi = read_path(args.input)
    band = _band(args)
    phibar, eta_l, eta_u = _solve(psi, band, args.method)
    cols = {
        "times": psi.times.tolist(),
        "psi": psi.values.tolist(),
        "phibar": phibar.values.tolist(),
        "eta_l": eta_l.values.tolist(),
        "eta_u": eta_u.values.tolist(),
    }
    _emit(_columns_csv(cols) if args.format == "csv" else json.dumps(cols), args.out)
    return EXIT_OK


def cmd_decompose(args) -> int:
    psi = read_path(args.input)
    band = _band(args)
    if args.phibar:
        phibar = read_path(args.phibar)
    else:
        phibar = two_sided.reflect(psi, band).phibar
    eta_l, eta_u = two_sided.decompose_regulator(psi, phibar)
    # The switch times belong to the lower-reflected input measured from z.
    lifted = gamma_lower(psi, band.z).phi - band.z
    sched = two_sided.crossing_schedule(lifted, band.width)
    doc = {
        "times": psi.times.tolist(),
        "eta_l": eta_l.values.tolist(),
        "eta_u": eta_u.values.tolist(),
        "sigma": list(sched.sigma),
        "tau": list(sched.tau),
    }
    if args.format == "csv":
        text = _columns_csv({k: doc[k] for k in ("times", "eta_l", "eta_u")})
    else:
        text = json.dumps(doc)
    _emit(text, args.out)
    return EXIT_OK


def _load_candidate(path: str):
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise PathParseError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    missing = [k for k in ("times", "psi", "phibar", "eta_l", "eta_u") if k not in doc]
    if missing:
        raise PathParseError(f"{path}: missing field(s) {', '.join(missing)}")
    times = doc["times"]
    psi = StepPath(times, doc["psi"])
    sol = two_sided.TwoSidedSolution(
        phibar=StepPath(times, doc["phibar"]),
        etabar=StepPath(times, np.asarray(doc["eta_l"], float) - np.asarray(doc["eta_u"], float)),
        eta_l=StepPath(times, doc["eta_l"]),
        eta_u=StepPath(times, doc["eta_u"]),
    )
    return psi, sol


def cmd_verify(args) -> int:
    psi, sol = _load_candidate(args.input)
    rep = oracle.verify_solution(psi, sol, _band(args), args.tol)
    _emit(json.dumps(rep.to_dict(), indent=2), args.out)
    return EXIT_OK if rep.passed else EXIT_VIOLATION


def cmd_properties(args) -> int:
    if args.replay:
        rec = json.loads(Path(args.replay).read_text())
        rep = properties.run_record(rec, args.tol)
        _emit(json.dumps(rep.to_dict(), indent=2), None)
        return EXIT_OK if rep.passed else EXIT_VIOLATION
    if args.scenarios < 1:
        raise UsageError("--scenarios must be at least 1")
    names = args.suite or list(properties.SUITES)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    summary = {"seed": args.seed, "scenarios": args.scenarios, "n_max": args.n, "suites": {}}
    failed = False
    for name in names:
        count = args.scenarios
        if name == "oscillation" and args.scenarios_oscillation is not None:
            count = args.scenarios_oscillation
        start = time.perf_counter()
        res = properties.run_suite(name, args.seed, count, args.n, args.tol, inject_fault=args.inject_fault)
        entry = {
            "scenarios": res.scenarios,
            "passed": res.passed,
            "max_deviation": res.max_deviation,
            "seconds": round(time.perf_counter() - start, 3),
            **res.metrics,
        }
        replays = []
        for rec, rep in res.failures:
            path = out / f"replay_{name}_{rec['index']:06d}.json"
            path.write_text(json.dumps({**rec, "violations": rep.to_dict()["violations"][:20]}, indent=2))
            replays.append(path.name)
        entry["replays"] = replays
        summary["suites"][name] = entry
        failed = failed or not res.ok
        print(f"{name:13s} {res.passed}/{res.scenarios} passed, max deviation {res.max_deviation:.3g}",
              file=sys.stderr)
    summary["passed"] = not failed
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    return EXIT_VIOLATION if failed else EXIT_OK


def cmd_simulate(args) -> int:
    cfg = queue_sim.SimConfig(
        seed=args.seed,
        steps=args.steps,
        dt=args.dt,
        mu=args.mu,
        sigma=args.sigma,
        band=_band(args),
        initial=args.lower if args.initial is None else args.initial,
        replications=args.replications,
        bins=args.bins,
        burn_in=args.burn_in,
        workers=args.workers,
    )
    stats = queue_sim.simulate(cfg)
    if args.format == "csv":
        _emit(stats.histogram_csv(), args.out)
        return EXIT_OK
    doc = {"config": queue_sim.config_to_dict(cfg), "stats": stats.to_dict()}
    if args.density_tol is not None:
        rep = queue_sim.occupancy_density_check(cfg, args.density_tol, stats)
        doc["density_check"] = {"passed": rep.passed, **{k: v for k, v in rep.metrics.items()
                                                          if not isinstance(v, list)}}
        _emit(json.dumps(doc, indent=2), args.out)
        return EXIT_OK if rep.passed else EXIT_VIOLATION
    _emit(json.dumps(doc, indent=2), args.out)
    return EXIT_OK


NAIVE_MAX = 1 << 14


def bench(sizes, repeats: int = 3, seed: int = 0):
    """Time the streaming and naive evaluators; returns ``[(n, method, seconds)]``.

    Each timing is the best of ``repeats`` runs. The naive evaluator is only
    run for ``n <= 2**14``.
    """
    rng = np.random.default_rng(seed)
    band = Band(0.0, 1.0)
    two_sided.reflect(StepPath.constant(0.0), band)  # compile outside the timer
    rows = []
    for n in sizes:
        psi = StepPath(np.arange(n, dtype=float), np.cumsum(rng.standard_normal(n)) * 0.1)
        methods = ["streaming"] + (["naive"] if n <= NAIVE_MAX else [])
        for method in methods:
            best = math.inf
            for _ in range(repeats if method == "streaming" else 1):
                t0 = time.perf_counter()
                two_sided.reflect(psi, band, method)
                best = min(best, time.perf_counter() - t0)
            rows.append((n, method, best))
    return rows


def streaming_linearity(rows) -> float:
    """Spread (max over min) of the per-element streaming time across sizes."""
    per = [s / n for n, m, s in rows if m == "streaming"]
    return max(per) / min(per)


def cmd_bench(args) -> int:
    sizes = args.sizes or [1 << k for k in range(10, 21)]
    if not sizes or min(sizes) < 1:
        raise UsageError("--sizes must list positive counts")
    rows = bench(sizes, args.repeats, args.seed)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "method", "seconds"])
    w.writerows((n, m, f"{s:.6g}") for n, m, s in rows)
    _emit(buf.getvalue(), args.out)
    ratio = streaming_linearity(rows)
    print(f"streaming per-element time spread across sizes: {ratio:.2f}", file=sys.stderr)
    return EXIT_OK if ratio < 3.0 else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="skoromap", description="Two-sided reflection of step paths on a band [z, a].")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def band_opts(sp, required=True):
        sp.add_argument("-z", "--lower", type=float, default=None if required else 0.0, required=required)
        sp.add_argument("-a", "--upper", type=float, default=None if required else 1.0, required=required)

    def io_opts(sp):
        sp.add_argument("--out", default=None, help="output file (default: stdout)")
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    tol = default_tol()

    sp = sub.add_parser("map", help="reflect a path file")
    sp.add_argument("input")
    band_opts(sp)
    sp.add_argument("--method", choices=(*two_sided.METHODS, "fixedpoint"), default="streaming")
    io_opts(sp)
    sp.set_defaults(func=cmd_map)

    sp = sub.add_parser("decompose", help="regulators and switch times of a path")
    sp.add_argument("input")
    sp.add_argument("--phibar", help="reflected path file (default: computed)")
    band_opts(sp)
    io_opts(sp)
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("verify", help="check a candidate {times,psi,phibar,eta_l,eta_u} file")
    sp.add_argument("input")
    band_opts(sp)
    sp.add_argument("--tol", type=float, default=tol)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("properties", help="run the randomized property sweeps")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--scenarios", type=int, default=10_000)
    sp.add_argument("--scenarios-oscillation", type=int, default=None)
    sp.add_argument("--n", type=int, default=512, help="maximum path length")
    sp.add_argument("--suite", action="append", choices=list(properties.SUITES))
    sp.add_argument("--out", default="properties_out", help="directory for summary and replays")
    sp.add_argument("--tol", type=float, default=tol)
    sp.add_argument("--replay", help="re-run a single replay file")
    sp.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_properties)

    sp = sub.add_parser("simulate", help="reflected random-walk queue")
    band_opts(sp, required=False)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--steps", type=int, default=100_000)
    sp.add_argument("--dt", type=float, default=1e-3)
    sp.add_argument("--mu", type=float, default=0.0)
    sp.add_argument("--sigma", type=float, default=1.0)
    sp.add_argument("--initial", type=float, default=None, help="default: the lower barrier")
    sp.add_argument("--replications", type=int, default=1)
    sp.add_argument("--bins", type=int, default=50)
    sp.add_argument("--burn-in", type=float, default=0.2)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--density-tol", type=float, default=None,
                    help="also compare the settled histogram with the stationary density")
    io_opts(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("bench", help="time streaming vs naive evaluators")
    sp.add_argument("--sizes", type=int, nargs="+")
    sp.add_argument("--repeats", type=int, default=3)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, OSError) as exc:
        print(f"skoromap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
