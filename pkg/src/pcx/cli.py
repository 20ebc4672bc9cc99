"""Command-line interface.

Subcommands: solve, inconsistency, analyze, simulate, verify, serve.
Exit codes: 0 success, 1 input/config error, 2 numerical non-convergence.
The PCX_SEED environment variable overrides default seeds where a command
does not receive --seed explicitly.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .convexity import CONSTANTS, certify, curve_table
from .errors import PcxError, UnsupportedSize
from .io import load_matrix
from .matrix import PCMatrix, inconsistency
from .oracle import GridSpec, grid_min_lsm
from .scales import MonteCarloConfig, run_monte_carlo, scale_by_name
from .solvers import Method, SolveOptions, solve_all, solve_evm, solve_llsm, solve_lsm, solve_wlsm

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NOT_CONVERGED = 2

VERIFY_AGREE_TOL = 1e-3


def _default_seed(explicit: int | None) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get("PCX_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise PcxError(f"PCX_SEED must be an integer, got {env!r}") from exc
    return 0


def _fmt_weights(w) -> str:
    return "  ".join(f"{x:.9g}" for x in w)


def _triad_text(t) -> str:
    # 1-based in human output, matching standard matrix notation
    return (
        f"({t.i + 1},{t.k + 1},{t.j + 1}) with a_ik={t.a_ik:.9g}, "
        f"a_kj={t.a_kj:.9g}, a_ij={t.a_ij:.9g}"
    )


def _solve_options(args) -> SolveOptions:
    return SolveOptions(
        grad_tol=args.grad_tol,
        max_iters=args.max_iters,
        starts=args.starts,
        start_seed=_default_seed(args.seed),
        distinct_tol=args.distinct_tol,
    )


def cmd_solve(args) -> int:
    A = load_matrix(args.input)
    opts = _solve_options(args)
    if args.method == "all":
        results = solve_all(A, opts)
    else:
        method = Method(args.method)
        fn = {
            Method.LSM: lambda: solve_lsm(A, opts),
            Method.WLSM: lambda: solve_wlsm(A),
            Method.LLSM: lambda: solve_llsm(A),
            Method.EVM: lambda: solve_evm(A),
        }[method]
        results = {method: fn()}
    cert = certify(A)
    if args.json:
        doc = {
            "n": A.n,
            "labels": list(A.labels) if A.labels else None,
            "certification": cert.as_dict(),
            "results": {m.value: r.as_dict() for m, r in results.items()},
        }
        print(json.dumps(doc, indent=2))
    else:
        for m, r in results.items():
            state = f"converged in {r.iterations} iterations" if r.converged else "DID NOT CONVERGE"
            print(f"{m.value}: {state}")
            print(f"  weights (sum=1):     {_fmt_weights(r.w_sum)}")
            if r.w_prod is not None:
                print(f"  weights (product=1): {_fmt_weights(r.w_prod)}")
            print(f"  least-squares objective: {r.objective:.12g}")
            if m is Method.LSM:
                if cert.admissible:
                    uniq = "unique (certified: all entries within [1/a0, a0])"
                elif r.unique:
                    uniq = f"single minimizer cluster across {r.stats['starts_total']} starts (not certified)"
                else:
                    uniq = f"{len(r.minima)} distinct local minima found"
                print(f"  uniqueness: {uniq}")
            for w in r.warnings:
                print(f"  warning: {w}")
    if any(not r.converged for r in results.values()):
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_inconsistency(args) -> int:
    A = load_matrix(args.input)
    rep = inconsistency(A, include_all=args.all_triads)
    if args.json:
        print(json.dumps(rep.as_dict(include_all=args.all_triads), indent=2))
        return EXIT_OK
    print(f"inconsistency: {rep.global_value:.12g}")
    verdict = "acceptable" if rep.acceptable else "unacceptable"
    print(f"threshold 1/3: {verdict} ({rep.global_value:.6g} {'<=' if rep.acceptable else '>'} {rep.threshold:.6g})")
    if rep.worst is not None:
        print(f"worst triad: {_triad_text(rep.worst)}")
    if args.all_triads and rep.all_triads:
        print("all triads (worst first):")
        for t in rep.all_triads:
            print(f"  {_triad_text(t)}: {t.value:.9g}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    A = load_matrix(args.input)
    rep = certify(A)
    if args.curves:
        table = curve_table()
        lines = ["w,phi,psi"] + [f"{float(w)!r},{float(p)!r},{float(q)!r}" for w, p, q in table]
        text = "\n".join(lines) + "\n"
        if args.curves == "-":
            sys.stdout.write(text)
        else:
            Path(args.curves).write_text(text)
    if args.json:
        print(json.dumps(rep.as_dict(), indent=2))
        return EXIT_OK
    a0 = CONSTANTS.a0
    print(f"a0 = {a0:.12g} (entries within [1/a0, a0] guarantee a unique least-squares solution)")
    print(f"max entry: {rep.max_entry:.9g}")
    if rep.admissible:
        print("all entries admissible")
        print("verdict: UNIQUE_GUARANTEED")
    else:
        for i, j, v in rep.violations:
            print(f"violation: a[{i + 1},{j + 1}] = {v:.9g} outside [{1 / a0:.6f}, {a0:.6f}]")
        print("verdict: UNKNOWN (entries outside the certified band; uniqueness not guaranteed)")
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.config:
        raw = json.loads(Path(args.config).read_text())
        cfg = MonteCarloConfig(
            scale=scale_by_name(raw["scale"]),
            n=raw.get("n", 4),
            trials=raw.get("trials", 100),
            perturb_delta=raw.get("perturb_delta", 0.5),
            snap=raw.get("snap", True),
            seed=raw.get("seed", 0),
        )
    else:
        cfg = MonteCarloConfig(
            scale=scale_by_name(args.scale),
            n=args.n,
            trials=args.trials,
            perturb_delta=args.delta,
            snap=not args.no_snap,
            seed=_default_seed(args.seed),
        )
    report = run_monte_carlo(cfg)
    prefix = args.out or f"mc_{cfg.scale.name}_n{cfg.n}_t{cfg.trials}_s{cfg.seed}"
    csv_path = Path(f"{prefix}.csv")
    json_path = Path(f"{prefix}.json")
    csv_path.write_text("\n".join(report.csv_lines()) + "\n")
    json_path.write_text(json.dumps(report.aggregate_dict(), indent=2, sort_keys=True) + "\n")
    print(f"wrote {csv_path} and {json_path}")
    for key, val in report.aggregate_dict().items():
        if key != "config":
            print(f"{key}: {val}")
    return EXIT_OK


def cmd_verify(args) -> int:
    A = load_matrix(args.input)
    if A.n > 4:
        raise UnsupportedSize(f"verify supports n <= 4, got n={A.n}")
    res = solve_lsm(A, SolveOptions(start_seed=_default_seed(args.seed)))
    # 601 points per axis is cheap for the 2-D n=3 grid; the 3-D n=4 grid uses
    # a coarser scan plus the standard tenfold refinements.
    spec = GridSpec(points_per_axis=601 if A.n == 3 else 201)
    _, grid_obj = grid_min_lsm(A, spec)
    agree = abs(grid_obj - res.objective) <= VERIFY_AGREE_TOL
    if args.json:
        print(
            json.dumps(
                {
                    "solver_objective": res.objective,
                    "grid_objective": grid_obj,
                    "tolerance": VERIFY_AGREE_TOL,
                    "agree": agree,
                    "converged": res.converged,
                }
            )
        )
    else:
        print(f"solver objective: {res.objective:.12g}")
        print(f"grid objective:   {grid_obj:.12g}")
        print("AGREE" if agree else "DISAGREE", f"(tolerance {VERIFY_AGREE_TOL:g})")
    if not res.converged:
        return EXIT_NOT_CONVERGED
    return EXIT_OK if agree else EXIT_NOT_CONVERGED


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(db_path=args.db, ui_dir=args.ui)
    try:
        uvicorn.run(app, host=args.bind, port=args.port, log_level="info")
    except (OSError, SystemExit) as exc:
        print(f"error: cannot serve on {args.bind}:{args.port}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pcx", description="Pairwise-comparison matrix toolkit")
    parser.add_argument("--version", action="version", version=f"pcx {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_solver_flags(p):
        p.add_argument("--starts", type=int, default=None, help="multi-start count (default: 1 if certified unique, else 20)")
        p.add_argument("--seed", type=int, default=None, help="start-sampling seed (default: PCX_SEED or 0)")
        p.add_argument("--grad-tol", type=float, default=1e-10)
        p.add_argument("--max-iters", type=int, default=500)
        p.add_argument("--distinct-tol", type=float, default=1e-4)

    p = sub.add_parser("solve", help="derive priority weights")
    p.add_argument("input", help="matrix file (CSV or JSON)")
    p.add_argument("--method", choices=["lsm", "wlsm", "llsm", "evm", "all"], default="all")
    p.add_argument("--json", action="store_true")
    add_solver_flags(p)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("inconsistency", help="distance-based inconsistency with worst-triad localization")
    p.add_argument("input")
    p.add_argument("--all-triads", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_inconsistency)

    p = sub.add_parser("analyze", help="certify entries against the convexity band [1/a0, a0]")
    p.add_argument("input")
    p.add_argument("--json", action="store_true")
    p.add_argument("--curves", metavar="PATH", help="write the (w, phi, psi) band table as CSV ('-' for stdout)")
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("simulate", help="Monte-Carlo comparison harness over a judgment scale")
    p.add_argument("--scale", default="1-3")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--delta", type=float, default=0.5, help="log-space perturbation half-width")
    p.add_argument("--no-snap", action="store_true", help="keep perturbed entries off-scale")
    p.add_argument("--out", help="output prefix for PREFIX.csv and PREFIX.json")
    p.add_argument("--config", help="JSON config file overriding the flags above")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("verify", help="cross-check the solver against the brute-force grid (n <= 4)")
    p.add_argument("input")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("serve", help="run the judgment-elicitation HTTP service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--bind", default="127.0.0.1")
    p.add_argument("--db", default=None, help="session store path (default: pcx-sessions.db)")
    p.add_argument("--ui", default=None, help="static directory with the browser UI")
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except PcxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
