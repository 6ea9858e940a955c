"""Command-line front-end.

Subcommands: solve, verify, density, distance, roots, sweep, ou.  JSON is
the primary output format (CSV behind --csv for plot pipelines); numeric
fields are decimal strings.  Outputs are deterministic given flags and
seed; timestamps live in a "meta" field that --stable-output omits.

Exit codes: 0 ok, 1 solver/internal failure, 2 usage, 3 schema violation,
4 invariant failure, 5 missing dependency.
"""

from __future__ import annotations

import argparse
import datetime
import json
import math
import sys
import time
from pathlib import Path

from . import analysis, metrics, ou_chain, serialize, zero_bias
from .cache import SolutionCache
from .errors import (
    InvalidInputError,
    InvariantViolationError,
    MissingDependencyError,
    MIWError,
    SchemaError,
)
from .solver import (
    SolverOptions,
    default_precision_digits,
    find_largest_root_Sn,
    find_largest_root_xn,
    median_index,
    solve_ground_state,
)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_SCHEMA = 3
EXIT_INVARIANT = 4
EXIT_MISSING = 5


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _error_json(exc: Exception, **extra) -> str:
    payload = {"error": {"type": type(exc).__name__, "message": str(exc), **extra}}
    return serialize.canonical_json(payload)


def _with_meta(doc: dict, stable: bool, **meta) -> dict:
    if stable:
        return doc
    enriched = dict(doc)
    enriched["meta"] = {
        "generated_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        **meta,
    }
    return enriched


def _load_configuration_file(path: str):
    p = Path(path)
    if not p.exists():
        raise InvalidInputError(f"no such file: {path}")
    try:
        doc = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON: {exc}")
    cfg = serialize.document_to_configuration(doc)
    serialize.check_loaded_configuration(cfg)
    return cfg


def _resolve_config(args, n_worlds: int):
    """Solve (or fetch from cache) the configuration for N.

    Returns (stable_document_text, Configuration, cached, seconds).
    """
    dps = getattr(args, "precision", None) or default_precision_digits(n_worlds)
    cache = SolutionCache(args.cache_dir)
    hit = cache.load(n_worlds, dps)
    if hit is not None:
        text, cfg = hit
        return text, cfg, True, 0.0
    if getattr(args, "no_solve", False):
        raise MissingDependencyError(
            f"no cached configuration for N={n_worlds} (precision {dps}) "
            "and --no-solve was given"
        )
    t0 = time.perf_counter()
    cfg = solve_ground_state(n_worlds, SolverOptions(precision_digits=dps))
    seconds = time.perf_counter() - t0
    text = cache.store(cfg)
    return text, cfg, False, seconds


def cmd_solve(args) -> int:
    if args.n < 3:
        raise InvalidInputError("N must be >= 3")
    text, cfg, cached, seconds = _resolve_config(args, args.n)
    doc = json.loads(text)
    doc = _with_meta(doc, args.stable_output, cached=cached,
                     solve_seconds=serialize.numstr(seconds))
    _emit(serialize.canonical_json(doc), args.out)
    print(
        f"N={cfg.N} x1={serialize.numstr(float(cfg.x1))} "
        f"residual={serialize.numstr(cfg.residual)} "
        f"solve_time={seconds:.3f}s{' (cached)' if cached else ''}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _load_configuration_file(args.file)
    prop = analysis.verify_properties(cfg, tol=args.tol)
    ham = analysis.hamiltonian(cfg)
    if args.csv:
        pd = serialize.property_report_dict(prop)
        hd = serialize.hamiltonian_report_dict(ham)
        pd.pop("checks")
        header = list(pd) + list(hd)
        row = [str(v) for v in pd.values()] + [str(v) for v in hd.values()]
        _emit(serialize.flat_csv(header, [row]), args.out)
    else:
        payload = {
            "schema_version": serialize.SCHEMA_VERSION,
            "property": serialize.property_report_dict(prop),
            "hamiltonian": serialize.hamiltonian_report_dict(ham),
        }
        _emit(serialize.canonical_json(payload), args.out)
    return EXIT_OK


def cmd_density(args) -> int:
    cfg = _load_configuration_file(args.file)
    dens = zero_bias.build_density(cfg)
    if args.csv:
        header = ["interval_left", "interval_right", "height", "mass"]
        rows = []
        for i in range(dens.N - 2, -1, -1):  # ascending intervals
            rows.append([
                serialize.numstr(dens.breakpoints[i + 1]),
                serialize.numstr(dens.breakpoints[i]),
                serialize.numstr(dens.heights[i]),
                serialize.numstr(dens.masses[i]),
            ])
        _emit(serialize.flat_csv(header, rows), args.out)
    else:
        payload = {
            "schema_version": serialize.SCHEMA_VERSION,
            "N": dens.N,
            "breakpoints": [serialize.numstr(b) for b in dens.breakpoints],
            "heights": [serialize.numstr(h) for h in dens.heights],
            "masses": [serialize.numstr(m) for m in dens.masses],
        }
        _emit(serialize.canonical_json(payload), args.out)
    return EXIT_OK


def cmd_distance(args) -> int:
    cfg = _load_configuration_file(args.file)
    report = metrics.distance_report(cfg)
    rd = serialize.distance_report_dict(report)
    if args.csv:
        header = list(rd)
        row = [str(v) for v in rd.values()]
        _emit(serialize.flat_csv(header, [row]), args.out)
    else:
        payload = {"schema_version": serialize.SCHEMA_VERSION, **rd}
        _emit(serialize.canonical_json(payload), args.out)
    return EXIT_OK


def cmd_roots(args) -> int:
    if args.n < 3:
        raise InvalidInputError("N must be >= 3")
    opts = SolverOptions(precision_digits=args.precision)
    entries = []
    for n in range(2, median_index(args.n) + 1):
        a_n = float(find_largest_root_xn(n, opts))
        b_n = float(find_largest_root_Sn(n, opts))
        entries.append({
            "n": n,
            "a_n": serialize.numstr(a_n),
            "b_n": serialize.numstr(b_n),
            "a_gt_b": a_n > b_n,
        })
    if args.csv:
        header = ["n", "a_n", "b_n", "a_gt_b"]
        rows = [[str(e["n"]), e["a_n"], e["b_n"], str(e["a_gt_b"])]
                for e in entries]
        _emit(serialize.flat_csv(header, rows), args.out)
    else:
        payload = {
            "schema_version": serialize.SCHEMA_VERSION,
            "N": args.n,
            "roots": entries,
        }
        _emit(serialize.canonical_json(payload), args.out)
    return EXIT_OK


_SWEEP_COLUMNS = [
    "N", "x1", "dW_to_normal", "dW_empirical_to_zerobias", "stein_upper",
    "sawtooth_lower", "mesh_upper", "ks_to_normal", "mesh", "mesh_bound",
    "status",
]


def cmd_sweep(args) -> int:
    try:
        n_list = [int(tok) for tok in args.n_list.replace(",", " ").split()]
    except ValueError:
        raise InvalidInputError(f"could not parse --n-list {args.n_list!r}")
    if not n_list or any(n < 3 for n in n_list):
        raise InvalidInputError("all N in --n-list must be >= 3")
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    failed = 0
    for n in n_list:
        try:
            text, cfg, _, _ = _resolve_config(args, n)
            (out_dir / f"config_N{n}.json").write_text(text)
            prop = analysis.verify_properties(cfg)
            dist = metrics.distance_report(cfg)
            payload = {
                "schema_version": serialize.SCHEMA_VERSION,
                "property": serialize.property_report_dict(prop),
                "hamiltonian": serialize.hamiltonian_report_dict(
                    analysis.hamiltonian(cfg)),
            }
            (out_dir / f"verify_N{n}.json").write_text(
                serialize.canonical_json(payload))
            (out_dir / f"distance_N{n}.json").write_text(
                serialize.canonical_json({
                    "schema_version": serialize.SCHEMA_VERSION,
                    **serialize.distance_report_dict(dist),
                }))
            rows.append([
                str(n),
                serialize.numstr(float(cfg.x1)),
                serialize.numstr(dist.dW_to_normal),
                serialize.numstr(dist.dW_empirical_to_zerobias),
                serialize.numstr(dist.stein_upper),
                serialize.numstr(dist.sawtooth_lower),
                serialize.numstr(dist.mesh_upper),
                serialize.numstr(dist.ks_to_normal),
                serialize.numstr(prop.mesh),
                serialize.numstr(prop.mesh_bound),
                "ok",
            ])
        except MIWError as exc:
            failed += 1
            rows.append([str(n)] + [""] * 9 + [f"error:{type(exc).__name__}"])
    csv_text = serialize.flat_csv(_SWEEP_COLUMNS, rows)
    (out_dir / "combined.csv").write_text(csv_text)
    if not args.quiet:
        sys.stdout.write(csv_text)
    return EXIT_OK if failed == 0 else EXIT_FAILURE


def cmd_ou(args) -> int:
    if args.m < 1:
        raise InvalidInputError("m must be >= 1")
    if args.t <= 0:
        raise InvalidInputError("T must be > 0")
    if args.reps < 2:
        raise InvalidInputError("reps must be >= 2")
    warnings = []
    if args.normal:
        source = ou_chain.NormalSource()
        n_worlds = None
    else:
        if args.n is None:
            raise InvalidInputError("specify a source: --normal or --n N")
        _, cfg, _, _ = _resolve_config(args, args.n)
        source = ou_chain.ConfigurationSource(cfg)
        n_worlds = args.n
        if args.m ** 3 > math.log(args.n):
            warnings.append(
                f"m={args.m} exceeds the slow-growth regime m^3 < log N "
                f"(log N = {math.log(args.n):.3f}); the OU approximation "
                "is not guaranteed at this pace"
            )
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    paths = []
    for rep in range(args.reps):
        chain = ou_chain.init_chain(source, args.m, seed=[args.seed, rep])
        paths.append(ou_chain.run_rescaled(chain, args.t))
    stats = ou_chain.ou_statistics(paths)
    doc = {
        "schema_version": serialize.SCHEMA_VERSION,
        "source": source.label,
        "N": n_worlds,
        "m": args.m,
        "T": serialize.numstr(args.t),
        "reps": args.reps,
        "seed": args.seed,
        "steps": stats.steps,
        "stationary_variance": serialize.numstr(stats.stationary_variance),
        "variance_reference": serialize.numstr(source.single_draw_variance),
        "autocorrelation": [
            {"t": serialize.numstr(t), "estimate": serialize.numstr(est),
             "reference": serialize.numstr(ref)}
            for (t, est, ref) in stats.autocorrelation
        ],
        "lag1_sum_corr": {
            "estimate": serialize.numstr(stats.lag1_sum_corr),
            "reference": serialize.numstr(stats.lag1_sum_corr_reference),
        },
        "warnings": warnings,
    }
    doc = _with_meta(doc, args.stable_output)
    _emit(serialize.canonical_json(doc), args.out)
    if args.paths_csv:
        header = (
            f"# source={source.label} m={args.m} N={n_worlds} "
            f"T={serialize.numstr(args.t)} reps={args.reps} seed={args.seed}\n"
        )
        lines = [header + "rep,k,t,Y,xbar"]
        root_m = math.sqrt(args.m)
        for rep, path in enumerate(paths):
            for k, (t, xbar) in enumerate(zip(path.times, path.values)):
                lines.append(
                    f"{rep},{k},{serialize.numstr(t)},"
                    f"{serialize.numstr(xbar * root_m)},{serialize.numstr(xbar)}"
                )
        Path(args.paths_csv).write_text("\n".join(lines) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="miworlds",
        description="Solve, verify and simulate interacting-worlds "
                    "oscillator ground states.",
    )
    parser.add_argument("--cache-dir", default=None,
                        help="solution cache directory (default: "
                             "$MIWORLDS_CACHE_DIR or ~/.cache/miworlds)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, out=True):
        p.add_argument("--stable-output", action="store_true",
                       help="omit the meta field for byte-comparable output")
        if out:
            p.add_argument("--out", default=None, help="write to file instead of stdout")

    p = sub.add_parser("solve", help="solve the ground state for N worlds")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--precision", type=int, default=None,
                   help="working decimal digits (default 30 for N<=100, else 60)")
    add_common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check identities of a configuration file")
    p.add_argument("file")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--csv", action="store_true")
    add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("density", help="zero-bias density of a configuration file")
    p.add_argument("file")
    p.add_argument("--csv", action="store_true",
                   help="emit interval_left,interval_right,height,mass rows")
    add_common(p)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("distance", help="distance report for a configuration file")
    p.add_argument("file")
    p.add_argument("--csv", action="store_true")
    add_common(p)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("roots", help="largest roots a_n (x_n = 0) and b_n (S_n = 0)")
    p.add_argument("--n", type=int, required=True,
                   help="configuration size; scans n = 2..median index")
    p.add_argument("--precision", type=int, default=None)
    p.add_argument("--csv", action="store_true")
    add_common(p)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("sweep", help="solve+verify+distance over several N")
    p.add_argument("--n-list", required=True, help="comma/space separated N values")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--precision", type=int, default=None)
    p.add_argument("--quiet", action="store_true", help="do not echo combined.csv")
    add_common(p, out=False)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("ou", help="random single-replacement chain statistics")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--normal", action="store_true", help="draw from N(0,1)")
    src.add_argument("--n", type=int, default=None,
                     help="draw from the solved configuration for N")
    p.add_argument("--m", type=int, default=200, help="sample size")
    p.add_argument("--t", type=float, default=10.0, help="time horizon T")
    p.add_argument("--reps", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-solve", action="store_true",
                   help="fail if the configuration is not cached")
    p.add_argument("--paths-csv", default=None,
                   help="also write every path as rep,k,t,Y,xbar rows")
    p.add_argument("--precision", type=int, default=None)
    add_common(p)
    p.set_defaults(func=cmd_ou)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidInputError as exc:
        sys.stderr.write(_error_json(exc))
        return EXIT_USAGE
    except SchemaError as exc:
        sys.stderr.write(_error_json(exc))
        return EXIT_SCHEMA
    except InvariantViolationError as exc:
        sys.stderr.write(_error_json(exc, failures=exc.failures))
        return EXIT_INVARIANT
    except MissingDependencyError as exc:
        sys.stderr.write(_error_json(exc))
        return EXIT_MISSING
    except MIWError as exc:
        sys.stderr.write(_error_json(exc))
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
