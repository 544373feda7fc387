"""Command-line front end: return tables, generating-function scans,
verification suites, and position distributions.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__, crw, genfunc, qw, verify
from .genfunc import ConvergenceError

__all__ = ["main", "console_main", "Table", "emit_csv", "emit_json", "emit_gnuplot", "parse_csv"]

RETURN_MODELS = ("qw", "hadamard", "crw", "rw")
GENFUNC_MODELS = ("qw", "hadamard", "crw", "rw", "polya2d")

_RETURN_TOL = {"qw": 1e-10, "hadamard": 1e-10, "crw": 1e-12, "rw": 1e-12}
_GENFUNC_TOL = {"qw": 1e-6, "hadamard": 1e-8, "crw": 1e-10, "rw": 1e-10, "polya2d": 1e-9}

_ENV_TOL = "WALKERS_RETURN_TOL"


@dataclass
class Table:
    """Column-oriented result table with a describing meta header."""

    columns: list[str]
    rows: list[tuple]
    meta: dict = field(default_factory=dict)


def _format_cell(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    # 17 significant digits round-trip any float64 exactly.
    return f"{float(value):.17g}"


def emit_csv(table: Table, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_format_cell(v) for v in row])


def parse_csv(text: str) -> Table:
    reader = csv.reader(io.StringIO(text))
    columns = next(reader)
    rows = []
    for raw in reader:
        parsed = []
        for cell in raw:
            try:
                parsed.append(int(cell))
            except ValueError:
                parsed.append(float(cell))
        rows.append(tuple(parsed))
    return Table(columns=columns, rows=rows)


def emit_json(table: Table, stream) -> None:
    records = [dict(zip(table.columns, map(_jsonable, row))) for row in table.rows]
    json.dump({"meta": table.meta, "rows": records}, stream, indent=2)
    stream.write("\n")


def _jsonable(value):
    if isinstance(value, (int, np.integer)):
        return int(value)
    return float(value)


def emit_gnuplot(table: Table, stream) -> None:
    """Two-column plain text (first two columns) for external plotters."""
    stream.write(f"# {table.columns[0]} {table.columns[1]}\n")
    for row in table.rows:
        stream.write(f"{_format_cell(row[0])} {_format_cell(row[1])}\n")


def _write_output(table: Table, args) -> None:
    if getattr(args, "gnuplot", False):
        emitter = emit_gnuplot
    elif args.format == "json":
        emitter = emit_json
    else:
        emitter = emit_csv
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            emitter(table, handle)
    else:
        emitter(table, sys.stdout)


def _resolve_tol(args, defaults: dict[str, float]) -> float:
    if args.tol is not None:
        return args.tol
    env = os.environ.get(_ENV_TOL)
    if env is not None:
        try:
            return float(env)
        except ValueError as exc:
            raise ValueError(f"{_ENV_TOL} must be a number, got {env!r}") from exc
    return defaults[args.model]


def _crw_inputs(args) -> tuple[crw.TransitionMatrix, crw.CRWInitialState]:
    if args.a is None:
        raise ValueError("model crw requires --a (left-persistence probability)")
    if args.d is None and args.b is None:
        raise ValueError("model crw requires --d (right-persistence) or --b (= 1 - d)")
    if args.d is not None and args.b is not None and abs(args.b - (1.0 - args.d)) > 1e-12:
        raise ValueError(f"inconsistent --b {args.b} and --d {args.d}: b must equal 1 - d")
    b = args.b if args.b is not None else 1.0 - args.d
    transition = crw.TransitionMatrix(a=args.a, b=b)
    phi_hat = crw.CRWInitialState.from_phi1(args.phi1)
    return transition, phi_hat


def _model_setup(args):
    """Closed-form r_n callable, simulated series factory, params dict."""
    model = args.model
    if model == "qw":
        if args.alpha_sq is None:
            raise ValueError("model qw requires --alpha-sq")
        coin = qw.CoinMatrix.from_alpha_sq(args.alpha_sq)
        phi = qw.QWInitialState.canonical()
        return (
            lambda n: qw.return_closed_qw(args.alpha_sq, n),
            lambda nmax: qw.simulate_return(coin, phi, nmax),
            {"alpha_sq": args.alpha_sq},
        )
    if model == "hadamard":
        coin = qw.CoinMatrix.hadamard()
        phi = qw.QWInitialState.canonical()
        return (
            qw.return_hadamard,
            lambda nmax: qw.simulate_return(coin, phi, nmax),
            {"alpha_sq": 0.5},
        )
    if model == "crw":
        transition, phi_hat = _crw_inputs(args)
        return (
            lambda n: crw.return_closed_crw(transition, phi_hat, n),
            lambda nmax: crw.simulate_return_crw(transition, phi_hat, nmax),
            {"a": transition.a, "b": transition.b, "phi1_hat": phi_hat.phi1_hat},
        )
    if model == "rw":
        if args.p is None:
            raise ValueError("model rw requires --p")
        transition = crw.TransitionMatrix.uncorrelated(args.p)
        phi_hat = crw.CRWInitialState.from_phi1(args.phi1)
        return (
            lambda n: crw.return_closed_crw(transition, phi_hat, n),
            lambda nmax: crw.simulate_return_crw(transition, phi_hat, nmax),
            {"p": args.p},
        )
    raise ValueError(f"model {model!r} is not supported by this command")


def cmd_return(args) -> int:
    if args.model not in RETURN_MODELS:
        raise ValueError(
            f"model {args.model!r} not supported by `return`; choose from {', '.join(RETURN_MODELS)}"
        )
    if args.nmax < 0:
        raise ValueError(f"--nmax must be non-negative, got {args.nmax}")
    tol = _resolve_tol(args, _RETURN_TOL)
    closed_fn, simulate, params = _model_setup(args)
    simulated = simulate(args.nmax)
    rows = []
    worst = 0.0
    for n in range(args.nmax + 1):
        closed = closed_fn(n)
        sim = simulated[n]
        err = abs(closed - sim)
        worst = max(worst, err)
        rows.append((n, closed, sim, err))
    table = Table(
        columns=["n", "r_closed", "r_simulated", "abs_err"],
        rows=rows,
        meta={
            "command": "return",
            "model": args.model,
            "params": params,
            "tolerance": tol,
            "version": __version__,
        },
    )
    _write_output(table, args)
    return 0 if worst <= tol else 1


def _closed_series(args, model: str, nmax: int):
    """Closed-form return series for the generating-function comparison."""
    if model == "qw":
        return qw.return_series_qw(args.alpha_sq, nmax)
    if model == "hadamard":
        return qw.return_series_qw(0.5, nmax)
    if model == "crw":
        transition, phi_hat = _crw_inputs(args)
        return crw.return_series_crw(transition, phi_hat, nmax)
    if model == "rw":
        transition = crw.TransitionMatrix.uncorrelated(args.p)
        return crw.return_series_crw(transition, crw.CRWInitialState.from_phi1(args.phi1), nmax)
    return genfunc.polya2d_series(nmax)


def cmd_genfunc(args) -> int:
    if args.model not in GENFUNC_MODELS:
        raise ValueError(
            f"model {args.model!r} not supported by `genfunc`; choose from {', '.join(GENFUNC_MODELS)}"
        )
    tol = _resolve_tol(args, _GENFUNC_TOL)
    if args.z_count < 1:
        raise ValueError(f"--z-count must be at least 1, got {args.z_count}")
    zgrid = np.linspace(args.z_start, args.z_stop, args.z_count)
    if np.any(np.abs(zgrid) >= 1.0):
        raise ValueError("z grid must lie strictly inside (-1, 1)")

    if args.model == "qw":
        if args.alpha_sq is None:
            raise ValueError("model qw requires --alpha-sq")
        closed_fn = lambda z: genfunc.gf_qw(args.alpha_sq, z)
        params = {"alpha_sq": args.alpha_sq}
    elif args.model == "hadamard":
        closed_fn = genfunc.gf_hadamard
        params = {"alpha_sq": 0.5}
    elif args.model == "crw":
        transition, phi_hat = _crw_inputs(args)
        closed_fn = lambda z: genfunc.gf_crw(transition, phi_hat, z)
        params = {"a": transition.a, "b": transition.b, "phi1_hat": phi_hat.phi1_hat}
    elif args.model == "rw":
        if args.p is None:
            raise ValueError("model rw requires --p")
        closed_fn = lambda z: genfunc.gf_rw(args.p, z)
        params = {"p": args.p}
    else:
        closed_fn = genfunc.polya2d_gf
        params = {}

    rows = []
    failed = False
    for z in map(float, zgrid):
        evaluation = genfunc.evaluate_vs_series(
            closed_fn(z), _closed_series(args, args.model, genfunc.truncation_for(z, tol)), z
        )
        if not evaluation.consistent(tol):
            failed = True
        rows.append(
            (z, evaluation.closed_value, evaluation.series_value, evaluation.abs_err, evaluation.tail_bound)
        )
    table = Table(
        columns=["z", "gf_closed", "gf_series", "abs_err", "tail_bound"],
        rows=rows,
        meta={
            "command": "genfunc",
            "model": args.model,
            "params": params,
            "tolerance": tol,
            "version": __version__,
        },
    )
    _write_output(table, args)
    return 1 if failed else 0


def cmd_verify(args) -> int:
    results = verify.run_suite(args.suite)
    width = max(len(r.name) for r in results)
    failed = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        failed += not r.passed
        print(f"[{status}] {r.name:<{width}}  residual={r.residual:.3e}  tol={r.tolerance:.1e}")
    print(f"{len(results) - failed}/{len(results)} checks passed ({args.suite})")
    return 1 if failed else 0


def cmd_dist(args) -> int:
    if args.model not in RETURN_MODELS:
        raise ValueError(
            f"model {args.model!r} not supported by `dist`; choose from {', '.join(RETURN_MODELS)}"
        )
    if not 0 <= args.nmax <= 10**5:
        raise ValueError(f"--nmax must lie in [0, 1e5], got {args.nmax}")
    if args.model in ("qw", "hadamard"):
        if args.model == "hadamard":
            coin = qw.CoinMatrix.hadamard()
            params = {"alpha_sq": 0.5}
        else:
            if args.alpha_sq is None:
                raise ValueError("model qw requires --alpha-sq")
            coin = qw.CoinMatrix.from_alpha_sq(args.alpha_sq)
            params = {"alpha_sq": args.alpha_sq}
        field_ = qw.evolve(coin, qw.QWInitialState.canonical(), args.nmax)
    else:
        if args.model == "crw":
            transition, phi_hat = _crw_inputs(args)
            params = {"a": transition.a, "b": transition.b, "phi1_hat": phi_hat.phi1_hat}
        else:
            if args.p is None:
                raise ValueError("model rw requires --p")
            transition = crw.TransitionMatrix.uncorrelated(args.p)
            phi_hat = crw.CRWInitialState.from_phi1(args.phi1)
            params = {"p": args.p}
        field_ = crw.evolve_crw(transition, phi_hat, args.nmax)
    dist = field_.position_distribution()
    rows = [(int(x), float(p)) for x, p in zip(field_.positions, dist)]
    table = Table(
        columns=["x", "probability"],
        rows=rows,
        meta={
            "command": "dist",
            "model": args.model,
            "params": params,
            "time": args.nmax,
            "total": float(dist.sum()),
            "version": __version__,
        },
    )
    _write_output(table, args)
    return 0


def _add_model_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--model", required=True, help="qw | hadamard | crw | rw | polya2d")
    parser.add_argument("--alpha-sq", type=float, help="|alpha|^2 of the qw coin, in (0, 1)")
    parser.add_argument("--a", type=float, help="crw left-persistence probability")
    parser.add_argument("--b", type=float, help="crw switch-to-left probability (= 1 - d)")
    parser.add_argument("--d", type=float, help="crw right-persistence probability")
    parser.add_argument("--phi1", type=float, default=0.5, help="crw initial left weight (default 0.5)")
    parser.add_argument("--p", type=float, help="rw left-step probability")


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--out", help="write the table to this path instead of stdout")
    parser.add_argument("--tol", type=float, help="comparison tolerance override")
    parser.add_argument(
        "--gnuplot", action="store_true", help="emit a two-column plain-text table"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="walkers-return",
        description="Return probabilities of 1-D quantum and correlated random walks, "
        "with closed-form / simulation / generating-function cross-checks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_return = sub.add_parser("return", help="tabulate closed-form vs simulated return probabilities")
    _add_model_flags(p_return)
    p_return.add_argument("--nmax", type=int, default=20, help="largest time step (default 20)")
    _add_output_flags(p_return)
    p_return.set_defaults(func=cmd_return)

    p_gf = sub.add_parser("genfunc", help="scan generating function vs truncated series over a z grid")
    _add_model_flags(p_gf)
    p_gf.add_argument("--z-start", type=float, default=0.1)
    p_gf.add_argument("--z-stop", type=float, default=0.9)
    p_gf.add_argument("--z-count", type=int, default=9)
    _add_output_flags(p_gf)
    p_gf.set_defaults(func=cmd_genfunc)

    p_verify = sub.add_parser("verify", help="run the cross-validation suites")
    p_verify.add_argument(
        "suite", nargs="?", default="all", choices=verify.SUITE_NAMES, help="suite to run"
    )
    p_verify.set_defaults(func=cmd_verify)

    p_dist = sub.add_parser("dist", help="full position distribution at one time step")
    _add_model_flags(p_dist)
    p_dist.add_argument("--nmax", type=int, default=10, help="time step (default 10)")
    _add_output_flags(p_dist)
    p_dist.set_defaults(func=cmd_dist)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
