"""Command-line front end.

Five subcommands: ``norm`` (regular norm of a matrix file), ``thm1``
(batch interpolation-identity check on random matrices), ``extend``
(minimal-extension bracket for a problem file), ``hardy`` (torus
interpolation-ratio experiment), ``gen`` (seeded instance files).

Everything is deterministic: the subcommand, its flags, and the seed fix
every output byte.  Reports are JSON with a schema version stamp; tables
are CSV with a leading ``# schema=...`` comment line.  Exit codes: 0 when
the run's checks all pass, 1 when a check fails, 2 for usage, parse,
domain, budget, or I/O errors (one line ``error: <kind>: <reason>`` on
stderr).
"""

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from .calderon import verify_theorem1
from .errors import (BudgetError, DomainError, ParseError, RefusalError,
                     StructuralError)
from .extension import verify_theorem3
from .generate import DISTRIBUTIONS, random_extension_problem, random_matrix
from .hardy import hardy_experiment
from .instances import (SCHEMA_VERSION, extension_problem_to_obj,
                        matrix_to_obj, read_extension_problem, read_matrix)
from .model import ExponentSpec
from .norms import regular_norm


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of printing multi-line usage blobs."""

    def error(self, message):
        raise _UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    """A fully validated CLI invocation."""

    command: str
    seed: int
    tol: float
    trials: int
    output_format: str
    input_path: str = None
    output_path: str = None
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.tol > 0.0:
            raise DomainError(f"tolerance must be positive, got {self.tol!r}")
        if self.trials < 1:
            raise DomainError(f"trial count must be at least 1, got {self.trials!r}")
        if not 0 <= self.seed < 2 ** 64:
            raise DomainError(f"seed must be a 64-bit nonnegative integer, got {self.seed!r}")


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser():
    parser = _Parser(prog="regnorm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    norm = sub.add_parser("norm", help="regular norm of a matrix file")
    norm.add_argument("input", help="matrix JSON file")
    norm.add_argument("--p", default="2", help="exponent in [1, inf], accepts 'inf'")
    norm.add_argument("--tol", type=float, default=1e-9, help="bracket width target")
    norm.add_argument("--budget", type=int, default=10000, help="iteration cap")
    norm.add_argument("--out", default=None, help="report path (default stdout)")
    norm.add_argument("--format", choices=("json",), default="json")

    thm1 = sub.add_parser("thm1", help="interpolation identity on random batches")
    thm1.add_argument("--n", type=int, nargs="+", default=[3], help="matrix sizes")
    thm1.add_argument("--theta", type=float, action="append", default=None,
                      help="interpolation parameter in (0, 1); repeatable")
    thm1.add_argument("--trials", type=int, default=10, help="matrices per size")
    thm1.add_argument("--seed", type=int, default=0)
    thm1.add_argument("--tol", type=float, default=1e-4, help="relative gap tolerance")
    thm1.add_argument("--out", default=None)
    thm1.add_argument("--format", choices=("json", "csv"), default="json")

    ext = sub.add_parser("extend", help="minimal-extension bracket for a problem file")
    ext.add_argument("input", help="extension problem JSON file")
    ext.add_argument("--tol", type=float, default=5e-2,
                     help="largest acceptable relative bracket gap")
    ext.add_argument("--budget", type=int, default=400, help="descent iteration budget")
    ext.add_argument("--out", default=None)
    ext.add_argument("--format", choices=("json",), default="json")

    hardy = sub.add_parser("hardy", help="torus interpolation-ratio experiment")
    hardy.add_argument("--n", type=int, default=8, help="grid points")
    hardy.add_argument("--k", type=int, default=4,
                       help="subspace dimension (degree + 1 analytic characters)")
    hardy.add_argument("--m", type=int, default=4, help="target columns per trial")
    hardy.add_argument("--p", default="2", help="interior exponent, 1 < p < inf")
    hardy.add_argument("--trials", type=int, default=20)
    hardy.add_argument("--seed", type=int, default=0)
    hardy.add_argument("--budget", type=int, default=600)
    hardy.add_argument("--kind", choices=("random", "identity", "diagonal"),
                       default="random", help="trial family")
    hardy.add_argument("--out", default=None,
                       help="CSV path; the JSON summary lands next to it")
    hardy.add_argument("--format", choices=("csv", "json"), default="csv")

    gen = sub.add_parser("gen", help="write a seeded random instance file")
    gen.add_argument("--kind", choices=("matrix", "extprob"), default="matrix")
    gen.add_argument("--n", type=int, required=True, help="rows / ambient dimension")
    gen.add_argument("--m", type=int, default=None, help="cols / target dimension")
    gen.add_argument("--k", type=int, default=2, help="subspace dimension (extprob)")
    gen.add_argument("--p", default="2", help="exponent stored on extension problems")
    gen.add_argument("--dist", choices=DISTRIBUTIONS, default="gaussian")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default=None)
    gen.add_argument("--format", choices=("json",), default="json")

    return parser


def _parse_exponent(token):
    try:
        return ExponentSpec.parse(token)
    except DomainError as exc:
        raise _UsageError(str(exc))


def _config_from_args(args):
    options = {}
    if args.command == "norm":
        options["p"] = _parse_exponent(args.p)
        options["budget"] = args.budget
    elif args.command == "thm1":
        thetas = args.theta if args.theta is not None else [0.5]
        for theta in thetas:
            if not 0.0 < theta < 1.0:
                raise _UsageError(f"theta must lie strictly in (0, 1), got {theta!r}")
        for n in args.n:
            if n < 1:
                raise _UsageError(f"matrix size must be at least 1, got {n!r}")
        options["sizes"] = tuple(args.n)
        options["thetas"] = tuple(thetas)
    elif args.command == "extend":
        options["budget"] = args.budget
    elif args.command == "hardy":
        if args.n < 1:
            raise _UsageError(f"grid size must be at least 1, got {args.n!r}")
        if args.k < 1 or args.m < 1:
            raise _UsageError("subspace and target dimensions must be at least 1")
        options.update(n=args.n, k=args.k, m=args.m, budget=args.budget,
                       kind=args.kind, p=_parse_exponent(args.p))
    elif args.command == "gen":
        if args.n < 1:
            raise _UsageError(f"size must be at least 1, got {args.n!r}")
        if args.m is not None and args.m < 1:
            raise _UsageError(f"target dimension must be at least 1, got {args.m!r}")
        if args.k < 1:
            raise _UsageError(f"subspace dimension must be at least 1, got {args.k!r}")
        options.update(kind=args.kind, n=args.n, m=args.m, k=args.k,
                       dist=args.dist, p=_parse_exponent(args.p))
    if "budget" in options and options["budget"] < 1:
        raise _UsageError(f"budget must be at least 1, got {options['budget']!r}")
    try:
        return RunConfig(
            command=args.command,
            seed=getattr(args, "seed", 0),
            tol=getattr(args, "tol", 1e-9),
            trials=getattr(args, "trials", 1),
            output_format=args.format,
            input_path=getattr(args, "input", None),
            output_path=args.out,
            options=options,
        )
    except DomainError as exc:
        raise _UsageError(str(exc))


# ---------------------------------------------------------------------------
# rendering


def _render_json(body):
    report = {"schema": SCHEMA_VERSION}
    report.update(body)
    return json.dumps(report, indent=2, separators=(",", ": "), sort_keys=False) + "\n"


def _render_csv(fieldnames, rows):
    buf = io.StringIO()
    buf.write(f"# schema={SCHEMA_VERSION}\n")
    writer = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _encode_exponent(p):
    return "inf" if p.is_inf else float(p.p)


def _real_list(vec):
    return [float(v) for v in np.asarray(vec).reshape(-1)]


def _vector_pairs(vec):
    return [[float(z.real), float(z.imag)] for z in np.asarray(vec, dtype=complex).reshape(-1)]


# ---------------------------------------------------------------------------
# subcommands


def cmd_norm(config):
    A = read_matrix(config.input_path)
    p = config.options["p"]
    wit = regular_norm(A, p, config.tol, max_iter=config.options["budget"])
    body = {
        "command": "norm",
        "p": _encode_exponent(p),
        "value": float(wit.value),
        "bracket": [float(wit.lower), float(wit.upper)],
        "witness_x": _real_list(wit.maximizer.coords),
        "witness_y": _real_list(wit.dual.coords),
    }
    _emit(_render_json(body), config.output_path)
    return 0


_THM1_FIELDS = ("n", "theta", "trial", "regular", "calderon", "pairing", "gap", "passed")


def cmd_thm1(config):
    rng = np.random.default_rng(config.seed)
    rows = []
    for n in config.options["sizes"]:
        for trial in range(config.trials):
            A = random_matrix(n, n, rng, dist="gaussian")
            for theta in config.options["thetas"]:
                res = verify_theorem1(A, theta, tol=config.tol)
                rows.append({
                    "n": n,
                    "theta": float(theta),
                    "trial": trial,
                    "regular": float(res["regular"]),
                    "calderon": float(res["calderon"]),
                    "pairing": float(res["pairing"]),
                    "gap": float(res["gap"]),
                    "passed": bool(res["passed"]),
                })
    failures = sum(1 for row in rows if not row["passed"])
    summary = {
        "instances": len(rows),
        "failures": failures,
        "worst_gap": max(row["gap"] for row in rows),
        "passed": failures == 0,
    }
    if config.output_format == "csv":
        _emit(_render_csv(_THM1_FIELDS, rows), config.output_path)
    else:
        body = {
            "command": "thm1",
            "parameters": {
                "sizes": list(config.options["sizes"]),
                "thetas": list(config.options["thetas"]),
                "trials": config.trials,
                "seed": config.seed,
                "tol": config.tol,
            },
            "rows": rows,
            "summary": summary,
        }
        _emit(_render_json(body), config.output_path)
    return 0 if failures == 0 else 1


def cmd_extend(config):
    prob = read_extension_problem(config.input_path)
    report = verify_theorem3(prob, budget=config.options["budget"])
    body = {
        "command": "extend",
        "min": float(report.min_extension_norm),
        "lower": float(report.subspace_lower_bound),
        "gap": float(report.gap),
        "minimizer": matrix_to_obj(report.minimizer),
        "family": [_vector_pairs(row) for row in report.best_family.members],
    }
    _emit(_render_json(body), config.output_path)
    return 0 if report.gap <= config.tol else 1


_HARDY_FIELDS = ("trial", "r_p", "r_inf", "r_1", "interpolated_bound", "ratio")


def cmd_hardy(config):
    opts = config.options
    result = hardy_experiment(opts["n"], opts["k"] - 1, opts["m"], opts["p"],
                              config.trials, config.seed,
                              trial_kind=opts["kind"], budget=opts["budget"])
    rows = [{name: row[name] for name in _HARDY_FIELDS} for row in result["rows"]]
    if config.output_format == "json":
        body = {"command": "hardy", "parameters": result["parameters"],
                "rows": rows, "summary": result["summary"]}
        _emit(_render_json(body), config.output_path)
        return 0
    table = _render_csv(_HARDY_FIELDS, rows)
    summary = _render_json({"command": "hardy", "parameters": result["parameters"],
                            "summary": result["summary"]})
    if config.output_path is None:
        _emit(table, None)
        _emit(summary, None)
    else:
        _emit(table, config.output_path)
        _emit(summary, config.output_path + ".summary.json")
    return 0


def cmd_gen(config):
    opts = config.options
    rng = np.random.default_rng(config.seed)
    if opts["kind"] == "matrix":
        cols = opts["m"] if opts["m"] is not None else opts["n"]
        A = random_matrix(opts["n"], cols, rng, dist=opts["dist"])
        body = matrix_to_obj(A)
    else:
        cols = opts["m"] if opts["m"] is not None else 2
        prob = random_extension_problem(opts["n"], opts["k"], cols, opts["p"],
                                        rng, dist=opts["dist"])
        body = extension_problem_to_obj(prob)
    _emit(_render_json(body), config.output_path)
    return 0


_COMMANDS = {
    "norm": cmd_norm,
    "thm1": cmd_thm1,
    "extend": cmd_extend,
    "hardy": cmd_hardy,
    "gen": cmd_gen,
}

_ERROR_KINDS = (
    (ParseError, "parse"),
    (StructuralError, "structure"),
    (BudgetError, "budget"),
    (RefusalError, "refusal"),
    (DomainError, "domain"),
    (OSError, "io"),
)


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        config = _config_from_args(args)
    except _UsageError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return 2
    try:
        return _COMMANDS[config.command](config)
    except tuple(exc for exc, _ in _ERROR_KINDS) as exc:
        kind = next(name for cls, name in _ERROR_KINDS if isinstance(exc, cls))
        print(f"error: {kind}: {exc}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        print("error: interrupted", file=sys.stderr)
        return 130


if __name__ == "__main__":
    sys.exit(main())
