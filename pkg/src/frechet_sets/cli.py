"""Command line interface: ``python -m frechet_sets <command> ...``.

Exit status is 0 on success, 1 on a domain error (invalid metric, empty
candidate set, ...) and 2 on a usage error (bad flags, unreadable or
malformed JSON). Reports go to stdout as JSON.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from .config import SCHEMA_VERSION, ConfigError, ExperimentConfig, dumps
from .equivalence import equivalence_classes, t2_slln_hypothesis
from .errors import FrechetSetsError
from .experiments import EXAMPLES, run_named_example
from .frechet import frechet_mean, medoid
from .ldp import rate_function, tail_decay_diagnostic
from .measures import measure_from_json
from .metric import MetricSpace, space_from_json, validate_metric
from .sampling import replicate
from .sets import MODES, PointSet, detect_convergence, kuratowski_limits


class UsageError(Exception):
    pass


def _load_json(arg: str, what: str):
    """Parse ``arg`` as inline JSON (when it starts with ``{`` or ``[``) or as a file path."""
    text = arg.strip()
    try:
        if text[:1] in "{[":
            return json.loads(text)
        with open(arg) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {what}: {exc}") from None
    except OSError as exc:
        raise UsageError(f"cannot read {what}: {exc}") from None


def _load_space(obj, base: Path | None = None) -> MetricSpace:
    if isinstance(obj, str):
        path = Path(obj)
        if base is not None and not path.is_absolute():
            path = base / path
        obj = _load_json(str(path), "space")
    return space_from_json(obj)


def _space_and_measure(args):
    meas_obj = _load_json(args.measure, "--measure") if args.measure else None
    if args.space:
        space = _load_space(_load_json(args.space, "--space"))
    elif isinstance(meas_obj, dict) and "space" in meas_obj:
        base = Path(args.measure).parent if not args.measure.lstrip().startswith("{") else None
        space = _load_space(meas_obj["space"], base)
    else:
        raise UsageError("a space is required: pass --space or embed 'space' in the measure file")
    if meas_obj is None:
        return space, None
    if isinstance(meas_obj, dict):
        meas_obj = {k: v for k, v in meas_obj.items() if k != "space"}
    return space, measure_from_json(space, meas_obj)


def _index_list(text: str | None) -> list[int] | None:
    if text is None:
        return None
    text = text.strip()
    if text.startswith("["):
        return [int(i) for i in json.loads(text)]
    return [int(t) for t in text.replace(";", ",").split(",") if t.strip()]


def _emit(obj) -> None:
    if isinstance(obj, dict):
        obj = {"schema_version": SCHEMA_VERSION, **obj}
    sys.stdout.write(dumps(obj) + "\n")


def cmd_validate(args):
    obj = _load_json(args.space, "--space")
    if isinstance(obj, dict) and "dist" in obj and "kind" not in obj:
        violations = validate_metric(obj["dist"])
        _emit({"valid": not violations, "violations": violations, "n_points": len(obj["dist"])})
        return 0 if not violations else 1
    space = space_from_json(obj)
    violations = validate_metric(space.dist)
    _emit({"valid": not violations, "violations": violations, "n_points": space.n_points})
    return 0 if not violations else 1


def cmd_mean(args):
    space, mu = _space_and_measure(args)
    if mu is None:
        raise UsageError("--measure is required")
    if args.restricted:
        if args.candidate is not None:
            raise UsageError("--restricted and --candidate are mutually exclusive")
        res = medoid(mu, args.p)
    else:
        cand = _index_list(args.candidate)
        res = frechet_mean(mu, None if cand is None else PointSet(space, tuple(cand)), args.p)
    _emit({"p": args.p, "restricted": bool(args.restricted), **res.to_json()})
    return 0


def cmd_medoid(args):
    args.restricted = True
    args.candidate = None
    return cmd_mean(args)


def cmd_equiv(args):
    space, mu = _space_and_measure(args)
    if mu is None:
        raise UsageError("--measure is required")
    part = equivalence_classes(mu)
    hyp = t2_slln_hypothesis(mu, args.p, args.restricted)
    _emit({"p": args.p, "restricted": bool(args.restricted), "blocks": part.to_json(), "hypothesis": hyp.to_json()})
    return 0


def cmd_limits(args):
    seq_obj = _load_json(args.input, "--input")
    if not isinstance(seq_obj, list) or not all(isinstance(s, list) for s in seq_obj):
        raise UsageError("limits input must be a JSON array of index arrays")
    if args.space:
        space = _load_space(_load_json(args.space, "--space"))
    else:
        from .metric import discrete

        size = max([max(s) for s in seq_obj if s] + list(_index_list(args.target) or []) + [0]) + 1
        space = discrete(max(size, 2))
    seq = [PointSet(space, tuple(s)) for s in seq_obj]
    if not seq:
        raise UsageError("limits input is an empty sequence")
    est = kuratowski_limits(seq, args.n0, args.recurrence)
    out = {"limits": est.to_json()}
    if args.target is not None:
        target = PointSet(space, tuple(_index_list(args.target)))
        modes = args.modes.split(",") if args.modes else list(MODES)
        out["detectors"] = detect_convergence(seq, target, modes, args.n0, args.recurrence, args.tolerance)
    _emit(out)
    return 0


def _write_csv(path: str, records) -> None:
    fields = ["rep", "n", "set", "rho", "counts"]
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fields)
        w.writeheader()
        for i, rec in enumerate(records):
            w.writerows(rec.rows(i))


def cmd_simulate(args):
    raw = _load_json(args.config, "--config")
    try:
        config = ExperimentConfig.from_json(raw)
    except (TypeError, ConfigError) as exc:
        raise UsageError(f"invalid config: {exc}") from None
    csv_path = args.csv or config.csv
    report = replicate(config, threads=args.threads, keep=bool(csv_path))
    records = report.pop("records", None)
    if csv_path:
        _write_csv(csv_path, records)
    report["config"] = config.to_json()
    _emit(report)
    return 0


def cmd_ldp(args):
    space, mu = _space_and_measure(args)
    if mu is None:
        raise UsageError("--measure is required")
    C = PointSet(space, tuple(_index_list(args.set)))
    res = rate_function(C, mu, args.p, args.resolution)
    _emit({"p": args.p, "set": C.to_list(), **res.to_json()})
    return 0


def cmd_decay(args):
    space, mu = _space_and_measure(args)
    if mu is None:
        raise UsageError("--measure is required")
    n_grid = _index_list(args.n_grid)
    rep = tail_decay_diagnostic(space, mu, args.p, args.epsilon, n_grid, args.reps, args.seed)
    if args.json:
        _emit(rep)
        return 0
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "estimate", "stderr", "censored"])
    for r in rep["rows"]:
        w.writerow([r["n"], repr(r["estimate"]), repr(r["stderr"]), int(r["censored"])])
    sys.stdout.write(buf.getvalue())
    return 0


def cmd_example(args):
    overrides = {
        "m": args.m,
        "N": args.N,
        "seed": args.seed,
        "reps": args.reps,
        "n_max": args.n_max,
        "tie_n": args.tie_n,
        "tie_reps": args.tie_reps,
    }
    report = run_named_example(args.name, overrides, threads=args.threads)
    _emit(report)
    return 0


def _threads(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("--threads must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frechet-sets",
        description="Set-valued Fréchet means, medoids and set-convergence diagnostics on finite metric spaces.",
    )
    parser.add_argument(
        "--threads", type=_threads, default=os.cpu_count() or 1,
        help="worker threads for replicate runs (output does not depend on it)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def space_measure(p, measure=True):
        p.add_argument("--space", help="space JSON file or inline JSON")
        if measure:
            p.add_argument("--measure", required=True, help="measure JSON file or inline JSON")

    p = sub.add_parser("validate", help="check the metric axioms of a space")
    p.add_argument("--space", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("mean", help="Fréchet p-mean set")
    space_measure(p)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--restricted", action="store_true", help="minimize over the support only")
    p.add_argument("--candidate", help="comma separated candidate point indices")
    p.set_defaults(func=cmd_mean)

    p = sub.add_parser("medoid", help="restricted Fréchet p-mean set")
    space_measure(p)
    p.add_argument("--p", type=float, default=2.0)
    p.set_defaults(func=cmd_medoid)

    p = sub.add_parser("equiv", help="equivalence classes and the single-class hypothesis")
    space_measure(p)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--restricted", action="store_true")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("limits", help="Kuratowski limit estimates and detectors for a set sequence")
    p.add_argument("--input", required=True, help="JSON array of point-index arrays")
    p.add_argument("--space", help="space JSON (default: discrete space on the indices seen)")
    p.add_argument("--target", help="target set for the detectors")
    p.add_argument("--modes", help=f"comma separated subset of {','.join(MODES)}")
    p.add_argument("--n0", type=int)
    p.add_argument("--recurrence", type=int, default=3)
    p.add_argument("--tolerance", type=float)
    p.set_defaults(func=cmd_limits)

    p = sub.add_parser("simulate", help="run a configured Monte Carlo experiment")
    p.add_argument("--config", required=True)
    p.add_argument("--csv", help="write per-checkpoint rows to this CSV file")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("ldp", help="grid upper bound on the rate function of a set")
    space_measure(p)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--set", required=True)
    p.add_argument("--resolution", type=int, default=40)
    p.set_defaults(func=cmd_ldp)

    p = sub.add_parser("decay", help="Monte Carlo tail-probability decay (CSV)")
    space_measure(p)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--n-grid", required=True, help="comma separated sample sizes")
    p.add_argument("--reps", type=int, default=10_000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--json", action="store_true", help="emit the full JSON report instead of CSV")
    p.set_defaults(func=cmd_decay)

    p = sub.add_parser("example", help="run a preset worked example")
    p.add_argument("name", choices=EXAMPLES)
    p.add_argument("--m", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--reps", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--tie-n", type=int)
    p.add_argument("--tie-reps", type=int)
    p.set_defaults(func=cmd_example)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 2
    except FrechetSetsError as exc:
        print(f"{parser.prog}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
