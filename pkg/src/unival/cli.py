"""Command-line driver: ``unival run | list-suites | eval``."""
import argparse
import json
import os
import sys

from .convex_functions import from_dict as function_from_dict
from .pipeline import DESCRIPTIONS, SUITES, ExperimentConfig, emit, run_suite
from .valuation_engine import Quadrature, spec_from_dict


def _load_json(arg):
    """Inline JSON or a path to a JSON file."""
    if os.path.exists(arg):
        with open(arg) as fh:
            return json.load(fh)
    return json.loads(arg)


def _cmd_run(args):
    cfg = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
    if args.seed is not None:
        cfg.seed = args.seed
    report = run_suite(args.suite, cfg)
    out = args.out or cfg.out
    text = emit(report, args.format, timing=args.timing)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    bad = report.failures()
    print(f"{args.suite}: {len(report.cases) - len(bad)}/{len(report.cases)} passed, "
          f"max residual {report.max_residual:.3e}, {report.wall_time:.1f}s", file=sys.stderr)
    for c in bad[:10]:
        print(f"  FAIL {c.case}: {c.statement} (residual {c.residual:.3e} >= {c.tolerance:.1e})", file=sys.stderr)
    return 0 if not bad else 1


def _cmd_list(args):
    for name in SUITES:
        print(f"{name:10s} {DESCRIPTIONS[name]}")
    return 0


def _cmd_eval(args):
    mu = spec_from_dict(_load_json(args.valuation))
    f = function_from_dict(_load_json(args.function))
    if f.dim != mu.dim:
        raise SystemExit(f"function lives on R^{f.dim}, valuation on C^{mu.n}")
    value = mu.evaluate(f, Quadrature(args.order, args.panels))
    print(json.dumps({"value": value}))
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="unival", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a verification suite")
    r.add_argument("--suite", required=True, choices=sorted(SUITES))
    r.add_argument("--config", help="JSON config file (defaults used when omitted)")
    r.add_argument("--seed", type=int)
    r.add_argument("--out", help="write the report here instead of stdout")
    r.add_argument("--format", choices=["record", "table"], default="record")
    r.add_argument("--timing", action="store_true", help="include wall time in the report")
    r.set_defaults(func=_cmd_run)

    ls = sub.add_parser("list-suites", help="list suite names")
    ls.set_defaults(func=_cmd_list)

    e = sub.add_parser("eval", help="evaluate one valuation on one convex function")
    e.add_argument("--valuation", required=True, help="valuation spec (JSON text or file)")
    e.add_argument("--function", required=True, help="function spec (JSON text or file)")
    e.add_argument("--order", type=int, default=24)
    e.add_argument("--panels", type=int, default=2)
    e.set_defaults(func=_cmd_eval)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
