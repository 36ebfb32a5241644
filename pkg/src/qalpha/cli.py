"""Command-line front end: ``qalpha <subcommand> ...``.

Machine-readable output goes to stdout, diagnostics to stderr. Exit status
is 0 on success, 1 on a validation failure and 2 on a parse error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import reference
from .channels import dpi_random_search
from .classical import theorem7_residual
from .divergences import ALPHA_FREE, DIVERGENCES, LogBase, get_divergence
from .errors import ParseError, QAlphaError
from .io import SweepSpec, parse_state_file, sweep

ENV_BASE = "QALPHA_LOG_BASE"

EXIT_OK, EXIT_INVALID, EXIT_PARSE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message, "command line")


def _json_number(x):
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _emit(obj, out):
    out.write(json.dumps(obj, indent=2, allow_nan=False) + "\n")


def resolve_base(flag, environ=None):
    """``--base`` wins over ``QALPHA_LOG_BASE``, which wins over base 2."""
    environ = os.environ if environ is None else environ
    if flag is not None:
        return LogBase.coerce(flag)
    env = environ.get(ENV_BASE)
    if env is None or env == "":
        return LogBase.TWO
    try:
        return LogBase.coerce(env)
    except ValueError:
        raise ParseError(f"must be '2' or 'e', got {env!r}", ENV_BASE) from None


def _need_alpha(name, alpha):
    if name not in ALPHA_FREE and alpha is None:
        raise ParseError(f"--alpha is required for {name}", "command line")


def cmd_compute(args, base, out):
    _need_alpha(args.divergence, args.alpha)
    rho, sigma = parse_state_file(args.rho), parse_state_file(args.sigma)
    value = get_divergence(args.divergence)(rho, sigma, args.alpha, base)
    _emit(
        {
            "divergence": args.divergence,
            "alpha": None if args.divergence in ALPHA_FREE else args.alpha,
            "base": base.value,
            "value": _json_number(value),
            "infinity_reason": getattr(getattr(value, "infinity_reason", None), "value", None),
        },
        out,
    )


def _sweep_states(args):
    if args.pair is not None:
        if args.rho or args.sigma:
            raise ParseError("give either two state files or --pair, not both", "command line")
        _, rho, sigma, _ = reference.table_pairs()[args.pair - 1]
        return rho, sigma
    if not (args.rho and args.sigma):
        raise ParseError("sweep needs two state files or --pair N", "command line")
    return parse_state_file(args.rho), parse_state_file(args.sigma)


def cmd_sweep(args, base, out):
    rho, sigma = _sweep_states(args)
    names = tuple(n.strip() for n in args.divergences.split(",") if n.strip())
    for n in names:
        if n not in DIVERGENCES:
            raise ParseError(f"unknown divergence {n!r}", "--divergences")
    spec = SweepSpec(args.alpha_min, args.alpha_max, args.steps, names, base)
    text = sweep(rho, sigma, spec)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        print(f"wrote {len(text.splitlines()) - 1} rows to {args.out}", file=sys.stderr)
    else:
        out.write(text)


def cmd_dpi_probe(args, base, out):
    _need_alpha(args.divergence, args.alpha)
    report = dpi_random_search(args.divergence, args.alpha, args.in_dim, args.out_dim, args.trials, args.seed, base)
    payload = report.to_dict()
    payload["base"] = base.value
    payload["seed"] = args.seed
    payload["worst_gap"] = _json_number(payload["worst_gap"])
    _emit(payload, out)


def cmd_nz_check(args, base, out):
    rho, sigma = parse_state_file(args.rho), parse_state_file(args.sigma)
    r = theorem7_residual(rho, sigma, args.alpha, base)
    _emit({"alpha": args.alpha, "base": base.value, "residual": _json_number(r)}, out)


def cmd_paper_examples(args, base, out):
    report = reference.run_reference_examples(base)
    for c in report["checks"]:
        c["computed"] = _json_number(c["computed"])
        if not c["passed"]:
            print(f"FAIL {c['name']}: computed {c['computed']}, expected {c['expected']}", file=sys.stderr)
    print(f"{report['passed']}/{report['total']} checks passed", file=sys.stderr)
    _emit(report, out)


def build_parser():
    p = _Parser(prog="qalpha", description="Quantum relative alpha-entropy toolkit.")
    p.add_argument("--base", choices=["2", "e"], default=None, help=f"log base (default: ${ENV_BASE} or 2)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("compute", help="evaluate one divergence on two state files")
    c.add_argument("rho")
    c.add_argument("sigma")
    c.add_argument("--divergence", default="s_alpha", choices=sorted(DIVERGENCES))
    c.add_argument("--alpha", type=float)
    c.add_argument("--base", choices=["2", "e"], default=argparse.SUPPRESS)
    c.set_defaults(func=cmd_compute)

    s = sub.add_parser("sweep", help="tabulate divergences over an alpha grid as CSV")
    s.add_argument("rho", nargs="?")
    s.add_argument("sigma", nargs="?")
    s.add_argument("--pair", type=int, choices=[1, 2, 3], help="use a built-in benchmark pair instead of files")
    s.add_argument("--alpha-min", type=float, default=0.1)
    s.add_argument("--alpha-max", type=float, default=3.0)
    s.add_argument("--steps", type=int, default=59)
    s.add_argument("--divergences", default="s_alpha", help="comma-separated names")
    s.add_argument("--out", help="write CSV here instead of stdout")
    s.add_argument("--base", choices=["2", "e"], default=argparse.SUPPRESS)
    s.set_defaults(func=cmd_sweep)

    d = sub.add_parser("dpi-probe", help="random search for data-processing violations")
    d.add_argument("--divergence", default="s_alpha", choices=sorted(DIVERGENCES))
    d.add_argument("--alpha", type=float)
    d.add_argument("--in-dim", type=int, default=2)
    d.add_argument("--out-dim", type=int, default=2)
    d.add_argument("--trials", type=int, default=100)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--base", choices=["2", "e"], default=argparse.SUPPRESS)
    d.set_defaults(func=cmd_dpi_probe)

    n = sub.add_parser("nz-check", help="residual between S_alpha and its Nussbaum-Szkola form")
    n.add_argument("rho")
    n.add_argument("sigma")
    n.add_argument("--alpha", type=float, required=True)
    n.add_argument("--base", choices=["2", "e"], default=argparse.SUPPRESS)
    n.set_defaults(func=cmd_nz_check)

    e = sub.add_parser("paper-examples", help="score the built-in benchmark cases")
    e.set_defaults(func=cmd_paper_examples)
    return p


def main(argv=None, stdout=None, environ=None) -> int:
    out = sys.stdout if stdout is None else stdout
    try:
        args = build_parser().parse_args(argv)
        base = resolve_base(args.base, environ)
        args.func(args, base, out)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except QAlphaError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
