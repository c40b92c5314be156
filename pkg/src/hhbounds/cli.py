"""Command-line front end.

Subcommands:

* ``bound``   -- evaluate one right-hand-side bound.
* ``verify``  -- run a verification campaign, emit a JSON/CSV/table report.
* ``means``   -- special means and the power-mean inequality checks.
* ``identity`` -- residual of the kernel representation of the functional.
* ``pconvex`` -- grid P-convexity check of a corpus function.
* ``search``  -- randomized counterexample search for one claim.

All real-valued inputs also accept exact fraction syntax ``p/q``.  The
environment variable ``HHBOUNDS_SEED`` overrides ``--seed`` when set.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__, bounds, functionals, harness, means
from .corpus import GridSpec, Interval, check_p_convex, function_ids, get_function
from .records import VerificationRecord

USAGE_ERROR = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def parse_real(text: str) -> Fraction:
    """Parse a real-valued flag: decimal, integer, or exact 'p/q'."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _parse_rule(text: str):
    if text in ("midpoint", "trapezoid", "simpson"):
        return text
    if text.startswith("lambda="):
        lam = parse_real(text.split("=", 1)[1])
        if not 0 <= lam <= 1:
            raise argparse.ArgumentTypeError("lambda must lie in [0, 1]")
        return lam
    raise argparse.ArgumentTypeError(
        "rule must be midpoint, trapezoid, simpson or lambda=<x>"
    )


def _split_ids(text: str) -> tuple[str, ...]:
    if text == "all":
        return ("all",)
    return tuple(part for part in (p.strip() for p in text.split(",")) if part)


def _parse_grid(text: str) -> tuple[float, ...]:
    values = tuple(float(parse_real(p)) for p in text.split(",") if p.strip())
    if not values:
        raise argparse.ArgumentTypeError("grid must contain at least one value")
    return values


@dataclass(frozen=True)
class _FracDomain:
    lo: Fraction
    hi: Fraction


def _fmt(value: float) -> str:
    return f"{value:.17g}"


# ---------------------------------------------------------------------------
# Report serialization
# ---------------------------------------------------------------------------

_RECORD_FIELDS = (
    "claim",
    "function",
    "a",
    "b",
    "lambda",
    "q",
    "lhs",
    "rhs",
    "margin",
    "status",
    "exact",
)


def report_document(result: harness.CampaignResult) -> dict:
    return {
        "version": __version__,
        "config": result.config.as_dict(),
        "records": [r.as_dict() for r in result.records],
        "summary": result.summary,
    }


def to_json(doc: dict) -> str:
    return json.dumps(doc, indent=2)


def to_csv(records: Sequence[VerificationRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_RECORD_FIELDS)
    for r in records:
        d = r.as_dict()
        row = []
        for k in _RECORD_FIELDS:
            v = d[k]
            if v is None:
                row.append("")
            elif isinstance(v, bool):
                row.append("true" if v else "false")
            elif isinstance(v, float):
                row.append(repr(v))
            else:
                row.append(str(v))
        writer.writerow(row)
    return buf.getvalue()


def to_table(doc: dict) -> str:
    lines = []
    header = f"{'claim':<18} {'function':<8} {'a':>9} {'b':>9} {'lambda':>8} {'q':>6} {'lhs':>13} {'rhs':>13} {'margin':>13} {'status':<17} exact"
    lines.append(header)
    lines.append("-" * len(header))

    def num(v, width, digits=6):
        return ("" if v is None else f"{v:.{digits}g}").rjust(width)

    for r in doc["records"]:
        lines.append(
            f"{r['claim']:<18} {r['function']:<8} {num(r['a'], 9)} {num(r['b'], 9)}"
            f" {num(r['lambda'], 8, 4)} {num(r['q'], 6, 4)} {num(r['lhs'], 13)}"
            f" {num(r['rhs'], 13)} {num(r['margin'], 13)} {r['status']:<17}"
            f" {'yes' if r['exact'] else 'no'}"
        )
    s = doc["summary"]
    lines.append("")
    lines.append(f"records: {s['total']}  " + "  ".join(f"{k}={v}" for k, v in s["by_status"].items()))
    if s["violated_stated_only"]:
        lines.append("violated (stated-only): " + ", ".join(s["violated_stated_only"]))
    if s["violated_proof_backed"]:
        lines.append(
            "violated (proof-backed, implementation bug): "
            + ", ".join(s["violated_proof_backed"])
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _cmd_bound(args, parser) -> int:
    a, b = args.a, args.b
    if not a < b:
        parser.error("--a must be less than --b")
    domain = Interval(float(a), float(b))
    frac_domain = _FracDomain(a, b)
    rule = args.rule
    q = args.q if args.q is not None else Fraction(1)
    if q < 1:
        parser.error("--q must be >= 1")
    variant = args.variant

    if args.ma is not None or args.mb is not None:
        if args.ma is None or args.mb is None:
            parser.error("--ma and --mb must be given together")
        if isinstance(rule, str):
            claim = {"midpoint": "cor1", "trapezoid": "cor2", "simpson": "cor3"}[rule]
            claim = f"{claim}-{variant}"
            lam = bounds.RULE_LAMBDA_EXACT[rule]
        else:
            claim = f"thm6-{variant}"
            lam = rule
        if q == 1:
            value = float(
                bounds.bound_theorem6_exact(frac_domain, lam, 1, args.ma, args.mb, variant)
            )
        else:
            value = float(
                bounds.bound_theorem6_mp(
                    frac_domain, lam, q, args.ma, args.mb, variant
                )
            )
        print(f"{claim} {_fmt(value)}")
        return 0

    if args.big_m is not None:
        if not isinstance(rule, str):
            parser.error("--big-m requires a named rule (midpoint/trapezoid/simpson)")
        num = {"midpoint": 4, "trapezoid": 5, "simpson": 8}[rule]
        claim = f"cor{num}-relaxed" if args.form == "relaxed" else f"cor{num}-{variant}"
        if args.form == "relaxed" or q == 1:
            value = float(
                bounds.bound_bounded_m_exact(
                    rule, frac_domain, q, args.big_m, args.form, variant
                )
            )
        else:
            env = bounds.DerivativeEnvelope(sup_abs_d2=float(args.big_m))
            value = bounds.bound_bounded_m(
                rule, domain, float(q), env, args.form, variant
            )
        print(f"{claim} {_fmt(value)}")
        return 0

    if args.k_lo is not None or args.k_hi is not None:
        if args.k_lo is None or args.k_hi is None:
            parser.error("--k-lo and --k-hi must be given together")
        if rule not in ("midpoint", "trapezoid"):
            parser.error("--k-lo/--k-hi apply to the midpoint or trapezoid rule")
        lo_b, hi_b = bounds.bound_classical_exact(
            rule, frac_domain, lower_d2=args.k_lo, upper_d2=args.k_hi
        )
        claim = "mid-envelope" if rule == "midpoint" else "trap-envelope"
        print(f"{claim} {_fmt(float(lo_b))} {_fmt(float(hi_b))}")
        return 0

    if args.d4_sup is not None:
        if rule != "simpson":
            parser.error("--d4-sup applies to the simpson rule")
        value = float(
            bounds.bound_classical_exact(
                "simpson", frac_domain, sup_abs_d4=args.d4_sup, p=args.p
            )
        )
        print(f"simpson-4th-p{args.p} {_fmt(value)}")
        return 0

    parser.error("provide endpoint data (--ma/--mb) or an envelope flag")
    return USAGE_ERROR


def _campaign_config(args, parser) -> harness.CampaignConfig:
    seed = args.seed
    env_seed = os.environ.get("HHBOUNDS_SEED")
    if env_seed is not None:
        try:
            seed = int(env_seed)
        except ValueError:
            parser.error(f"HHBOUNDS_SEED is not an integer: {env_seed!r}")
    kwargs = {}
    if args.lambda_grid is not None:
        kwargs["lambda_grid"] = args.lambda_grid
    if args.q_grid is not None:
        kwargs["q_grid"] = args.q_grid
    return harness.CampaignConfig(
        claims=args.claims,
        functions=args.functions,
        trials=args.trials,
        seed=seed,
        **kwargs,
    )


def _validate_ids(config, parser) -> None:
    try:
        harness.resolve_claims(config.claims)
        harness.resolve_functions(config.functions, None)
    except KeyError as exc:
        parser.error(str(exc.args[0]))


def _cmd_verify(args, parser) -> int:
    config = _campaign_config(args, parser)
    _validate_ids(config, parser)
    result = harness.run_campaign(config)
    doc = report_document(result)
    if args.format == "json":
        payload = to_json(doc) + "\n"
    elif args.format == "csv":
        payload = to_csv(result.records)
    else:
        payload = to_table(doc)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(payload)
        s = result.summary
        print(
            f"wrote {s['total']} records to {args.out} "
            f"(violated: {s['by_status']['violated']})",
            file=sys.stderr,
        )
    else:
        sys.stdout.write(payload)

    if result.summary["violated_proof_backed"]:
        return 2
    if result.summary["violated_stated_only"]:
        return 1
    return 0


def _cmd_means(args, parser) -> int:
    if args.prop is None:
        if args.a is None or args.b is None:
            parser.error("--a and --b are required")
        a, b = float(args.a), float(args.b)
        print(f"A {_fmt(means.mean_arithmetic(a, b))}")
        if a != b:
            print(f"L {_fmt(means.mean_logarithmic(a, b))}")
        if args.n is not None:
            print(f"L{args.n} {_fmt(means.mean_generalized_log(a, b, args.n))}")
        return 0

    if args.n is None:
        parser.error("--n is required with --prop")
    if abs(args.n * (args.n - 1)) < 3:
        print(
            f"note: |n(n-1)| = {abs(args.n * (args.n - 1))} < 3 is outside the "
            "stated hypothesis",
            file=sys.stderr,
        )
    q = float(args.q) if args.q is not None else 1.0
    rec = means.check_proposition(
        args.prop, args.a, args.b, args.n, q, args.variant
    )
    print(
        f"{rec.claim} n={args.n} a={_fmt(rec.a)} b={_fmt(rec.b)} q={_fmt(rec.q)} "
        f"lhs={_fmt(rec.lhs)} rhs={_fmt(rec.rhs)} margin={_fmt(rec.margin)} "
        f"status={rec.status}"
    )
    return 1 if rec.status == "violated" else 0


def _cmd_identity(args, parser) -> int:
    fn = _lookup_function(args.function, parser)
    domain = Interval(float(args.a), float(args.b))
    residual = functionals.identity_residual(fn, domain, float(args.lam))
    print(f"residual {_fmt(residual)}")
    return 2 if residual > 1e-8 else 0


def _cmd_pconvex(args, parser) -> int:
    fn = _lookup_function(args.function, parser)
    domain = Interval(float(args.a), float(args.b))
    grid = GridSpec(*args.grid) if args.grid else GridSpec()
    report = check_p_convex(fn.f, domain, grid)
    if report.status == "passed":
        print(f"passed samples={report.samples_checked}")
        return 0
    if report.status == "failed":
        w = report.witness
        print(
            f"failed witness x={_fmt(w.x)} y={_fmt(w.y)} lam={_fmt(w.lam)} "
            f"lhs={_fmt(w.lhs)} rhs={_fmt(w.rhs)} samples={report.samples_checked}"
        )
        return 1
    print(f"undefined at x={_fmt(report.undefined_at)}")
    return 2


def _cmd_search(args, parser) -> int:
    config = _campaign_config(args, parser)
    _validate_ids(config, parser)
    try:
        claim = harness.get_claim(args.claim)
    except KeyError as exc:
        parser.error(str(exc.args[0]))
    outcome = harness.find_counterexample(claim.id, config)
    if outcome.record is None:
        print(f"no counterexample found for {claim.id} in {outcome.trials} trials")
    else:
        r = outcome.record
        print(
            f"counterexample for {claim.id} after {outcome.trials} trials: "
            f"function={r.function} a={_fmt(r.a)} b={_fmt(r.b)} "
            f"lambda={'-' if r.lam is None else _fmt(r.lam)} "
            f"q={'-' if r.q is None else _fmt(r.q)} "
            f"lhs={_fmt(r.lhs)} rhs={_fmt(r.rhs)} margin={_fmt(r.margin)}"
        )
    return 0


def _lookup_function(fid: str, parser):
    try:
        return get_function(fid)
    except KeyError as exc:
        parser.error(str(exc.args[0]))


def _int_grid(text: str) -> tuple[int, ...]:
    parts = tuple(int(p) for p in text.split(",") if p.strip())
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("grid must be nx,ny,nlam")
    return parts


def build_parser() -> _Parser:
    parser = _Parser(prog="hhbounds", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_bound = sub.add_parser("bound", help="evaluate one bound")
    p_bound.add_argument("--rule", type=_parse_rule, required=True)
    p_bound.add_argument("--a", type=parse_real, required=True)
    p_bound.add_argument("--b", type=parse_real, required=True)
    p_bound.add_argument("--q", type=parse_real)
    p_bound.add_argument("--variant", choices=("stated", "derived"), default="stated")
    p_bound.add_argument("--ma", type=parse_real, help="|f''(a)|")
    p_bound.add_argument("--mb", type=parse_real, help="|f''(b)|")
    p_bound.add_argument("--big-m", type=parse_real, help="uniform bound M on |f''|")
    p_bound.add_argument("--form", choices=("with_q", "relaxed"), default="with_q")
    p_bound.add_argument("--k-lo", type=parse_real, help="lower bound on f''")
    p_bound.add_argument("--k-hi", type=parse_real, help="upper bound on f''")
    p_bound.add_argument("--d4-sup", type=parse_real, help="sup |f''''|")
    p_bound.add_argument("--p", type=int, choices=(2, 4), default=4)

    p_verify = sub.add_parser("verify", help="run a verification campaign")
    p_verify.add_argument("--claims", type=_split_ids, default=("all",))
    p_verify.add_argument("--functions", type=_split_ids, default=("all",))
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument(
        "--trials", type=int, default=0, help="number of random intervals to add"
    )
    p_verify.add_argument("--lambda-grid", type=_parse_grid, default=None)
    p_verify.add_argument("--q-grid", type=_parse_grid, default=None)
    p_verify.add_argument("--format", choices=("json", "csv", "table"), default="json")
    p_verify.add_argument("--out", default=None)

    p_means = sub.add_parser("means", help="special means and inequality checks")
    p_means.add_argument("--prop", type=int, choices=(1, 2, 3))
    p_means.add_argument("--n", type=int)
    p_means.add_argument("--a", type=parse_real, required=True)
    p_means.add_argument("--b", type=parse_real, required=True)
    p_means.add_argument("--q", type=parse_real)
    p_means.add_argument("--variant", choices=("stated", "derived"), default="stated")

    p_id = sub.add_parser("identity", help="kernel representation residual")
    p_id.add_argument("--function", required=True, help=f"one of {', '.join(function_ids())}")
    p_id.add_argument("--a", type=parse_real, required=True)
    p_id.add_argument("--b", type=parse_real, required=True)
    p_id.add_argument("--lambda", dest="lam", type=parse_real, required=True)

    p_pc = sub.add_parser("pconvex", help="grid P-convexity check")
    p_pc.add_argument("--function", required=True)
    p_pc.add_argument("--a", type=parse_real, required=True)
    p_pc.add_argument("--b", type=parse_real, required=True)
    p_pc.add_argument("--grid", type=_int_grid, default=None, help="nx,ny,nlam")

    p_search = sub.add_parser("search", help="randomized counterexample search")
    p_search.add_argument("--claim", required=True)
    p_search.add_argument("--functions", type=_split_ids, default=("all",))
    p_search.add_argument(
        "--claims", type=_split_ids, default=("all",), help=argparse.SUPPRESS
    )
    p_search.add_argument("--seed", type=int, default=0)
    p_search.add_argument("--trials", type=int, default=500)
    p_search.add_argument("--lambda-grid", type=_parse_grid, default=None)
    p_search.add_argument("--q-grid", type=_parse_grid, default=None)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "bound": _cmd_bound,
        "verify": _cmd_verify,
        "means": _cmd_means,
        "identity": _cmd_identity,
        "pconvex": _cmd_pconvex,
        "search": _cmd_search,
    }
    return handlers[args.command](args, parser)


if __name__ == "__main__":
    sys.exit(main())
