#!/usr/bin/env python3
"""
Glasser transform verifier command line

    python cli.py list
    python cli.py eval --transform glasser --function sin_z --z 1 --points 1
    python cli.py verify --all --profile default --output json --out report.json
    python cli.py report --input report.json --output csv

Exit status: 0 success, 1 failed verification points, 2 usage errors.
"""

import argparse
import csv
import io
import json
import logging
import math
import sys
from typing import Any, Dict, List, Optional

import corpus
import identities
from config import PROFILES, UnknownProfileError, VerifierSettings, load_profile
from quadrature import IntegrationError, IntegrationResult
from reports import SCHEMA_VERSION, ReportCodec, VerificationReport
from specfun import DomainError
from transforms import TransformDomainError, TransformKind, transform

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

logger = logging.getLogger(__name__)


def status(message: str):
    """Progress line; kept off stdout so piped reports stay clean."""
    print(message, file=sys.stderr)


def emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
        status(f"✅ Wrote {out}")
    else:
        sys.stdout.write(text)


def _finite(value: float) -> Optional[float]:
    return value if math.isfinite(value) else None


def render_report(report: VerificationReport, output: str, settings: VerifierSettings) -> str:
    if output == "json":
        return ReportCodec.to_json(report)
    if output == "csv":
        return ReportCodec.to_csv(report)
    return ReportCodec.to_text(report, precision=settings.text_precision)


def render_eval(kind: TransformKind, function: Dict[str, Any], rows: List[Dict[str, Any]],
                output: str, settings: VerifierSettings) -> str:
    if output == "json":
        payload = {
            "schema_version": SCHEMA_VERSION,
            "transform": kind.value,
            "function": function,
            "results": rows,
        }
        return json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n"
    if output == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["y", "value", "abs_err", "converged"])
        for row in rows:
            writer.writerow([repr(row["y"]), repr(row["value"]), repr(row["abs_err"]),
                             "true" if row["converged"] else "false"])
        return buffer.getvalue()

    p = settings.text_precision
    lines = [f"{kind.value}[{function['name']}]", "=" * settings.rule_width]
    for row in rows:
        mark = "✅" if row["converged"] else "⚠️ "
        err = row["abs_err"] if row["abs_err"] is not None else math.inf
        lines.append(f"{mark} y={row['y']:g}  value={row['value']:.{p}g}  err={err:.2e}  "
                     f"({row['strategy']}, {row['n_evals']} evals)")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_list(args, settings: VerifierSettings) -> int:
    if args.output == "json":
        payload = {
            "families": [
                {"family": family, "anchor": identities.FAMILY_ANCHORS[family],
                 "records": [r.to_dict() for r in identities.select([family])]}
                for family in identities.families()
            ],
            "functions": {name: corpus.describe(name) for name in corpus.names()},
            "profiles": sorted(PROFILES),
        }
        emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
        return EXIT_OK

    lines = ["📚 Identity families", "=" * settings.rule_width]
    for family in identities.families():
        records = identities.select([family])
        lines.append(f"{family:<11} {identities.FAMILY_ANCHORS[family]}")
        lines.append(f"{'':<11} records: {', '.join(r.id for r in records)}")
    lines += ["", "🧮 Corpus functions", "=" * settings.rule_width]
    for name in corpus.names():
        lines.append(f"{name:<19} {corpus.describe(name)}")
    emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_eval(args, settings: VerifierSettings) -> int:
    if not args.transform or not args.function or not args.points:
        status("❌ eval needs --transform, --function and --points")
        return EXIT_USAGE
    try:
        kind = TransformKind.parse(args.transform)
        f = corpus.get(args.function, mu=args.mu, nu=args.nu, z=args.z)
        profile = load_profile(args.profile)
    except (ValueError, KeyError) as e:
        status(f"❌ {e.args[0] if e.args else e}")
        return EXIT_USAGE

    if kind.needs_order and args.order is None:
        status(f"❌ {kind.value} needs --order")
        return EXIT_USAGE
    tol = profile.quadrature(kind.oscillatory or f.oscillation is not None)

    rows = []
    for y in args.points:
        try:
            result: IntegrationResult = transform(kind, f, y, tol, args.order)
        except TransformDomainError as e:
            status(f"❌ {e}")
            return EXIT_USAGE
        except (IntegrationError, DomainError) as e:
            status(f"❌ {kind.value} at y={y:g} failed: {e}")
            return EXIT_FAILED
        if not result.converged:
            logger.warning("%s of %s at %g did not reach the requested tolerance", kind.value, f.name, y)
        rows.append({"y": y, "value": result.value, "abs_err": _finite(result.abs_err),
                     "n_evals": result.n_evals, "converged": result.converged,
                     "strategy": result.strategy})

    emit(render_eval(kind, f.describe(), rows, args.output, settings), args.out)
    return EXIT_OK


def cmd_verify(args, settings: VerifierSettings) -> int:
    try:
        profile = load_profile(args.profile)
        ids = None if args.all else args.id
        identities.select(ids)
    except (UnknownProfileError, identities.UnknownIdentityError, ValueError) as e:
        status(f"❌ {e.args[0] if e.args else e}")
        return EXIT_USAGE

    workers = args.workers or profile.workers
    status(f"🔍 Verifying {'all identities' if not ids else ', '.join(ids)} "
           f"(profile {profile.name}, {workers} worker(s))")
    report = identities.verify_all(profile, ids=ids, workers=workers)

    emit(render_report(report, args.output, settings), args.out)
    summary = report.summary()
    worst = report.worst_rel
    status(f"📊 {summary['n_pass']} passed, {summary['n_fail']} failed, worst rel residual {worst:.2e}")
    if report.all_passed:
        status("✅ All identities verified")
        return EXIT_OK
    for failure in report.failures():
        status(f"❌ {failure.identity_id} {failure.point}: {failure.reason}")
    return EXIT_FAILED


def cmd_report(args, settings: VerifierSettings) -> int:
    try:
        with open(args.input, encoding="utf-8") as handle:
            report = ReportCodec.from_json(handle.read())
    except OSError as e:
        status(f"❌ Cannot read {args.input}: {e}")
        return EXIT_USAGE
    except ValueError as e:
        status(f"❌ {e}")
        return EXIT_USAGE

    emit(render_report(report, args.output, settings), args.out)
    return EXIT_OK if report.all_passed else EXIT_FAILED


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser(settings: VerifierSettings) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=settings.output_formats, default=settings.default_output,
                        help="Output format")
    common.add_argument("--out", help="Write output to this file instead of stdout")
    common.add_argument("--verbose", action="store_true", help="Debug logging")
    common.add_argument("--profile", default=None,
                        help="Tolerance profile (default: $GLASSER_VERIFY_PROFILE or 'default')")

    parser = argparse.ArgumentParser(description="Glasser transform identity verifier")
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("list", parents=[common], help="List identity families and corpus functions")

    evaluate = commands.add_parser("eval", parents=[common], help="Evaluate a transform of a corpus function")
    evaluate.add_argument("--transform", help="Transform kind, e.g. l2, glasser, hankel")
    evaluate.add_argument("--function", help="Corpus function name")
    evaluate.add_argument("--points", type=float, nargs="+", help="Transform arguments y")
    evaluate.add_argument("--mu", type=float, default=0.5)
    evaluate.add_argument("--nu", type=float, default=0.0)
    evaluate.add_argument("--z", type=float, default=1.0)
    evaluate.add_argument("--order", type=float, default=None, help="Order for hankel and k")

    verify = commands.add_parser("verify", parents=[common], help="Verify catalog identities")
    verify.add_argument("--all", action="store_true", help="Every identity in the catalog")
    verify.add_argument("--id", nargs="+", help="Identity ids or family names")
    verify.add_argument("--workers", type=int, default=None, help="Worker processes")

    report = commands.add_parser("report", parents=[common], help="Re-render a saved JSON report")
    report.add_argument("--input", required=True, help="Report written by 'verify --output json'")
    return parser


COMMANDS = {
    "list": cmd_list,
    "eval": cmd_eval,
    "verify": cmd_verify,
    "report": cmd_report,
}


def main(argv: Optional[List[str]] = None) -> int:
    settings = VerifierSettings()
    args = build_parser(settings).parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "workers", None) is not None and args.workers < 1:
        status("❌ --workers must be at least 1")
        return EXIT_USAGE
    return COMMANDS[args.command](args, settings)


if __name__ == "__main__":
    sys.exit(main())
