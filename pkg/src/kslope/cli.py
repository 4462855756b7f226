"""Command-line front end.

Exit codes: 0 success or pass, 1 verification failed, 2 configuration error,
3 mathematical or runtime error, 4 unconverged fit.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import replace

from . import __version__
from .config import RunConfig, load_run_config
from .diagram import slope_sum_identity_check
from .errors import ConfigError, KSlopeError, UnconvergedFit
from .experiment import FIELDS, dumps, serialize_report, verify
from .predictor import local_data, predict, zeroes_of_anchor
from .quadrature import sample

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_MATH, EXIT_UNCONVERGED = 0, 1, 2, 3, 4


def _fmt_loc(z: complex) -> str:
    return f"{z.real:.12g}{z.imag:+.12g}j"


def render_diagrams(run: RunConfig) -> str:
    config = run.config
    zeros = [local_data(config, z) for z in zeroes_of_anchor(config)]
    lines = [f"degree {config.d}, weights {list(config.weights)}, exponents [{', '.join(map(str, config.exponents))}]"]
    if all(zd.diagram.is_trivial() for zd in zeros):
        pred = predict(config)
        if pred.mabuchi_coefficient == 0 and pred.futaki_coefficient == 0:
            lines.append("all diagrams trivial; predicted slopes 0")
        else:
            lines.append(
                f"all diagrams trivial; predicted slopes mabuchi {pred.mabuchi_coefficient}, "
                f"futaki {pred.futaki_coefficient}"
            )
        return "\n".join(lines) + "\n"
    for i, zd in enumerate(zeros):
        dg = zd.diagram
        pts = ", ".join(f"({p},{q})" for p, q in zip(zd.orders, zd.exponents))
        verts = ", ".join(f"({p},{q})" for p, q in dg.vertices)
        slopes = ", ".join(str(m) for m in dg.slopes) or "none"
        q0 = dg.vertices[0][1]
        tele = slope_sum_identity_check(dg)
        lines += [
            f"zero {i}: chart {zd.chart}, location {_fmt_loc(zd.location)}, multiplicity {zd.anchor_multiplicity}",
            f"  points (p_j, q_j): {pts}",
            f"  vertices: {verts}",
            f"  slopes: {slopes}",
            f"  q_0 = {q0}",
            f"  telescoping: sum p_a (m_a - m_(a+1)) = {tele} {'==' if tele == q0 else '!='} q_0",
        ]
    return "\n".join(lines) + "\n"


def _measure_text(samples, fmt: str) -> str:
    if fmt == "json":
        return dumps({"samples": [s.as_dict(timing=False) for s in samples]}) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = ["t", *[FIELDS[k] for k in ("futaki", "futaki_via_J", "J", "I0", "nu")], "volume"]
    w.writerow(cols + ["wall_ms", "error"])
    for s in samples:
        row = [format(getattr(s, c) + 0.0, ".17g") for c in cols]
        wall = "" if s.wall_time is None else format(1000 * s.wall_time, ".6g")
        w.writerow(row + [wall, s.error or ""])
    return buf.getvalue()


def _load(args) -> RunConfig:
    run = load_run_config(args.config)
    if getattr(args, "format", None):
        run = replace(run, format=args.format)
    if getattr(args, "tolerance", None) is not None:
        if args.tolerance <= 0:
            raise ConfigError("--tolerance must be positive")
        run = replace(run, tolerance=args.tolerance)
    return run


def cmd_diagram(args, out) -> int:
    out.write(render_diagrams(_load(args)))
    return EXIT_OK


def cmd_predict(args, out) -> int:
    run = _load(args)
    out.write(dumps(predict(run.config).as_dict()) + "\n")
    return EXIT_OK


def cmd_measure(args, out) -> int:
    run = _load(args)
    samples = sample(run.config, run.t_schedule, run.grid, t_min=run.t_min)
    out.write(_measure_text(samples, run.format))
    failed = [s for s in samples if s.error]
    for s in failed:
        print(f"kslope: t={s.t:g}: {s.error}", file=sys.stderr)
    return EXIT_MATH if failed else EXIT_OK


def cmd_verify(args, out) -> int:
    run = _load(args)
    report = verify(
        run.config,
        run.t_schedule,
        run.grid,
        tolerance=run.tolerance,
        override_unconverged=args.override_unconverged,
        convergence_tol=run.convergence_tol,
        t_min=run.t_min,
    )
    out.write(serialize_report(report, run.format).decode())
    for name, v in report.verdicts.items():
        status = "pass" if v.passed else "FAIL"
        print(f"kslope: {name}: predicted {v.predicted:.6g}, measured {v.measured:.6g} [{status}]", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


COMMANDS = {"diagram": cmd_diagram, "predict": cmd_predict, "measure": cmd_measure, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kslope",
        description="Predict and measure energy slopes along weighted degenerations of rational curves.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in [
        ("diagram", "print the Newton diagram at every zero of the anchor section"),
        ("predict", "closed-form slope prediction as JSON"),
        ("measure", "quadrature samples along the t schedule"),
        ("verify", "predict, measure, fit and compare"),
    ]:
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", required=True, metavar="PATH", help="run configuration (JSON)")
        if name in ("measure", "verify"):
            p.add_argument("--format", choices=("json", "csv"), help="output format (default from config)")
        if name == "verify":
            p.add_argument("--tolerance", type=float, metavar="REAL", help="relative tolerance for verdicts")
            p.add_argument(
                "--override-unconverged",
                action="store_true",
                help="report verdicts even when the stepwise slopes have not settled",
            )
    return parser


def main(argv=None, out=None) -> int:
    args = build_parser().parse_args(argv)
    out = out or sys.stdout
    try:
        return COMMANDS[args.command](args, out)
    except ConfigError as exc:
        print(f"kslope: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except UnconvergedFit as exc:
        print(f"kslope: UnconvergedFit: {exc}", file=sys.stderr)
        return EXIT_UNCONVERGED
    except KSlopeError as exc:
        print(f"kslope: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
