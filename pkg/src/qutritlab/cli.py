"""``qutritlab`` command line: sweeps, single-point analysis and the reproduction table."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings

from . import entanglement as ent
from . import filtering, protocols
from .cloner import OPTIMAL_MU, MachineParams, output_state
from .errors import QutritLabError, RankDeficientWarning
from .report import CSV_COLUMNS, fmt, mu_grid, reproduction_rows, sweep_record

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def render_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rec in records:
        w.writerow([fmt(v) for v in rec.values()])
    return buf.getvalue()


_SVG_SERIES = (
    ("entropy_gap_raw", "#1f77b4"),
    ("fid_raw", "#2ca02c"),
    ("fid_filtered", "#d62728"),
    ("capacity_filtered", "#9467bd"),
)


def render_svg(records, width: int = 480, height: int = 320, pad: int = 40) -> str:
    """One polyline per series against mu; absent values split nothing, they are skipped."""
    pts = {name: [(r.mu, getattr(r, name)) for r in records if getattr(r, name) is not None] for name, _ in _SVG_SERIES}
    xs = [r.mu for r in records]
    ys = [y for series in pts.values() for _, y in series] + [0.0]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    x1 = x1 if x1 > x0 else x0 + 1.0
    y1 = y1 if y1 > y0 else y0 + 1.0

    def sx(x):
        return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

    def sy(y):
        return height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<line x1="{pad}" y1="{sy(0.0):.2f}" x2="{width - pad}" y2="{sy(0.0):.2f}" stroke="#999" stroke-width="1"/>',
    ]
    for i, (name, color) in enumerate(_SVG_SERIES):
        series = pts[name]
        if series:
            coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in series)
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{coords}"><title>{name}</title></polyline>')
        out.append(f'<text x="{pad + 4}" y="{14 + 14 * i}" font-size="11" fill="{color}">{name}</text>')
    out.append(f'<text x="{width / 2:.0f}" y="{height - 8}" font-size="11" text-anchor="middle">mu in [{fmt(x0)}, {fmt(x1)}]</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def cmd_sweep(args, parser) -> int:
    if not (0.0 < args.mu_min < args.mu_max <= 0.5):
        parser.error("need 0 < --mu-min < --mu-max <= 0.5")
    if args.steps < 2:
        parser.error("--steps must be at least 2")
    grid = mu_grid(args.mu_min, args.mu_max, args.steps, with_optimal=args.with_optimal)
    records = [sweep_record(mu, include_filtered=args.filtered) for mu in grid]
    _write(args.out, render_csv(records))
    if args.svg:
        _write(args.svg, render_svg(records))
    return EXIT_OK


def _verdict_lines(v: protocols.ProtocolVerdict, indent: str = "  ") -> list[str]:
    return [
        f"{indent}fully entangled fraction  {v.fef:.10f}",
        f"{indent}teleportation fidelity    {v.teleportation_fidelity:.10f}  useful={v.useful_for_teleportation}",
        f"{indent}S(rho_b) - S(rho_ab)      {v.entropy_gap:.10f} bits",
        f"{indent}dense coding capacity     {v.capacity:.10f} bits  useful={v.useful_for_dense_coding}",
    ]


def analyze_report(mu: float, filtered: bool) -> str:
    p = MachineParams(mu)
    rho = output_state(p)
    label = "optimal" if p.is_optimal else "non-optimal"
    lines = [
        f"machine parameters: mu={p.mu:.12g} lambda={p.lam:.12g} ({label})",
    ]
    pt = ent.npt_min_eigenvalue(rho)
    lines.append(f"partial transpose: min eigenvalue {pt:.10f} -> {'NPT (entangled)' if pt < -1e-10 else 'PPT'}")
    red = ent.reduction_report(rho)
    lines.append(f"reduction criterion: min eigenvalue {red.min_eigenvalue:.10f} -> {'violated (distillable)' if red.violated else 'satisfied'}")
    lines.append("raw state:")
    lines += _verdict_lines(protocols.verdict(rho))
    if filtered:
        if filtering.filter_available(p.mu):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RankDeficientWarning)
                fs = filtering.distill_pipeline(p.mu)
            kind = "optimal" if p.is_optimal else "non-optimal"
            lines.append(f"filtered state ({kind} filter, success probability {fs.success_probability:.10f}):")
            lines += _verdict_lines(protocols.verdict(fs.state))
        else:
            lines.append(
                f"filtered state: non-optimal filter unavailable at this mu "
                f"(defined for mu in ({ent.NONOPT_MU_MIN:.6f}, 0.5] and at mu^2 = 1/8)"
            )
    return "\n".join(lines) + "\n"


def cmd_analyze(args, parser) -> int:
    if not (0.0 < args.mu <= 0.5):
        parser.error("--mu must lie in (0, 0.5]")
    sys.stdout.write(analyze_report(args.mu, args.filtered))
    return EXIT_OK


def render_table(rows) -> str:
    lines = [f"{'status':<9} {'expected':>16} {'computed':>16} {'tolerance':>10}  name / source"]
    for r in rows:
        lines.append(f"{r.status:<9} {r.expected:>16.10g} {r.computed:>16.10g} {r.tolerance:>10.1e}  {r.name}")
        lines.append(f"{'':<9} {'':>16} {'':>16} {'':>10}    {r.source}")
    n_fail = sum(r.status == "FAIL" for r in rows)
    n_pass = sum(r.status == "PASS" for r in rows)
    n_adv = sum(r.status == "ADVISORY" for r in rows)
    lines.append(f"{n_pass} passed, {n_fail} failed, {n_adv} advisory")
    return "\n".join(lines) + "\n"


def cmd_paper_check(args, parser) -> int:
    rows = reproduction_rows()
    if args.json:
        sys.stdout.write(json.dumps([r.as_json() for r in rows], indent=2) + "\n")
    else:
        sys.stdout.write(render_table(rows))
    return EXIT_FAIL if any(r.status == "FAIL" for r in rows) else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qutritlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="tabulate every metric over a uniform mu grid as CSV")
    sw.add_argument("--mu-min", type=float, required=True)
    sw.add_argument("--mu-max", type=float, required=True)
    sw.add_argument("--steps", type=int, required=True)
    sw.add_argument("--filtered", action="store_true", help="include the distilled-state columns")
    sw.add_argument("--with-optimal", action="store_true", help=f"also evaluate mu = 1/(2 sqrt 2) = {OPTIMAL_MU:.6f} when in range")
    sw.add_argument("--svg", metavar="PATH", help="also write a minimal SVG plot")
    sw.add_argument("--out", default="-", metavar="PATH", help="CSV destination, '-' for stdout")
    sw.set_defaults(func=cmd_sweep)

    an = sub.add_parser("analyze", help="report on a single mu")
    an.add_argument("--mu", type=float, required=True)
    an.add_argument("--filtered", action="store_true")
    an.set_defaults(func=cmd_analyze)

    pc = sub.add_parser("paper-check", help="compare reproduced values with the published ones")
    pc.add_argument("--json", action="store_true")
    pc.set_defaults(func=cmd_paper_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if any(isinstance(v, float) and not math.isfinite(v) for v in vars(args).values()):
        parser.error("numeric arguments must be finite")
    try:
        return args.func(args, parser)
    except QutritLabError as exc:
        print(f"qutritlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
