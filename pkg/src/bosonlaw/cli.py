"""Command-line surface: one subcommand per laboratory artifact.

Every subcommand re-verifies the laws it is about to write through the
permanent-based amplitude before emitting them, and writes deterministic
CSV/JSON files (identical inputs produce byte-identical outputs).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .amplitudes import amp_permanent, amp_recurrence, amp_tables
from .distinguishability import PartialSource, law_survives, partial_probability
from .errors import ContractViolation, MultiportSpecError, NotFactorizableError
from .fock import OccupationVector
from .multiports import TritterFamily, parse_multiport, tritter
from .suppression import (
    InputFamily,
    OutputFamily,
    OutputOrder,
    TABLE1_NOTES,
    Table1Row,
    TableRestriction,
    ThetaCase,
    bs_law_double,
    bs_law_single,
    bs_zero_report,
    check_interlacing,
    input_occupation,
    output_occupation,
    resolve_uniform_quadratic,
    scan_zero_curves,
    table1_roots,
)
from .symmetry import Side, classify_root, solve_phase_factorization

SCHEMA_COMMENT = "# bosonlaw-schema v1"

LAW_COLUMNS = [
    "family",
    "input",
    "output",
    "size_param",
    "tau",
    "theta",
    "residual",
    "provenance",
    "classification",
]


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def write_csv(path: Path, columns: list[str], rows: list[dict]) -> None:
    lines = [SCHEMA_COMMENT, ",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(row.get(c)) for c in columns))
    path.write_text("\n".join(lines) + "\n")


def write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def parse_occupation(text: str) -> OccupationVector:
    """Occupation strings: "1,1" or parameterized "m,m,m:m=4"."""
    body, _, params = text.partition(":")
    values: dict[str, int] = {}
    if params:
        for item in params.split(";"):
            key, _, raw = item.partition("=")
            values[key.strip()] = int(raw)
    counts = []
    for token in body.split(","):
        token = token.strip()
        if token.lstrip("-").isdigit():
            counts.append(int(token))
        elif token in values:
            counts.append(values[token])
        else:
            raise ContractViolation(f"cannot parse occupation token {token!r} in {text!r}")
    return OccupationVector(tuple(counts))


def _threads(args) -> int | None:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("BOSONLAW_THREADS")
    if env:
        return int(env)
    return os.cpu_count()


def _verify_zero(U, m, n, tol: float, context: str) -> float:
    value = abs(amp_permanent(U, m, n).value)
    if value > tol:
        raise ContractViolation(
            f"{context}: |amplitude| = {value:.3e} exceeds {tol:g}; refusing to emit"
        )
    return value


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_amplitude(args) -> int:
    U = parse_multiport(args.multiport)
    m = parse_occupation(getattr(args, "in"))
    n = parse_occupation(args.out)
    methods = (
        ["permanent", "tables", "recurrence"] if args.method == "all" else [args.method]
    )
    evaluators = {
        "permanent": amp_permanent,
        "tables": amp_tables,
        "recurrence": amp_recurrence,
    }
    rows = []
    values = {}
    for name in methods:
        value = evaluators[name](U, m, n).value
        values[name] = value
        rows.append(
            {
                "method": name,
                "real": value.real,
                "imag": value.imag,
                "magnitude": abs(value),
                "suppressed": abs(value) < args.tol,
            }
        )
    if args.method == "all":
        pairs = [("permanent", "tables"), ("permanent", "recurrence"), ("tables", "recurrence")]
        for a, b in pairs:
            gap = abs(values[a] - values[b])
            if gap > 1e-10:
                print(
                    f"error: methods {a} and {b} disagree by {gap:.3e}",
                    file=sys.stderr,
                )
                return 3
    out = Path(args.outdir) / f"amplitude.{args.format}"
    if args.format == "csv":
        write_csv(out, ["method", "real", "imag", "magnitude", "suppressed"], rows)
    else:
        write_json(out, rows)
    for row in rows:
        print(
            f"{row['method']:10s} {row['real']:+.12e} {row['imag']:+.12e}i "
            f"|A| = {row['magnitude']:.3e} suppressed={row['suppressed']}"
        )
    print(f"wrote {out}")
    return 0


def _emit_laws(laws, args, filename: str) -> int:
    records = []
    for law in laws:
        if args.classify:
            law = law.classified()
        for rec in law.records():
            # independent re-check through the permanent route before writing
            _verify_zero(
                law.unitary_at(rec["tau"]), law.input, law.output, args.tol,
                f"law {rec['provenance']} at tau={rec['tau']}",
            )
            records.append(rec)
    records.sort(key=lambda r: (str(r["family"]), str(r["input"]), str(r["output"]), r["tau"]))
    out = Path(args.outdir) / f"{filename}.{args.format}"
    if args.format == "csv":
        write_csv(out, LAW_COLUMNS + ["multiplicity"], records)
    else:
        write_json(out, records)
    print(f"{len(records)} law records -> {out}")
    return 0


def cmd_laws_bs(args) -> int:
    pairs = []
    if args.m1 is not None and args.m2 is not None:
        pairs = [(args.m1, args.m2)]
    elif args.max_photons:
        pairs = [
            (m1, m2)
            for m1 in range(1, args.max_photons)
            for m2 in range(1, args.max_photons + 1 - m1)
        ]
    else:
        raise ContractViolation("give --m1/--m2 or --max-photons")
    orders = {
        "n1-first": [OutputOrder.N1_FIRST],
        "n2-first": [OutputOrder.N2_FIRST],
        "both": [OutputOrder.N1_FIRST, OutputOrder.N2_FIRST],
    }[args.order]
    laws = []
    for m1, m2 in pairs:
        for order in orders:
            law = bs_law_single(m1, m2, order)
            if law.roots:
                laws.append(law)
            if m1 + m2 >= 2:
                law = bs_law_double(m1, m2, order)
                if law.roots:
                    laws.append(law)
    return _emit_laws(laws, args, "laws_bs")


def cmd_fig2(args) -> int:
    m = parse_occupation(getattr(args, "in"))
    n1_list = [int(v) for v in args.n1.split(",")]
    N = m.total()
    curve_rows, zero_rows = [], []
    reports = {}
    for n1 in n1_list:
        n = OccupationVector((n1, N - n1))
        report = bs_zero_report(m, n, args.steps)
        reports[n1] = report
        taus = np.linspace(0.0, 1.0, args.steps + 1)
        from .multiports import beamsplitter

        for t in taus:
            value = amp_recurrence(beamsplitter(float(t), 0.0), m, n).value.real
            curve_rows.append({"n1": n1, "tau": float(t), "amplitude": value})
        for tau, res in zip(report.zero_locations, report.residuals):
            check = _verify_zero(
                beamsplitter(tau, 0.0), m, n, 1e-8, f"zero at tau={tau}"
            )
            zero_rows.append({"n1": n1, "tau": tau, "residual": check})
    outdir = Path(args.outdir)
    write_csv(outdir / "fig2_curves.csv", ["n1", "tau", "amplitude"], curve_rows)
    write_csv(outdir / "fig2_zeros.csv", ["n1", "tau", "residual"], zero_rows)
    for n1, report in sorted(reports.items()):
        print(f"n1={n1}: {report.count} zeros at {[round(z, 6) for z in report.zero_locations]}")
    for a, b in zip(n1_list, n1_list[1:]):
        na = OccupationVector((a, N - a))
        nb = OccupationVector((b, N - b))
        result = check_interlacing(m, na, nb, args.steps)
        print(f"n1={a} vs n1={b}: interlaced={result.interlaced}")
    print(f"wrote {outdir / 'fig2_curves.csv'} and {outdir / 'fig2_zeros.csv'}")
    return 0


def cmd_fig3(args) -> int:
    family = TritterFamily(args.family)
    input_family = InputFamily(args.input)
    output_family = OutputFamily(args.output)
    curves = scan_zero_curves(
        family,
        input_family,
        output_family,
        args.size,
        tau_steps=args.tau_steps,
        theta_steps=args.theta_steps,
        threads=_threads(args),
    )
    m = input_occupation(input_family, args.size)
    n = output_occupation(output_family, m.total())
    rows = []
    for curve in curves:
        for tau, theta, residual in curve.points:
            U = tritter(family, tau, theta)
            _verify_zero(U, m, n, 1e-6, f"curve point ({tau:.6f}, {theta:.6f})")
            label = classify_root(U, m, n).label() if args.classify else "unclassified"
            rows.append(
                {
                    "family": family.value,
                    "input": ",".join(str(c) for c in m),
                    "output": ",".join(str(c) for c in n),
                    "size_param": args.size,
                    "tau": tau,
                    "theta": theta,
                    "residual": residual,
                    "provenance": "numeric-root",
                    "classification": label,
                }
            )
    rows.sort(key=lambda r: (r["theta"], r["tau"]))
    out = Path(args.outdir) / f"fig3_curves.{args.format}"
    if args.format == "csv":
        write_csv(out, LAW_COLUMNS, rows)
    else:
        write_json(out, rows)
    print(f"{len(curves)} curves, {len(rows)} points -> {out}")
    return 0


def cmd_table1(args) -> int:
    payload = {"notes": dict(TABLE1_NOTES), "rows": []}
    for row in Table1Row:
        for theta_case in ThetaCase:
            for size in range(1, args.max + 1):
                for family in TritterFamily:
                    try:
                        roots = table1_roots(row, theta_case, size, family)
                    except TableRestriction as exc:
                        payload["rows"].append(
                            {
                                "row": row.value,
                                "theta_case": theta_case.value,
                                "family": family.value,
                                "size_param": size,
                                "roots": [],
                                "skipped": str(exc),
                            }
                        )
                        continue
                    m = input_occupation(row.input_family, size)
                    n = output_occupation(row.output_family, m.total())
                    entries = []
                    for r in roots:
                        for theta in theta_case.angles:
                            _verify_zero(
                                tritter(family, r, theta), m, n, args.tol,
                                f"{row.value} {family.value} size={size}",
                            )
                        entries.append({"tau": r, "verified": True})
                    payload["rows"].append(
                        {
                            "row": row.value,
                            "theta_case": theta_case.value,
                            "family": family.value,
                            "size_param": size,
                            "roots": entries,
                        }
                    )
    quad_roots, quad_note = resolve_uniform_quadratic(max(2, min(args.max, 6)))
    payload["resolved_quadratic_example"] = {
        "size_param": max(2, min(args.max, 6)),
        "roots": quad_roots,
        "note": quad_note,
    }
    out = Path(args.outdir) / "table1.json"
    write_json(out, payload)
    served = sum(1 for r in payload["rows"] if r.get("roots"))
    print(f"{served} cells served (sizes 1..{args.max}) -> {out}")
    return 0


def cmd_tableb(args) -> int:
    w = complex(-0.5, math.sqrt(3) / 2)
    from .multiports import fourier_tritter
    from .symmetry import Permutation, pair_predicts_suppression

    def dev(family, tau, theta):
        return tritter(family, tau, theta)

    rows = [
        # input-side rows
        ("(1 2)", Permutation((1, 0, 2)), "t2:tau=1", dev(TritterFamily.T2, 1.0, 0.7), Side.INPUT),
        ("(1 2)", Permutation((1, 0, 2)), "t2:tau=0,theta=0", dev(TritterFamily.T2, 0.0, 0.0), Side.INPUT),
        ("(1 2)", Permutation((1, 0, 2)), "t2:tau=0,theta=pi", dev(TritterFamily.T2, 0.0, math.pi), Side.INPUT),
        ("(1 2 3)", Permutation((1, 2, 0)), "ts", fourier_tritter(), Side.INPUT),
        ("(1 3 2)", Permutation((2, 0, 1)), "ts", fourier_tritter(), Side.INPUT),
        # output-side rows
        ("(2 3)", Permutation((0, 2, 1)), "t1:tau=1", dev(TritterFamily.T1, 1.0, 0.7), Side.OUTPUT),
        ("(2 3)", Permutation((0, 2, 1)), "t1:tau=0", dev(TritterFamily.T1, 0.0, 0.7), Side.OUTPUT),
        ("(2 3)", Permutation((0, 2, 1)), "t2:tau=1", dev(TritterFamily.T2, 1.0, 0.7), Side.OUTPUT),
    ]
    payload = []
    for cycle, sigma, device, U, side in rows:
        pair = solve_phase_factorization(U, sigma, side)
        entry = {
            "sigma": cycle,
            "device": device,
            "side": side.value,
            "factorized": pair is not None,
        }
        if pair is not None:
            entry["Lambda"] = [[v.real, v.imag] for v in pair.Lambda]
            entry["Z"] = [[v.real, v.imag] for v in pair.Z]
            entry["residual"] = pair.residual
            predictions = []
            for size in (1, 2, 3):
                m = input_occupation(InputFamily.II, size)
                for out_fam in (OutputFamily.N11, OutputFamily.N20):
                    n = output_occupation(out_fam, m.total())
                    fixed = sigma.fixes(m) if side is Side.INPUT else sigma.fixes(n)
                    if not fixed:
                        continue
                    predicted = pair_predicts_suppression(pair, m, n)
                    amp = abs(amp_permanent(U, m, n).value)
                    if predicted and amp > args.tol:
                        raise ContractViolation(
                            f"prediction failed for {device} {m.counts}->{n.counts}: "
                            f"|amp| = {amp:.3e}"
                        )
                    predictions.append(
                        {
                            "input": ",".join(str(c) for c in m),
                            "output": ",".join(str(c) for c in n),
                            "predicted_suppressed": predicted,
                            "amplitude_magnitude": amp,
                        }
                    )
            entry["predictions"] = predictions
        payload.append(entry)
    out = Path(args.outdir) / "tableB.json"
    write_json(out, payload)
    print(f"{len(payload)} symmetry rows -> {out}")
    return 0


def cmd_classify(args) -> int:
    U = parse_multiport(args.multiport)
    m = parse_occupation(getattr(args, "in"))
    n = parse_occupation(args.out)
    _verify_zero(U, m, n, args.tol, "classify input")
    result = classify_root(U, m, n)
    payload = {
        "multiport": args.multiport,
        "input": ",".join(str(c) for c in m),
        "output": ",".join(str(c) for c in n),
        "classification": result.label(),
    }
    out = Path(args.outdir) / "classify.json"
    write_json(out, payload)
    print(f"{payload['classification']} -> {out}")
    return 0


def cmd_distinguishability(args) -> int:
    U = parse_multiport(args.multiport)
    m = parse_occupation(getattr(args, "in"))
    n = parse_occupation(args.out)
    port = args.port - 1
    report = law_survives(U, m, n, port)
    print(
        f"survives={report.survives} P(alpha=pi/4) = {report.probability:.6e} "
        f"(law verified at alpha=0)"
    )
    payload = {
        "survives": report.survives,
        "alpha": report.alpha,
        "probability": report.probability,
    }
    write_json(Path(args.outdir) / "distinguishability.json", payload)
    if args.alpha_sweep:
        alphas = np.linspace(0.0, math.pi / 2, args.alpha_sweep)
        rows = [
            {
                "alpha": float(a),
                "P": partial_probability(U, m, n, PartialSource(port, float(a))),
            }
            for a in alphas
        ]
        out = Path(args.outdir) / "disting_sweep.csv"
        write_csv(out, ["alpha", "P"], rows)
        print(f"sweep ({args.alpha_sweep} angles) -> {out}")
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bosonlaw",
        description="Multiphoton suppression-law laboratory for small multiports",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt_default="csv"):
        p.add_argument("--outdir", default=".", help="directory for artifact files")
        p.add_argument("--format", choices=["csv", "json"], default=fmt_default)
        p.add_argument("--threads", type=int, default=None,
                       help="worker pool size for scans (default: BOSONLAW_THREADS or all cores)")
        p.add_argument("--tol", type=float, default=1e-10,
                       help="zero threshold for amplitude suppression checks")

    p = sub.add_parser("amplitude", help="evaluate one transition amplitude")
    common(p)
    p.add_argument("--multiport", required=True,
                   help='e.g. "bs:tau=0.5,phi=0", "t1:tau=0.75,theta=1.5708", '
                        '"ts:theta=0", "matrix:entries.csv"')
    p.add_argument("--in", required=True, help='input occupation, e.g. "1,1"')
    p.add_argument("--out", required=True, help='output occupation, e.g. "2,0"')
    p.add_argument("--method", choices=["permanent", "tables", "recurrence", "all"],
                   default="all")
    p.set_defaults(func=cmd_amplitude)

    p = sub.add_parser("laws-bs", help="two-mode closed-form law families")
    common(p)
    p.add_argument("--m1", type=int, default=None)
    p.add_argument("--m2", type=int, default=None)
    p.add_argument("--max-photons", type=int, default=None,
                   help="emit every family with m1, m2 >= 1 and m1+m2 up to this total")
    p.add_argument("--order", choices=["n1-first", "n2-first", "both"], default="both")
    p.add_argument("--classify", action="store_true", default=True)
    p.add_argument("--no-classify", dest="classify", action="store_false")
    p.set_defaults(func=cmd_laws_bs)

    p = sub.add_parser("fig2", help="two-mode real-amplitude curves, zeros, interlacing")
    common(p)
    p.add_argument("--in", required=True, help='input occupation, e.g. "9,4"')
    p.add_argument("--n1", required=True, help='comma list of first-mode outputs, e.g. "3,4,5"')
    p.add_argument("--steps", type=int, default=2000)
    p.set_defaults(func=cmd_fig2)

    p = sub.add_parser("fig3", help="tritter zero curves over the parameter plane")
    common(p)
    p.add_argument("--family", choices=["t1", "t2"], required=True)
    p.add_argument("--input", choices=["I", "II"], required=True)
    p.add_argument("--output", choices=["n11", "n20", "n10", "n01"], required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--tau-steps", type=int, default=96)
    p.add_argument("--theta-steps", type=int, default=96)
    p.add_argument("--classify", action="store_true", default=True)
    p.add_argument("--no-classify", dest="classify", action="store_false")
    p.set_defaults(func=cmd_fig3)

    p = sub.add_parser("table1", help="curated tritter root table, verified")
    common(p, fmt_default="json")
    p.add_argument("--max", type=int, default=6, help="largest size parameter")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("tableB", help="permutation-symmetry factorizations and predictions")
    common(p, fmt_default="json")
    p.set_defaults(func=cmd_tableb)

    p = sub.add_parser("classify", help="classify one verified suppression configuration")
    common(p, fmt_default="json")
    p.add_argument("--multiport", required=True)
    p.add_argument("--in", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("distinguishability",
                       help="partial-distinguishability breaking of a law")
    common(p)
    p.add_argument("--multiport", required=True)
    p.add_argument("--in", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--port", type=int, default=1, help="1-based input port of the odd photon")
    p.add_argument("--alpha-sweep", type=int, default=0,
                   help="number of mixing angles for a sweep CSV (0 = off)")
    p.set_defaults(func=cmd_distinguishability)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.tol <= 0:
        print("error: tolerance must be positive", file=sys.stderr)
        return 1
    Path(args.outdir).mkdir(parents=True, exist_ok=True)
    try:
        return args.func(args)
    except (ContractViolation, MultiportSpecError, NotFactorizableError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
