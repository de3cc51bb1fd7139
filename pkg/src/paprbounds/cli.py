"""Command-line entry point: ``paprbounds <command> ...``.

Exit status: 0 success, 1 solver failure, 2 bad input (usage, domain or
parse error), 3 a property check reported a violation.
"""
from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import codebook_lab as cl
from . import smith_capacity as sc
from .awgn_limits import CodeParams, capacity, rate_fraction_to_log_M
from .config import load_config
from .errors import DomainError, SolverError
from .ofdm_pmepr import dft_peak_lower_bound, papr, pmepr
from .papr_converse import VARIANTS, min_peak_amplitude
from .records import OutputRecord, read_codewords, write_codewords
from .scalar_math import NATS, LogBase

EXIT_OK, EXIT_SOLVER, EXIT_INPUT, EXIT_PROPERTY = 0, 1, 2, 3


class PropertyViolation(Exception):
    def __init__(self, message, record):
        super().__init__(message)
        self.record = record


def parse_range(text: str) -> np.ndarray:
    """``a:b:step`` (inclusive of b up to rounding), ``a,b,c`` or a single value."""
    if ":" in text:
        parts = [float(p) for p in text.split(":")]
        if len(parts) != 3 or parts[2] <= 0 or parts[1] < parts[0]:
            raise DomainError(f"range must be a:b:step with a <= b and step > 0, got {text!r}")
        a, b, h = parts
        k = int(math.floor((b - a) / h + 1e-9))
        return a + h * np.arange(k + 1)
    return np.array([float(p) for p in text.split(",")])


def _key_range(text: str) -> tuple[str, np.ndarray]:
    if "=" not in text:
        raise DomainError(f"sweep must look like A=1:10:0.5, got {text!r}")
    key, rng = text.split("=", 1)
    key = key.strip()
    if key not in ("A", "P"):
        raise DomainError(f"can only sweep A or P, got {key!r}")
    return key, parse_range(rng)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _paper_reference(cfg, n, P, eps, fraction):
    r = cfg["remark"]
    if n == r["n"] and P == r["P"] and eps == r["epsilon"]:
        for f, db in zip(r["fractions"], r["paper_db"]):
            if fraction is not None and abs(fraction - f) < 1e-12:
                return db
    return None


def cmd_bounds_papr(args, cfg) -> OutputRecord:
    base = LogBase.parse(args.log_base)
    variant = args.variant or cfg["papr"]["variant"]
    if args.log_M is not None:
        items = [(None, LogBase.parse(args.log_M_base).to_nats(args.log_M))]
    else:
        items = [(float(f), rate_fraction_to_log_M(args.n, args.P, float(f)))
                 for f in parse_range(args.fraction or "0.99")]
    rows = []
    for frac, log_m in items:
        code = CodeParams(args.n, log_m, args.epsilon)
        res = min_peak_amplitude(code, args.P, variant, NATS,
                                 atol=cfg["papr"]["atol"], max_iter=cfg["papr"]["max_iter"])
        row = {
            "fraction": frac if frac is not None else log_m / (args.n * capacity(args.P)),
            "log_M": base.from_nats(log_m),
            "rate": base.from_nats(log_m / args.n),
            "rhs": base.from_nats(res.rhs_nats),
            "A": res.A,
            "r_star": res.r_star,
            "papr_db": res.papr_db,
            "trivial_flag": bool(res.trivial_flag),
            "residual_nats": res.residual,
        }
        ref = _paper_reference(cfg, args.n, args.P, args.epsilon, frac)
        if ref is not None:
            row["paper_db"] = ref
        rows.append(row)
    u = base.unit
    rec = OutputRecord(
        command="bounds papr",
        inputs={"n": args.n, "P": args.P, "epsilon": args.epsilon, "variant": variant,
                "log_base": u, "fraction": args.fraction, "log_M": args.log_M},
        rows=rows,
        units={"fraction": "1", "log_M": u, "rate": f"{u}/symbol", "rhs": f"{u}/symbol",
               "A": "amplitude (noise std = 1)", "r_star": "1", "papr_db": "dB",
               "residual_nats": "nats", "paper_db": "dB"},
        config=cfg,
    )
    amps = [r["A"] for r in rows]
    if len(rows) > 1 and any(b < a - 1e-9 * max(1.0, a) for a, b in zip(amps, amps[1:])):
        raise PropertyViolation("A is not non-decreasing along the rate sweep", rec)
    return rec


def _smith_row(A, P, scfg, grid, tol, base):
    res = sc.capacity_amplitude_constrained(
        A, P, grid, tol, output_step=scfg["output_step"], span=scfg["span"],
        warm_iters=scfg["warm_iters"], max_rounds=scfg["max_rounds"])
    lo, hi = sc.gap_converse(A, P), sc.gap_achievability(A, P)
    g = res.gap_to_gaussian
    ok = lo - tol <= g <= hi + tol
    u = base.from_nats
    return res, {
        "A": A, "P": P, "capacity": u(res.value_nats), "upper": u(res.upper_nats),
        "gaussian": u(0.5 * math.log1p(P)), "gap_numeric": u(g), "gap_converse": u(lo),
        "gap_achievability": u(hi), "sandwich": "PASS" if ok else "FAIL",
        "power_used": res.power_used, "support_size": int(res.support.size),
    }


def cmd_smith(args, cfg) -> OutputRecord:
    scfg = cfg["smith"]
    grid = args.grid or scfg["grid_size"]
    tol = args.tol or scfg["tol"]
    base = LogBase.parse(args.log_base)
    b = base.unit
    units = {"A": "amplitude (noise std = 1)", "P": "linear SNR", "capacity": b,
             "upper": b, "gaussian": b, "gap_numeric": b,
             "gap_converse": b, "gap_achievability": b, "power_used": "linear",
             "support_size": "count", "x": "amplitude", "p": "probability"}
    inputs = {"A": args.A, "P": args.P, "grid": grid, "tol": tol, "sweep": args.sweep, "log_base": b}
    if args.sweep:
        key, vals = _key_range(args.sweep)
        rows = []
        for v in vals:
            A = v if key == "A" else args.A
            P = v if key == "P" else args.P
            rows.append(_smith_row(float(A), float(P), scfg, grid, tol, base)[1])
        rec = OutputRecord("smith", inputs, rows=rows, units=units, config=cfg)
        caps = [base.to_nats(r["capacity"]) for r in rows]
        if any(c1 < c0 - tol for c0, c1 in zip(caps, caps[1:])):
            raise PropertyViolation("capacity not non-decreasing along the sweep", rec)
    else:
        if args.A is None or args.P is None:
            raise DomainError("smith needs -A and -P (or --sweep)")
        res, row = _smith_row(args.A, args.P, scfg, grid, tol, base)
        rows = [{"x": float(x), "p": float(p)} for x, p in zip(res.support, res.probs)]
        rec = OutputRecord("smith", inputs, outputs=row, rows=rows, units=units, config=cfg)
        if args.support_csv:
            with open(args.support_csv, "w") as fh:
                fh.write("x,p\n")
                for r in rows:
                    fh.write(f"{r['x']!r},{r['p']!r}\n")
        rows = [row]
    if any(r["sandwich"] != "PASS" for r in rows):
        raise PropertyViolation("analytic sandwich violated", rec)
    return rec


def cmd_pmepr(args, cfg) -> OutputRecord:
    L = args.L or cfg["pmepr"]["L"]
    refine = args.refine or cfg["pmepr"]["refine"]
    X, is_complex = read_codewords(args.file)
    rows = []
    for i, x in enumerate(X):
        rows.append({
            "index": i,
            "papr": papr(x),
            "pmepr": pmepr(x, L, refine=refine),
            "dft_lower_bound": dft_peak_lower_bound(x),
        })
    vals = np.array([r["pmepr"] for r in rows])
    q = np.quantile(vals, [0.05, 0.5, 0.95])
    outputs = {"count": len(rows), "n": int(X.shape[1]), "pmepr_q05": q[0], "pmepr_median": q[1],
               "pmepr_q95": q[2], "pmepr_median_db": 10.0 * math.log10(q[1])}
    rec = OutputRecord(
        "pmepr", {"file": str(args.file), "L": L, "refine": refine, "complex": is_complex},
        outputs=outputs, rows=rows,
        units={"index": "row", "papr": "linear", "pmepr": "linear", "dft_lower_bound": "linear",
               "count": "codewords", "n": "symbols", "pmepr_q05": "linear", "pmepr_median": "linear",
               "pmepr_q95": "linear", "pmepr_median_db": "dB"},
        config=cfg)
    bad = [r["index"] for r in rows if r["dft_lower_bound"] > r["pmepr"] * (1 + 1e-12)]
    if bad:
        raise PropertyViolation(f"DFT lower bound exceeds PMEPR on rows {bad}", rec)
    return rec


def cmd_simulate(args, cfg) -> OutputRecord:
    scfg = cfg["simulate"]
    seed = args.seed if args.seed is not None else scfg["seed"]
    trials = args.trials or scfg["trials"]
    L = args.L or scfg["L"]
    spec = cl.EnsembleSpec(args.ensemble, args.n, args.P, args.M)
    run = cl.SeededRun(seed, trials)
    thr = parse_range(args.thresholds) if args.thresholds else None
    table = cl.empirical_pmepr_cdf(spec, run, L, thr)
    rows = [{"threshold": float(t), "threshold_db": 10.0 * math.log10(t) if t > 0 else -math.inf,
             "empirical_cdf": float(c), "reference_approx": float(r)}
            for t, c, r in zip(table.thresholds, table.cdf, table.reference)]
    outputs = {"pmepr_median": table.median, "log_n": math.log(spec.n)}
    units = {"threshold": "linear", "threshold_db": "dB", "empirical_cdf": "probability",
             "reference_approx": "probability", "pmepr_median": "linear", "log_n": "nats"}
    if args.peak is not None and spec.kind == "real-gaussian":
        emp, se = cl.empirical_survival(spec, run, args.peak)
        outputs.update({"expurgation_survival": cl.expurgation_survival(spec.n, args.peak, spec.P),
                        "empirical_survival": emp, "survival_stderr": se})
        units.update({"expurgation_survival": "probability", "empirical_survival": "probability",
                      "survival_stderr": "probability"})
    if args.write_codewords:
        write_codewords(args.write_codewords, cl.sample_codebook(spec, run))
    return OutputRecord(
        "simulate",
        {"ensemble": spec.label, "n": spec.n, "P": spec.P, "trials": trials, "L": L,
         "peak": args.peak, "thresholds": args.thresholds},
        outputs=outputs, rows=rows, units=units, seed=seed, config=cfg)


def reproduce_remark_rows(cfg) -> list[dict]:
    r = cfg["remark"]
    n, P, eps = r["n"], r["P"], r["epsilon"]
    rows = []
    for f, ref in zip(r["fractions"], r["paper_db"]):
        code = CodeParams.from_rate_fraction(n, P, f, eps)
        row = {"fraction": f, "paper_db": ref}
        for v in VARIANTS:
            res = min_peak_amplitude(code, P, v)
            row[f"A[{v}]"] = res.A
            row[f"papr_db[{v}]"] = res.papr_db
            row[f"residual[{v}]"] = res.residual
            row[f"trivial[{v}]"] = bool(res.trivial_flag)
            row[f"match[{v}]"] = "match" if abs(res.papr_db - ref) <= r["match_db"] else "mismatch"
        res2 = min_peak_amplitude(code, P, "as-printed", log_base=2)
        row["papr_db[as-printed,log2-radius]"] = res2.papr_db
        rows.append(row)
    return rows


def cmd_reproduce_remark(args, cfg) -> OutputRecord:
    rows = reproduce_remark_rows(cfg)
    units = {"fraction": "1", "paper_db": "dB", "papr_db[as-printed,log2-radius]": "dB"}
    for v in VARIANTS:
        units.update({f"A[{v}]": "amplitude (noise std = 1)", f"papr_db[{v}]": "dB",
                      f"residual[{v}]": "nats"})
    r = cfg["remark"]
    return OutputRecord("reproduce-remark", {"n": r["n"], "P": r["P"], "epsilon": r["epsilon"]},
                        rows=rows, units=units, config=cfg)


# ---------------------------------------------------------------------------
# plumbing
# ---------------------------------------------------------------------------

def _render_text(rec: OutputRecord) -> str:
    lines = [f"[{rec.command}] version {rec.version}"]
    for k, v in rec.outputs.items():
        lines.append(f"  {k:>20s} = {_short(v)} {rec.units.get(k, '')}".rstrip())
    if rec.rows:
        cols = list(rec.rows[0].keys())
        shown = rec.rows if len(rec.rows) <= 40 else rec.rows[:15] + rec.rows[-5:]
        cells = [cols] + [[_short(r.get(c)) for c in cols] for r in shown]
        w = [max(len(row[i]) for row in cells) for i in range(len(cols))]
        for i, row in enumerate(cells):
            lines.append("  " + "  ".join(s.rjust(wi) for s, wi in zip(row, w)))
            if len(shown) < len(rec.rows) and i == 15:
                lines.append(f"  ... {len(rec.rows) - 20} rows omitted; use --csv or --json for all")
    return "\n".join(lines)


def _short(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    return "" if v is None else str(v)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="emit the record as JSON")
    fmt.add_argument("--csv", action="store_true", help="emit the record as CSV")
    common.add_argument("--config", help="JSON config overriding the packaged defaults")
    common.add_argument("--log-base", default="2", help="display base for information quantities: 2, e or 10")

    p = argparse.ArgumentParser(prog="paprbounds", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", help="converse bounds").add_subparsers(dest="which", required=True)
    bp = b.add_parser("papr", parents=[common], help="minimal peak amplitude of a code")
    bp.add_argument("-n", type=int, required=True)
    bp.add_argument("-P", type=float, required=True, help="linear SNR")
    bp.add_argument("-e", "--epsilon", type=float, required=True)
    g = bp.add_mutually_exclusive_group()
    g.add_argument("--fraction", help="rate as a fraction of capacity, or a:b:step sweep")
    g.add_argument("--log-M", type=float, help="code size log M")
    bp.add_argument("--log-M-base", default="2", help="base in which --log-M is given")
    bp.add_argument("--variant", choices=VARIANTS)
    bp.set_defaults(func=cmd_bounds_papr)

    s = sub.add_parser("smith", parents=[common], help="amplitude-constrained capacity")
    s.add_argument("-A", type=float)
    s.add_argument("-P", type=float, default=1.0)
    s.add_argument("--grid", type=int)
    s.add_argument("--tol", type=float)
    s.add_argument("--sweep", help="A=a:b:step or P=a:b:step")
    s.add_argument("--support-csv", help="write optimal support and masses here")
    s.set_defaults(func=cmd_smith)

    m = sub.add_parser("pmepr", parents=[common], help="PAPR/PMEPR of codewords in a file")
    m.add_argument("file")
    m.add_argument("-L", type=int)
    m.add_argument("--refine", action="store_true")
    m.set_defaults(func=cmd_pmepr)

    sim = sub.add_parser("simulate", parents=[common], help="Monte-Carlo PMEPR of a random ensemble")
    sim.add_argument("--ensemble", default="complex-gaussian", choices=cl.KINDS)
    sim.add_argument("--M", type=int)
    sim.add_argument("-n", type=int, default=256)
    sim.add_argument("-P", type=float, default=1.0)
    sim.add_argument("--seed", type=int)
    sim.add_argument("--trials", type=int)
    sim.add_argument("-L", type=int)
    sim.add_argument("--thresholds", help="a:b:step or comma list of PMEPR thresholds (linear)")
    sim.add_argument("--peak", type=float, help="peak amplitude for the survival check (real-gaussian)")
    sim.add_argument("--write-codewords", help="also write the sampled codewords to this file")
    sim.set_defaults(func=cmd_simulate)

    r = sub.add_parser("reproduce-remark", parents=[common], help="table of the SNR 20 dB example")
    r.set_defaults(func=cmd_reproduce_remark)
    return p


def _emit(rec, args):
    if args.json:
        print(rec.to_json())
    elif args.csv:
        sys.stdout.write(rec.to_csv())
    else:
        print(_render_text(rec))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.command == "simulate":
            try:
                cl.EnsembleSpec(args.ensemble, args.n, args.P, args.M)
            except DomainError as e:
                parser.error(str(e))
        rec = args.func(args, cfg)
    except PropertyViolation as e:
        _emit(e.record, args)
        print(f"property violation: {e}", file=sys.stderr)
        return EXIT_PROPERTY
    except SolverError as e:
        print(f"solver error: {e}", file=sys.stderr)
        return EXIT_SOLVER
    except (DomainError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    _emit(rec, args)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
