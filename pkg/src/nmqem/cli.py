"""Command-line front end.

Subcommands::

    gamma-check   algebra self-test of the 16-matrix basis
    kernel        Re k / Im k curves as figure-ready CSV
    cost          mitigation cost curves vs normalized time
    predict       predicted probability table for a gate at a given alpha
    estimate      Re k estimation report from a device counts file
    decompose     Gamma expansion of a recovery operator

Exit codes: 0 success, 1 algebra self-check failure, 2 usage error,
3 data error. All output is deterministic; numbers are printed with 10
significant digits.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import expdata, gamma, recovery
from .channel import COMPUTATIONAL_LABELS, input_labels, predict_table
from .channel import AlphaOutOfRange as ChannelAlphaOutOfRange
from .kernel import KernelParams, k_printed, k_quadrature, re_k_approx
from .linalg import identity
from .recovery import ALPHA_MAX, AlphaOutOfRange as RecoveryAlphaOutOfRange

EXIT_OK = 0
EXIT_SELF_CHECK = 1
EXIT_USAGE = 2
EXIT_DATA = 3


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def _fmt_complex(z: complex) -> str:
    return f"{_fmt(z.real)}{z.imag:+.10g}j"


def _write(out, text: str):
    out.write(text)
    if not text.endswith("\n"):
        out.write("\n")


def _emit_csv(out, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
    _write(out, "\n".join(lines))


def _emit_json(out, payload):
    _write(out, json.dumps(payload, indent=2, sort_keys=True))


# ---------------------------------------------------------------- gamma-check


def run_gamma_check(basis: gamma.GammaBasis) -> dict:
    """Run the algebra self-checks on a basis; returns a JSON-able report."""
    checks = []
    ok = True
    for mu in range(4):
        for nu in range(mu, 4):
            ac = gamma.anticommutator(basis, mu, nu)
            g = basis.metric[mu] if mu == nu else 0
            expected = identity(4).scaled(2 * g)
            passed = ac.entries == expected.entries
            ok = ok and passed
            checks.append(
                {
                    "check": f"anticommutator({mu},{nu})",
                    "expected": f"2*g[{mu}{nu}]*I",
                    "pass": passed,
                }
            )
    try:
        gamma.decompose(basis, basis.matrix("g5"))
        rank_ok = True
    except Exception:
        rank_ok = False
    ok = ok and rank_ok
    checks.append({"check": "rank16", "pass": rank_ok})
    product = basis.matrix("g0")
    for mu in (1, 2, 3):
        from .linalg import mat_mul

        product = mat_mul(product, basis.matrix(f"g{mu}"))
    g5_ok = product.entries == basis.matrix("g5").entries
    ok = ok and g5_ok
    checks.append({"check": "g5_product", "pass": g5_ok})
    return {"checks": checks, "all_pass": ok}


def cmd_gamma_check(args, out) -> int:
    report = run_gamma_check(gamma.build_gamma_basis())
    if args.format == "json":
        _emit_json(out, report)
    else:
        lines = []
        for c in report["checks"]:
            lines.append(f"{c['check']:<22} {'PASS' if c['pass'] else 'FAIL'}")
        lines.append(f"{'all':<22} {'PASS' if report['all_pass'] else 'FAIL'}")
        _write(out, "\n".join(lines))
    return EXIT_OK if report["all_pass"] else EXIT_SELF_CHECK


# --------------------------------------------------------------------- kernel


def _u_grid(u_max: float, steps: int):
    return [u_max * i / (steps - 1) for i in range(steps)]


def cmd_kernel(args, out) -> int:
    couplings = args.coupling
    with_im = args.mode != "approx" and args.delta0 != 0.0
    header = ["coupling", "u", "re_k"] + (["im_k"] if with_im else [])
    rows = []
    for coupling in couplings:
        for u in _u_grid(args.u_max, args.steps):
            if args.mode == "approx":
                rows.append([coupling, u, re_k_approx(coupling, u)])
            else:
                params = KernelParams(
                    gamma0=coupling / args.wc_ts,
                    delta0=args.delta0,
                    wc_ts=args.wc_ts,
                )
                k = k_printed(params, u) if args.mode == "printed" else k_quadrature(params, u)
                row = [coupling, u, k.real]
                if with_im:
                    row.append(k.imag)
                rows.append(row)
    if args.format == "json":
        _emit_json(
            out,
            {
                "mode": args.mode,
                "rows": [dict(zip(header, row)) for row in rows],
            },
        )
    else:
        _emit_csv(out, header, rows)
    return EXIT_OK


# ----------------------------------------------------------------------- cost


def cmd_cost(args, out) -> int:
    cost_fn = recovery.cost_swap if args.gate == "swap" else recovery.cost_id
    header = ["coupling", "u", "alpha", "cost"]
    rows = []
    for coupling in args.coupling:
        for u in _u_grid(args.u_max, args.steps):
            alpha = re_k_approx(coupling, u)
            if alpha >= ALPHA_MAX:
                rows.append([coupling, u, alpha, None])  # out of domain, flagged
            else:
                rows.append([coupling, u, alpha, cost_fn(alpha)])
    if args.format == "json":
        payload = []
        for coupling, u, alpha, cost in rows:
            payload.append(
                {
                    "coupling": coupling,
                    "u": u,
                    "alpha": alpha,
                    "cost": cost,
                    "in_domain": cost is not None,
                }
            )
        _emit_json(out, {"gate": args.gate, "rows": payload})
    else:
        lines = [",".join(header)]
        for coupling, u, alpha, cost in rows:
            tail = _fmt(cost) if cost is not None else ""
            lines.append(f"{_fmt(coupling)},{_fmt(u)},{_fmt(alpha)},{tail}")
        _write(out, "\n".join(lines))
    return EXIT_OK


# -------------------------------------------------------------------- predict


def cmd_predict(args, out) -> int:
    table = predict_table(args.gate, args.alpha)
    in_labels = input_labels(args.gate)
    if args.format == "json":
        _emit_json(
            out,
            {
                "gate": args.gate,
                "alpha": args.alpha,
                "inputs": list(in_labels),
                "outputs": list(COMPUTATIONAL_LABELS),
                "columns": {
                    in_labels[j]: {
                        COMPUTATIONAL_LABELS[i]: table[i][j] for i in range(4)
                    }
                    for j in range(4)
                },
            },
        )
    elif args.format == "csv":
        header = ["output"] + [f"in_{l}" for l in in_labels]
        rows = [[COMPUTATIONAL_LABELS[i]] + [table[i][j] for j in range(4)] for i in range(4)]
        _emit_csv(out, header, rows)
    else:
        width = 14
        lines = ["".join([f"{'output':<8}"] + [f"{l:>{width}}" for l in in_labels])]
        for i in range(4):
            cells = [f"{table[i][j]:>{width}.10g}" for j in range(4)]
            lines.append("".join([f"{COMPUTATIONAL_LABELS[i]:<8}"] + cells))
        _write(out, "\n".join(lines))
    return EXIT_OK


# ------------------------------------------------------------------- estimate


def _estimate_report(path: str, gate_flag):
    with open(path, "rb") as fh:
        ct = expdata.load_counts(fh)
    if gate_flag is not None and gate_flag != ct.gate:
        raise expdata.SchemaError(
            f"--gate {gate_flag} disagrees with file gate {ct.gate}"
        )
    pt = expdata.normalize(ct)
    est = expdata.estimate_re_k(pt, ct.gate)
    coupling = expdata.fit_coupling(est.lsq, 1.0) if est.lsq >= 0 else None
    report = {
        "gate": ct.gate,
        "device": ct.device,
        "per_cell": [
            {
                "input": c.input,
                "output": c.output,
                "role": c.role,
                "estimate": c.estimate,
            }
            for c in est.per_cell
        ],
        "min": est.min,
        "max": est.max,
        "lsq": est.lsq,
        "residual": est.residual,
        "coupling_at_u1": coupling,
        "lsq_note": "least-squares estimator is an extension beyond the published ranges",
    }
    ref = expdata.divergence_flags(est, ct.gate, ct.device)
    if ref is not None:
        (lo, hi), flags = ref
        report["reference_range"] = [lo, hi]
        report["divergence"] = flags
    return report


def cmd_estimate(args, out) -> int:
    report = _estimate_report(args.counts, args.gate)
    if args.format == "csv":
        header = ["min", "max", "lsq", "residual", "coupling_at_u1"]
        _emit_csv(out, header, [[report[h] for h in header]])
    elif args.format == "table":
        lines = [
            f"gate:     {report['gate']}",
            f"device:   {report['device']}",
            f"min:      {_fmt(report['min'])}",
            f"max:      {_fmt(report['max'])}",
            f"lsq:      {_fmt(report['lsq'])}  ({report['lsq_note']})",
            f"residual: {_fmt(report['residual'])}",
            f"coupling at u=1: {_fmt(report['coupling_at_u1'])}",
        ]
        if "reference_range" in report:
            lo, hi = report["reference_range"]
            lines.append(f"reference range: [{_fmt(lo)}, {_fmt(hi)}]")
            for flag in report["divergence"]:
                lines.append(f"  divergence: {flag}")
        lines.append("per-cell estimates:")
        for c in report["per_cell"]:
            lines.append(
                f"  in {c['input']:<3} out {c['output']}  {c['role']:<18} {_fmt(c['estimate'])}"
            )
        _write(out, "\n".join(lines))
    else:
        _emit_json(out, report)
    return EXIT_OK


# ------------------------------------------------------------------ decompose


def cmd_decompose(args, out) -> int:
    op = recovery.recovery_op(args.gate, args.alpha)
    basis = gamma.build_gamma_basis()
    recon = gamma.reconstruct(basis, op.gamma)
    residual = max(
        abs(a - b) for a, b in zip(recon.entries, op.matrix.entries)
    )
    decomposition_cost = recovery.cost_from_decomposition(op)
    printed_cost = (
        recovery.cost_swap(args.alpha)
        if args.gate == "swap"
        else recovery.cost_id(args.alpha)
    )
    coeffs = {
        label: [op.gamma.coeffs[label].real, op.gamma.coeffs[label].imag]
        for label in gamma.BASIS_ORDER
    }
    report = {
        "gate": args.gate,
        "alpha": args.alpha,
        "gamma_coefficients": coeffs,
        "closed_form": op.coeffs,
        "reconstruction_residual": residual,
        "cost_from_decomposition": decomposition_cost,
        "cost_closed_form": printed_cost,
    }
    if abs(decomposition_cost - printed_cost) > 1e-9:
        report["note"] = (
            "decomposition cost differs from the closed-form combination for "
            "this gate; both values are reported"
        )
    if args.format == "json":
        _emit_json(out, report)
    else:
        lines = [f"gate: {args.gate}  alpha: {_fmt(args.alpha)}"]
        for label in gamma.BASIS_ORDER:
            z = op.gamma.coeffs[label]
            if abs(z) > 1e-14:
                lines.append(f"  {label:<6} {_fmt_complex(z)}")
        lines.append(f"reconstruction residual: {residual:.3e}")
        lines.append(f"cost (decomposition): {_fmt(decomposition_cost)}")
        lines.append(f"cost (closed form):   {_fmt(printed_cost)}")
        if "note" in report:
            lines.append(f"note: {report['note']}")
        _write(out, "\n".join(lines))
    return EXIT_OK


# ----------------------------------------------------------------------- main


def _coupling_list(text: str):
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad coupling list {text!r}")
    if not values or any(v < 0 for v in values):
        raise argparse.ArgumentTypeError("couplings must be nonnegative")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nmqem",
        description="Non-Markovian two-qubit noise channels and mitigation costs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--format", choices=("csv", "json", "table"), default=None)
        p.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("gamma-check", help="verify the 16-matrix algebra")
    add_common(p)
    p.set_defaults(func=cmd_gamma_check, default_format="table")

    p = sub.add_parser("kernel", help="decoherence function curves")
    add_common(p)
    p.add_argument("--coupling", type=_coupling_list, default=[7e-4, 7e-3])
    p.add_argument("--u-max", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--mode", choices=("approx", "printed", "quadrature"), default="approx")
    p.add_argument("--gamma0", type=float, default=None,
                   help="override gamma0 (otherwise coupling / wc-ts)")
    p.add_argument("--delta0", type=float, default=0.0)
    p.add_argument("--wc-ts", type=float, default=10.0)
    p.set_defaults(func=cmd_kernel, default_format="csv")

    p = sub.add_parser("cost", help="mitigation cost curves")
    add_common(p)
    p.add_argument("--gate", choices=("swap", "identity"), required=True)
    p.add_argument("--coupling", type=_coupling_list, default=[7e-4, 7e-3])
    p.add_argument("--u-max", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=101)
    p.set_defaults(func=cmd_cost, default_format="csv")

    p = sub.add_parser("predict", help="predicted probability table")
    add_common(p)
    p.add_argument("--gate", choices=("swap", "identity"), required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.set_defaults(func=cmd_predict, default_format="table")

    p = sub.add_parser("estimate", help="estimate Re k from a counts file")
    add_common(p)
    p.add_argument("--counts", required=True, help="path to a counts JSON file")
    p.add_argument("--gate", choices=("swap", "identity"), default=None)
    p.set_defaults(func=cmd_estimate, default_format="json")

    p = sub.add_parser("decompose", help="Gamma expansion of a recovery operator")
    add_common(p)
    p.add_argument("--gate", choices=("swap", "identity"), required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.set_defaults(func=cmd_decompose, default_format="table")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    if args.format is None:
        args.format = args.default_format

    # usage-level validation beyond argparse
    if getattr(args, "steps", None) is not None and args.command in ("kernel", "cost"):
        if args.u_max <= 0 or args.steps < 2:
            print("error: --u-max must be > 0 and --steps >= 2", file=sys.stderr)
            return EXIT_USAGE
    if args.command == "kernel" and args.gamma0 is not None:
        args.coupling = [args.gamma0 * args.wc_ts]

    if args.out is not None:
        out = open(args.out, "w")
    else:
        out = sys.stdout
    try:
        return args.func(args, out)
    except (ChannelAlphaOutOfRange, RecoveryAlphaOutOfRange, recovery.DenominatorNearZero) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (expdata.ParseError, expdata.SchemaError, expdata.EmptyRun, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    finally:
        if args.out is not None:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
