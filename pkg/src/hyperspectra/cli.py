"""Command-line entry point: ``hyperspectra <subcommand> ...``.

Exit codes: 0 success or confirmed, 2 input error, 3 numeric failure,
4 refuted, 5 out of range, 6 capacity exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import certificates, extremal, families, spectral
from .errors import (
    CapacityError,
    ConvergenceError,
    HyperspectraError,
    InputError,
    SolverError,
    StructureError,
)
from .hypergraph import UniformHypergraph

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_REFUTED, EXIT_RANGE, EXIT_CAPACITY = 0, 2, 3, 4, 5, 6
DEFAULT_TOL_AGREE = 1e-6


def _m_range(text: str) -> list[int]:
    """``"3..8"`` or a single integer."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B or an integer, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return list(range(lo, hi + 1))


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"tolerance must be positive, got {text}")
    return v


def _emit(text: str, out: Optional[str]):
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return buf.getvalue()


# -- subcommands -------------------------------------------------------------


def cmd_rho(args) -> int:
    try:
        text = Path(args.path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {args.path}: {exc}") from exc
    g = UniformHypergraph.from_json(text)
    pair = spectral.spectral_radius(g, tol=args.tol_power)
    row = {"rho": pair.rho, "residual": pair.residual, "iterations": pair.iterations}
    if args.format == "json":
        _emit(_dump(dict(row, lower=pair.lower, upper=pair.upper)), None)
    elif args.format == "csv":
        _emit(_csv([row]), None)
    else:
        _emit(f"rho        {pair.rho:.12f}\nresidual   {pair.residual:.3e}\niterations {pair.iterations}", None)
    return EXIT_OK


def cmd_build(args) -> int:
    lh = families.build_family(families.FamilySpec(args.family, args.k, args.m))
    out = Path(args.out)
    out.write_text(lh.graph.to_json() + "\n")
    sidecar = out.with_name(out.stem + ".labels.json")
    sidecar.write_text(_dump(lh.sidecar()) + "\n")
    if args.format == "human":
        print(f"wrote {out} (n={lh.graph.n}, edges={lh.graph.num_edges}) and {sidecar}")
    return EXIT_OK


def cmd_certify(args) -> int:
    if args.family not in certificates.CERTIFIED_FAMILIES:
        raise InputError(
            f"family {args.family} has no normal certificate; use the witness subcommand "
            f"(certified families: {', '.join(certificates.CERTIFIED_FAMILIES)})"
        )
    sol = certificates.solve_certificate(args.family, args.m, args.k, xtol=args.tol_alpha)
    power = spectral.spectral_radius(sol.labeled.graph, tol=args.tol_power).rho
    gap = abs(sol.rho - power)
    ok = gap <= args.tol_agree
    if args.format == "json":
        _emit(_dump(dict(sol.to_dict(), rho_power=power, gap=gap, agree=ok)), None)
    elif args.format == "csv":
        _emit(_csv([{"family": sol.family, "m": sol.m, "k": sol.k, "alpha": sol.alpha,
                     "rho_alpha": sol.rho, "rho_power": power, "gap": gap}]), None)
    else:
        params = ", ".join(f"{k}={v:.10f}" for k, v in sol.params.items())
        _emit(
            f"[L2.4] family {sol.family} m={sol.m} k={sol.k}\n"
            f"alpha       {sol.alpha:.15f}\n"
            f"params      {params}\n"
            f"rho(alpha)  {sol.rho:.12f}\n"
            f"rho(power)  {power:.12f}\n"
            f"gap         {gap:.3e} ({'agree' if ok else 'DISAGREE'} at {args.tol_agree:g})",
            None,
        )
    return EXIT_OK if ok else EXIT_NUMERIC


_WITNESS_ANCHOR = {"B-under-A": "L3.7", "A-under-D": "L3.9", "I-under-L": "L4.4", "J-under-I": "L4.7"}


def cmd_witness(args) -> int:
    w = certificates.subnormal_witness(args.pair, args.m, args.k)
    if args.format == "json":
        _emit(_dump(w.to_dict()), None)
    elif args.format == "csv":
        _emit(_csv([{"pair": w.pair, "m": w.m, "k": w.k, "alpha": w.alpha, "slack": w.slack}]), None)
    else:
        _emit(
            f"[{_WITNESS_ANCHOR[w.pair]}] {w.pair} m={w.m} k={w.k}: strictly subnormal at "
            f"alpha={w.alpha:.12f}, slack {w.slack:.6e}",
            None,
        )
    return EXIT_OK


def cmd_enumerate(args) -> int:
    flt = "linear-only" if args.linear_only else "nonlinear-only" if args.nonlinear_only else "all"
    res = extremal.enumerate_unicyclic_pm(args.n, args.k, flt, cap=args.cap, workers=args.workers,
                                          tol=args.tol_power)
    if args.format == "csv":
        text = res.to_csv()
    elif args.format == "json":
        text = res.to_json()
    else:
        lines = [f"n={res.n} k={res.k} filter={res.filter}: {len(res.members)} members"]
        for mb in res.ranked():
            lines.append(f"  {mb.digest}  {mb.rho:.10f}  {mb.label.kind:5s} {' '.join(sorted(mb.label.tags))}")
        if res.maximizer is not None:
            top = res.members[res.maximizer]
            lines.append(f"maximizer {top.digest} rho={top.rho:.10f}, co-maximizers {len(res.co_maximizers)}")
        text = "\n".join(lines)
    _emit(text, args.out)
    return EXIT_OK


def _comparison_rows(k: int, ms: Sequence[int], tol: float) -> list[dict]:
    rows = extremal.resolve_open_comparison(k, ms, tol=tol)
    return [{"m": r.m, "rho_A": r.rho_a, "rho_D": r.rho_d, "gap_D_minus_A": r.gap, "leader": r.leader(tol)}
            for r in rows]


def _render_comparison(k: int, rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return _dump({"k": k, "rows": rows})
    if fmt == "csv":
        return _csv(rows)
    lines = [f"[open A vs D] k={k}"]
    for r in rows:
        lines.append(f"  m={r['m']:2d}  rho(A)={r['rho_A']:.10f}  rho(D)={r['rho_D']:.10f}  "
                     f"D-A={r['gap_D_minus_A']:+.3e}  leader {r['leader']}")
    return "\n".join(lines)


def cmd_compare_ad(args) -> int:
    rows = _comparison_rows(args.k, args.m_range, args.tol_agree_ad)
    _emit(_render_comparison(args.k, rows, args.format), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.id == "open-AD":
        rows = _comparison_rows(args.k, args.m_range, args.tol_agree_ad)
        _emit(_render_comparison(args.k, rows, args.format), args.out)
        return EXIT_OK
    mode = "exhaustive" if args.exhaustive else "family"
    rep = extremal.verify_theorem(args.id, args.k, args.m_range, mode, tol=args.tol_power, cap=args.cap)
    if args.format == "json":
        text = rep.to_json()
    elif args.format == "csv":
        text = _csv([{"theorem": rep.theorem, "k": rep.k, **c} for c in rep.evidence])
    else:
        lines = [f"[{rep.theorem}] k={rep.k} m={rep.m_values[0]}..{rep.m_values[-1]} ({rep.mode}): {rep.verdict}"]
        for c in rep.evidence:
            gap = "" if c["gap"] is None else f" gap {c['gap']:+.3e}"
            lines.append(f"  m={c['m']:2d} {c['claim']}:{gap} {'ok' if c['ok'] else 'FAILS'}")
        if rep.min_gap is not None:
            lines.append(f"min gap {rep.min_gap:.3e}")
        lines += [f"note: {s}" for s in rep.notes]
        if rep.counterexample:
            lines.append(f"counterexample: {rep.counterexample}")
        text = "\n".join(lines)
    _emit(text, args.out)
    return {"confirmed": EXIT_OK, "refuted": EXIT_REFUTED, "out-of-range": EXIT_RANGE}[rep.verdict]


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "human"), default="human")
    common.add_argument("--tol-power", type=_positive, default=spectral.DEFAULT_TOL,
                        help="power-iteration bracket width (default %(default)g)")
    common.add_argument("--tol-alpha", type=_positive, default=certificates.ALPHA_TOL,
                        help="bisection tolerance on alpha (default %(default)g)")
    common.add_argument("--tol-agree", type=_positive, default=DEFAULT_TOL_AGREE,
                        help="certificate/power agreement tolerance (default %(default)g)")

    p = argparse.ArgumentParser(prog="hyperspectra", description="Spectral radii of uniform hypergraphs.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("rho", parents=[common], help="spectral radius of a JSON hypergraph")
    s.add_argument("path")
    s.set_defaults(func=cmd_rho)

    s = sub.add_parser("build", parents=[common], help="write a family member as JSON")
    s.add_argument("family", choices=families.FAMILIES)
    s.add_argument("--m", type=int, help="size parameter (m, or a / l for S and C_linear)")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("-o", "--out", required=True)
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("certify", parents=[common], help="solve an alpha-normal certificate")
    s.add_argument("family")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("witness", parents=[common], help="strict subnormality witness")
    s.add_argument("pair", choices=certificates.WITNESS_PAIRS)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(func=cmd_witness)

    s = sub.add_parser("enumerate", parents=[common], help="exhaustive enumeration")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--linear-only", action="store_true")
    g.add_argument("--nonlinear-only", action="store_true")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--cap", type=int, default=None, help=f"vertex cap (default from {extremal.CAP_ENV} or per k)")
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("verify", parents=[common], help="check a theorem or lemma")
    s.add_argument("--id", required=True, choices=extremal.THEOREM_IDS + ("open-AD",))
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--m-range", type=_m_range, required=True)
    s.add_argument("--exhaustive", action="store_true")
    s.add_argument("--cap", type=int, default=None)
    s.add_argument("--tol-agree-ad", type=_positive, default=1e-8, help=argparse.SUPPRESS)
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("compare-ad", parents=[common], help="rho(A) against rho(D) per m")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--m-range", type=_m_range, default=list(range(3, 9)))
    s.add_argument("--tol-agree-ad", type=_positive, default=1e-8, help="gap below which the sign is a tie")
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_compare_ad)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (InputError, StructureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConvergenceError, SolverError, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except HyperspectraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
