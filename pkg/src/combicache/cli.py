"""Command-line entry point.

Exit codes: 0 success, 1 a check or reconstruction failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import numpy as np

from . import bounds, delivery, placement
from .combinatorics import binom, lemma1_G, lemma1_G_bruteforce
from .errors import CodecError, EnumerationCapError, ParameterError
from .fixtures import FIXTURES, run_fixtures
from .kernels import BACKEND
from .serialize import fmt, rational
from .topology import build
from .verify import simulate


class UsageError(Exception):
    pass


def _net_args(p, N=False):
    p.add_argument("--H", type=int, required=True, help="number of relays")
    p.add_argument("--r", type=int, required=True, help="relays per user")
    if N:
        p.add_argument("--N", type=int, required=True, help="number of files")


def _scheme_args(p):
    p.add_argument("--scheme", choices=placement.SCHEMES, required=True)
    p.add_argument("--g", type=int, help="target coded caching gain (coded, improved)")
    p.add_argument("--t", type=int, help="MAN caching parameter")
    p.add_argument("--debug-mds", action="store_true", help="dump the MDS generator matrix")


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="combicache", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("topology", help="relay/user adjacency of the combination network")
    _net_args(p)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("place", help="placement layout summary (man, asym, coded, improved)")
    _net_args(p, N=True)
    _scheme_args(p)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("deliver", help="multicast delivery and exact per-link loads")
    _net_args(p, N=True)
    _scheme_args(p)
    p.add_argument("--demand", default="distinct", help="distinct | all | sample:<n>:<seed>")
    p.add_argument("--diagnose", action="store_true",
                   help="report T-set relays that differ from the SRDS argmax")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("verify", help="bit-exact end-to-end reconstruction check")
    _net_args(p, N=True)
    _scheme_args(p)
    p.add_argument("--B", type=int, required=True, help="file size in bytes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--demand", default="distinct",
                   help="distinct, or a comma-separated list of K file indices")
    p.add_argument("--report", choices=["text", "json"], default="text")
    p.add_argument("--dump-bytes", action="store_true")

    p = sub.add_parser("curve", help="memory-load tradeoff points and envelopes as CSV")
    _net_args(p, N=True)
    p.add_argument("--schemes", default="thm1,thm3,zewail,routing,cutset")
    p.add_argument("--out", help="CSV path (stdout if omitted)")

    p = sub.add_parser("compare", help="coded-scheme vs per-relay MDS baseline memory per gain")
    _net_args(p)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("optimal", help="check the large-memory corner point meets the cut-set bound")
    _net_args(p, N=True)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("lemma1", help="count of cached collections under the improved placement")
    _net_args(p)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--check", action="store_true", help="also run the brute-force count")

    p = sub.add_parser("fixtures", help="run the reference-configuration regression table")
    p.add_argument("--only", action="append", choices=sorted(FIXTURES))
    p.add_argument("--json", action="store_true")
    return ap


def _config(args) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if v is not None}
    cfg["backend"] = BACKEND
    return cfg


def _emit(args, data: dict, text: str, as_json: bool, out=None) -> None:
    out = out or sys.stdout
    if as_json:
        out.write(json.dumps({"config": _config(args), **data}, indent=2, default=_json_default) + "\n")
    else:
        out.write(f"config: {json.dumps(_config(args), default=_json_default)}\n{text}\n")


def _json_default(x):
    if isinstance(x, Fraction):
        return rational(x)
    if isinstance(x, (set, frozenset, tuple)):
        return sorted(x)
    raise TypeError(type(x))


def _layout(args):
    net = build(args.H, args.r)
    return net, placement.make_layout(net, args.N, args.scheme, g=args.g, t=args.t)


def _mds_dump(layout) -> str:
    if layout.mds is None:
        return "mds: none (uncoded layout)"
    with np.printoptions(threshold=sys.maxsize, linewidth=200):
        return f"mds generator ({layout.n}, {layout.subpacketization}):\n{layout.mds.generator()}"


def cmd_topology(args) -> int:
    net = build(args.H, args.r)
    lines = [f"H={net.H} r={net.r} K={net.K} K'={net.K1} K''={net.K2}"]
    lines += [f"user {k}: relays {list(u)}" for k, u in enumerate(net.users, start=1)]
    lines += [f"relay {h}: users {sorted(net.users_of_relay(h))}" for h in net.relays]
    _emit(args, {**net.to_dict(), "K": net.K, "K1": net.K1, "K2": net.K2}, "\n".join(lines), args.json)
    return 0


def cmd_place(args) -> int:
    net, layout = _layout(args)
    s = layout.summary()
    text = (f"scheme={s['scheme']} subpacketization={s['subpacketization']} "
            f"mds=({layout.n},{layout.subpacketization}) M={fmt(layout.M)} ({float(layout.M):.6g}) "
            f"B0={placement.required_block_size(layout)}")
    if args.debug_mds:
        text += "\n" + _mds_dump(layout)
    _emit(args, layout.to_dict(), text, args.json)
    return 0


def cmd_deliver(args) -> int:
    net, layout = _layout(args)
    report = delivery.worst_case_load(net, layout, args.demand)
    data = report.to_dict()
    lines = [f"M={fmt(layout.M)} max-link load={fmt(report.max_link_load)} "
             f"gain={fmt(report.measured_gain)}",
             "R_h: " + " ".join(fmt(x) for x in report.R_h)]
    if args.scheme != "man" and layout.g is not None:
        formula = bounds.routing_load(net.H, net.r, layout.N, layout.M) / layout.g
        data["formula_load"] = rational(formula)
        lines.append(f"formula load={fmt(formula)} match={report.max_link_load == formula}")
    if args.diagnose:
        plan = delivery.build_delivery(net, layout, report.demand, diagnose=True)
        data["srds_divergences"] = len(plan.srds_divergences)
        lines.append(f"SRDS divergences={len(plan.srds_divergences)}")
    _emit(args, data, "\n".join(lines), args.json)
    return 0


def cmd_verify(args) -> int:
    net, layout = _layout(args)
    if args.demand == "distinct":
        d = next(iter(delivery.demand_vectors(net, args.N, "distinct")))
    else:
        try:
            d = tuple(int(x) for x in args.demand.split(","))
        except ValueError:
            raise ParameterError(f"bad demand {args.demand!r}") from None
    run = simulate(net, layout, d, args.B, args.seed)
    text = f"recovered {run.recovered}/{net.K} users; relay bytes {run.relay_bytes}"
    for res in run.results.values():
        if not res.ok:
            text += f"\nuser {res.user} FAILED: missing={res.missing} errors={res.errors}"
    if args.debug_mds:
        text += "\n" + _mds_dump(layout)
    _emit(args, run.to_dict(dump_bytes=args.dump_bytes), text, args.report == "json")
    return 0 if run.ok else 1


def cmd_curve(args) -> int:
    schemes = [s.strip() for s in args.schemes.split(",") if s.strip()]
    rows = bounds.curve_rows(args.H, args.r, args.N, schemes)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["scheme", "g", "M_num", "M_den", "R_num", "R_den", "M_float", "R_float"])
    for row in rows:
        M, R = row["M"], row["R"]
        w.writerow([row["scheme"], "" if row["g"] is None else row["g"], M.numerator,
                    M.denominator, R.numerator, R.denominator, repr(float(M)), repr(float(R))])
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(buf.getvalue())
        print(f"config: {json.dumps(_config(args))}\nwrote {len(rows)} rows to {args.out}")
    else:
        print(f"config: {json.dumps(_config(args))}", file=sys.stderr)
        sys.stdout.write(buf.getvalue())
    return 0


def cmd_compare(args) -> int:
    rep = bounds.remark1_check(args.H, args.r)
    lines = [f"{'g':>3} {'proposed M/N':>14} {'baseline M/N':>14} smaller claimed"]
    for row in rep.rows:
        lines.append(f"{row.g:>3} {fmt(row.proposed):>14} {fmt(row.baseline):>14} "
                     f"{str(row.smaller):>7} {row.claimed}")
    lines.append("PASS" if rep.ok else f"FAIL at g={[row.g for row in rep.failures]}")
    data = {"ok": rep.ok, "rows": [
        {"g": row.g, "proposed": row.proposed, "baseline": row.baseline,
         "smaller": row.smaller, "claimed": row.claimed} for row in rep.rows]}
    _emit(args, data, "\n".join(lines), args.json)
    return 0 if rep.ok else 1


def cmd_optimal(args) -> int:
    rep = bounds.thm2_optimality_check(args.H, args.r, args.N)
    pt = "-" if rep.point is None else f"({fmt(rep.point[0])}, {fmt(rep.point[1])})"
    text = (f"corner point {pt}; expected ({fmt(rep.expected[0])}, {fmt(rep.expected[1])}); "
            f"cut-set bound {fmt(rep.bound)}; envelope linear to (N, 0): {rep.envelope_linear}"
            + "".join(f"\nnote: {n}" for n in rep.notes)
            + ("\nOPTIMAL" if rep.ok else "\nFAIL"))
    data = {"ok": rep.ok, "point": rep.point, "expected": rep.expected, "bound": rep.bound,
            "envelope_linear": rep.envelope_linear, "notes": rep.notes}
    _emit(args, data, text, args.json)
    return 0 if rep.ok else 1


def cmd_lemma1(args) -> int:
    net = build(args.H, args.r)
    if not 1 <= args.q <= net.K2:
        raise ParameterError(f"q={args.q} out of range 1..{net.K2}")
    G = lemma1_G(args.H, args.r, args.q)
    print(f"config: {json.dumps(_config(args))}")
    if not args.check:
        print(f"G={G}")
        return 0
    oracle = {lemma1_G_bruteforce(net, args.q, k) for k in range(1, net.K + 1)}
    if len(oracle) == 1 and G in oracle:
        print(f"G={G}, oracle={G}, MATCH")
        return 0
    print(f"G={G}, oracle={sorted(oracle)}, MISMATCH")
    return 1


def cmd_fixtures(args) -> int:
    results = run_fixtures(args.only)
    if args.json:
        print(json.dumps({"config": _config(args), "results": [r.to_dict() for r in results],
                          "ok": all(r.ok for r in results)}, indent=2))
    else:
        print(f"config: {json.dumps(_config(args))}")
        for r in results:
            print(f"{'PASS' if r.ok else 'FAIL'}  {r.name:<9} {r.seconds:7.3f}s  {r.detail}")
    return 0 if all(r.ok for r in results) else 1


COMMANDS = {
    "topology": cmd_topology,
    "place": cmd_place,
    "deliver": cmd_deliver,
    "verify": cmd_verify,
    "curve": cmd_curve,
    "compare": cmd_compare,
    "optimal": cmd_optimal,
    "lemma1": cmd_lemma1,
    "fixtures": cmd_fixtures,
}


def run(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return COMMANDS[args.cmd](args)
    except (ParameterError, EnumerationCapError, CodecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
