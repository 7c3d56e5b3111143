"""Command-line entry point: synth, validate, estimate, landscape."""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import pipeline
from .circuit import serialize, simulate
from .gf2 import BinaryPoly, GF2Error, field_inv, poly_mul_mod
from .physical import AVParams, BaselineParams, av_estimate, baseline_estimate
from .shor import AVWeights, optimize_window, pointadd_cost, round_sig
from .synth import synth_crt_modmult, synth_flt_inversion
from .ecc import (TABLE_CENSUS, ec_add_classical, pointadd_census,
                  slope_for, synth_ecpointadd)

FIELDS = (163, 233, 283, 571)


def _write_atomic(path: str, text: str):
    p = Path(path)
    tmp = p.with_suffix(p.suffix + ".tmp")
    tmp.write_text(text)
    tmp.replace(p)


def _field_arg(args) -> int:
    if args.poly:
        bits = int(args.poly, 16)
        return BinaryPoly(bits).degree
    return args.field


def cmd_synth(args) -> int:
    n = _field_arg(args)
    poly_bits = int(args.poly, 16) if args.poly else None
    if args.counts_only:
        args.emit = None
    report: dict = {"field": n, "target": args.target}
    if args.target == "modmult":
        plan = pipeline.modmult_plan(n, poly_bits)
        report["counts"] = plan.counts().as_dict()
        circ = synth_crt_modmult(plan) if args.emit else None
    elif args.target in ("inversion", "inversion-noclear"):
        plan = pipeline.inversion_plan(n, args.target == "inversion", poly_bits)
        report["counts"] = plan.counts().as_dict()
        report["modmult_calls"] = plan.mult_calls
        circ = synth_flt_inversion(plan) if args.emit else None
    elif args.target == "ecpointadd":
        plan = pipeline.pointadd_plan(n, args.curve_a, args.curve_b, poly_bits)
        from .shor import pointadd_census_counts, stream_pointadd_counts

        streamed = stream_pointadd_counts(plan)
        cost = pointadd_cost(plan)
        report["counts"] = streamed.as_dict()
        report["toffoli_decomposition"] = cost.toffoli
        report["qubits_model"] = cost.qubits
        report["census"] = pointadd_census_counts(plan)
        circ = synth_ecpointadd(plan) if args.emit else None
    else:
        print(f"unknown target {args.target!r}", file=sys.stderr)
        return 2
    if args.emit:
        if circ.width > args.emit_cap:
            print(f"refusing to emit {circ.width}-qubit circuit "
                  f"(cap {args.emit_cap}); use --counts-only or raise "
                  f"--emit-cap", file=sys.stderr)
            return 2
        _write_atomic(args.emit, serialize(circ))
        report["emitted"] = args.emit
        report["gates"] = len(circ.gates)
    out = json.dumps(report, indent=2)
    if args.out:
        _write_atomic(args.out, out)
    else:
        print(out)
    return 0


def _check(name, ok, detail=""):
    print(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  {detail}" if detail else ""))
    return ok


def _validate_circuit_file(args) -> int:
    """Check a serialized circuit against the modular-multiplication oracle."""
    from .circuit import parse

    n = args.field
    field = pipeline.field_for(n)
    text = Path(args.circuit).read_text()
    circ = parse(text)
    rng = random.Random(args.seed)
    if 3 * n > args.exhaustive_cap:
        cases = [(rng.getrandbits(n), rng.getrandbits(n), rng.getrandbits(n))
                 for _ in range(args.samples)]
    else:
        cases = [(f, g, 0) for f in range(1 << n) for g in range(1 << n)]
    for f, g, h in cases:
        state = f | (g << n) | (h << (2 * n))
        out = simulate(circ, state)
        want = h ^ poly_mul_mod(BinaryPoly(f), BinaryPoly(g), field.p).bits
        expect = f | (g << n) | (want << (2 * n))
        if out != expect:
            bits = circ.width
            _check(f"circuit file vs modmult oracle", False,
                   f"counterexample input="
                   f"{bin(state)[2:].zfill(bits)[::-1]} got="
                   f"{bin(out)[2:].zfill(bits)[::-1]} want="
                   f"{bin(expect)[2:].zfill(bits)[::-1]}")
            return 1
    _check("circuit file vs modmult oracle", True)
    return 0


def cmd_validate(args) -> int:
    if args.circuit:
        return _validate_circuit_file(args)
    n = args.field
    rng = random.Random(args.seed)
    field = pipeline.field_for(n)
    plan = pipeline.modmult_plan(n)
    all_ok = True
    exhaustive = 3 * n <= args.exhaustive_cap
    if args.mode == "exhaustive" and not exhaustive:
        print(f"refusing exhaustive mode: 3n = {3 * n} qubits exceeds the cap "
              f"{args.exhaustive_cap}; running sampled mode instead")
    circ = synth_crt_modmult(plan)
    if exhaustive:
        cases = ((f, g, h) for f in range(1 << n) for g in range(1 << n)
                 for h in (0,))
        label = "modmult exhaustive"
    else:
        cases = ((rng.getrandbits(n), rng.getrandbits(n), rng.getrandbits(n))
                 for _ in range(args.samples))
        label = f"modmult sampled ({args.samples})"
    bad = None
    for f, g, h in cases:
        state = f | (g << n) | (h << (2 * n))
        out = simulate(circ, state)
        want = h ^ poly_mul_mod(BinaryPoly(f), BinaryPoly(g), field.p).bits
        got = (f | (g << n) | (want << (2 * n)))
        if out != got:
            bad = (f, g, h, out)
            break
    all_ok &= _check(label, bad is None,
                     "" if bad is None else f"counterexample f={bad[0]:#x} "
                     f"g={bad[1]:#x} h={bad[2]:#x} -> {bad[3]:#x}")
    # inversion sweep
    inv_plan = pipeline.inversion_plan(n)
    icirc = synth_flt_inversion(inv_plan)
    rs = icirc.meta["result_slot"]
    mask = (1 << n) - 1
    if exhaustive:
        vals = range(1, 1 << n)
        label = "inversion exhaustive"
    else:
        vals = [rng.getrandbits(n) | 1 for _ in range(args.samples // 10 + 1)]
        label = f"inversion sampled ({len(vals)})"
    bad = None
    for v in vals:
        if v == 0:
            continue
        out = simulate(icirc, v)
        got = (out >> (rs * n)) & mask
        want = field_inv(BinaryPoly(v), field).bits
        if out & mask != v or got != want:
            bad = (v, got, want)
            break
    all_ok &= _check(label, bad is None,
                     "" if bad is None else f"f={bad[0]:#x} got {bad[1]:#x} "
                     f"want {bad[2]:#x}")
    # point addition on the toy curve (only for small fields)
    if exhaustive and n <= 8:
        pa = pipeline.pointadd_plan(n, args.curve_a, args.curve_b)
        pcirc = synth_ecpointadd(pa)
        pts = pa.curve.points()
        bad = None
        for p1 in pts:
            for p2 in pts:
                lam = slope_for(p2, field)
                state = (p1.x.bits | (p1.y.bits << n) | (p2.x.bits << 2 * n)
                         | (p2.y.bits << 3 * n) | (lam.bits << 4 * n))
                out = simulate(pcirc, state)
                p3 = ec_add_classical(p1, p2, pa.curve)
                want = (p3.x.bits | (p3.y.bits << n) | (p2.x.bits << 2 * n)
                        | (p2.y.bits << 3 * n) | (lam.bits << 4 * n))
                if out != want:
                    bad = (p1, p2, out)
                    break
            if bad:
                break
        all_ok &= _check(f"point addition exhaustive ({len(pts)}^2 pairs)",
                         bad is None,
                         "" if bad is None else f"P1=({bad[0].x},{bad[0].y}) "
                         f"P2=({bad[1].x},{bad[1].y}) out={bad[2]:#x}")
        census = pointadd_census(pcirc)
        all_ok &= _check("point addition census", census == TABLE_CENSUS,
                         str(census))
    return 0 if all_ok else 1


def _scenarios(args):
    if args.field == "all":
        fields = FIELDS
    else:
        fields = tuple(int(f) for f in str(args.field).split(",") if f.strip())
    precomps = tuple(int(p) for p in args.precomp.split(",") if p.strip())
    return fields, precomps


def cmd_estimate(args) -> int:
    weights = AVWeights.load_default()
    fields, precomps = _scenarios(args)
    rows = []
    for n in fields:
        plan = pipeline.pointadd_plan(n)
        pa = pointadd_cost(plan, weights)
        for pre in precomps:
            s_t, cost_t, _ = optimize_window(n, pa, "toffoli", pre)
            s_a, cost_a, _ = optimize_window(n, pa, "active_volume", pre,
                                             weights=weights)
            if args.arch in ("baseline", "both"):
                for cycle in (float(c) for c in args.cycle.split(",")):
                    est = baseline_estimate(cost_t.qubits, cost_t.toffoli,
                                            BaselineParams(code_cycle_time=cycle))
                    rows.append({
                        "field": n, "precomp": pre, "architecture": "baseline",
                        "cycle": cycle, "window": s_t,
                        "toffoli": round_sig(cost_t.toffoli),
                        "logical_qubits": cost_t.qubits,
                        "d": est.distance,
                        "device_size": round_sig(est.device_size),
                        "runtime_seconds": est.runtime_avg,
                        "runtime_display": est.runtime_display,
                    })
            if args.arch in ("av", "both"):
                for delay in (float(d) for d in args.delay.split(",")):
                    est = av_estimate(cost_a.active_volume, cost_a.qubits,
                                      AVParams(delay=delay))
                    rows.append({
                        "field": n, "precomp": pre, "architecture": "active-volume",
                        "delay": delay, "window": s_a,
                        "active_volume": round_sig(cost_a.active_volume),
                        "logical_qubits": cost_a.qubits,
                        "d": est.distance,
                        "device_size": est.device_size,
                        "runtime_seconds": est.runtime_avg,
                        "runtime_display": est.runtime_display,
                    })
    if not rows:
        print("warning: empty scenario list; nothing to do", file=sys.stderr)
        return 0
    report = json.dumps(rows, indent=2)
    if args.out:
        _write_atomic(args.out, report)
    else:
        print(report)
    if args.csv:
        lines = ["field,precomp,architecture,param,d,device_size,runtime_display"]
        for r in rows:
            param = r.get("cycle", r.get("delay"))
            lines.append(f"{r['field']},{r['precomp']},{r['architecture']},"
                         f"{param},{r['d']},{r['device_size']},"
                         f"{r['runtime_display']}")
        _write_atomic(args.csv, "\n".join(lines) + "\n")
    return 0


def cmd_landscape(args) -> int:
    weights = AVWeights.load_default()
    n = args.field
    plan = pipeline.pointadd_plan(n)
    pa = pointadd_cost(plan, weights)
    pre = int(args.precomp)
    _, _, landscape = optimize_window(n, pa, "toffoli", pre, weights=weights)
    lines = ["s,toffoli,active_volume"]
    for s, tof, av in landscape:
        lines.append(f"{s},{tof},{av}")
    text = "\n".join(lines) + "\n"
    if args.out:
        _write_atomic(args.out, text)
    else:
        print(text, end="")
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="binshor",
        description="Reversible-circuit compiler and resource estimator for "
                    "binary-curve discrete logarithms")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize a circuit / report counts")
    p.add_argument("--field", type=int, default=163, choices=None)
    p.add_argument("--poly", help="custom field polynomial, hex bit-vector")
    p.add_argument("--target", default="modmult",
                   choices=["modmult", "inversion", "inversion-noclear",
                            "ecpointadd"])
    p.add_argument("--curve-a", type=lambda s: int(s, 16), default=1)
    p.add_argument("--curve-b", type=lambda s: int(s, 16), default=1)
    p.add_argument("--emit", help="write the serialized circuit here")
    p.add_argument("--emit-cap", type=int, default=400,
                   help="refuse to serialize circuits wider than this")
    p.add_argument("--counts-only", action="store_true")
    p.add_argument("--out", help="write the JSON report here")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("validate", help="run oracle sweeps")
    p.add_argument("--field", type=int, default=4)
    p.add_argument("--mode", choices=["exhaustive", "sampled"],
                   default="exhaustive")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--exhaustive-cap", type=int, default=24,
                   help="max total qubits for exhaustive mode")
    p.add_argument("--curve-a", type=lambda s: int(s, 16), default=0)
    p.add_argument("--curve-b", type=lambda s: int(s, 16), default=1)
    p.add_argument("--circuit",
                   help="check this serialized circuit against the oracle "
                        "instead of running the module sweeps")
    p.add_argument("--seed", type=int, default=20240808)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("estimate", help="logical -> physical estimates")
    p.add_argument("--field", default="all")
    p.add_argument("--arch", choices=["baseline", "av", "both"], default="both")
    p.add_argument("--precomp", default="0,48")
    p.add_argument("--cycle", default="1e-6,1e-3")
    p.add_argument("--delay", default="1e-6,1e-5")
    p.add_argument("--out", help="JSON report path")
    p.add_argument("--csv", help="CSV matrix path")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("landscape", help="cost-vs-window-size CSV")
    p.add_argument("--field", type=int, required=True)
    p.add_argument("--precomp", default="0")
    p.add_argument("--out")
    p.set_defaults(func=cmd_landscape)

    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (GF2Error, FileNotFoundError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
