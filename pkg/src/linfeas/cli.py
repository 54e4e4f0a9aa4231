"""Command line interface: solve, gen, bench, check, lp.

Exit codes: 0 solved / check passed, 2 infeasible-or-unbounded certificate
(or failed check), 3 step budget exceeded, 4 input error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import statistics
import sys
import time
from fractions import Fraction

from .instances import (
    Instance,
    generate_feasible_instance,
    parse_instance,
    verify_solution_exact,
    write_instance,
)
from .newton import QPolicy, SolverConfig, SolveStatus, solve_feasibility
from .perceptron import CapExceeded, perceptron_solve
from .reductions import (
    Lp,
    PurificationFailed,
    StepBudgetExceeded,
    feasibility_certificate,
    lift_solution,
    normalize_rows,
    omega_bound,
    solve_lp,
)

EXIT_OK = 0
EXIT_CERTIFICATE = 2
EXIT_BUDGET = 3
EXIT_INPUT = 4


def _fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _parse_q_policy(text: str) -> QPolicy:
    if text == "from-omega":
        return QPolicy.from_omega()
    if text == "adaptive":
        return QPolicy.adaptive()
    if text.startswith("fixed:"):
        return QPolicy.fixed(int(text.split(":", 1)[1]))
    raise argparse.ArgumentTypeError(
        f"bad q policy {text!r} (fixed:Q | from-omega | adaptive)")


def _parse_gammas(text: str) -> list[Fraction]:
    """Accept '2^-2..2^-8' ranges and comma lists of '2^-k' or fractions."""
    def one(tok: str) -> Fraction:
        tok = tok.strip()
        if tok.startswith("2^"):
            exp = int(tok[2:])
            return Fraction(2) ** exp
        return Fraction(tok)

    if ".." in text:
        lo_s, hi_s = text.split("..", 1)
        lo, hi = one(lo_s), one(hi_s)
        if not (lo.numerator == 1 and hi.numerator == 1
                and (lo.denominator & (lo.denominator - 1)) == 0
                and (hi.denominator & (hi.denominator - 1)) == 0):
            raise argparse.ArgumentTypeError("ranges need powers of two, e.g. 2^-2..2^-8")
        out = []
        g = lo
        while g >= hi:
            out.append(g)
            g = g / 2
        return out
    return [one(t) for t in text.split(",")]


def _instance_omega_bound(inst: Instance) -> Fraction:
    """Planted witness bound when available, else the worst-case formula."""
    ow = inst.witness_squared_norm()
    if ow is not None:
        return ow
    norm = normalize_rows(inst.a)
    max_entry = max(abs(e) for row in norm.rows for e in row)
    exp = (max_entry - 1).bit_length() if max_entry > 1 else 0
    return Fraction(omega_bound(norm.n_cols, exp))


def _cmd_solve(args) -> int:
    try:
        with open(args.input) as fh:
            inst = parse_instance(fh.read())
    except (OSError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    config = SolverConfig(
        mode=args.mode,
        omega_bound=_instance_omega_bound(inst),
        q_policy=args.q_policy,
        max_steps=args.max_steps,
        trace=args.trace is not None,
    )
    norm = normalize_rows(inst.a)
    report = solve_feasibility(norm, config)
    if args.trace is not None:
        with open(args.trace, "w") as fh:
            for rec in report.trace:
                fh.write(json.dumps(rec.to_wire()) + "\n")
    verified = False
    x = None
    if report.status is SolveStatus.SOLVED:
        x = lift_solution(norm, report.x)
        verified = verify_solution_exact(inst, x, "strict").ok
    record = {
        "status": report.status.value,
        "x": [_fraction_str(v) for v in x] if x is not None else None,
        "steps": report.steps_total,
        "verified": verified,
    }
    out = json.dumps(record, indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out + "\n")
    else:
        print(out)
    if report.status is SolveStatus.SOLVED:
        return EXIT_OK
    if report.status is SolveStatus.STEP_BUDGET_EXCEEDED:
        return EXIT_BUDGET
    return EXIT_BUDGET


def _cmd_gen(args) -> int:
    try:
        inst = generate_feasible_instance(
            m=args.m, n=args.n, bits=args.bits,
            margin=Fraction(args.margin), seed=args.seed)
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = write_instance(inst)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def bench_margin_sweep(gammas, m, n, bits, seeds, algos, tight_fraction=3):
    """Step counts and wall times over a margin sweep; returns CSV-ready rows.

    Instances pin roughly m/tight_fraction rows within a factor 2 of the
    requested margin so the sweep actually controls the hardness.
    """
    rows = []
    for gamma in gammas:
        for seed in range(seeds):
            inst = generate_feasible_instance(
                m=m, n=n, bits=bits, margin=gamma, seed=seed,
                tight_rows=max(1, m // tight_fraction))
            norm = normalize_rows(inst.a)
            ow = inst.witness_squared_norm()
            if "perceptron" in algos:
                t0 = time.perf_counter()
                rep = perceptron_solve(norm, math.ceil(ow))
                wall = (time.perf_counter() - t0) * 1e3
                rows.append({"gamma": str(gamma), "m": m, "n": n,
                             "algo": "perceptron", "steps": rep.steps,
                             "wall_ms": round(wall, 3)})
            if "newton" in algos:
                config = SolverConfig(mode="float", omega_bound=ow,
                                      q_policy=QPolicy.from_omega())
                t0 = time.perf_counter()
                rep = solve_feasibility(norm, config)
                wall = (time.perf_counter() - t0) * 1e3
                rows.append({"gamma": str(gamma), "m": m, "n": n,
                             "algo": "newton", "steps": rep.steps_total,
                             "wall_ms": round(wall, 3)})
    return rows


def _cmd_bench(args) -> int:
    if args.family != "margin-sweep":
        print(f"input error: unknown family {args.family!r}", file=sys.stderr)
        return EXIT_INPUT
    algos = args.algo.split(",")
    try:
        rows = bench_margin_sweep(args.gammas, args.m, args.n, args.bits,
                                  args.seeds, algos)
    except (CapExceeded, ValueError) as exc:
        print(f"bench failed: {exc}", file=sys.stderr)
        return EXIT_INPUT
    fields = ["gamma", "m", "n", "algo", "steps", "wall_ms"]
    handle = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        writer = csv.DictWriter(handle, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.output:
            handle.close()
    for algo in algos:
        per_gamma = {}
        for r in rows:
            if r["algo"] == algo:
                per_gamma.setdefault(r["gamma"], []).append(r["steps"])
        medians = {g: statistics.median(v) for g, v in per_gamma.items()}
        print(f"# {algo} median steps: {medians}", file=sys.stderr)
    return EXIT_OK


def _read_fraction_vector(path: str) -> list[Fraction]:
    with open(path) as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        record = json.loads(text)
        return [Fraction(t) for t in record["x"]]
    return [Fraction(tok) for tok in text.split()]


def _cmd_check(args) -> int:
    try:
        with open(args.input) as fh:
            inst = parse_instance(fh.read())
        x = _read_fraction_vector(args.solution)
        rhs = None
        if args.rhs:
            with open(args.rhs) as fh:
                rhs = [int(tok) for tok in fh.read().split()]
        result = verify_solution_exact(inst, x, args.relation, rhs)
    except (OSError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(json.dumps({"ok": result.ok, "margin": _fraction_str(result.margin)}))
    return EXIT_OK if result.ok else EXIT_CERTIFICATE


def parse_lp_file(text: str) -> Lp:
    """Instance format extended with 'b:' and 'c:' lines (c optional)."""
    main_lines = []
    b = None
    c = None
    for ln in text.splitlines():
        stripped = ln.strip()
        if stripped.startswith("b:"):
            b = tuple(int(t) for t in stripped[2:].split())
        elif stripped.startswith("c:"):
            c = tuple(int(t) for t in stripped[2:].split())
        else:
            main_lines.append(ln)
    inst = parse_instance("\n".join(main_lines))
    if b is None:
        raise ValueError("lp file needs a 'b:' line")
    if len(b) != inst.m:
        raise ValueError(f"b has {len(b)} entries, expected {inst.m}")
    if c is not None and len(c) != inst.n:
        raise ValueError(f"c has {len(c)} entries, expected {inst.n}")
    return Lp(a=inst.a, b=b, c=c)


def _cmd_lp(args) -> int:
    try:
        with open(args.input) as fh:
            lp = parse_lp_file(fh.read())
    except (OSError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        if lp.c is None:
            cert = feasibility_certificate(lp.a, lp.b)
        else:
            cert = solve_lp(lp.a, lp.b, lp.c)
    except (StepBudgetExceeded, PurificationFailed) as exc:
        print(f"solver failed: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    record = {"kind": cert.kind, "detail": cert.detail}
    if cert.x is not None:
        record["x"] = [_fraction_str(v) for v in cert.x]
        if lp.c is not None:
            value = sum((ci * xi for ci, xi in zip(lp.c, cert.x)), Fraction(0))
            record["value"] = _fraction_str(value)
    if cert.witness is not None:
        record["witness"] = [_fraction_str(v) for v in cert.witness]
    out = json.dumps(record, indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out + "\n")
    else:
        print(out)
    return EXIT_OK if cert.kind == "solution" else EXIT_CERTIFICATE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linfeas",
        description="Exact linear feasibility and LP solving")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve A x > 0 for an instance file")
    p.add_argument("--input", required=True)
    p.add_argument("--mode", choices=["exact", "float"], default="exact")
    p.add_argument("--q-policy", type=_parse_q_policy,
                   default=QPolicy.adaptive(), dest="q_policy")
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--trace", default=None, help="write JSONL step trace here")
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("gen", help="generate a feasible instance")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--bits", type=int, default=3)
    p.add_argument("--margin", default="1/4")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("bench", help="margin-sweep step-count benchmark")
    p.add_argument("--family", default="margin-sweep")
    p.add_argument("--gammas", type=_parse_gammas, default=_parse_gammas("2^-2..2^-7"))
    p.add_argument("--algo", default="perceptron,newton")
    p.add_argument("--m", type=int, default=12)
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--bits", type=int, default=2)
    p.add_argument("--seeds", type=int, default=5)
    p.add_argument("--output", default=None, help="CSV path (default stdout)")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("check", help="verify a solution file exactly")
    p.add_argument("--input", required=True)
    p.add_argument("--solution", required=True)
    p.add_argument("--relation", choices=["strict", "weak"], default="strict")
    p.add_argument("--rhs", default=None)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("lp", help="solve min c.x s.t. A x >= b from a file")
    p.add_argument("--input", required=True)
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_lp)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
