"""Command-line front end: ``flowround round|verify|expect|gen|bench``.

Exit codes: 0 success, 1 verification failed, 2 bad usage or input,
3 internal invariant broken.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from pathlib import Path
from typing import Optional

from .algorithms import ALGORITHMS, default_k, run
from .core import FlowState, format_rational, total_cost
from .errors import FlowRoundingError, InvariantError
from .formats import InstanceFile, emit_instance, parse_instance
from .generate import generate_circulation, generate_st_flow
from .policy import COSTED, MODES, RANDOMIZED, circulation_from_flow, flow_from_circulation, make_policy
from .verify import check_all, expectation_oracle, statistical_expectation

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2, 3


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("expected an unsigned 64-bit integer")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return value


def _read(path: str) -> InstanceFile:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_instance(text)


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _as_circulation(inst: InstanceFile, mode: str) -> FlowState:
    if inst.source_sink is None:
        return inst.state
    s, t = inst.source_sink
    return circulation_from_flow(inst.state, s, t, mode)


def cmd_round(args) -> int:
    inst = _read(args.input)
    circ = _as_circulation(inst, args.mode)
    policy = make_policy(args.mode, args.seed)
    rounded, stats = run(circ, policy, args.algo, k=args.k, order_seed=args.order_seed)
    out = InstanceFile(inst.state, inst.costed, inst.source_sink)
    flows = rounded.f1
    if inst.source_sink is not None:
        back, _, _, value = flow_from_circulation(rounded)
        flows = back.f1
        out.value_change = (circ.f1[-1], value)
    out.stats = {
        "algo": args.algo, "mode": args.mode, "seed": args.seed,
        "k": "-" if args.k is None else args.k,
        "order_seed": "-" if args.order_seed is None else args.order_seed,
        "cycles_canceled": stats.cycles_canceled, "tree_ops": stats.tree_ops,
        "merges": stats.merges, "clusters_touched": stats.clusters_touched,
        "max_cluster_size": stats.max_cluster_size,
    }
    if args.mode == COSTED:
        after = FlowState(inst.state.graph, inst.state.f0, flows, inst.state.cost)
        out.cost_change = (total_cost(inst.state, "original"), total_cost(after))
    _write(args.output, emit_instance(out, flows))
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = _read(args.input)
    res = _read(args.result)
    mode = res.stats.get("mode", COSTED if res.cost_change is not None else RANDOMIZED)
    if mode not in MODES:
        mode = RANDOMIZED
    if mode == COSTED and not inst.state.has_costs:
        mode = RANDOMIZED
    rounded = FlowState(inst.state.graph, inst.state.f0, res.state.f1, inst.state.cost)
    if inst.source_sink is not None:
        s, t = inst.source_sink
        original = circulation_from_flow(inst.state, s, t, mode)
        rounded = circulation_from_flow(rounded, s, t, mode)
    else:
        original = inst.state
    report = check_all(original, rounded, mode)
    for line in report.lines():
        print(line)
    print("PASS" if report.ok else "FAIL")
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_expect(args) -> int:
    inst = _read(args.input)
    circ = _as_circulation(inst, RANDOMIZED)
    if args.oracle:
        rep = expectation_oracle(circ, args.algo, max_branches=args.max_branches, k=args.k)
        print(f"# oracle algo={args.algo} leaves={rep.branch_count} "
              f"probability={format_rational(rep.total_probability)}")
        for e in range(circ.m):
            got, want = rep.values[e], rep.target[e]
            verdict = "exact" if got == want else "MISMATCH"
            sign = "==" if got == want else "!="
            print(f"{e} {format_rational(got)} {sign} {format_rational(want)} {verdict}")
    else:
        rep = statistical_expectation(circ, args.algo, args.trials, args.seed, k=args.k)
        print(f"# trials={rep.trials} algo={args.algo} seed={args.seed} "
              f"tolerance={rep.tolerance:.6g}")
        for e in range(circ.m):
            got, want = rep.values[e], rep.target[e]
            diff = abs(float(got - want))
            verdict = "ok" if diff <= rep.tolerance else "FAIL"
            print(f"{e} mean={float(got):.6f} f0={format_rational(want)} "
                  f"diff={diff:.6f} {verdict}")
    print("PASS" if rep.passed else "FAIL")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_gen(args) -> int:
    if args.st:
        inst = generate_st_flow(args.n, args.m, args.paths, args.cycles, args.seed, args.costed)
    else:
        inst = generate_circulation(args.n, args.m, args.cycles, args.seed, args.costed)
    comment = (f"generated n={args.n} m={args.m} cycles={args.cycles} seed={args.seed}"
               + (f" paths={args.paths}" if args.st else ""))
    _write(args.output, emit_instance(inst, comments=(comment,)))
    return EXIT_OK


def _k_values(spec: str, n: int, m: int) -> list[Optional[int]]:
    out = []
    for token in spec.split(","):
        token = token.strip()
        if token == "auto":
            out.append(default_k(n, m))
        elif token == "n":
            out.append(max(n, 1))
        else:
            out.append(max(1, int(token)))
    return list(dict.fromkeys(out))


def cmd_bench(args) -> int:
    files = sorted(p for p in Path(args.corpus).iterdir() if p.is_file())
    writer = csv.writer(sys.stdout, lineterminator="\n")
    header = ["file", "algo", "n", "m", "k", "tree_ops", "merges", "cycles_canceled", "ops_per_budget"]
    if not args.no_wall:
        header.append("wall_ms")
    writer.writerow(header)
    for path in files:
        inst = parse_instance(path.read_text())
        circ = _as_circulation(inst, RANDOMIZED)
        if args.algo != "mlogn2m":
            ks = [None]
        elif args.k is not None:
            ks = [args.k]
        else:
            ks = _k_values(args.k_sweep, circ.n, circ.m)
        for k in ks:
            start = time.perf_counter()
            _, stats = run(circ, make_policy(RANDOMIZED, args.seed), args.algo, k=k)
            wall = (time.perf_counter() - start) * 1000
            # measured constant against the m + n^2/k operation budget
            budget = "" if k is None else f"{stats.tree_ops / max(1, circ.m + circ.n ** 2 / k):.3f}"
            row = [path.name, args.algo, circ.n, circ.m, "" if k is None else k,
                   stats.tree_ops, stats.merges, stats.cycles_canceled, budget]
            if not args.no_wall:
                row.append(f"{wall:.3f}")
            writer.writerow(row)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flowround",
                                     description="Round fractional flows by cycle canceling.")
    sub = parser.add_subparsers(dest="command", required=True)

    def algo_flags(p, default="mlogn2m"):
        p.add_argument("--algo", choices=ALGORITHMS, default=default)
        p.add_argument("--k", type=_positive, default=None,
                       help="cluster size parameter for mlogn2m (default ceil(n^2/m))")

    p = sub.add_parser("round", help="round an instance and write the result")
    p.add_argument("input")
    p.add_argument("-o", "--output", default=None)
    algo_flags(p)
    p.add_argument("--mode", choices=MODES, default=COSTED)
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--order-seed", type=_u64, default=None)
    p.set_defaults(func=cmd_round)

    p = sub.add_parser("verify", help="check a result against its instance")
    p.add_argument("input")
    p.add_argument("result")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("expect", help="check that rounding keeps every edge's expected flow")
    p.add_argument("input")
    algo_flags(p)
    how = p.add_mutually_exclusive_group(required=True)
    how.add_argument("--oracle", action="store_true", help="enumerate every random outcome exactly")
    how.add_argument("--trials", type=_positive, help="sample this many seeded runs")
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--max-branches", type=_positive, default=4096)
    p.set_defaults(func=cmd_expect)

    p = sub.add_parser("gen", help="generate a random fractional instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--cycles", type=int, default=None)
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--costed", action="store_true")
    p.add_argument("--st", action="store_true", help="emit an s-t flow instead of a circulation")
    p.add_argument("--paths", type=_positive, default=2)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="operation counts over a directory of instances, as CSV")
    p.add_argument("corpus")
    algo_flags(p)
    p.add_argument("--k-sweep", default="auto", help="comma list of k values, 'auto' or 'n'; ignored when --k is given")
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--no-wall", action="store_true", help="omit the wall-clock column")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "cycles", 0) is None:
        args.cycles = max(1, args.m - args.n + 1)
    try:
        return args.func(args)
    except InvariantError as exc:
        print(f"flowround: internal error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (FlowRoundingError, OSError) as exc:
        print(f"flowround: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
