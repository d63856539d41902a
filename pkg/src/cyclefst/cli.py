"""Command-line front end.

    cyclefst run   --perm FILE --script FILE [--impl fst|oneline|oneline-inv]
    cyclefst fuzz  [--seed U64] [--n N] [--len L] [--mix NAME] [--corrupt]
    cyclefst bench [--sizes CSV] [--mix NAME] [--reps R] [--ops Q]

Standard output is deterministic for fixed inputs and flags. Wall-clock
timings go to stderr and, when ``CYCLEFST_REPORT`` (or ``--report``) names a
file, to that file as tab-separated text.
"""

import argparse
import os
import sys

from . import harness
from .commands import ParseError, execute, parse_permutation, parse_script, render
from .errors import DomainError, PermutationError

EXIT_DIVERGENCE = 1
EXIT_PARSE = 2
EXIT_DOMAIN = 3


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _report_path(args):
    return args.report or os.environ.get("CYCLEFST_REPORT")


def _write_report(args, text):
    path = _report_path(args)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_run(args, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        perm = parse_permutation(_read(args.perm))
    except ParseError as exc:
        print(f"{args.perm}: {exc}", file=err)
        return EXIT_PARSE
    try:
        script = parse_script(_read(args.script), n=perm.size)
    except ParseError as exc:
        print(f"{args.script}: {exc}", file=err)
        return EXIT_PARSE
    store = harness.IMPLEMENTATIONS[args.impl](perm)
    for lineno, cmd in script:
        try:
            result = execute(store, cmd)
        except DomainError as exc:
            out.flush()
            print(f"{args.script}: line {lineno}: {exc}", file=err)
            return EXIT_DOMAIN
        except PermutationError as exc:
            out.flush()
            print(f"{args.script}: line {lineno}: {exc}", file=err)
            return EXIT_PARSE
        print(render(store, cmd, result), file=out)
    return 0


def cmd_fuzz(args, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    mix = harness.parse_mix(args.mix)
    script = harness.generate(args.seed, args.n, args.len, mix)
    if args.corrupt:
        make_a = harness.CorruptedFst
    else:
        make_a = harness.IMPLEMENTATIONS[args.impl]
    make_b = harness.IMPLEMENTATIONS[args.against]
    report = harness.run_differential(script, make_a, make_b)
    out.write(report.to_text())
    print(report.timing_text(), file=err, end="")
    _write_report(args, report.to_text() + report.timing_text())
    if report.divergence is None:
        print("result\tPASS", file=out)
        return 0
    prefix = harness.shrink(script, make_a, make_b)
    print("result\tFAIL", file=out)
    print(f"minimal failing prefix\t{prefix} ops", file=out)
    replay = (f"cyclefst fuzz --seed {args.seed} --n {args.n} --len {prefix} "
              f"--mix {args.mix} --impl {args.impl} --against {args.against}")
    if args.corrupt:
        replay += " --corrupt"
    print(f"replay\t{replay}", file=out)
    return EXIT_DIVERGENCE


def cmd_bench(args, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    impls = ("fst", "oneline", "oneline-inv")
    rows, checks = harness.measure_scaling(sizes, args.mix, reps=args.reps,
                                           ops=args.ops, seed=args.seed, impls=impls)
    print("n\tpotential\tbound\trotations_per_op\trotations_per_log2n", file=out)
    for row in rows:
        print(f"{row.n}\t{row.potential:.1f}\t{row.potential_bound:.1f}\t"
              f"{row.rotations_per_op:.3f}\t{row.per_log:.3f}", file=out)
    timing = ["n\top\t" + "\t".join(f"{impl}_us" for impl in impls)]
    for row in rows:
        ops = sorted({op for _, op in row.op_seconds}, key=harness.OP_ORDER.index)
        for op in ops:
            cells = "\t".join(f"{row.op_seconds[(impl, op)] * 1e6:.3f}" for impl in impls)
            timing.append(f"{row.n}\t{op}\t{cells}")
        timing.append(f"{row.n}\tbuild\t{row.build_seconds * 1e6:.1f}\t\t")
    timed_checks = []
    for name, ok, detail in checks:
        line = f"check\t{name}\t{'PASS' if ok else 'FAIL'}\t{detail}"
        if name.startswith(("potential", "rotations")):
            print(line, file=out)
        else:
            timed_checks.append(line)
    text = "\n".join(timing + timed_checks) + "\n"
    print(text, file=err, end="")
    _write_report(args, text)
    return 0 if all(ok for _, ok, _ in checks) else 1


def build_parser():
    parser = argparse.ArgumentParser(prog="cyclefst", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    impls = sorted(harness.IMPLEMENTATIONS)

    run = sub.add_parser("run", help="execute a command script against a permutation")
    run.add_argument("--perm", required=True, help="permutation file")
    run.add_argument("--script", required=True, help="command script")
    run.add_argument("--impl", choices=impls, default="fst")
    run.set_defaults(func=cmd_run)

    fuzz = sub.add_parser("fuzz", help="differential run of a generated script")
    fuzz.add_argument("--seed", type=int, default=1)
    fuzz.add_argument("--n", type=int, default=512)
    fuzz.add_argument("--len", type=int, default=100_000)
    fuzz.add_argument("--mix", default="uniform")
    fuzz.add_argument("--impl", choices=impls, default="fst")
    fuzz.add_argument("--against", choices=impls, default="oneline-inv")
    fuzz.add_argument("--corrupt", action="store_true",
                      help="debug: use an FST that answers apply wrongly")
    fuzz.add_argument("--report", help="report file (default: $CYCLEFST_REPORT)")
    fuzz.set_defaults(func=cmd_fuzz)

    bench = sub.add_parser("bench", help="timing and rotation table across sizes")
    bench.add_argument("--sizes", default="1000,10000,100000")
    bench.add_argument("--mix", default="uniform")
    bench.add_argument("--reps", type=int, default=5)
    bench.add_argument("--ops", type=int, default=1000)
    bench.add_argument("--seed", type=int, default=1)
    bench.add_argument("--report", help="report file (default: $CYCLEFST_REPORT)")
    bench.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"cyclefst: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"cyclefst: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
