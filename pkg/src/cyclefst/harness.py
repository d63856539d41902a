"""Seeded operation scripts, differential runs, and scaling measurements.

Scripts are drawn from numpy's PCG64 generator (``np.random.PCG64(seed)``)
in a fixed order of draws, so a ``(seed, n, length, mix)`` tuple always
regenerates the same script.
"""

import math
import statistics
import time
from dataclasses import dataclass, field

import numpy as np

from .commands import COMMANDS, UPDATES, Command, parse_command, same_result
from .errors import PermutationError
from .fst import FstPermutation
from .oracle import OneLineOracle, OneLinePlusInverseOracle

OP_ORDER = tuple(COMMANDS)

MIXES = {
    "uniform": {op: 1.0 for op in OP_ORDER},
    # everything except the O(n) serialization, for large-n profiling
    "mixed": {op: 1.0 for op in OP_ORDER if op != "oneline"},
    "queries": {op: 1.0 for op in ("apply", "inverse", "power", "cycles", "size", "same", "dist")},
    "updates": {op: 1.0 for op in UPDATES},
    "transpose": {"transpose-at": 1.0},
    "flip": {"flip": 1.0},
    "dist": {"dist": 1.0},
}

IMPLEMENTATIONS = {
    "fst": FstPermutation,
    "oneline": OneLineOracle,
    "oneline-inv": OneLinePlusInverseOracle,
}


def parse_mix(spec):
    """A preset name from MIXES, or ``op=weight,op=weight`` pairs."""
    if spec in MIXES:
        return dict(MIXES[spec])
    mix = {}
    for part in spec.split(","):
        op, sep, weight = part.partition("=")
        op = op.strip()
        if not sep or op not in COMMANDS:
            raise ValueError(f"bad mix entry {part!r}; presets: {', '.join(MIXES)}")
        mix[op] = float(weight)
    return mix


def format_mix(mix):
    return ",".join(f"{op}={mix[op]:g}" for op in OP_ORDER if op in mix)


def random_cycle(n, rng):
    """A uniformly random cyclic permutation of 1..n (one-line)."""
    order = rng.permutation(n) + 1
    perm = np.empty(n, dtype=np.int64)
    perm[order - 1] = np.roll(order, -1)
    return perm


@dataclass
class OpScript:
    seed: int
    n: int
    mix: dict
    start: np.ndarray
    ops: list

    def to_text(self):
        lines = [
            f"# seed={self.seed} n={self.n} length={len(self.ops)} mix={format_mix(self.mix)}",
            "# start " + " ".join(map(str, self.start.tolist())),
        ]
        lines.extend(str(cmd) for cmd in self.ops)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        lines = text.splitlines()
        header = dict(tok.split("=", 1) for tok in lines[0].lstrip("# ").split())
        n = int(header["n"])
        start = np.array(lines[1].split()[2:], dtype=np.int64)
        ops = [c for c in (parse_command(line, k, n) for k, line in enumerate(lines[2:], 3)) if c]
        return cls(int(header["seed"]), n, parse_mix(header["mix"]), start, ops)


def generate(seed, n, length, mix="uniform", start=None):
    """Reproducible script of ``length`` commands over a permutation of ``n``.

    The starting permutation is drawn uniformly unless ``start`` is given.
    Transposition commands never repeat an element.
    """
    if isinstance(mix, str):
        mix = parse_mix(mix)
    if any(w < 0 for w in mix.values()):
        raise ValueError("mix weights must be non-negative")
    total = sum(mix.values())
    if total <= 0:
        raise ValueError("mix has zero total weight")
    if n < 2 and any(mix.get(op, 0) > 0 for op in ("transpose-at", "transpose-val")):
        raise ValueError("transpositions need n >= 2")
    rng = np.random.Generator(np.random.PCG64(seed))
    if start is None:
        start = rng.permutation(n).astype(np.int64) + 1
    ops = [op for op in OP_ORDER if mix.get(op, 0) > 0]
    p = np.array([mix[op] for op in ops]) / total
    kinds = rng.choice(len(ops), size=length, p=p)
    a = rng.integers(1, n + 1, size=length)
    b = rng.integers(1, n + 1, size=length)
    offset = rng.integers(1, max(n, 2), size=length)
    k = rng.integers(-2 * n, 2 * n + 1, size=length)
    distinct = ((a - 1 + offset) % n + 1).tolist()
    kinds, a, b, k = kinds.tolist(), a.tolist(), b.tolist(), k.tolist()
    script = []
    for t in range(length):
        op = ops[kinds[t]]
        arity = COMMANDS[op][1]
        if arity == 0:
            args = ()
        elif arity == 1:
            args = (a[t],)
        elif op == "power":
            args = (a[t], k[t])
        elif op in ("transpose-at", "transpose-val"):
            args = (a[t], distinct[t])
        else:
            args = (a[t], b[t])
        script.append(Command(op, args))
    return OpScript(seed, n, dict(mix), np.asarray(start, dtype=np.int64), script)


def outcome(store, cmd):
    """Result of a command, with domain/validation errors folded into a value."""
    return _call(getattr(store, COMMANDS[cmd.op][0]), cmd.args)


@dataclass
class Divergence:
    index: int
    command: Command
    left: object
    right: object
    what: str

    def __str__(self):
        return (f"op {self.index} `{self.command}`: {self.what} differs "
                f"({_show(self.left)} vs {_show(self.right)})")


def _show(x):
    if isinstance(x, np.ndarray):
        return " ".join(map(str, x.tolist()))
    return repr(x)


@dataclass
class RunReport:
    """Outcome of one run. ``timings`` are kept out of :meth:`to_text`."""

    seed: int
    n: int
    impls: tuple
    ops_run: int = 0
    divergence: Divergence = None
    counters: dict = field(default_factory=dict)
    potentials: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return self.divergence is None and all(ok for _, ok, _ in self.checks)

    def to_text(self):
        lines = [
            f"seed\t{self.seed}",
            f"n\t{self.n}",
            f"impls\t{' '.join(self.impls)}",
            f"ops\t{self.ops_run}",
        ]
        for key in sorted(self.counters):
            lines.append(f"{key}\t{self.counters[key]}")
        if self.potentials:
            lines.append("potential\t" + " ".join(f"{p:.3f}" for p in self.potentials))
        for name, ok, detail in self.checks:
            lines.append(f"check\t{name}\t{'PASS' if ok else 'FAIL'}\t{detail}")
        lines.append("divergence\t" + ("none" if self.divergence is None else str(self.divergence)))
        return "\n".join(lines) + "\n"

    def timing_text(self):
        rows = ["impl\top\tcount\tseconds"]
        for (impl, op), (count, secs) in sorted(self.timings.items()):
            rows.append(f"{impl}\t{op}\t{count}\t{secs:.6f}")
        return "\n".join(rows) + "\n"


def _counters(store):
    forest = getattr(store, "forest", None)
    if forest is None:
        return {}
    return {"rotations": forest.rotations, "splays": forest.splays, "fixes": forest.fixes}


def run_differential(script, make_a, make_b, limit=None, potential_every=0):
    """Execute ``script`` on fresh stores from both factories and compare.

    Every result is compared, and after each update the full one-line
    notation is compared too. The first divergence stops the run and is
    recorded; it is never raised.
    """
    a = make_a(script.start)
    b = make_b(script.start)
    report = RunReport(script.seed, script.n, (_name(a), _name(b)))
    ops = script.ops if limit is None else script.ops[:limit]
    bound_a = _bind(a)
    bound_b = _bind(b)
    clock = time.perf_counter
    spent = {op: [0, 0.0, 0.0] for op in OP_ORDER}
    for t, cmd in enumerate(ops):
        op = cmd.op
        t0 = clock()
        ra = _call(bound_a[op], cmd.args)
        t1 = clock()
        rb = _call(bound_b[op], cmd.args)
        t2 = clock()
        acc = spent[op]
        acc[0] += 1
        acc[1] += t1 - t0
        acc[2] += t2 - t1
        report.ops_run = t + 1
        if not same_result(ra, rb):
            report.divergence = Divergence(t, cmd, ra, rb, "result")
            break
        if op in UPDATES:
            oa, ob = a.to_one_line(), b.to_one_line()
            if not np.array_equal(oa, ob):
                report.divergence = Divergence(t, cmd, oa, ob, "one-line")
                break
        if potential_every and (t + 1) % potential_every == 0 and hasattr(a, "potential"):
            report.potentials.append(a.potential())
    for op, (count, secs_a, secs_b) in spent.items():
        if count:
            report.timings[(report.impls[0], op)] = (count, secs_a)
            report.timings[(report.impls[1], op)] = (count, secs_b)
    report.counters = _counters(a)
    return report


def _bind(store):
    return {op: getattr(store, method) for op, (method, _) in COMMANDS.items()}


def _call(fn, args):
    try:
        return fn(*args)
    except PermutationError as exc:
        return ("error", type(exc).__name__)


def shrink(script, make_a, make_b):
    """Smallest prefix length of ``script`` that still diverges (bisection).

    Returns None when the full script does not diverge.
    """
    if run_differential(script, make_a, make_b).divergence is None:
        return None
    lo, hi = 1, len(script.ops)
    while lo < hi:
        mid = (lo + hi) // 2
        if run_differential(script, make_a, make_b, limit=mid).divergence is None:
            lo = mid + 1
        else:
            hi = mid
    return lo


def _name(store):
    return getattr(store, "name", type(store).__name__)


class CorruptedFst(FstPermutation):
    """FST that answers ``apply`` wrongly once it has been called ``after`` times.

    Exists to prove the differential harness notices a broken implementation.
    """

    name = "fst-corrupted"

    def __init__(self, one_line, after=0):
        super().__init__(one_line)
        self.after = after
        self.calls = 0

    def apply(self, i):
        value = super().apply(i)
        self.calls += 1
        if self.calls > self.after and self.n > 1:
            value = value % self.n + 1
        return value


def rotation_profile(n, length, mix="mixed", seed=1, start=None):
    """Run a generated script on an FST alone and count restructuring work.

    Returns a dict with the totals, the mean rotations per operation, the
    fitted constant ``rotations / (n + sum(log2 n_j))`` where ``n_j`` is
    bounded by ``n``, and ``per_log = mean / log2 n``.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    if start is None:
        start = random_cycle(n, rng)
    script = generate(seed, n, length, mix, start=start)
    fst = FstPermutation(script.start)
    for cmd in script.ops:
        outcome(fst, cmd)
    rot = fst.forest.rotations
    log_n = math.log2(n) if n > 1 else 1.0
    return {
        "n": n,
        "ops": length,
        "rotations": rot,
        "splays": fst.forest.splays,
        "fixes": fst.forest.fixes,
        "mean": rot / length,
        "per_log": rot / length / log_n,
        "constant": rot / (n + length * log_n),
        "potential": fst.potential(),
    }


def _median_seconds(fn, reps):
    times = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def warmup():
    """Run every command once on tiny inputs so compilation stays out of timings."""
    script = generate(0, 4, 64, "uniform", start=np.array([2, 3, 4, 1]))
    for make in IMPLEMENTATIONS.values():
        store = make(script.start)
        for cmd in script.ops:
            outcome(store, cmd)
        store.to_one_line()

# commands that cost O(n) per call on some store get smaller batches
_LINEAR_COMMANDS = {"oneline", "cycles"}


def time_command(make, start, cmds):
    """Wall time of running ``cmds`` in order on a fresh store (build excluded)."""
    store = make(start)
    t0 = time.perf_counter()
    for cmd in cmds:
        outcome(store, cmd)
    return time.perf_counter() - t0


@dataclass
class ScalingRow:
    n: int
    build_seconds: float
    potential: float
    potential_bound: float
    rotations_per_op: float
    per_log: float
    op_seconds: dict = field(default_factory=dict)


def measure_scaling(sizes, mix="uniform", reps=5, ops=10_000, seed=1,
                    impls=("fst", "oneline", "oneline-inv")):
    """Build, potential and per-command timings on random single-cycle inputs.

    Returns ``(rows, checks)``; each check is ``(name, passed, detail)``.
    Timing thresholds are only asserted from n = 100000 upward, where they
    are not swamped by interpreter overhead.
    """
    sizes = list(sizes)
    if sizes != sorted(sizes):
        raise ValueError("sizes must be ascending")
    mix = parse_mix(mix) if isinstance(mix, str) else mix
    rows = []
    checks = []
    warmup()
    for n in sizes:
        rng = np.random.Generator(np.random.PCG64(seed))
        start = random_cycle(n, rng)
        build = _median_seconds(lambda: FstPermutation(start), reps)
        potential = FstPermutation(start).potential()
        bound = 2 * n + 10 * math.log2(n) ** 2 if n > 1 else 0.0
        profile = rotation_profile(n, ops, {k: v for k, v in mix.items() if k != "oneline"},
                                   seed=seed, start=start) if n > 1 else None
        row = ScalingRow(n, build, potential, bound,
                         profile["mean"] if profile else 0.0,
                         profile["per_log"] if profile else 0.0)
        for op in OP_ORDER:
            if mix.get(op, 0) <= 0 or (n < 2 and op in ("transpose-at", "transpose-val")):
                continue
            count = max(1, ops // 1000) if op in _LINEAR_COMMANDS else ops
            cmds = generate(seed, n, count, {op: 1.0}, start=start).ops
            for impl in impls:
                secs = time_command(IMPLEMENTATIONS[impl], start, cmds)
                row.op_seconds[(impl, op)] = secs / count
        rows.append(row)
        checks.append((f"potential n={n}", potential <= bound,
                       f"{potential:.1f} <= {bound:.1f}"))
        if profile:
            checks.append((f"rotations n={n}", row.per_log <= 10,
                           f"{row.rotations_per_op:.2f}/op = {row.per_log:.3f} log2 n"))
        if n >= 100_000 and ("fst", "dist") in row.op_seconds:
            fst_t = row.op_seconds[("fst", "dist")]
            for impl in impls:
                if impl != "fst":
                    ratio = row.op_seconds[(impl, "dist")] / fst_t
                    checks.append((f"dist speedup vs {impl} n={n}", ratio >= 5,
                                   f"{ratio:.1f}x"))
    for prev, cur in zip(rows, rows[1:]):
        if prev.n >= 100_000 and cur.n == 2 * prev.n:
            ratio = cur.build_seconds / prev.build_seconds
            checks.append((f"build ratio n={cur.n}/{prev.n}", 1.5 <= ratio <= 2.5,
                           f"{ratio:.2f}"))
    return rows, checks
