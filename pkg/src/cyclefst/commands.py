"""Text formats: permutation files, command scripts, and result rendering.

A permutation file is a header ``n=<count>`` followed by one line of ``n``
space-separated values (one-line notation, 1-based). A script holds one
command per line; blank lines and ``#`` comments are ignored.
"""

import math
from typing import NamedTuple

import numpy as np

from .errors import ValidationError
from .fst import validate_one_line

# command name -> (method name, arity)
COMMANDS = {
    "apply": ("apply", 1),
    "inverse": ("inverse", 1),
    "power": ("power", 2),
    "cycles": ("num_cycles", 0),
    "size": ("cycle_size", 1),
    "same": ("same_cycle", 2),
    "dist": ("distance", 2),
    "transpose-at": ("transpose_at", 2),
    "transpose-val": ("transpose_values", 2),
    "flip": ("flip", 2),
    "oneline": ("to_one_line", 0),
}
UPDATES = frozenset({"transpose-at", "transpose-val", "flip"})

INT64_MIN, INT64_MAX = -(2**63), 2**63 - 1


class ParseError(ValueError):
    """Malformed input file; carries the 1-based line and column."""

    def __init__(self, message, line, column=None):
        where = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.column = column


class Command(NamedTuple):
    op: str
    args: tuple = ()

    def __str__(self):
        return " ".join([self.op, *map(str, self.args)])


def parse_permutation(text):
    """Parse a permutation file into an int64 array of length n."""
    lines = text.splitlines()
    if not lines or not lines[0].strip().startswith("n="):
        raise ParseError("expected header 'n=<count>'", 1, 1)
    try:
        n = int(lines[0].strip()[2:])
    except ValueError:
        raise ParseError(f"bad count {lines[0].strip()[2:]!r}", 1, 3) from None
    if n < 1:
        raise ParseError(f"count must be positive, got {n}", 1, 3)
    body = lines[1] if len(lines) > 1 else ""
    tokens = body.split()
    values = []
    for col, tok in enumerate(tokens, 1):
        try:
            values.append(int(tok))
        except ValueError:
            raise ParseError(f"value {tok!r} is not an integer", 2, col) from None
    if len(values) != n:
        raise ParseError(f"expected {n} values, found {len(values)}", 2)
    if any(line.strip() for line in lines[2:]):
        raise ParseError("unexpected content after the permutation", 3)
    try:
        return validate_one_line(values)
    except ValidationError as exc:
        raise ParseError(str(exc), 2, exc.position) from None


def format_permutation(values):
    values = [int(v) for v in values]
    return f"n={len(values)}\n{' '.join(map(str, values))}\n"


def parse_command(line, lineno, n=None):
    """Parse one script line; ``None`` for blank or comment lines.

    With ``n`` given, element arguments are range-checked against 1..n.
    """
    text = line.split("#", 1)[0].strip()
    if not text:
        return None
    op, *rest = text.split()
    if op not in COMMANDS:
        raise ParseError(f"unknown command {op!r}", lineno, 1)
    arity = COMMANDS[op][1]
    if len(rest) != arity:
        raise ParseError(f"{op} takes {arity} argument(s), got {len(rest)}", lineno)
    args = []
    for pos, tok in enumerate(rest):
        try:
            val = int(tok)
        except ValueError:
            raise ParseError(f"argument {tok!r} is not an integer", lineno, pos + 2) from None
        if op == "power" and pos == 1:
            if not INT64_MIN <= val <= INT64_MAX:
                raise ParseError(f"exponent {val} does not fit in 64 bits", lineno, pos + 2)
        elif n is not None and not 1 <= val <= n:
            raise ParseError(f"element {val} outside 1..{n}", lineno, pos + 2)
        args.append(val)
    return Command(op, tuple(args))


def parse_script(text, n=None):
    """Parse a script into ``[(lineno, Command), ...]``."""
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        cmd = parse_command(line, lineno, n)
        if cmd is not None:
            out.append((lineno, cmd))
    return out


def execute(store, cmd):
    """Run one command on a store and return its raw result (None for updates)."""
    method, _ = COMMANDS[cmd.op]
    return getattr(store, method)(*cmd.args)


def render(store, cmd, result):
    """One output line for a command result."""
    if cmd.op in UPDATES:
        return f"ok {store.num_cycles()}"
    if cmd.op == "oneline":
        return " ".join(map(str, result.tolist()))
    if isinstance(result, bool):
        return "true" if result else "false"
    if isinstance(result, float) and math.isinf(result):
        return "inf"
    return str(result)


def same_result(a, b):
    if type(a) is not type(b):
        return False
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b
