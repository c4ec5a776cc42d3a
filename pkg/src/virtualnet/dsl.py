"""Line-oriented text format for virtual networks.

Grammar (one statement per line, UTF-8)::

    file      := line*
    line      := ws* [statement] ws* [comment] NEWLINE
    statement := "modes" INT
               | "bs" INT INT REAL
               | "flip" INT
               | "swap" INT INT
    comment   := "#" any-text

Keywords are lower case.  Tokens are separated by spaces or tabs.  ``modes``
must appear exactly once, before any operation.  Mode indices are 1-based and
must not exceed the declared mode count; REAL is anything ``float`` accepts
that is finite and lies in [0, 1].  Blank and comment-only lines are ignored.

Errors are raised as NetworkParseError with the 1-based line and column of
the offending token.
"""

import math
import re

from .errors import NetworkParseError
from .network import BeamSplitter, PhaseFlip, Swap, VirtualNetwork

_TOKEN = re.compile(r"[^ \t]+")

_ARITY = {"bs": 3, "flip": 1, "swap": 2, "modes": 1}


def _tokens(line):
    code = line.split("#", 1)[0]
    return [(m.group(), m.start() + 1) for m in _TOKEN.finditer(code)]


def _int(tok, col, lineno, source, what):
    if not re.fullmatch(r"[+]?\d+", tok):
        raise NetworkParseError(f"{what} must be an integer, got {tok!r}", lineno, col, source)
    return int(tok)


def parse_network_dsl(text, source=None):
    """Parse network text into a VirtualNetwork (ops in file order)."""
    n_modes = None
    ops = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = _tokens(raw.rstrip("\r"))
        if not toks:
            continue
        (kw, kw_col), args = toks[0], toks[1:]
        if kw not in _ARITY:
            raise NetworkParseError(f"unknown operation {kw!r}", lineno, kw_col, source)
        if len(args) != _ARITY[kw]:
            col = args[_ARITY[kw]][1] if len(args) > _ARITY[kw] else kw_col
            raise NetworkParseError(
                f"'{kw}' takes {_ARITY[kw]} argument(s), got {len(args)}", lineno, col, source
            )
        if kw == "modes":
            if n_modes is not None:
                raise NetworkParseError("'modes' declared twice", lineno, kw_col, source)
            if ops:
                raise NetworkParseError("'modes' must precede all operations", lineno, kw_col, source)
            tok, col = args[0]
            n_modes = _int(tok, col, lineno, source, "mode count")
            if n_modes < 1:
                raise NetworkParseError("mode count must be at least 1", lineno, col, source)
            continue
        if n_modes is None:
            raise NetworkParseError("'modes N' missing before first operation", lineno, kw_col, source)
        n_idx = 1 if kw == "flip" else 2
        idx = []
        for tok, col in args[:n_idx]:
            m = _int(tok, col, lineno, source, "mode index")
            if m < 1:
                raise NetworkParseError(f"index {m} is below 1", lineno, col, source)
            if m > n_modes:
                raise NetworkParseError(f"index {m} exceeds modes {n_modes}", lineno, col, source)
            idx.append(m)
        if n_idx == 2 and idx[0] == idx[1]:
            raise NetworkParseError(
                f"'{kw}' needs two distinct modes, got {idx[0]} twice", lineno, args[1][1], source
            )
        if kw == "bs":
            tok, col = args[2]
            try:
                r = float(tok)
            except ValueError:
                raise NetworkParseError(f"reflectivity must be a number, got {tok!r}", lineno, col, source) from None
            if not (math.isfinite(r) and 0.0 <= r <= 1.0):
                raise NetworkParseError(f"reflectivity {tok} outside [0, 1]", lineno, col, source)
            ops.append(BeamSplitter(idx[0], idx[1], r))
        elif kw == "flip":
            ops.append(PhaseFlip(idx[0]))
        else:
            ops.append(Swap(idx[0], idx[1]))
    if n_modes is None:
        raise NetworkParseError("'modes N' declaration missing", None, None, source)
    return VirtualNetwork(n_modes, ops)


def format_network(net):
    """Canonical text for ``net``; parsing it gives back the same op list."""
    lines = [f"modes {net.n_modes}"]
    for op in net.ops:
        if isinstance(op, BeamSplitter):
            lines.append(f"bs {op.i} {op.j} {op.reflectivity!r}")
        elif isinstance(op, PhaseFlip):
            lines.append(f"flip {op.i}")
        elif isinstance(op, Swap):
            lines.append(f"swap {op.i} {op.j}")
        else:
            raise TypeError(f"cannot format operation {op!r}")
    return "\n".join(lines) + "\n"


def load_network(path):
    with open(path, encoding="utf-8") as fh:
        return parse_network_dsl(fh.read(), source=str(path))
