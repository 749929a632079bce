"""Finite-horizon checks on the subshift X = phi^-1(Z): membership, Toeplitz recurrence, openness."""
from __future__ import annotations

import math
import statistics
from dataclasses import dataclass

from .words import (HASH, InconsistentWindow, PositionedWord, generate_window, language_size, parses)
from .ztree import ZTree
from ..verdict import Verdict


def _pattern_verdict(z: ZTree, pattern: tuple, horizon: int) -> Verdict:
    """Does an accepted infinite path match ``pattern`` (None = free bit)?

    An accepted prefix of length ``len(pattern)`` must also reach a fresh
    ``01`` within ``horizon`` further bits, standing in for extendability.
    """
    undecided = False
    frontier = [""]
    for b in pattern:
        nxt = []
        for p in frontier:
            for c in ("01" if b is None else b):
                v = z(p + c)
                if v is None:
                    undecided = True
                elif v:
                    nxt.append(p + c)
        frontier = nxt
    for p in frontier:
        v = _extends(z, p, len(p) + horizon)
        if v is True:
            return Verdict.TRUE
        if v is None:
            undecided = True
    return Verdict.UNDECIDED if undecided else Verdict.FALSE


def _extends(z: ZTree, prefix: str, limit: int) -> bool | None:
    undecided = False
    start = len(prefix)
    stack = [prefix]
    while stack:
        p = stack.pop()
        if len(p) > start and "01" in p[start - 1 if start else 0:]:
            return True
        if len(p) >= limit:
            undecided = True
            continue
        for c in "01":
            v = z(p + c)
            if v is None:
                undecided = True
            elif v:
                stack.append(p + c)
    return None if undecided else False


def build_x_membership(z: ZTree, w: PositionedWord, horizon: int = 16) -> Verdict:
    """Is ``w`` a word of ``phi^-1(Z)``?

    Each parse of ``w`` fixes the bits of the levels it sees and leaves
    the rest free (a leftover cell can always stay a hole), so ``w``
    belongs iff some parse's bit pattern is matched by a path of ``Z``.
    """
    if len(w) == 0:
        return _pattern_verdict(z, (), horizon)
    try:
        ps = parses(w)
    except InconsistentWindow:
        return Verdict.FALSE
    if not ps:
        return Verdict.FALSE
    undecided = False
    for pattern in sorted({p.bits for p in ps}, key=len):
        v = _pattern_verdict(z, pattern, horizon)
        if v is Verdict.TRUE:
            return v
        undecided |= v is Verdict.UNDECIDED
    return Verdict.UNDECIDED if undecided else Verdict.FALSE


@dataclass(frozen=True)
class ToeplitzWitness:
    j: int
    n: int
    occurrences: int


def toeplitz_condition_check(w: PositionedWord, i: int, k: int, search_bound: int) -> ToeplitzWitness | None:
    """Find ``(j, n)`` with the block at ``[i-k, i+k]`` repeating along ``j + n*Z`` wherever visible.

    Periods are tried in increasing order and, for each, offsets ``j`` by
    distance from ``i``.  At least two occurrences must be visible.  None
    only means nothing was found inside this window.
    """
    if k < 0 or i - k < w.start or i + k > w.end:
        raise ValueError("[i-k, i+k] must lie inside the window")
    block = w.window(i - k, i + k).symbols
    lo, hi = w.start + k, w.end - k  # admissible centres
    for n in range(1, search_bound + 1):
        seen = set()
        for d in sorted(range(-(n - 1), n), key=lambda t: (abs(t), t)):
            j = i + d
            if j % n in seen:
                continue
            seen.add(j % n)
            first = j - ((j - lo) // n) * n
            centres = range(first, hi + 1, n)
            if len(centres) < 2:
                continue
            if all(w.window(c - k, c + k).symbols == block for c in centres):
                return ToeplitzWitness(j, n, len(centres))
    return None


@dataclass
class OpennessResult:
    found: bool
    bits: str | None = None
    offsets: tuple = ()
    horizon_reached: int = 0
    reason: str = ""

    def to_json(self) -> dict:
        return {"found": self.found, "bits": self.bits, "offsets": list(self.offsets),
                "horizon_reached": self.horizon_reached, "reason": self.reason}


def openness_probe(z: ZTree, u: PositionedWord, horizon: int = 24) -> OpennessResult:
    """A bit prefix ``w`` with ``phi([u])`` containing every path of ``Z`` through ``w``.

    Pick a parse of ``u`` whose bits some path of ``Z`` matches, resolve
    the leftover cell by pushing it down the recursive class until a path
    bit equals its symbol (or mark it with ``#``), and return the path
    prefix that reaches that level.  The resulting skeleton has no hole
    inside ``u``, so the bits alone determine ``u``.
    """
    if len(u) == 0:
        return OpennessResult(True, "", (), 0)
    try:
        ps = parses(u)
    except InconsistentWindow as exc:
        return OpennessResult(False, reason=str(exc))
    reached = 0
    for p in ps:
        depth = len(p.offsets)
        for prefix in _matching(z, p.bits):
            offsets = list(p.offsets)
            if p.leftover is None:
                # no cell left: any path through the forced levels works
                return _confirm(u, offsets, prefix, reached)
            q, sym = p.leftover
            if sym == HASH:
                offsets.append(q % 3)
                ext = _grow(z, prefix, depth + 1)
                if ext is not None:
                    return _confirm(u, offsets, ext, reached)
                continue
            # walk down the paths of Z until some bit at level >= depth equals sym
            stack = [(prefix, q, offsets)]
            while stack:
                bits, cell, offs = stack.pop()
                d = len(bits)
                reached = max(reached, d)
                if d >= depth + horizon:
                    continue
                for c in "01":
                    if z(bits + c) is not True:
                        continue
                    if c == sym:
                        return _confirm(u, offs + [(cell - 1) % 3], bits + c, reached)
                    o = (cell - 2) % 3
                    stack.append((bits + c, (cell - o - 2) // 3, offs + [o]))
    return OpennessResult(False, horizon_reached=reached, reason="no completion found within the horizon")


def _matching(z: ZTree, pattern):
    frontier = [""]
    for b in pattern:
        frontier = [p + c for p in frontier for c in ("01" if b is None else b) if z(p + c) is True]
    return frontier


def _grow(z: ZTree, prefix: str, length: int) -> str | None:
    p = prefix
    while len(p) < length:
        nxt = [p + c for c in "01" if z(p + c) is True]
        if not nxt:
            return None
        p = nxt[0]
    return p


def _confirm(u: PositionedWord, offsets, bits: str, reached: int) -> OpennessResult:
    got = generate_window(tuple(offsets), bits, u.start, len(u))
    if got.symbols != u.symbols:
        raise AssertionError(f"probe produced {got.symbols!r} instead of {u.symbols!r}")
    return OpennessResult(True, bits, tuple(offsets), max(reached, len(bits)))


# complexity tables


def loglog_slope(ns, counts) -> float:
    xs = [math.log(n) for n in ns]
    ys = [math.log(c) for c in counts]
    return statistics.linear_regression(xs, ys).slope


def complexity_rows(n_max: int) -> list[dict]:
    """Rows ``(n, count, slope)``; ``slope`` is the log-log fit over ``[ceil(n/3), n]`` (blank below n = 3)."""
    rows = []
    for n in range(1, n_max + 1):
        lo = max(1, -(-n // 3))
        ns = list(range(lo, n + 1))
        slope = loglog_slope(ns, [language_size(m) for m in ns]) if len(ns) >= 2 and n >= 3 else None
        rows.append({"n": n, "count": language_size(n), "slope": slope})
    return rows


def complexity_csv(rows) -> str:
    out = ["n,count,slope"]
    for r in rows:
        s = "" if r["slope"] is None else f"{r['slope']:.6f}"
        out.append(f"{r['n']},{r['count']},{s}")
    return "\n".join(out) + "\n"


def parse_complexity_csv(text: str) -> list[dict]:
    lines = text.strip().splitlines()
    if not lines or lines[0] != "n,count,slope":
        raise ValueError("complexity CSV header must be 'n,count,slope'")
    rows = []
    for ln in lines[1:]:
        n, c, s = ln.split(",")
        rows.append({"n": int(n), "count": int(c), "slope": float(s) if s else None})
    return rows
