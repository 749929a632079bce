"""Words of the nested-progression subshift over {0, 1, #}.

A point has one residue class mod 3 filled with ``#``, the next class
filled with a constant bit, and the third class carrying another point of
the same kind.  Iterating gives levels ``d = 0, 1, ...``; level-``d+1``
position ``k`` is level-``d`` position ``3k + o_d + 2`` where ``o_d`` is
the residue of the ``#`` class at level ``d``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

HASH = "#"
ALPHABET = "01#"
_ORDER = {c: i for i, c in enumerate(ALPHABET)}


class InconsistentWindow(ValueError):
    pass


class WindowTooShort(ValueError):
    pass


@dataclass(frozen=True)
class PositionedWord:
    start: int
    symbols: str

    def __len__(self):
        return len(self.symbols)

    @property
    def end(self) -> int:
        """Last occupied position."""
        return self.start + len(self.symbols) - 1

    def at(self, p: int) -> str:
        return self.symbols[p - self.start]

    def shift(self, k: int) -> "PositionedWord":
        """The same word moved ``k`` positions to the left (shift action)."""
        return PositionedWord(self.start - k, self.symbols)

    def window(self, a: int, b: int) -> "PositionedWord":
        """Sub-word on positions ``[a, b]``."""
        if a < self.start or b > self.end:
            raise ValueError("window outside the word")
        return PositionedWord(a, self.symbols[a - self.start:b - self.start + 1])

    def __str__(self):
        return self.symbols

    def to_json(self) -> dict:
        return {"start": self.start, "symbols": self.symbols}

    @classmethod
    def from_json(cls, data: dict) -> "PositionedWord":
        return cls(int(data["start"]), str(data["symbols"]))


def canonical_key(word: str) -> tuple:
    return tuple(_ORDER.get(c, len(_ORDER) + ord(c)) for c in word)


# language by recursion on the length


def _interleave(length: int, o: int, z: str, sub: str) -> str:
    out = []
    it = iter(sub)
    for p in range(length):
        c = (p - o) % 3
        out.append(HASH if c == 0 else z if c == 1 else next(it))
    return "".join(out)


def _sub_length(length: int, o: int) -> int:
    return sum(1 for p in range(length) if (p - o) % 3 == 2)


@lru_cache(maxsize=None)
def _language(n: int) -> frozenset:
    if n == 0:
        return frozenset({""})
    if n == 1:
        # a single cell may be a marker, a bit, or lie in the recursive class forever
        return frozenset(ALPHABET)
    out = set()
    for o in range(3):
        sub = _language(_sub_length(n, o))
        for z in "01":
            for w in sub:
                out.add(_interleave(n, o, z, w))
    return frozenset(out)


def xprime_language(n: int) -> list[str]:
    """All length-``n`` words, in canonical order (``0 < 1 < #``)."""
    if n < 0:
        raise ValueError("length must be nonnegative")
    return sorted(_language(n), key=canonical_key)


def language_size(n: int) -> int:
    return len(_language(n))


# generation from explicit offsets and bits


def _resolve(p: int, offsets: Sequence[int], bits) -> tuple[str | None, int]:
    # (symbol, None) if some level assigns p, else (None, level-D coordinate)
    q = p
    for d, o in enumerate(offsets):
        c = (q - o) % 3
        if c == 0:
            return HASH, q
        if c == 1:
            return str(bits[d]), q
        q = (q - o - 2) // 3
    return None, q


def symbol_at(p: int, offsets: Sequence[int], bits, tail: Callable[[int], str] | str = HASH) -> str:
    """Symbol at absolute position ``p``; cells surviving all given levels come from ``tail``."""
    sym, q = _resolve(p, offsets, bits)
    if sym is not None:
        return sym
    return tail(q) if callable(tail) else tail


def generate_window(offsets: Sequence[int], bits, start: int, length: int,
                    tail: Callable[[int], str] | str = HASH) -> PositionedWord:
    """Window of the point with the given level offsets and bits.

    With a constant ``tail`` at most one cell may survive all levels (the
    hole); otherwise the offsets are too shallow for this window.
    """
    if len(bits) < len(offsets):
        raise ValueError("need one bit per level")
    survivors = set()
    out = []
    for p in range(start, start + length):
        sym, q = _resolve(p, offsets, bits)
        if sym is None:
            survivors.add(q)
            sym = tail(q) if callable(tail) else tail
        out.append(sym)
    if not callable(tail) and len(survivors) > 1:
        raise ValueError("offsets too shallow: several cells reach the last level")
    return PositionedWord(start, "".join(out))


def in_language(word: str) -> bool:
    return word in _language(len(word))


# parsing windows


@dataclass(frozen=True)
class Parse:
    offsets: tuple  # level offsets, one per level with >= 2 visible cells
    bits: tuple  # forced bit per level, or None
    leftover: tuple | None  # (level coordinate, symbol) of a final single cell


def _parse_level(start: int, s: str, depth: int = 0):
    if len(s) == 0:
        yield (), (), None
        return
    if len(s) == 1:
        yield (), (), (start, s)
        return
    for o in range(3):
        z = None
        sub_start = None
        sub = []
        ok = True
        for i, ch in enumerate(s):
            p = start + i
            c = (p - o) % 3
            if c == 0:
                if ch != HASH:
                    ok = False
                    break
            elif c == 1:
                if ch == HASH or (z is not None and ch != z):
                    ok = False
                    break
                z = ch
            else:
                if sub_start is None:
                    sub_start = (p - o - 2) // 3
                sub.append(ch)
        if not ok:
            continue
        for offs, bs, left in _parse_level(sub_start if sub_start is not None else 0, "".join(sub), depth + 1):
            yield (o,) + offs, (z,) + bs, left


def parses(w: PositionedWord) -> list[Parse]:
    for ch in w.symbols:
        if ch not in ALPHABET:
            raise InconsistentWindow(f"symbol {ch!r} outside {{0,1,#}}")
    return [Parse(o, b, left) for o, b, left in _parse_level(w.start, w.symbols)]


def bit_patterns(w: PositionedWord) -> list[str]:
    """Distinct forced-bit patterns over parses, ``?`` for an unforced level."""
    out = set()
    for p in parses(w):
        out.add("".join("?" if b is None else b for b in p.bits))
    return sorted(out)


def extract_bits(w: PositionedWord) -> str:
    """Bits forced by the window: level ``d`` is forced iff every parse reads the same bit there.

    The result is trimmed after the last forced level; ``?`` marks an
    unforced level before it.  Everything after the result is undetermined.
    """
    ps = parses(w)
    if not ps:
        raise InconsistentWindow(f"no progression layout fits {w.symbols!r}")
    depth = max(len(p.bits) for p in ps)
    out = []
    for d in range(depth):
        vals = {p.bits[d] if d < len(p.bits) else None for p in ps}
        out.append(vals.pop() if len(vals) == 1 and None not in vals else "?")
    return "".join(out).rstrip("?")


def determined_prefix(pattern: str) -> str:
    i = pattern.find("?")
    return pattern if i < 0 else pattern[:i]


def skeleton(w: PositionedWord) -> PositionedWord:
    return PositionedWord(w.start, "".join(HASH if c == HASH else "0" for c in w.symbols))


@dataclass(frozen=True)
class OdometerCode:
    offsets: tuple
    depth: int

    def residues(self) -> list[tuple[int, int]]:
        """For each level, ``(r, 3^(d+1))``: level-0 positions of that level's markers are ``r`` mod ``3^(d+1)``."""
        out = []
        scale, shift = 1, 0  # level-d position q sits at level-0 position scale*q + shift
        for o in self.offsets:
            out.append(((scale * o + shift) % (3 * scale), 3 * scale))
            shift += scale * (o + 2)
            scale *= 3
        return out


def odometer_code(w: PositionedWord, depth: int) -> OdometerCode:
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if len(w) == 0 or depth > int(math.log(len(w), 3) + 1e-9) + 1:
        raise WindowTooShort(f"a window of length {len(w)} cannot pin {depth} levels")
    ps = parses(w)
    if not ps:
        raise InconsistentWindow(f"no progression layout fits {w.symbols!r}")
    codes = {p.offsets[:depth] for p in ps}
    if len(codes) != 1 or len(next(iter(codes))) < depth:
        raise WindowTooShort(f"offsets of the first {depth} levels are not determined by this window")
    return OdometerCode(codes.pop(), depth)


# language files


def write_language(words: Iterable[str], n: int) -> str:
    words = list(words)
    return "\n".join([f"n {n} count {len(words)}", *words]) + "\n"


def read_language(text: str) -> tuple[int, list[str]]:
    lines = text.split("\n")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "n" or head[2] != "count":
        raise ValueError("language file header must read 'n <n> count <count>'")
    n, count = int(head[1]), int(head[3])
    words = lines[1:1 + count]
    if len(words) != count or any(len(w) != n for w in words):
        raise ValueError("language file body does not match its header")
    return n, words
