"""Friendships, the w_omega supershift over ``A + {marker}``, and full-word interchanges.

A word of the supershift has a skeleton (marker -> 1, letters -> 0) that,
after collapsing doubled markers, is a factor of ``w_omega``; its maximal
marker-free pieces must form a friendship: there are points, one in each
piece's cylinder, pairwise related.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable

from ..closeup.circle import CircleRelation
from ..ordinal import OMEGA, Ordinal, as_ordinal, cnf_add, cnf_mul, format_ordinal
from ..toeplitz.words import PositionedWord, generate_window, parses
from ..toeplitz.ztree import ZTree, circle_tree, ordinal_code
from ..verdict import Verdict
from .words import full_word, is_womega_factor, w_omega_prefix

MARKER = "|"


@dataclass
class FriendshipOracle:
    """``decide(words) -> (True/False/None, witness)``; answers and witnesses are memoized per word set."""
    decide: Callable[[frozenset], tuple]
    provenance: str
    _memo: dict = field(default_factory=dict, repr=False)

    def __call__(self, words: Iterable[str]) -> Verdict:
        return Verdict.of(self._lookup(words)[0])

    def witness(self, words: Iterable[str]):
        """Bracelet points fixed for this set, or None."""
        return self._lookup(words)[1]

    def _lookup(self, words):
        key = frozenset(w for w in words if w)
        if key not in self._memo:
            self._memo[key] = self.decide(key)
        return self._memo[key]


def periodic_friendship_oracle(orbits: dict, related: Iterable[tuple]) -> FriendshipOracle:
    """``X`` a finite union of periodic orbits, ``E`` a reflexive relation between orbits.

    ``orbits`` maps a name to one period of the point; ``related`` lists
    pairs of names.  The relation is doubly shift-invariant by construction.
    """
    names = sorted(orbits)
    rel = {(a, a) for a in names}
    for a, b in related:
        rel |= {(a, b), (b, a)}

    def occurs(u, name):
        p = orbits[name]
        reps = len(u) // len(p) + 2
        return u in p * reps

    def decide(words):
        words = sorted(words)
        options = [[n for n in names if occurs(u, n)] for u in words]
        if any(not o for o in options):
            return False, None
        pick = {}

        def go(i):
            if i == len(words):
                return True
            for n in options[i]:
                if all((n, pick[w]) in rel for w in words[:i]):
                    pick[words[i]] = n
                    if go(i + 1):
                        return True
                    del pick[words[i]]
            return False

        return (True, dict(pick)) if go(0) else (False, None)

    return FriendshipOracle(decide, f"periodic({','.join(names)})")


# points of X = phi^-1(Z) over an ordinal range


@dataclass(frozen=True)
class OrdinalEncoding:
    """Ordinals ``<= w*blocks`` coded into ``Z`` by the doubled ordinal tree."""
    blocks: int

    @property
    def tree(self) -> ZTree:
        return circle_tree(cnf_mul(OMEGA, Ordinal.nat(self.blocks)))

    @property
    def top(self) -> Ordinal:
        return cnf_mul(OMEGA, Ordinal.nat(self.blocks))

    def bits(self, beta, n: int) -> str:
        """First ``n`` bits of the image of ``beta`` in ``Z``."""
        head, tail = ordinal_code(beta, self.blocks)
        code = head + tail * (n // 2 + 1)
        return "".join("01" if c == "0" else "10" for c in code)[:n]

    def window(self, beta, start: int, length: int, offsets=None, rng: random.Random | None = None) -> PositionedWord:
        """A window of a point over ``beta``; offsets are drawn from ``rng`` when not given."""
        depth = max(1, math.ceil(math.log(max(length, 1), 3))) + 2
        if offsets is None:
            rng = rng or random.Random(0)
            offsets = tuple(rng.randrange(3) for _ in range(depth))
        return generate_window(tuple(offsets), self.bits(beta, len(offsets)), start, length)

    def candidates(self, m_max: int) -> list[Ordinal]:
        """``w*q + m`` for ``q < blocks`` and ``m <= m_max``, plus the top."""
        out = []
        for q in range(self.blocks):
            base = cnf_mul(OMEGA, Ordinal.nat(q))
            out.extend(cnf_add(base, Ordinal.nat(m)) for m in range(m_max + 1))
        out.append(self.top)
        return out

    def compatible(self, word: str, beta) -> bool:
        """Does some point over ``beta`` contain ``word``?  Bits seen by a parse must match."""
        pats = _patterns(word)
        if not pats:
            return False
        for pat in pats:
            code = self.bits(beta, len(pat))
            if all(b is None or b == c for b, c in zip(pat, code)):
                return True
        return False


def _patterns(word: str) -> list[tuple]:
    try:
        return sorted({p.bits for p in parses(PositionedWord(0, word))}, key=len)
    except ValueError:
        return []


def successor_friendship_oracle(circle: CircleRelation, encoding: OrdinalEncoding,
                                search_bound: int | None = None) -> FriendshipOracle:
    """Friendship for the pullback of the initial circle relation (``|b - c| <= 1``).

    A pairwise related set of ordinals lies in some ``{b, b+1}``, so a word
    set is a friendship iff some ``b`` has every word compatible with ``b``
    or ``b+1``.  Compatibility only reads the first ``D`` bits of the code,
    and codes in one block agree on those once ``m`` exceeds ``D/2``, so
    trying ``m <= D/2 + 2`` in each block is exhaustive.  A smaller
    ``search_bound`` can leave the answer undecided.
    """
    if circle.threshold != Ordinal.nat(2):
        raise ValueError("the oracle handles the initial successor relation only")

    def decide(words):
        words = sorted(words)
        if not words:
            return True, {}
        depth = max((len(p) for w in words for p in _patterns(w)), default=0)
        need = depth // 2 + 2
        bound = need if search_bound is None else min(search_bound, need)
        top = encoding.top
        for b in encoding.candidates(bound):
            nxt = cnf_add(b, Ordinal.nat(1))
            pair = [b] if b == top else [b, nxt]
            pick = {}
            for w in words:
                hit = next((o for o in pair if encoding.compatible(w, o)), None)
                if hit is None:
                    break
                pick[w] = format_ordinal(hit)
            else:
                return True, pick
        return (False if bound == need else None), None

    return FriendshipOracle(decide, f"successor(alpha={format_ordinal(circle.alpha)}, blocks={encoding.blocks})")


# membership in the supershift


def skeleton(word: str, marker: str = MARKER) -> str:
    return "".join("1" if c == marker else "0" for c in word)


def preskeleton(skel: str) -> str | None:
    """Collapse doubled markers; None if a run of three or more occurs."""
    if "111" in skel:
        return None
    return skel.replace("11", "1")


def segments(word: str, marker: str = MARKER) -> list[str]:
    return [s for s in word.split(marker) if s]


def eqrels_membership(w, oracle: FriendshipOracle, marker: str = MARKER) -> Verdict:
    s = w.symbols if isinstance(w, PositionedWord) else str(w)
    pre = preskeleton(skeleton(s, marker))
    if pre is None or not is_womega_factor(pre):
        return Verdict.FALSE
    return oracle(segments(s, marker))


# generators


def _skeleton_factor(length: int, rng: random.Random, doubling: float) -> str:
    """A random skeleton: a factor of ``w_omega`` with some markers doubled, cut to ``length``."""
    src = w_omega_prefix(max(64, 8 * length))
    while True:
        start = rng.randrange(len(src) - 2 * length)
        out = []
        for c in src[start:start + 2 * length]:
            out.append("11" if c == "1" and rng.random() < doubling else c)
        s = "".join(out)[:length]
        if preskeleton(s) is not None:
            return s


def fill_skeleton(skel: str, fillers: list, rng: random.Random, marker: str = MARKER) -> str:
    """Replace each maximal run of 0s by a window of a point drawn from ``fillers``.

    ``fillers`` is a list of callables ``(length, rng) -> str``.
    """
    out = []
    p = 0
    while p < len(skel):
        if skel[p] == "1":
            out.append(marker)
            p += 1
            continue
        q = p
        while q < len(skel) and skel[q] == "0":
            q += 1
        out.append(rng.choice(fillers)(q - p, rng))
        p = q
    return "".join(out)


def ordinal_filler(encoding: OrdinalEncoding, beta) -> Callable:
    beta = as_ordinal(beta)

    def make(length, rng):
        return encoding.window(beta, rng.randrange(3 ** 6), length, rng=rng).symbols
    return make


def sample_eqrels_words(encoding: OrdinalEncoding, betas, m: int, count: int, seed: int = 0,
                        doubling: float = 0.3, marker: str = MARKER) -> list[str]:
    """Words of length ``m`` whose pieces come from points over the given ordinals."""
    rng = random.Random(seed)
    fillers = [ordinal_filler(encoding, b) for b in betas]
    out = []
    for _ in range(count):
        out.append(fill_skeleton(_skeleton_factor(m, rng, doubling), fillers, rng, marker))
    return out


def full_piece(i: int, filler: Callable, rng: random.Random, marker: str = MARKER) -> str:
    """A full word: skeleton ``w_i`` with its gaps filled by ``filler``."""
    return fill_skeleton(full_word(i).symbols, [filler], rng, marker)


def dense_word(k: int, i: int, u: str, v: str, filler: Callable, rng: random.Random,
               marker: str = MARKER) -> str:
    """A length-``k`` word on the skeleton of ``w_omega`` with every aligned ``w_i`` replaced by ``u`` or ``v``.

    ``w_omega`` is ``w_i`` blocks separated by zero runs of length ``> i``,
    so each block occurrence is filled with ``u`` or ``v`` (chosen at random)
    and the zero runs by ``filler``.
    """
    block = full_word(i).symbols
    src = w_omega_prefix(2 * (k + len(block)))
    out = []
    p = 0
    while p < k:
        if src.startswith(block, p):
            out.append(rng.choice([u, v]))
            p += len(block)
        else:
            q = p
            while q < len(src) and src[q] == "0":
                q += 1
            out.append(filler(min(q, k) - p, rng))
            p = q
    return "".join(out)[:k]


def interchange_density(word, i: int, u: str | None = None, v: str | None = None, marker: str = MARKER) -> int:
    """Disjoint occurrences of the designated full words ``u`` or ``v`` (leftmost first).

    Without ``u``/``v`` an occurrence is any window whose skeleton is ``w_i``
    bounded by markers.
    """
    s = word.symbols if isinstance(word, PositionedWord) else str(word)
    if u is None:
        pats = None
        target = full_word(i).symbols
    else:
        pats = [u] if v is None else [u, v]
        target = None
    count, p = 0, 0
    if pats is None:
        skel = skeleton(s, marker)
        while p + len(target) <= len(s):
            if skel.startswith(target, p):
                count += 1
                p += len(target)
            else:
                p += 1
        return count
    while p < len(s):
        hit = next((q for q in pats if s.startswith(q, p)), None)
        if hit is not None and hit:
            count += 1
            p += len(hit)
        else:
            p += 1
    return count


def swap_occurrences(word: str, u: str, v: str) -> list[str]:
    """Every word obtained by turning one occurrence of ``u`` into ``v`` or the reverse."""
    out = []
    for a, b in ((u, v), (v, u)):
        if not a or a == b:
            continue
        p = word.find(a)
        while p >= 0:
            out.append(word[:p] + b + word[p + len(a):])
            p = word.find(a, p + 1)
    return out
