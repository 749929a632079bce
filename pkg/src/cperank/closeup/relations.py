"""Symmetric relations on a finite backend, stored as one bitmask row per point."""
from __future__ import annotations

from typing import Iterable, Iterator

from .spaces import bits


class RelationError(ValueError):
    pass


class FiniteRelation:
    """Symmetric relation ``rows[x] = {y : (x, y) in R}`` over ``space``."""

    __slots__ = ("space", "rows", "_hash")

    def __init__(self, space, rows: Iterable[int], *, check: bool = True):
        rows = tuple(rows)
        self.space = space
        self.rows = rows
        self._hash = None
        if check:
            n = space.n
            if len(rows) != n:
                raise RelationError(f"relation has {len(rows)} rows, space has {n} points")
            full = (1 << n) - 1
            for x, r in enumerate(rows):
                if r & ~full:
                    raise RelationError(f"row {x} mentions points outside the space")
                for y in bits(r):
                    if not rows[y] >> x & 1:
                        raise RelationError(f"relation is not symmetric at ({x}, {y})")

    # constructors

    @classmethod
    def from_pairs(cls, space, pairs: Iterable[tuple[int, int]], reflexive: bool = True) -> "FiniteRelation":
        rows = [0] * space.n
        for x, y in pairs:
            if not (0 <= x < space.n and 0 <= y < space.n):
                raise RelationError(f"pair ({x}, {y}) outside the space")
            rows[x] |= 1 << y
            rows[y] |= 1 << x
        if reflexive:
            for x in range(space.n):
                rows[x] |= 1 << x
        return cls(space, rows, check=False)

    @classmethod
    def diagonal(cls, space) -> "FiniteRelation":
        return cls(space, (1 << x for x in range(space.n)), check=False)

    @classmethod
    def full(cls, space) -> "FiniteRelation":
        m = (1 << space.n) - 1
        return cls(space, (m,) * space.n, check=False)

    # queries

    @property
    def n(self) -> int:
        return self.space.n

    def __contains__(self, pair) -> bool:
        x, y = pair
        return bool(self.rows[x] >> y & 1)

    def pairs(self) -> Iterator[tuple[int, int]]:
        for x, r in enumerate(self.rows):
            for y in bits(r):
                yield x, y

    def __len__(self) -> int:
        return sum(r.bit_count() for r in self.rows)

    def is_reflexive(self) -> bool:
        return all(r >> x & 1 for x, r in enumerate(self.rows))

    def is_full(self) -> bool:
        m = (1 << self.n) - 1
        return all(r == m for r in self.rows)

    def is_transitive(self) -> bool:
        return trans_closure(self) == self

    def is_closed(self) -> bool:
        return top_closure(self) == self

    def __le__(self, other: "FiniteRelation") -> bool:
        return all(a & ~b == 0 for a, b in zip(self.rows, other.rows))

    def __or__(self, other: "FiniteRelation") -> "FiniteRelation":
        return FiniteRelation(self.space, (a | b for a, b in zip(self.rows, other.rows)), check=False)

    def __and__(self, other: "FiniteRelation") -> "FiniteRelation":
        return FiniteRelation(self.space, (a & b for a, b in zip(self.rows, other.rows)), check=False)

    def __eq__(self, other):
        if not isinstance(other, FiniteRelation):
            return NotImplemented
        return self.rows == other.rows and (self.space is other.space or self.space == other.space)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def __repr__(self):
        return f"FiniteRelation(n={self.n}, pairs={len(self)})"

    # serialization

    def to_json(self) -> dict:
        refl = self.is_reflexive()
        pairs = [[x, y] for x, y in self.pairs() if x < y or (x == y and not refl)]
        return {"pairs": pairs, "reflexive": refl}

    @classmethod
    def from_json(cls, data: dict, space) -> "FiniteRelation":
        try:
            pairs = [(int(p[0]), int(p[1])) for p in data["pairs"]]
            refl = bool(data["reflexive"])
        except (KeyError, TypeError, IndexError, ValueError) as exc:
            raise RelationError(f"malformed relation JSON: {exc}") from exc
        return cls.from_pairs(space, pairs, reflexive=refl)


def _dilate(space, rows) -> tuple[int, ...]:
    # (x, y) is added iff some (a, b) in R has a in N(x), b in N(y)
    up = space.up
    ball_rows = []
    for r in rows:
        m = 0
        for b in bits(r):
            m |= up[b]
        ball_rows.append(m)
    out = []
    for x in range(space.n):
        m = 0
        for a in bits(space.nbhd[x]):
            m |= ball_rows[a]
        out.append(m)
    return tuple(out)


def top_closure(r: FiniteRelation) -> FiniteRelation:
    """Closure of the pair set in the product topology (epsilon-dilation to fixpoint on clouds)."""
    rows = r.rows
    while True:
        nxt = _dilate(r.space, rows)
        if nxt == rows or not r.space.iterate_closure:
            return FiniteRelation(r.space, nxt, check=False)
        rows = nxt


def trans_closure(r: FiniteRelation) -> FiniteRelation:
    """Smallest transitive relation containing ``r`` (Warshall on bitmask rows)."""
    rows = list(r.rows)
    for k in range(len(rows)):
        bit = 1 << k
        rk = rows[k]
        for i, ri in enumerate(rows):
            if ri & bit:
                rows[i] = ri | rk
    return FiniteRelation(r.space, rows, check=False)
