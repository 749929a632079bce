"""Finite backends for the close-up process.

Both backends expose ``n`` (point count) and ``nbhd`` (a tuple with one
bitmask per point).  For a :class:`FiniteTopSpace` ``nbhd[x]`` is the
minimal open set containing ``x``; for a :class:`MetricCloud` it is the
closed epsilon-ball in the sup metric.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence


class SpaceError(ValueError):
    pass


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(points: Iterable[int]) -> int:
    m = 0
    for p in points:
        m |= 1 << p
    return m


def _up_sets(n: int, nbhd: Sequence[int]) -> tuple[int, ...]:
    # up[b] = {y : b in nbhd[y]}, i.e. the points in every neighbourhood-closure of b
    up = [0] * n
    for y in range(n):
        for b in bits(nbhd[y]):
            up[b] |= 1 << y
    return tuple(up)


@dataclass(frozen=True)
class FiniteTopSpace:
    """Finite topological space stored by its minimal open neighbourhoods.

    ``from_opens`` validates an explicit open family (contains the empty and
    full sets, closed under union and intersection).
    """

    n: int
    nbhd: tuple
    up: tuple = field(init=False, repr=False, compare=False)

    iterate_closure = False

    def __post_init__(self):
        nb = tuple(int(m) for m in self.nbhd)
        if len(nb) != self.n:
            raise SpaceError("need one neighbourhood per point")
        full = (1 << self.n) - 1
        for x, m in enumerate(nb):
            if m & ~full or not m >> x & 1:
                raise SpaceError(f"bad minimal neighbourhood for point {x}")
            for y in bits(m):
                if nb[y] & ~m:
                    raise SpaceError(f"neighbourhoods of {x} and {y} are not nested")
        object.__setattr__(self, "nbhd", nb)
        object.__setattr__(self, "up", _up_sets(self.n, nb))

    @classmethod
    def from_opens(cls, n: int, opens: Iterable[int]) -> "FiniteTopSpace":
        full = (1 << n) - 1
        opens = frozenset(opens)
        if any(o < 0 or o > full for o in opens):
            raise SpaceError("open set outside the point range")
        if 0 not in opens or full not in opens:
            raise SpaceError("opens must contain the empty set and the whole space")
        for a, b in itertools.combinations(opens, 2):
            if a | b not in opens or a & b not in opens:
                raise SpaceError("opens are not closed under union and intersection")
        nb = []
        for x in range(n):
            m = full
            for o in opens:
                if o >> x & 1:
                    m &= o
            nb.append(m)
        return cls(n, tuple(nb))

    @classmethod
    def discrete(cls, n: int) -> "FiniteTopSpace":
        return cls(n, tuple(1 << x for x in range(n)))

    @classmethod
    def indiscrete(cls, n: int) -> "FiniteTopSpace":
        return cls(n, ((1 << n) - 1,) * n)

    @classmethod
    def from_nbhds(cls, nbhd: Sequence[int]) -> "FiniteTopSpace":
        """Space generated by arbitrary neighbourhood seeds (each must contain its point).

        The specialization preorder is closed transitively, so the result is
        the coarsest topology in which every seed is a neighbourhood.
        """
        n = len(nbhd)
        nb = list(nbhd)
        for x in range(n):
            if not nb[x] >> x & 1:
                raise SpaceError(f"neighbourhood of {x} does not contain it")
        changed = True
        while changed:
            changed = False
            for x in range(n):
                m = nb[x]
                for y in bits(nb[x]):
                    m |= nb[y]
                if m != nb[x]:
                    nb[x] = m
                    changed = True
        return cls(n, tuple(nb))

    @property
    def opens(self) -> frozenset:
        opens = {0}
        for x in range(self.n):
            opens |= {o | self.nbhd[x] for o in opens}
        return frozenset(opens)

    def closure(self, subset: int) -> int:
        out = 0
        for b in bits(subset):
            out |= self.up[b]
        return out

    def is_open(self, subset: int) -> bool:
        return all(self.nbhd[x] & ~subset == 0 for x in bits(subset))

    def canonical_key(self) -> tuple:
        best = None
        for perm in itertools.permutations(range(self.n)):
            inv = [0] * self.n
            for x, px in enumerate(perm):
                inv[px] = x
            key = tuple(_permute(self.nbhd[inv[y]], perm) for y in range(self.n))
            if best is None or key < best:
                best = key
        return best

    def to_json(self) -> dict:
        if self.n <= 8:
            return {"points": self.n, "opens": [sorted(bits(o)) for o in sorted(self.opens)]}
        return {"points": self.n, "basis": [sorted(bits(m)) for m in self.nbhd]}

    @classmethod
    def from_json(cls, data: dict) -> "FiniteTopSpace":
        try:
            n = int(data["points"])
            if "opens" in data:
                return cls.from_opens(n, (mask_of(o) for o in data["opens"]))
            return cls(n, tuple(mask_of(b) for b in data["basis"]))
        except (KeyError, TypeError) as exc:
            raise SpaceError(f"malformed space JSON: {exc}") from exc


def _permute(mask: int, perm: Sequence[int]) -> int:
    return mask_of(perm[x] for x in bits(mask))


def enumerate_topologies(n: int) -> list[FiniteTopSpace]:
    """All topologies on n labelled points, via their specialization preorders."""
    pairs = [(x, y) for x in range(n) for y in range(n) if x != y]
    out = []
    for choice in range(1 << len(pairs)):
        nb = [1 << x for x in range(n)]
        for k, (x, y) in enumerate(pairs):
            if choice >> k & 1:
                nb[x] |= 1 << y
        if all(nb[y] & ~nb[x] == 0 for x in range(n) for y in bits(nb[x])):
            out.append(FiniteTopSpace(n, tuple(nb)))
    return out


def topologies_up_to_iso(n: int) -> list[FiniteTopSpace]:
    seen = {}
    for t in enumerate_topologies(n):
        seen.setdefault(t.canonical_key(), t)
    return [seen[k] for k in sorted(seen)]


def _parse_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise SpaceError("coordinates must be exact rationals, not floats")
    return Fraction(x)


@dataclass(frozen=True)
class MetricCloud:
    """Finite point cloud with closure at resolution ``epsilon`` (sup metric)."""

    coords: tuple
    epsilon: Fraction = None
    nbhd: tuple = field(init=False, repr=False, compare=False)
    up: tuple = field(init=False, repr=False, compare=False)

    iterate_closure = True

    def __post_init__(self):
        pts = tuple(tuple(_parse_rational(c) for c in (p if isinstance(p, (tuple, list)) else (p,)))
                    for p in self.coords)
        if len(set(pts)) != len(pts):
            raise SpaceError("cloud points must be pairwise distinct")
        if pts and len({len(p) for p in pts}) != 1:
            raise SpaceError("all points need the same dimension")
        eps = self.epsilon
        if eps is None:
            gaps = [self._dist(p, q) for p, q in itertools.combinations(pts, 2)]
            eps = min(gaps) / 2 if gaps else Fraction(1)
        eps = _parse_rational(eps)
        if eps <= 0:
            raise SpaceError("epsilon must be positive")
        object.__setattr__(self, "coords", pts)
        object.__setattr__(self, "epsilon", eps)
        nb = tuple(mask_of(j for j, q in enumerate(pts) if self._dist(p, q) <= eps) for p in pts)
        object.__setattr__(self, "nbhd", nb)
        object.__setattr__(self, "up", _up_sets(len(pts), nb))

    @staticmethod
    def _dist(p, q) -> Fraction:
        return max(abs(a - b) for a, b in zip(p, q))

    @property
    def n(self) -> int:
        return len(self.coords)

    def closure(self, subset: int) -> int:
        cur = subset
        while True:
            nxt = 0
            for b in bits(cur):
                nxt |= self.up[b]
            if nxt == cur:
                return cur
            cur = nxt

    def to_json(self) -> dict:
        return {"coords": [[str(c) for c in p] for p in self.coords], "epsilon": str(self.epsilon)}

    @classmethod
    def from_json(cls, data: dict) -> "MetricCloud":
        try:
            return cls(tuple(tuple(Fraction(c) for c in p) for p in data["coords"]), Fraction(data["epsilon"]))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise SpaceError(f"malformed cloud JSON: {exc}") from exc


def space_from_json(data: dict):
    if "coords" in data:
        return MetricCloud.from_json(data)
    return FiniteTopSpace.from_json(data)
