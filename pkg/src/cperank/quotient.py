"""Maps between finite spaces, relation pullbacks, and transfer of the close-up process."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .closeup.odd import odd_condition_check
from .closeup.process import ProcessTrace, run_process
from .closeup.relations import FiniteRelation
from .closeup.spaces import FiniteTopSpace, MetricCloud, SpaceError, bits, mask_of, space_from_json, topologies_up_to_iso
from .ordinal import Ordinal, format_ordinal


class MapError(ValueError):
    pass


@dataclass(frozen=True)
class SpaceMap:
    source: object
    target: object
    assignment: tuple

    def __post_init__(self):
        a = tuple(int(v) for v in self.assignment)
        if len(a) != self.source.n:
            raise MapError("assignment must give a target point for every source point")
        if any(not 0 <= v < self.target.n for v in a):
            raise MapError("assignment points outside the target")
        object.__setattr__(self, "assignment", a)
        for x in range(self.source.n):
            if self.image(self.source.nbhd[x]) & ~self.target.nbhd[a[x]]:
                raise MapError(f"map is not continuous at point {x}")

    def image(self, subset: int) -> int:
        return mask_of(self.assignment[x] for x in bits(subset))

    def preimage(self, subset: int) -> int:
        return mask_of(x for x, y in enumerate(self.assignment) if subset >> y & 1)

    def is_surjective(self) -> bool:
        return len(set(self.assignment)) == self.target.n

    def to_json(self) -> dict:
        return {"source": self.source.to_json(), "target": self.target.to_json(), "map": list(self.assignment)}

    @classmethod
    def from_json(cls, data: dict) -> "SpaceMap":
        try:
            return cls(space_from_json(data["source"]), space_from_json(data["target"]), tuple(data["map"]))
        except (KeyError, TypeError) as exc:
            raise MapError(f"malformed map JSON: {exc}") from exc


def is_open(m: SpaceMap) -> bool:
    """Images of opens are open; for a continuous map this is ``f(N(x)) = N(f(x))``."""
    return all(m.image(m.source.nbhd[x]) == m.target.nbhd[y] for x, y in enumerate(m.assignment))


def _quotient_nbhds(source, assignment: Sequence[int], size: int) -> list[int]:
    # smallest V containing y whose preimage is open
    pre = [mask_of(x for x, v in enumerate(assignment) if v == y) for y in range(size)]
    out = []
    for y in range(size):
        v = 1 << y
        while True:
            grow = v
            for t in bits(v):
                for x in bits(pre[t]):
                    grow |= mask_of(assignment[z] for z in bits(source.nbhd[x]))
            if grow == v:
                break
            v = grow
        out.append(v)
    return out


def is_quotient(m: SpaceMap) -> bool:
    if not m.is_surjective():
        return False
    if isinstance(m.source, MetricCloud) or isinstance(m.target, MetricCloud):
        # open continuous surjections are quotient maps
        return is_open(m)
    return tuple(_quotient_nbhds(m.source, m.assignment, m.target.n)) == m.target.nbhd


def quotient_map(source: FiniteTopSpace, assignment: Sequence[int]) -> SpaceMap:
    """The surjection onto ``range(max+1)`` with the quotient topology on the target."""
    size = max(assignment) + 1
    if set(assignment) != set(range(size)):
        raise MapError("assignment must be onto an initial segment of labels")
    target = FiniteTopSpace(size, tuple(_quotient_nbhds(source, assignment, size)))
    return SpaceMap(source, target, tuple(assignment))


def pullback_relation(m: SpaceMap, e: FiniteRelation) -> FiniteRelation:
    fib = [m.preimage(1 << y) for y in range(m.target.n)]
    rows = []
    for y in m.assignment:
        r = 0
        for t in bits(e.rows[y]):
            r |= fib[t]
        rows.append(r)
    return FiniteRelation(m.source, rows, check=False)


def _extend(trace: ProcessTrace, top: int) -> dict[int, FiniteRelation]:
    out = {s.index.to_int(): s.relation for s in trace.steps}
    last = max(out)
    for j in range(last + 1, top + 1):
        out[j] = out[last]
    return out


@dataclass
class TransferReport:
    holds: bool
    first_violation: int | None
    target_rank: Ordinal
    source_rank: Ordinal
    target_equalizing: bool
    source_equalizing: bool
    steps_checked: int = 0

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "first_violation": self.first_violation,
            "target_rank": format_ordinal(self.target_rank),
            "source_rank": format_ordinal(self.source_rank),
            "target_equalizing": self.target_equalizing,
            "source_equalizing": self.source_equalizing,
            "steps_checked": self.steps_checked,
        }


def process_transfer_check(m: SpaceMap, e: FiniteRelation) -> TransferReport:
    """Compare ``F^(j)`` with the pullback of ``E^(j)`` at every step until both stabilize."""
    f = pullback_relation(m, e)
    te, tf = run_process(e), run_process(f)
    ze, zf = te.steps[0].index.to_int(), tf.steps[0].index.to_int()
    top = max(te.steps[-1].index.to_int(), tf.steps[-1].index.to_int())
    E, F = _extend(te, top), _extend(tf, top)
    first = None
    checked = 0
    for j in range(min(ze, zf), top + 1):
        checked += 1
        if j not in E or j not in F or F[j] != pullback_relation(m, E[j]):
            first = j
            break
    return TransferReport(first is None, first, te.rank, tf.rank, te.equalizing, tf.equalizing, checked)


@dataclass
class OddTransferReport:
    holds: bool
    steps: list = field(default_factory=list)  # (index, target verdict, source verdict)
    skipped: list = field(default_factory=list)


def odd_condition_transfer_check(m: SpaceMap, e: FiniteRelation, k: int, budget: int | None = None) -> OddTransferReport:
    """At each odd step with transitive predecessor, the odd condition holds for E iff it holds for F."""
    f = pullback_relation(m, e)
    te, tf = run_process(e), run_process(f)
    top = max(te.steps[-1].index.to_int(), tf.steps[-1].index.to_int())
    E, F = _extend(te, top), _extend(tf, top)
    rep = OddTransferReport(True)
    for j in range(1, top + 1, 2):
        if j - 1 not in E or j - 1 not in F:
            rep.skipped.append(j)
            continue
        ep, fp = E[j - 1], F[j - 1]
        if not (ep.is_transitive() and fp.is_transitive()):
            rep.skipped.append(j)
            continue
        a = odd_condition_check(e, ep, k, budget=budget, max_witnesses=1).holds
        b = odd_condition_check(f, fp, k, budget=budget, max_witnesses=1).holds
        rep.steps.append((j, a, b))
        if a != b:
            rep.holds = False
    return rep


# exhaustive enumeration


def set_partitions(n: int, max_blocks: int) -> Iterator[tuple[int, ...]]:
    """Restricted growth strings: ``a[0] = 0`` and ``a[i] <= max(a[:i]) + 1``."""
    def go(prefix, top):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for v in range(min(top + 2, max_blocks)):
            yield from go(prefix + [v], max(top, v))
    if n == 0:
        yield ()
        return
    yield from go([0], 0)


def _rgs(labels: Sequence[int]) -> tuple[int, ...]:
    seen = {}
    return tuple(seen.setdefault(v, len(seen)) for v in labels)


def automorphisms(space: FiniteTopSpace) -> list[tuple[int, ...]]:
    out = []
    for perm in itertools.permutations(range(space.n)):
        if all(mask_of(perm[z] for z in bits(space.nbhd[x])) == space.nbhd[perm[x]] for x in range(space.n)):
            out.append(perm)
    return out


def enumerate_quotient_maps(max_source: int = 4, max_target: int = 3, open_only: bool | None = True) -> Iterator[SpaceMap]:
    """Quotient maps up to isomorphism; ``open_only=None`` yields both kinds."""
    for n in range(1, max_source + 1):
        for space in topologies_up_to_iso(n):
            autos = automorphisms(space)
            seen = set()
            for part in set_partitions(n, max_target):
                key = min(_rgs([part[p[x]] for x in range(n)]) for p in autos)
                if key in seen:
                    continue
                seen.add(key)
                m = quotient_map(space, part)
                if open_only is None or is_open(m) == open_only:
                    yield m


def symmetric_reflexive_relations(space) -> Iterator[FiniteRelation]:
    pairs = [(x, y) for x in range(space.n) for y in range(x + 1, space.n)]
    for choice in range(1 << len(pairs)):
        yield FiniteRelation.from_pairs(space, (p for i, p in enumerate(pairs) if choice >> i & 1))


def sweep_records(max_source: int = 4, max_target: int = 3, open_only: bool | None = True) -> Iterator[dict]:
    """One record per (space, map, relation) triple."""
    for m in enumerate_quotient_maps(max_source, max_target, open_only):
        opened = is_open(m)
        for e in symmetric_reflexive_relations(m.target):
            rep = process_transfer_check(m, e)
            yield {"map": m.to_json(), "open": opened, "relation": e.to_json(), **rep.to_json()}


def find_non_open_violation(max_source: int = 4, max_target: int = 3, closed_only: bool = False):
    """First non-open quotient map and relation where the transfer equation breaks."""
    for m in enumerate_quotient_maps(max_source, max_target, open_only=False):
        for e in symmetric_reflexive_relations(m.target):
            if closed_only and not e.is_closed():
                continue
            rep = process_transfer_check(m, e)
            if not rep.holds:
                return m, e, rep
    return None


def doubled_cover(cloud: MetricCloud, shift=10) -> SpaceMap:
    """Two disjoint translated copies of ``cloud`` mapped 2-to-1 onto it."""
    coords = list(cloud.coords) + [tuple(c + shift for c in p) for p in cloud.coords]
    source = MetricCloud(tuple(coords), cloud.epsilon)
    if any(source.nbhd[x] >> cloud.n for x in range(cloud.n)):
        raise SpaceError("copies are not separated at this epsilon")
    return SpaceMap(source, cloud, tuple(list(range(cloud.n)) * 2))
