"""The alternating topological/transitive close-up process on finite backends."""
from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass, field
from typing import Any

from ..ordinal import Ordinal, as_ordinal, format_ordinal, parse
from .relations import FiniteRelation, top_closure, trans_closure


class StepKind(str, enum.Enum):
    INITIAL = "initial"
    TOPOLOGICAL = "topological"
    TRANSITIVE = "transitive"
    LIMIT = "limit"


@dataclass(frozen=True)
class Step:
    index: Ordinal
    relation: Any  # FiniteRelation or CircleRelation
    kind: StepKind


@dataclass
class ProcessTrace:
    steps: list = field(default_factory=list)
    rank: Ordinal | None = None
    equalizing: bool = False

    @property
    def final(self):
        return self.steps[-1].relation

    def relation_at(self, index) -> Any:
        index = as_ordinal(index)
        for s in self.steps:
            if s.index == index:
                return s.relation
        raise KeyError(format_ordinal(index))

    def to_json(self) -> dict:
        return {
            "rank": None if self.rank is None else format_ordinal(self.rank),
            "equalizing": self.equalizing,
            "steps": [
                {"index": format_ordinal(s.index), "kind": s.kind.value, "relation": s.relation.to_json()}
                for s in self.steps
            ],
        }

    @classmethod
    def from_json(cls, data: dict, load_relation) -> "ProcessTrace":
        """Inverse of :meth:`to_json`; ``load_relation`` rebuilds one relation snapshot."""
        steps = [Step(parse(s["index"]), load_relation(s["relation"]), StepKind(s["kind"])) for s in data["steps"]]
        rank = None if data["rank"] is None else parse(data["rank"])
        return cls(steps, rank, bool(data["equalizing"]))


class ProcessBudgetExceeded(RuntimeError):
    def __init__(self, trace: ProcessTrace, max_steps: int):
        super().__init__(f"no fixpoint within {max_steps} steps")
        self.trace = trace
        self.max_steps = max_steps


def run_process(e: FiniteRelation, max_steps: int | None = None) -> ProcessTrace:
    """Run the process from ``e`` until ``E^(j) = E^(j+1)``.

    The trace holds every computed relation, including the confirming
    step ``rank + 1``.  Closedness is tested once, at the start.
    """
    n = e.n
    if max_steps is None:
        max_steps = n * n + 2
    zeta = 1 if e.is_closed() else 0
    trace = ProcessTrace([Step(Ordinal.nat(zeta), e, StepKind.INITIAL)])
    cur = e
    j = zeta
    for _ in range(max_steps):
        if (j + 1) % 2:
            nxt, kind = top_closure(cur), StepKind.TOPOLOGICAL
        else:
            nxt, kind = trans_closure(cur), StepKind.TRANSITIVE
        trace.steps.append(Step(Ordinal.nat(j + 1), nxt, kind))
        if nxt == cur:
            trace.rank = Ordinal.nat(j)
            trace.equalizing = cur.is_full()
            return trace
        cur = nxt
        j += 1
    raise ProcessBudgetExceeded(trace, max_steps)


def rank_table_csv(rows: list[tuple[Ordinal, Ordinal, bool]]) -> str:
    """CSV rank table keyed by alpha: columns alpha, rank, equalizing."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["alpha", "rank", "equalizing"])
    for alpha, rank, eq in rows:
        w.writerow([format_ordinal(alpha), format_ordinal(rank), int(eq)])
    return buf.getvalue()


def parse_rank_table_csv(text: str) -> list[tuple[Ordinal, Ordinal, bool]]:
    reader = csv.DictReader(io.StringIO(text))
    return [(parse(r["alpha"]), parse(r["rank"]), r["equalizing"] == "1") for r in reader]
