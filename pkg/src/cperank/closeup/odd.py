"""The odd condition: (E^[k])^2 inside the closure of (E_prev)^[2k] meet (E^[k])^2."""
from __future__ import annotations

import os
from dataclasses import dataclass, field

from .relations import FiniteRelation
from .spaces import bits

DEFAULT_TUPLE_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    def __init__(self, needed: int, budget: int):
        super().__init__(f"{needed} tuples exceed the budget of {budget}")
        self.needed = needed
        self.budget = budget


def default_budget() -> int:
    raw = os.environ.get("CPE_BUDGET")
    return int(raw) if raw else DEFAULT_TUPLE_BUDGET


def cliques(e: FiniteRelation, k: int) -> list[tuple[int, ...]]:
    """Ordered k-tuples (repetition allowed) whose entries are pairwise related."""
    out = []

    def grow(prefix, allowed):
        if len(prefix) == k:
            out.append(tuple(prefix))
            return
        for y in bits(allowed):
            prefix.append(y)
            grow(prefix, allowed & e.rows[y])
            prefix.pop()

    grow([], (1 << e.n) - 1)
    return out


@dataclass
class OddConditionResult:
    holds: bool
    k: int
    checked: int
    witnesses: list = field(default_factory=list)

    @property
    def witness(self):
        return self.witnesses[0] if self.witnesses else None

    def __bool__(self):
        return self.holds


def odd_condition_check(e: FiniteRelation, e_prev: FiniteRelation, k: int, budget: int | None = None,
                        max_witnesses: int | None = None) -> OddConditionResult:
    """Decide the containment by exhausting ``(E^[k])^2``.

    A 2k-tuple ``t`` is in the closure of a tuple set ``S`` iff some
    ``s`` in ``S`` has ``s_i`` in the neighbourhood of ``t_i`` for every
    ``i``.  On finite topological spaces this is the product closure; on
    clouds it is a single epsilon-step (the iterated dilation of a grid
    reaches everything and would make the check vacuous).
    """
    if k < 1:
        raise ValueError("k must be positive")
    if e.space != e_prev.space:
        raise ValueError("both relations must live on the same space")
    if not e_prev.is_transitive():
        raise ValueError("the previous relation must be transitive")
    budget = default_budget() if budget is None else budget
    base = cliques(e, k)
    needed = len(base) ** 2
    if needed > budget:
        raise BudgetExceeded(needed, budget)
    nb = e.space.nbhd
    er, pr = e.rows, e_prev.rows
    full = (1 << e.n) - 1

    def approximable(t) -> bool:
        # backtracking for s with s_i in N(t_i), halves E-cliques, all pairs E_prev
        s = []

        def go(i):
            if i == 2 * k:
                return True
            cand = nb[t[i]]
            for j, sj in enumerate(s):
                cand &= pr[sj]
                if (j < k) == (i < k):
                    cand &= er[sj]
            for y in bits(cand & full):
                s.append(y)
                if go(i + 1):
                    return True
                s.pop()
            return False

        return go(0)

    res = OddConditionResult(True, k, 0)
    for a in base:
        for b in base:
            t = a + b
            res.checked += 1
            if not approximable(t):
                res.holds = False
                res.witnesses.append(t)
                if max_witnesses is not None and len(res.witnesses) >= max_witnesses:
                    return res
    return res
