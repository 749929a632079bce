"""Ternary verdicts for checks that a finite horizon may not settle."""
from __future__ import annotations

import enum


class Verdict(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNDECIDED = "undecided"

    def __bool__(self):
        raise TypeError("a ternary verdict has no truth value; compare with Verdict.TRUE")

    @classmethod
    def of(cls, value: bool | None) -> "Verdict":
        return cls.UNDECIDED if value is None else cls.TRUE if value else cls.FALSE
