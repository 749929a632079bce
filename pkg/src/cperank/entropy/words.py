"""Full words ``w_(i+1) = w_i 0^(i+1) w_i``, their limit, and the ruler sequence."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

MATERIALIZE_LIMIT = 22  # |w_22| is about 1.2e7


@lru_cache(maxsize=None)
def full_length(i: int) -> int:
    """``|w_i|`` from the recurrence ``|w_(i+1)| = 2|w_i| + i + 1``."""
    if i < 0:
        raise ValueError("index must be nonnegative")
    return 1 if i == 0 else 2 * full_length(i - 1) + i


@lru_cache(maxsize=None)
def full_ones(i: int) -> int:
    if i < 0:
        raise ValueError("index must be nonnegative")
    return 1 if i == 0 else 2 * full_ones(i - 1)


def full_symbol(i: int, p: int) -> str:
    """Symbol ``p`` of ``w_i`` without building the word."""
    if not 0 <= p < full_length(i):
        raise IndexError(p)
    while i > 0:
        half = full_length(i - 1)
        if p < half:
            i -= 1
        elif p < half + i:
            return "0"
        else:
            p -= half + i
            i -= 1
    return "1"


@lru_cache(maxsize=8)
def _materialize(i: int) -> str:
    w = "1"
    for j in range(i):
        w = w + "0" * (j + 1) + w
    return w


@dataclass(frozen=True)
class FullWord:
    index: int

    @property
    def length(self) -> int:
        return full_length(self.index)

    @property
    def ones(self) -> int:
        return full_ones(self.index)

    def symbol_at(self, p: int) -> str:
        return full_symbol(self.index, p)

    @property
    def symbols(self) -> str:
        if self.index > MATERIALIZE_LIMIT:
            raise MemoryError(f"w_{self.index} has {self.length} symbols; use symbol_at")
        return _materialize(self.index)

    def __len__(self):
        return self.length

    def __str__(self):
        return self.symbols


def full_word(i: int) -> FullWord:
    if i < 0:
        raise ValueError("index must be nonnegative")
    return FullWord(i)


def ruler_word(n: int) -> list[int]:
    """First ``n`` terms of the ruler sequence: the 2-adic valuations of ``1, 2, ..., n``."""
    return [((k & -k).bit_length() - 1) for k in range(1, n + 1)]


def w_omega_prefix(n: int) -> str:
    """Prefix of ``lim w_i``; every ``w_i`` is a prefix of ``w_(i+1)``."""
    i = 0
    while full_length(i) < n:
        i += 1
    if i <= MATERIALIZE_LIMIT:
        return _materialize(i)[:n]
    return "".join(full_symbol(i, p) for p in range(n))


def w_omega_from_ruler(n: int) -> str:
    """The same prefix through the substitution ``r -> 1 0^(r+1)`` of the ruler sequence."""
    out = []
    size = 0
    k = 1
    while size < n:
        r = (k & -k).bit_length() - 1
        out.append("1" + "0" * (r + 1))
        size += r + 2
        k += 1
    return "".join(out)[:n]


def prefix_one_density(k: int) -> Fraction:
    if k < 1:
        raise ValueError("k must be positive")
    return Fraction(w_omega_prefix(k).count("1"), k)


# factors of the two-sided orbit closure of w_omega


def _ruler_constraints_ok(cons: list[tuple[str, int]]) -> bool:
    """Do consecutive integers exist whose 2-adic valuations meet ``cons``?

    Each constraint is ``("eq", e)`` or ``("ge", e)``.  Odd integers have
    valuation 0 and the even ones are twice a run of consecutive integers,
    so split by the parity of the first position and recurse on the halves.
    """
    if len(cons) <= 1:
        return True
    for first_odd in (True, False):
        ok = True
        half = []
        for s, (kind, e) in enumerate(cons):
            odd = (s % 2 == 0) == first_odd
            if odd:
                if e > 0:
                    ok = False
                    break
            else:
                if kind == "eq":
                    if e < 1:
                        ok = False
                        break
                    half.append(("eq", e - 1))
                else:
                    half.append(("ge", max(e - 1, 0)))
        if ok and _ruler_constraints_ok(half):
            return True
    return False


def is_womega_factor(word: str) -> bool:
    """Is the binary ``word`` a factor of (the orbit closure of) ``w_omega``?

    ``w_omega`` is ``1 0^(r_1+1) 1 0^(r_2+1) ...`` for the ruler values
    ``r_k``, so a factor pins its interior gaps exactly and bounds the
    two partial end gaps from below.
    """
    if set(word) - set("01"):
        raise ValueError("binary word expected")
    ones = [p for p, c in enumerate(word) if c == "1"]
    if not ones:
        return True
    cons = []
    lead = ones[0]
    if lead:
        cons.append(("ge", lead - 1))
    for a, b in zip(ones, ones[1:]):
        gap = b - a - 1
        if gap < 1:
            return False
        cons.append(("eq", gap - 1))
    tail = len(word) - ones[-1] - 1
    cons.append(("ge", max(tail - 1, 0)))
    return _ruler_constraints_ok(cons)


def factors_by_materialization(length: int) -> set[str]:
    """Length-``length`` factors of ``w_omega``, read off a prefix long enough to contain ``0^length``."""
    i = max(length, 1)
    w = _materialize(i)
    return {w[p:p + length] for p in range(len(w) - length + 1)}
