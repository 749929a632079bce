"""Block supershifts ``Y_n`` and the cover entropy of two-set covers ``(U^c, V^c)``."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from ..toeplitz.words import PositionedWord, canonical_key

MARK = "#"


class CoverError(ValueError):
    pass


class CoverBudgetExceeded(RuntimeError):
    pass


def _block(b) -> str:
    return b.symbols if isinstance(b, PositionedWord) else str(b)


def build_yn_language(x_block, y_block, n: int, m: int) -> list[str]:
    """Length-``m`` words of ``... # u_i # u_(i+1) # ...`` with each ``u_i`` one of the two blocks.

    ``#`` sits on one residue class mod ``2n+2``; every phase and every
    choice for the gaps meeting the window is enumerated.
    """
    x, y = _block(x_block), _block(y_block)
    if len(x) != 2 * n + 1 or len(y) != 2 * n + 1:
        raise CoverError(f"blocks must have length 2n+1 = {2 * n + 1}")
    if MARK in x + y:
        raise CoverError("blocks may not contain the separator")
    period = 2 * n + 2
    out = set()
    for c in range(period):
        # gap g spans positions c + g*period + 1 .. c + g*period + 2n+1
        gaps = sorted({(p - c - 1) // period for p in range(m) if (p - c) % period})
        choices = [x] if x == y else [x, y]
        for pick in itertools.product(choices, repeat=len(gaps)):
            fill = dict(zip(gaps, pick))
            w = []
            for p in range(m):
                r = (p - c) % period
                w.append(MARK if r == 0 else fill[(p - c - 1) // period][r - 1])
            out.add("".join(w))
    return sorted(out, key=canonical_key)


@dataclass(frozen=True)
class CoverWord:
    """A binary word ``u``: position ``p`` must avoid ``U`` if ``u_p = 0`` and ``V`` if ``u_p = 1``."""
    bits: str

    def covers(self, w: str, u_word: str, v_word: str) -> bool:
        if len(self.bits) != len(w):
            raise CoverError("cover word and language word differ in length")
        ones, zeros = forced_pattern(w, u_word, v_word)
        u = int(self.bits[::-1], 2) if self.bits else 0
        return not (zeros & u) and not (ones & ~u)


def _centred_hits(w: str, pat: str) -> int:
    k = (len(pat) - 1) // 2
    mask = 0
    for s in range(len(w) - len(pat) + 1):
        if w.startswith(pat, s):
            mask |= 1 << (s + k)
    return mask


def forced_pattern(w: str, u_word: str, v_word: str) -> tuple[int, int]:
    """``(ones, zeros)``: positions whose window shows ``U`` (bit 1 forced) or ``V`` (bit 0 forced).

    Only windows lying inside ``w`` are inspected; near the ends a
    suitable extension can always be chosen.
    """
    ones = _centred_hits(w, u_word)
    zeros = _centred_hits(w, v_word)
    if ones & zeros:
        raise CoverError(f"U and V both occur at one position of {w!r}; (U^c, V^c) is not a cover here")
    return ones, zeros


def conflict_graph(patterns: Sequence[tuple[int, int]]) -> list[int]:
    """Adjacency bitmasks: two patterns conflict when they force opposite bits somewhere."""
    adj = [0] * len(patterns)
    for a in range(len(patterns)):
        oa, za = patterns[a]
        for b in range(a + 1, len(patterns)):
            ob, zb = patterns[b]
            if oa & zb or za & ob:
                adj[a] |= 1 << b
                adj[b] |= 1 << a
    return adj


def _nodes(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def dsatur_colouring(adj: list[int]) -> list[int]:
    """Greedy DSATUR: colour next the vertex seeing most colours (ties: highest degree, lowest index)."""
    n = len(adj)
    deg = [bin(a).count("1") for a in adj]
    colour = [-1] * n
    seen = [0] * n  # bitmask of neighbour colours
    left = set(range(n))
    while left:
        v = max(left, key=lambda x: (bin(seen[x]).count("1"), deg[x], -x))
        c = 0
        while seen[v] >> c & 1:
            c += 1
        colour[v] = c
        left.discard(v)
        for u in _nodes(adj[v]):
            seen[u] |= 1 << c
    return colour


def greedy_clique(adj: list[int]) -> list[int]:
    order = sorted(range(len(adj)), key=lambda v: -bin(adj[v]).count("1"))
    clique, common = [], (1 << len(adj)) - 1
    for v in order:
        if common >> v & 1:
            clique.append(v)
            common &= adj[v]
    return clique


def exact_chromatic(adj: list[int], upper: int | None = None, budget: int = 10**6) -> int:
    """DSATUR branch and bound with a greedy clique as lower bound."""
    n = len(adj)
    if n == 0:
        return 0
    lower = len(greedy_clique(adj))
    best = upper if upper is not None else max(dsatur_colouring(adj)) + 1
    if best <= lower:
        return best
    deg = [bin(a).count("1") for a in adj]
    colour = [-1] * n
    visits = 0

    def pick():
        best_v, key = -1, None
        for v in range(n):
            if colour[v] >= 0:
                continue
            sat = len({colour[u] for u in _nodes(adj[v]) if colour[u] >= 0})
            k = (sat, deg[v])
            if key is None or k > key:
                best_v, key = v, k
        return best_v

    def go(used):
        nonlocal best, visits
        visits += 1
        if visits > budget:
            raise CoverBudgetExceeded(f"exact cover search exceeded {budget} nodes")
        v = pick()
        if v < 0:
            best = used
            return
        taken = {colour[u] for u in _nodes(adj[v]) if colour[u] >= 0}
        # a new colour index is only worth trying while it stays below the best known
        for c in range(min(used + 1, best - 1)):
            if c in taken:
                continue
            colour[v] = c
            go(max(used, c + 1))
            colour[v] = -1
            if best <= lower:
                return

    go(0)
    return best


def cover_min_size(language: Sequence[str], u_word: str, v_word: str, exact: bool = False,
                   budget: int = 10**6, max_exact_patterns: int = 5000) -> int:
    """Fewest cover words ``u`` so that each word of ``language`` meets some ``(U^c, V^c)^u``.

    Each word forces some bits of ``u``; a family of such partial
    assignments is jointly satisfiable iff it is pairwise so, so the
    answer is the chromatic number of the conflict graph.  The default is a
    greedy DSATUR colouring (an upper bound); ``exact`` runs branch and bound.
    """
    if not language:
        raise CoverError("language must be nonempty")
    if u_word == v_word:
        raise CoverError("U and V must be different cylinders")
    patterns = sorted({forced_pattern(w, u_word, v_word) for w in language})
    adj = conflict_graph(patterns)
    greedy = max(dsatur_colouring(adj)) + 1
    if not exact:
        return greedy
    if len(patterns) > max_exact_patterns:
        raise CoverBudgetExceeded(f"{len(patterns)} distinct patterns exceed the exact limit {max_exact_patterns}")
    return exact_chromatic(adj, greedy, budget)


def brute_force_cover_size(language: Sequence[str], u_word: str, v_word: str, m: int) -> int:
    """Smallest subset of ``{0,1}^m`` covering the language, by exhaustion (small ``m`` only)."""
    words = [CoverWord("".join(t)) for t in itertools.product("01", repeat=m)]
    covered = [{i for i, w in enumerate(language) if cw.covers(w, u_word, v_word)} for cw in words]
    need = set(range(len(language)))
    for size in range(1, len(words) + 1):
        for combo in itertools.combinations(range(len(words)), size):
            if set().union(*(covered[c] for c in combo)) >= need:
                return size
    raise CoverError("no cover exists")


# rate fits and verdicts

POSITIVE = "positive-rate"
VANISHING = "vanishing-rate"
INCONCLUSIVE = "inconclusive"


@dataclass
class PairVerdict:
    verdict: str
    ms: list
    sizes: list
    rate: float
    intercept: float
    r2: float
    residuals: list
    threshold: float
    agreement: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "ms": list(self.ms),
            "sizes": list(self.sizes),
            "rate": round(self.rate, 6),
            "intercept": round(self.intercept, 6),
            "r2": round(self.r2, 6),
            "residuals": [round(r, 6) for r in self.residuals],
            "threshold": round(self.threshold, 6),
            "agreement": self.agreement,
        }


def fit_rate(ms, sizes) -> tuple[float, float, float, list]:
    """Least squares of ``ln size`` against ``m``: ``(rate, intercept, r2, residuals)``.

    A perfectly flat sequence is an exact fit (r2 = 1).
    """
    xs = [float(m) for m in ms]
    ys = [math.log(s) for s in sizes]
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    rate = sxy / sxx if sxx else 0.0
    icpt = my - rate * mx
    res = [y - (icpt + rate * x) for x, y in zip(xs, ys)]
    ss_tot = sum((y - my) ** 2 for y in ys)
    ss_res = sum(r * r for r in res)
    r2 = 1.0 if ss_tot == 0 else 1 - ss_res / ss_tot
    return rate, icpt, r2, res


def entropy_pair_verdict(u_word: str, v_word: str, language_family: Callable[[int], Sequence[str]],
                         m_list: Sequence[int], period: int, exact_m: int | None = None,
                         positive_factor: float = 0.5, vanishing_rate: float = 0.02,
                         min_r2: float = 0.9, min_horizons: int = 4, budget: int = 10**6) -> PairVerdict:
    """Classify ``(U, V)`` by the growth of minimal covers along ``m_list``.

    Positive needs rate ``>= positive_factor * ln 2 / period`` and vanishing
    needs rate ``<= vanishing_rate``, both with ``r2 >= min_r2`` over at
    least ``min_horizons`` horizons and greedy = exact at ``exact_m``
    (default: the middle horizon).  Nothing is claimed about limits.
    """
    ms = list(m_list)
    if any(b <= a for a, b in zip(ms, ms[1:])):
        raise ValueError("horizons must be strictly increasing")
    threshold = positive_factor * math.log(2) / period
    if u_word == v_word:
        # (U^c, U^c) is covered by a single word at every horizon
        sizes = [1] * len(ms)
        return PairVerdict(VANISHING, ms, sizes, 0.0, 0.0, 1.0, [0.0] * len(ms), threshold,
                           {"m": None, "greedy": 1, "exact": 1, "agree": True})
    langs = {m: language_family(m) for m in ms}
    sizes = [cover_min_size(langs[m], u_word, v_word) for m in ms]
    rate, icpt, r2, res = fit_rate(ms, sizes)
    em = exact_m if exact_m is not None else ms[len(ms) // 2]
    lang = langs[em] if em in langs else language_family(em)
    g = cover_min_size(lang, u_word, v_word)
    e = cover_min_size(lang, u_word, v_word, exact=True, budget=budget)
    agreement = {"m": em, "greedy": g, "exact": e, "agree": g == e}
    verdict = INCONCLUSIVE
    if len(ms) >= min_horizons and r2 >= min_r2 and g == e:
        if rate >= threshold:
            verdict = POSITIVE
        elif rate <= vanishing_rate:
            verdict = VANISHING
    return PairVerdict(verdict, ms, sizes, rate, icpt, r2, res, threshold, agreement)


def cover_csv(report: PairVerdict) -> str:
    out = ["m,cover_size,log_size_per_m"]
    for m, s in zip(report.ms, report.sizes):
        out.append(f"{m},{s},{math.log(s) / m:.6f}")
    return "\n".join(out) + "\n"


def parse_cover_csv(text: str) -> list[tuple[int, int, float]]:
    lines = text.strip().splitlines()
    if not lines or lines[0] != "m,cover_size,log_size_per_m":
        raise ValueError("cover CSV header must be 'm,cover_size,log_size_per_m'")
    rows = []
    for ln in lines[1:]:
        m, s, r = ln.split(",")
        rows.append((int(m), int(s), float(r)))
    return rows


# fixtures

def yn_fixture():
    """Defining pair of ``Y_1``: blocks ``abc`` / ``abd`` with U, V their central cylinders."""
    x, y = "abc", "abd"
    return {"x": x, "y": y, "n": 1, "u": x, "v": y, "family": lambda m: build_yn_language(x, y, 1, m)}


def unrelated_fixture():
    """Same ``Y_1`` with ``U = [c]``, ``V = [a]``: no aligned gap offers both."""
    x, y = "abc", "abd"
    return {"x": x, "y": y, "n": 1, "u": "c", "v": "a", "family": lambda m: build_yn_language(x, y, 1, m)}
