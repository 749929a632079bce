"""Closed sets of binary sequences given by prefix-membership oracles."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from ..ordinal import Ordinal, as_ordinal, cnf_add, cnf_mul, format_ordinal, OMEGA, parse


class ZTreeError(ValueError):
    pass


@dataclass(frozen=True)
class ZTree:
    """``accepts(prefix)`` returns True/False, or None when the tree cannot tell (beyond its depth).

    ``no_eventually_constant`` promises that every infinite path contains
    infinitely many ``01``; membership checks rely on this to ignore the
    eventually-constant extensions of accepted prefixes.
    """
    name: str
    accepts: Callable[[str], bool | None]
    no_eventually_constant: bool = True
    depth: int | None = None

    def __call__(self, prefix: str) -> bool | None:
        if self.depth is not None and len(prefix) > self.depth:
            return None
        return self.accepts(prefix)

    def extensions(self, prefix: str) -> list[str]:
        return [prefix + b for b in "01" if self(prefix + b)]

    def prefixes(self, length: int) -> list[str]:
        """All accepted prefixes of the given length (a None answer counts as rejection)."""
        level = [""] if self("") else []
        for _ in range(length):
            level = [u for p in level for u in self.extensions(p)]
        return level

    def validate(self, horizon: int = 12) -> list[str]:
        """Problems found up to ``horizon``: prefix-closure failures and dead ends without a later ``01``."""
        problems = []
        if self.depth is not None:
            horizon = min(horizon, self.depth)
        level = [""]
        for n in range(horizon):
            nxt = []
            for p in level:
                for b in "01":
                    u = p + b
                    v = self(u)
                    if v:
                        nxt.append(u)
            for u in nxt:
                for cut in range(len(u)):
                    if self(u[:cut]) is False:
                        problems.append(f"{u!r} accepted but its prefix {u[:cut]!r} is not")
            level = nxt
        if self.no_eventually_constant:
            # every prefix at half the horizon must reach a new 01 before the horizon
            half = horizon // 2
            for p in self.prefixes(half):
                if not _reaches_01(self, p, horizon):
                    problems.append(f"{p!r} has no accepted extension with a later '01' within {horizon}")
        return problems


def _reaches_01(tree: ZTree, prefix: str, horizon: int) -> bool:
    start = len(prefix)
    stack = [prefix]
    while stack:
        p = stack.pop()
        if "01" in p[max(start - 1, 0):]:
            return True
        if len(p) >= horizon:
            continue
        stack.extend(tree.extensions(p))
    return False


def full_tree() -> ZTree:
    return ZTree("full", lambda p: True)


def alternating_tree() -> ZTree:
    """The two points ``(01)^w`` and ``(10)^w``."""
    def acc(p):
        return all(p[i] != p[i + 1] for i in range(len(p) - 1))
    return ZTree("alternating", acc)


def doubled(tree: ZTree) -> ZTree:
    """Image under ``0 -> 01``, ``1 -> 10``; no image point is eventually constant."""
    code = {"01": "0", "10": "1"}

    def acc(p):
        pairs = [p[i:i + 2] for i in range(0, len(p) - 1, 2)]
        if any(q not in code for q in pairs):
            return False
        u = "".join(code[q] for q in pairs)
        if len(p) % 2:
            u += p[-1]
        return tree(u)

    depth = None if tree.depth is None else 2 * tree.depth
    return ZTree(f"doubled({tree.name})", acc, True, depth)


def explicit_tree(prefixes: Iterable[str], depth: int, no_eventually_constant: bool = True,
                  name: str = "explicit") -> ZTree:
    """The prefix closure of a finite list, authoritative up to ``depth``."""
    closed = {""}
    for p in prefixes:
        if set(p) - set("01"):
            raise ZTreeError(f"prefix {p!r} is not binary")
        if len(p) > depth:
            raise ZTreeError(f"prefix {p!r} is longer than the stated depth {depth}")
        for i in range(len(p) + 1):
            closed.add(p[:i])
    return ZTree(name, lambda p: p in closed, no_eventually_constant, depth)


def write_prefixes(tree: ZTree, depth: int | None = None) -> str:
    depth = tree.depth if depth is None else depth
    if depth is None:
        raise ZTreeError("an unbounded tree needs an explicit depth")
    leaves = tree.prefixes(depth)
    return "\n".join([f"depth {depth}", *leaves]) + "\n"


def read_prefixes(text: str, name: str = "explicit") -> ZTree:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("depth "):
        raise ZTreeError("prefix file must start with 'depth <D>'")
    try:
        depth = int(lines[0].split()[1])
    except (IndexError, ValueError) as exc:
        raise ZTreeError(f"bad depth line {lines[0]!r}") from exc
    return explicit_tree(lines[1:], depth, name=name)


# ordinal spaces omega*J + 1 as closed subsets of {0,1}^N


def ordinal_code(beta, blocks: int) -> tuple[str, str]:
    """Code of ``beta <= w*blocks`` as ``(finite part, repeating tail)``.

    With ``P_j = 1^(j-1) 0``: ``w*(j-1) + m`` (``m >= 1``, or ``m = 0`` for
    ``j = 1``) codes as ``P_j 0^m 1 0^w`` and the limit ``w*j`` as
    ``P_j 0^w``.  Each block converges to its limit.
    """
    beta = as_ordinal(beta)
    top = cnf_mul(OMEGA, Ordinal.nat(blocks))
    if beta > top:
        raise ZTreeError(f"{format_ordinal(beta)} exceeds w*{blocks}")
    q, m = _split(beta)
    if m == 0 and q > 0:
        j = q
        return "1" * (j - 1) + "0", "0"
    j = q + 1
    return "1" * (j - 1) + "0" + "0" * m + "1", "0"


def _split(beta: Ordinal) -> tuple[int, int]:
    # beta = w*q + m with finite q, m
    q = m = 0
    for e, c in beta.terms:
        if e == Ordinal.nat(1):
            q = c
        elif e.is_zero():
            m = c
        else:
            raise ZTreeError(f"{format_ordinal(beta)} is not below w^2")
    return q, m


def ordinal_tree(blocks: int) -> ZTree:
    """Prefixes of codes of ordinals ``<= w*blocks`` (eventually constant; wrap with ``doubled``)."""
    if blocks < 1:
        raise ZTreeError("need at least one block")

    def acc(p):
        i = p.find("0")
        if i < 0:
            return len(p) <= blocks - 1
        if i + 1 > blocks:
            return False
        rest = p[i + 1:]
        k = rest.find("1")
        if k < 0:
            return True
        # after the block marker: 0^m 1 then zeros, m >= 1 outside the first block
        if i >= 1 and k == 0:
            return False
        return "1" not in rest[k + 1:]

    return ZTree(f"ordinal(w*{blocks})", acc, False)


def ordinal_from_code(code: str, blocks: int) -> Ordinal | None:
    """The unique ordinal whose code begins with ``code``, if the prefix pins one down."""
    i = code.find("0")
    if i < 0 or i + 1 > blocks:
        return None
    k = code[i + 1:].find("1")
    if k < 0 or (i >= 1 and k == 0):
        return None
    return cnf_add(cnf_mul(OMEGA, Ordinal.nat(i)), Ordinal.nat(k))


def circle_tree(truncation) -> ZTree:
    """Z-encoding of the sampled ordinal range ``<= truncation = w*J``."""
    t = as_ordinal(parse(truncation) if isinstance(truncation, str) else truncation)
    q, m = _split(t)
    if m or q < 1:
        raise ZTreeError("truncation must be w*J with J >= 1")
    return doubled(ordinal_tree(q))


PRESETS = {
    "full": full_tree,
    "alternating": alternating_tree,
}


def preset(name: str) -> ZTree:
    if name.startswith("doubled-"):
        return doubled(preset(name[len("doubled-"):]))
    if name.startswith("ordinal-"):
        return doubled(ordinal_tree(int(name[len("ordinal-"):])))
    try:
        return PRESETS[name]()
    except KeyError:
        raise ZTreeError(f"unknown tree preset {name!r}") from None
