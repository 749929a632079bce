"""Independent reference implementations used to cross-check the package.

Nothing here calls the code under test for the computation it is checking.
"""
from __future__ import annotations

import itertools
import math
import random

from cperank.ordinal import Ordinal


# ordinals as nested tuples ((exponent, coefficient), ...)


def to_tuple(o: Ordinal):
    return tuple((to_tuple(e), c) for e, c in o.terms)


def from_tuple(t) -> Ordinal:
    return Ordinal([(from_tuple(e), c) for e, c in t])


def t_cmp(a, b) -> int:
    for (ea, ca), (eb, cb) in zip(a, b):
        s = t_cmp(ea, eb)
        if s:
            return s
        if ca != cb:
            return -1 if ca < cb else 1
    return (len(a) > len(b)) - (len(a) < len(b))


def _plus_monomial(a, e):
    # a + w^e: terms of a above e survive, a term at e gains one
    out = [t for t in a if t_cmp(t[0], e) > 0]
    same = [c for f, c in a if t_cmp(f, e) == 0]
    out.append((e, same[0] + 1 if same else 1))
    return tuple(out)


def t_add(a, b):
    """Ordinal sum, adding one monomial of ``b`` at a time."""
    acc = a
    for e, c in b:
        for _ in range(c):
            acc = _plus_monomial(acc, e)
    return acc


def t_mul(a, b):
    """Product by left distributivity over the monomials of ``b``:
    ``a * w^f = w^(lead(a) + f)`` for ``f > 0`` and ``a * n = a + ... + a``."""
    if not a or not b:
        return ()
    acc = ()
    for f, d in b:
        if f:
            part = ((t_add(a[0][0], f), 1),)
            for _ in range(d):
                acc = t_add(acc, part)
        else:
            for _ in range(d):
                acc = t_add(acc, a)
    return acc


def random_ordinal(rng: random.Random, depth: int = 4, max_terms: int = 3, max_coef: int = 4) -> Ordinal:
    """Random CNF ordinal with exponent nesting at most ``depth``."""
    if depth <= 1 or rng.random() < 0.25:
        n = rng.randrange(0, max_coef + 1)
        return Ordinal.nat(n)
    k = rng.randrange(1, max_terms + 1)
    exps = {random_ordinal(rng, depth - 1, max_terms, max_coef) for _ in range(k)}
    exps = sorted(exps, reverse=True)
    return Ordinal([(e, rng.randrange(1, max_coef + 1)) for e in exps])


# finite topology


def product_closure(space, pairs: set) -> set:
    """Closure of a pair set in ``X x X``: points whose every basic open ``U x V`` meets the set."""
    opens = list(space.opens)
    pts = range(space.n)
    out = set()
    for x in pts:
        for y in pts:
            ok = True
            for u in opens:
                if not u >> x & 1:
                    continue
                for v in opens:
                    if v >> y & 1 and not any(u >> a & 1 and v >> b & 1 for a, b in pairs):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                out.add((x, y))
    return out


def cloud_closure(cloud, pairs: set) -> set:
    """Iterated epsilon-dilation of a pair set under the sup metric."""
    cur = set(pairs)
    pts = range(cloud.n)
    d = lambda p, q: max(abs(a - b) for a, b in zip(cloud.coords[p], cloud.coords[q]))
    while True:
        nxt = {(x, y) for x in pts for y in pts
               if any(max(d(x, a), d(y, b)) <= cloud.epsilon for a, b in cur)}
        if nxt == cur:
            return cur
        cur = nxt


def transitive_pairs(n: int, pairs: set) -> set:
    """Reachability by breadth-first search from every point."""
    adj = {x: {b for a, b in pairs if a == x} for x in range(n)}
    out = set()
    for s in range(n):
        seen, todo = set(), [s]
        while todo:
            x = todo.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        out |= {(s, y) for y in seen}
    return out | {p for p in pairs}


def saturate(space, pairs: set, closure=product_closure) -> set:
    """Least closed transitive relation containing ``pairs``."""
    cur = set(pairs)
    while True:
        nxt = transitive_pairs(space.n, closure(space, cur))
        if nxt == cur:
            return cur
        cur = nxt


# subshift X'


def generator_language(n: int) -> set[str]:
    """Length-``n`` windows of every point built from explicit offsets, bits and a constant hole."""
    from cperank.toeplitz.words import generate_window

    depth = max(1, math.ceil(math.log(max(n, 1), 3))) + 2
    out = set()
    for offs in itertools.product(range(3), repeat=depth):
        for bits in itertools.product("01", repeat=depth):
            for tail in "01#":
                out.add(generate_window(offs, "".join(bits), 0, n, tail=tail).symbols)
    return out


# covers


def covers(u: str, w: str, u_word: str, v_word: str) -> bool:
    """Straight from the definition: where ``w`` shows ``U`` the bit must be 1, where it shows ``V`` it must be 0."""
    k = (len(u_word) - 1) // 2
    for s in range(len(w) - len(u_word) + 1):
        if w[s:s + len(u_word)] == u_word and u[s + k] != "1":
            return False
    k = (len(v_word) - 1) // 2
    for s in range(len(w) - len(v_word) + 1):
        if w[s:s + len(v_word)] == v_word and u[s + k] != "0":
            return False
    return True


def chromatic_number(n: int, edges: set) -> int:
    if n == 0:
        return 0
    for k in range(1, n + 1):
        for col in itertools.product(range(k), repeat=n):
            if all(col[a] != col[b] for a, b in edges):
                return k
    return n
