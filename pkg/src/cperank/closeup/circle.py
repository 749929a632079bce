"""Symbolic successor relation on an ordinal arranged on the circle.

The points are the ordinals in ``[0, alpha)`` (``alpha`` is identified with
``0``).  After ``j`` steps of the process a pair ``(b, b + g)`` is related
iff the jump ``g`` is below a threshold ``w^(lam+n)`` (even ``j = lam+2n``)
or at most ``w^(lam+n)`` (odd ``j = lam+2n+1``).  So a relation is fully
described by its bound and whether the bound itself is allowed.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..ordinal import (
    ONE,
    OMEGA,
    ZERO,
    Kind,
    Ordinal,
    OrdinalError,
    as_ordinal,
    classify,
    cnf_add,
    cnf_mul,
    decompose,
    format_ordinal,
    fundamental,
    omega_pow,
    parse,
    subtract,
)
from .process import ProcessTrace, Step, StepKind
from .relations import FiniteRelation
from .spaces import FiniteTopSpace


class MalformedAlpha(OrdinalError, ValueError):
    pass


def alpha_exponent(alpha) -> tuple[Ordinal, bool]:
    """Return ``(zeta, plus_one)`` for ``alpha = w^zeta`` or ``w^zeta + 1`` with ``zeta >= 1``."""
    alpha = as_ordinal(alpha)
    t = alpha.terms
    if len(t) == 1 and t[0][1] == 1 and not t[0][0].is_zero():
        return t[0][0], False
    if len(t) == 2 and t[0][1] == 1 and not t[0][0].is_zero() and t[1] == (ZERO, 1):
        return t[0][0], True
    raise MalformedAlpha(f"alpha must be w^z or w^z + 1 with z >= 1, got {format_ordinal(alpha)}")


@dataclass(frozen=True)
class CircleRelation:
    alpha: Ordinal
    bound: Ordinal
    inclusive: bool
    parity_index: Ordinal

    @property
    def threshold(self) -> Ordinal:
        """Jumps strictly below this ordinal are related."""
        return cnf_add(self.bound, ONE) if self.inclusive else self.bound

    @property
    def effective_bound(self) -> Ordinal:
        # jumps never reach alpha, so thresholds above it all give the full relation
        return min(self.threshold, self.alpha)

    def contains(self, beta, beta2) -> bool:
        a, b = as_ordinal(beta), as_ordinal(beta2)
        if a > b:
            a, b = b, a
        if b >= self.alpha:
            raise ValueError(f"{format_ordinal(b)} is not a point of [0, {format_ordinal(self.alpha)})")
        return subtract(b, a) < self.threshold

    def same_relation(self, other: "CircleRelation") -> bool:
        """Equality of the pair sets (not of the descriptors)."""
        return self.alpha == other.alpha and self.effective_bound == other.effective_bound

    def is_full(self) -> bool:
        return self.effective_bound == self.alpha

    def to_json(self) -> dict:
        return {
            "alpha": format_ordinal(self.alpha),
            "bound": format_ordinal(self.bound),
            "inclusive": self.inclusive,
            "parity_index": format_ordinal(self.parity_index),
        }

    @classmethod
    def from_json(cls, data: dict) -> "CircleRelation":
        return cls(parse(data["alpha"]), parse(data["bound"]), bool(data["inclusive"]), parse(data["parity_index"]))


def circle_relation(alpha) -> CircleRelation:
    """Diagonal plus successor pairs: jumps ``<= 1`` at index 1."""
    alpha = as_ordinal(alpha)
    alpha_exponent(alpha)
    return CircleRelation(alpha, ONE, True, ONE)


def characterization(alpha, index) -> tuple[Ordinal, bool]:
    """Closed form ``(bound, inclusive)`` of the relation at ``index >= 1``."""
    d = decompose(index)
    return omega_pow(cnf_add(d.limit_part, Ordinal.nat(d.n))), bool(d.b)


def symbolic_step(c: CircleRelation) -> CircleRelation:
    d = decompose(c.parity_index)
    nxt = cnf_add(c.parity_index, ONE)
    if d.b:
        # transitive: finitely many jumps <= w^e give everything below w^e * w
        return CircleRelation(c.alpha, cnf_mul(c.bound, OMEGA), False, nxt)
    # topological: limits of jumps < w^e add exactly the jump w^e
    return CircleRelation(c.alpha, c.bound, True, nxt)


def symbolic_limit(c: CircleRelation, lam) -> CircleRelation:
    """Union of all relations below the limit index ``lam``: jumps ``< w^lam``."""
    lam = as_ordinal(lam)
    if classify(lam) is not Kind.LIMIT or lam <= c.parity_index:
        raise ValueError("limit index must be a limit ordinal beyond the current index")
    return CircleRelation(c.alpha, omega_pow(lam), False, lam)


def symbolic_trace(alpha, prefix_steps: int = 4) -> ProcessTrace:
    """Iterate the symbolic process up to and including the confirming step.

    When the exponent of ``alpha`` has a nonzero limit part, the finite
    steps of the first block can never reach ``alpha``; after
    ``prefix_steps`` of them the trace jumps to that limit index.
    """
    alpha = as_ordinal(alpha)
    zeta, _ = alpha_exponent(alpha)
    target_block = decompose(zeta).limit_part
    cur = circle_relation(alpha)
    trace = ProcessTrace([Step(cur.parity_index, cur, StepKind.INITIAL)])
    while True:
        block = decompose(cur.parity_index).limit_part
        if block < target_block and len(trace.steps) >= prefix_steps:
            nxt = symbolic_limit(cur, target_block)
            kind = StepKind.LIMIT
        else:
            nxt = symbolic_step(cur)
            kind = StepKind.TRANSITIVE if decompose(cur.parity_index).b else StepKind.TOPOLOGICAL
        trace.steps.append(Step(nxt.parity_index, nxt, kind))
        if kind is not StepKind.LIMIT and nxt.same_relation(cur):
            trace.rank = cur.parity_index
            trace.equalizing = cur.is_full()
            return trace
        cur = nxt


def symbolic_rank(alpha) -> tuple[Ordinal, bool]:
    t = symbolic_trace(alpha)
    return t.rank, t.equalizing


def rank_formula(alpha) -> Ordinal:
    """Closed-form rank: ``lam + 2n`` for ``w^(lam+n)`` and ``lam + 2n + 1`` for ``w^(lam+n) + 1``."""
    zeta, plus = alpha_exponent(alpha)
    d = decompose(zeta)
    f = 2 * d.n + d.b
    return cnf_add(d.limit_part, Ordinal.nat(2 * f + plus))


# limit-pair audit


@dataclass
class AuditEntry:
    pair: tuple
    present: bool
    reason: str
    verified: bool
    witnesses: list = field(default_factory=list)
    detail: str = ""


@dataclass
class AuditReport:
    relation: CircleRelation
    entries: list = field(default_factory=list)

    @property
    def unverifiable(self) -> list:
        return [e.pair for e in self.entries if not e.verified]

    @property
    def ok(self) -> bool:
        return not self.unverifiable


def _previous(c: CircleRelation) -> CircleRelation | None:
    d = decompose(c.parity_index)
    if not d.b or c.parity_index == ONE:
        return None
    return CircleRelation(c.alpha, c.bound, False, cnf_add(d.limit_part, Ordinal.nat(2 * d.n)))


def limit_pair_audit(c: CircleRelation, pairs, witnesses: int = 4) -> AuditReport:
    """Justify membership of each pair in ``c`` from the previous step.

    Pairs entering at a topological step get a witness sequence
    ``(b, b + g_i)`` of previous-step pairs with ``g_i`` increasing to the
    bound.  Absent pairs get the exclusion inequality showing no such
    approximation exists.
    """
    rep = AuditReport(c)
    prev = _previous(c)
    for raw in pairs:
        lo, hi = sorted((as_ordinal(raw[0]), as_ordinal(raw[1])))
        pair = (lo, hi)
        if hi >= c.alpha:
            rep.entries.append(AuditEntry(pair, False, "outside the space", False))
            continue
        if lo == hi:
            rep.entries.append(AuditEntry(pair, True, "diagonal", True))
            continue
        gap = subtract(hi, lo)
        present = gap < c.threshold
        if present:
            rep.entries.append(_audit_present(c, prev, lo, hi, gap, witnesses))
        else:
            rep.entries.append(_audit_absent(c, lo, hi, gap))
    return rep


def _audit_present(c, prev, lo, hi, gap, k) -> AuditEntry:
    pair = (lo, hi)
    if prev is None:
        return AuditEntry(pair, True, "jump below the current bound", gap < c.threshold)
    if gap < prev.threshold:
        return AuditEntry(pair, True, "already in the previous step", True)
    if gap != c.bound or classify(c.bound) is not Kind.LIMIT:
        return AuditEntry(pair, True, "no limit witness for this jump", False)
    seq = [fundamental(c.bound, i) for i in range(1, k + 1)]
    wit = [(lo, cnf_add(lo, g)) for g in seq]
    ok = all(a < b for a, b in zip(seq, seq[1:]))
    ok &= all(g < c.bound for g in seq)
    ok &= all(b < c.alpha and prev.contains(a, b) for a, b in wit)
    return AuditEntry(pair, True, "limit of previous-step jumps", ok, wit)


def _audit_absent(c, lo, hi, gap) -> AuditEntry:
    pair = (lo, hi)
    step = cnf_add(c.bound, ONE)
    if not lo.is_zero():
        # lo + bound + 1 is isolated and lies at or below hi
        far = cnf_add(lo, step)
        ok = far <= hi
        return AuditEntry(pair, False, "isolated successor below the far end", ok,
                          detail=f"{format_ordinal(far)} <= {format_ordinal(hi)}")
    _, plus = alpha_exponent(c.alpha)
    if plus:
        return AuditEntry(pair, False, "alpha is isolated from below", True)
    # gap <= w^z' * m with z' < zeta; approximants theta >= w^z' * 2m stay out of reach
    z1, coeff = gap.terms[0]
    m = coeff + 1
    cut = cnf_mul(omega_pow(z1), Ordinal.nat(2 * m))
    ok = cnf_add(gap, step) <= cut < c.alpha
    return AuditEntry(pair, False, "exclusion inequality near alpha", ok,
                      detail=f"{format_ordinal(cnf_add(gap, step))} <= {format_ordinal(cut)} < {format_ordinal(c.alpha)}")


# finite samples of the circle


@dataclass(frozen=True)
class CircleSample:
    alpha: Ordinal
    points: tuple
    space: FiniteTopSpace

    def index(self, o) -> int:
        return self.points.index(as_ordinal(o))

    def to_json(self) -> dict:
        return {"alpha": format_ordinal(self.alpha), "points": [format_ordinal(p) for p in self.points],
                "space": self.space.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "CircleSample":
        return cls(parse(data["alpha"]), tuple(parse(p) for p in data["points"]),
                   FiniteTopSpace.from_json(data["space"]))


def circle_sample(alpha, truncation, block: int = 6, tail: int = 2, extra=()) -> CircleSample:
    """Finite Alexandrov sample of ``[0, truncation]`` inside ``[0, alpha)``.

    ``truncation`` is finite or ``w * J``.  Block ``j`` keeps ``w*j + m`` for
    ``m < block``; each sampled limit ``w*j`` is approached by the last
    ``tail`` points of the block before it.  ``extra`` adds limit points
    approached by the top of the sample (e.g. ``alpha - 1``).
    """
    alpha = as_ordinal(alpha)
    alpha_exponent(alpha)
    truncation = as_ordinal(truncation)
    if truncation >= alpha:
        raise ValueError("truncation must lie below alpha")
    if truncation.is_finite():
        pts = [Ordinal.nat(m) for m in range(truncation.to_int() + 1)]
        limits = {}
    else:
        t = truncation.terms
        if len(t) != 1 or t[0][0] != ONE:
            raise ValueError("infinite truncation must have the form w*J")
        J = t[0][1]
        pts, limits = [], {}
        for j in range(J + 1):
            base = cnf_mul(OMEGA, Ordinal.nat(j))
            for m in range(block if j < J else 1):
                pts.append(cnf_add(base, Ordinal.nat(m)))
            if j:
                limits[base] = [cnf_add(cnf_mul(OMEGA, Ordinal.nat(j - 1)), Ordinal.nat(m))
                                for m in range(block - tail, block)]
    top = pts[-1]
    for x in extra:
        x = as_ordinal(x)
        if not (top < x < alpha):
            raise ValueError("extra points must lie above the sample and below alpha")
        pts.append(x)
        limits[x] = [top]
    idx = {p: i for i, p in enumerate(pts)}
    nb = [1 << i for i in range(len(pts))]
    for p, approach in limits.items():
        for q in approach:
            nb[idx[p]] |= 1 << idx[q]
    return CircleSample(alpha, tuple(pts), FiniteTopSpace.from_nbhds(nb))


def restrict(c: CircleRelation, sample: CircleSample) -> FiniteRelation:
    pts = sample.points
    rows = []
    for p in pts:
        m = 0
        for j, q in enumerate(pts):
            if c.contains(p, q):
                m |= 1 << j
        rows.append(m)
    return FiniteRelation(sample.space, rows, check=False)
