"""Ready-made spaces and relations used by tests and the CLI."""
from __future__ import annotations

from fractions import Fraction

from ..ordinal import ONE, as_ordinal, decompose, parse, subtract
from .circle import CircleSample, alpha_exponent, circle_relation, circle_sample, restrict, symbolic_trace
from .relations import FiniteRelation
from .spaces import MetricCloud


def three_interval_cloud(step: Fraction = Fraction(1, 8), epsilon: Fraction | None = None):
    """Grid on [0, 3] split into interleaved classes, joined across adjacent intervals.

    Point ``t*step`` lies in interval ``j = min(floor(x), 2)`` and class
    ``i = t mod 3``.  Class ``i`` relates everything it has in intervals
    ``i`` and ``i+1`` (mod 3).  Returns ``(cloud, relation, labels)`` with
    ``labels[p] = (i, j)``.
    """
    step = Fraction(step)
    count = int(3 / step)
    xs = [t * step for t in range(count + 1)]
    cloud = MetricCloud(tuple((x,) for x in xs), step if epsilon is None else Fraction(epsilon))
    labels = [(t % 3, min(int(x), 2)) for t, x in enumerate(xs)]
    groups = {}
    for p, (i, j) in enumerate(labels):
        if j in (i, (i + 1) % 3):
            groups.setdefault(i, []).append(p)
    pairs = [(p, q) for g in groups.values() for p in g for q in g]
    return cloud, FiniteRelation.from_pairs(cloud, pairs), labels


def circle_odd_fixture(alpha="w^2+1", truncation="w*4", prev_index=None, extra=()):
    """Initial circle relation and a previous-step relation, restricted to a finite sample.

    ``prev_index`` defaults to one less than the rank, the step the odd
    condition refers to.
    """
    alpha = as_ordinal(parse(alpha) if isinstance(alpha, str) else alpha)
    truncation = as_ordinal(parse(truncation) if isinstance(truncation, str) else truncation)
    alpha_exponent(alpha)
    trace = symbolic_trace(alpha)
    if prev_index is None:
        if not decompose(trace.rank).b:
            raise ValueError("the odd condition concerns odd ranks")
        prev_index = subtract(trace.rank, ONE)
    prev = trace.relation_at(prev_index)
    sample: CircleSample = circle_sample(alpha, truncation, extra=extra)
    return sample, restrict(circle_relation(alpha), sample), restrict(prev, sample)
