from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cperank.closeup.process import (ProcessBudgetExceeded, ProcessTrace, StepKind, parse_rank_table_csv,
                                     rank_table_csv, run_process)
from cperank.closeup.relations import FiniteRelation, RelationError, top_closure, trans_closure
from cperank.closeup.spaces import FiniteTopSpace, MetricCloud, SpaceError, enumerate_topologies, space_from_json, \
    topologies_up_to_iso
from cperank.ordinal import parse

from oracles import cloud_closure, product_closure, saturate, transitive_pairs

TOPS = {n: enumerate_topologies(n) for n in range(1, 5)}


def pairset(r):
    return set(r.pairs())


@st.composite
def space_and_relation(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    space = draw(st.sampled_from(TOPS[n]))
    pairs = [(x, y) for x in range(n) for y in range(x + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return space, FiniteRelation.from_pairs(space, chosen)


# spaces


def test_topology_counts():
    # labelled topologies on 1..4 points and their isomorphism classes
    assert [len(TOPS[n]) for n in range(1, 5)] == [1, 4, 29, 355]
    assert [len(topologies_up_to_iso(n)) for n in range(1, 5)] == [1, 3, 9, 33]


def test_from_opens_validation():
    with pytest.raises(SpaceError):
        FiniteTopSpace.from_opens(2, [0, 1])  # whole space missing
    with pytest.raises(SpaceError):
        FiniteTopSpace.from_opens(3, [0, 0b001, 0b010, 0b111])  # {0} | {1} missing
    s = FiniteTopSpace.from_opens(2, [0, 1, 3])
    assert s.nbhd == (1, 3)
    assert s.closure(1) == 3 and s.closure(2) == 2


def test_space_json_round_trip():
    s = FiniteTopSpace.from_opens(3, [0, 1, 3, 7])
    assert FiniteTopSpace.from_json(s.to_json()) == s
    assert s.to_json() == {"points": 3, "opens": [[], [0], [0, 1], [0, 1, 2]]}
    c = MetricCloud(((Fraction(0),), (Fraction(1, 2),)), Fraction(1, 4))
    assert space_from_json(c.to_json()) == c
    with pytest.raises(SpaceError):
        MetricCloud(((0.5,),))
    with pytest.raises(SpaceError):
        MetricCloud(((0,), (0,)))


def test_relation_json_and_checks():
    s = FiniteTopSpace.discrete(3)
    r = FiniteRelation.from_pairs(s, [(0, 1)])
    assert r.to_json() == {"pairs": [[0, 1]], "reflexive": True}
    assert FiniteRelation.from_json(r.to_json(), s) == r
    with pytest.raises(RelationError):
        FiniteRelation(s, [0b011, 0b010, 0b100])  # not symmetric


# closures


def test_top_closure_discrete_unchanged():
    s = FiniteTopSpace.discrete(3)
    for r in [FiniteRelation.from_pairs(s, [(0, 1)]), FiniteRelation.diagonal(s), FiniteRelation.full(s)]:
        assert top_closure(r) == r


def test_top_closure_sierpinski():
    s = FiniteTopSpace.from_opens(2, [0, 0b01, 0b11])
    r = FiniteRelation(s, [0b01, 0b00], check=False)  # just (a, a)
    assert pairset(top_closure(r)) == product_closure(s, {(0, 0)}) == {(x, y) for x in (0, 1) for y in (0, 1)}


def test_top_closure_cloud_fixpoint():
    c = MetricCloud(((0,), (Fraction(1, 2),), (1,)), Fraction(1, 2))
    r = FiniteRelation.from_pairs(c, [(0, 1)])
    got = top_closure(r)
    assert pairset(got) == cloud_closure(c, pairset(r))
    assert got.is_full()


def test_trans_closure_examples():
    s = FiniteTopSpace.discrete(3)
    chain = FiniteRelation.from_pairs(s, [(0, 1), (1, 2)])
    assert (0, 2) in trans_closure(chain)
    eq = FiniteRelation.from_pairs(s, [(0, 1)])
    assert trans_closure(eq) == eq
    s6 = FiniteTopSpace.discrete(6)
    path = FiniteRelation.from_pairs(s6, [(i, i + 1) for i in range(5)])
    assert pairset(trans_closure(path)) == transitive_pairs(6, pairset(path))
    assert trans_closure(path).is_full()


@given(space_and_relation(), space_and_relation())
def test_closure_laws(a, b):
    space, r = a
    for op in (top_closure, trans_closure):
        c = op(r)
        assert r <= c and op(c) == c
        assert c.is_reflexive()
        assert all((y, x) in c for x, y in c.pairs())
    assert pairset(top_closure(r)) == product_closure(space, pairset(r))
    assert pairset(trans_closure(r)) == transitive_pairs(space.n, pairset(r))
    # monotone, against a larger relation on the same space
    if b[0] == space:
        big = r | b[1]
        assert top_closure(r) <= top_closure(big) and trans_closure(r) <= trans_closure(big)


# process


def test_process_full_and_diagonal():
    for s in TOPS[3]:
        t = run_process(FiniteRelation.full(s))
        assert t.rank == 1 and t.equalizing
    t = run_process(FiniteRelation.diagonal(FiniteTopSpace.discrete(4)))
    assert t.rank == 1 and not t.equalizing


def test_process_cloud_line():
    # points 0..3, epsilon one gap, the link (1,2) missing; surrogate backend
    c = MetricCloud(tuple((i,) for i in range(4)), Fraction(1))
    e = FiniteRelation.from_pairs(c, [(0, 1), (2, 3)])
    t = run_process(e)
    assert pairset(t.final) == saturate(c, pairset(e), cloud_closure)
    assert t.rank == 1 and t.equalizing
    assert [s.kind for s in t.steps] == [StepKind.INITIAL, StepKind.TOPOLOGICAL, StepKind.TRANSITIVE]


def test_process_alternation_from_zeta():
    s = FiniteTopSpace.from_opens(3, [0, 0b001, 0b011, 0b111])
    e = FiniteRelation.from_pairs(s, [(1, 2)])
    t = run_process(e)
    zeta = 1 if e.is_closed() else 0
    assert t.steps[0].index == zeta
    for st_ in t.steps[1:]:
        j = st_.index.to_int()
        assert st_.kind is (StepKind.TOPOLOGICAL if j % 2 else StepKind.TRANSITIVE)


@given(space_and_relation())
def test_process_fixpoint_matches_saturation(sr):
    space, e = sr
    t = run_process(e)
    n = space.n
    assert t.rank.to_int() <= n * n
    assert pairset(t.final) == saturate(space, pairset(e))
    assert t.equalizing == t.final.is_full()
    # rank is the least index with E^(j) = E^(j+1)
    rels = [s.relation for s in t.steps]
    assert rels[-1] == rels[-2]
    assert all(a != b for a, b in zip(rels[:-2], rels[1:-1]))


def test_process_budget():
    s = FiniteTopSpace.discrete(6)
    e = FiniteRelation.from_pairs(s, [(i, i + 1) for i in range(5)])
    with pytest.raises(ProcessBudgetExceeded) as info:
        run_process(FiniteRelation.from_pairs(FiniteTopSpace.indiscrete(3), []), max_steps=0)
    assert info.value.trace.steps
    assert run_process(e).rank == 2


def test_trace_json_and_rank_csv():
    s = FiniteTopSpace.from_opens(2, [0, 1, 3])
    e = FiniteRelation.diagonal(s)
    t = run_process(e)
    back = ProcessTrace.from_json(t.to_json(), lambda d: FiniteRelation.from_json(d, s))
    assert back.rank == t.rank and [x.relation for x in back.steps] == [x.relation for x in t.steps]
    rows = [(parse("w"), parse("2"), True), (parse("w^w+1"), parse("w+1"), True)]
    text = rank_table_csv(rows)
    assert text.splitlines()[0] == "alpha,rank,equalizing"
    assert parse_rank_table_csv(text) == rows
