import pytest

from cperank.closeup.circle import (CircleRelation, CircleSample, MalformedAlpha, characterization, circle_relation,
                                    circle_sample, limit_pair_audit, rank_formula, restrict, symbolic_limit,
                                    symbolic_rank, symbolic_step, symbolic_trace)
from cperank.closeup.fixtures import circle_odd_fixture, three_interval_cloud
from cperank.closeup.odd import BudgetExceeded, cliques, odd_condition_check
from cperank.closeup.process import ProcessTrace
from cperank.closeup.relations import FiniteRelation
from cperank.closeup.spaces import FiniteTopSpace
from cperank.ordinal import OMEGA, ONE, cnf_add, decompose, format_ordinal, omega_pow, parse, subtract

P = parse

RANK_TABLE = [
    ("w", "2"), ("w+1", "3"), ("w^2", "4"), ("w^2+1", "5"), ("w^3", "6"),
    ("w^w", "w"), ("w^w+1", "w+1"), ("w^(w+1)", "w+2"), ("w^(w+1)+1", "w+3"), ("w^(w*2)", "w*2"),
]


def test_circle_relation_initial():
    c = circle_relation(OMEGA)
    assert (c.bound, c.inclusive) == (ONE, True)
    c2 = circle_relation(P("w^2+1"))
    assert (c2.bound, c2.inclusive) == (ONE, True) and c2.alpha != c.alpha
    assert c.contains(3, 4) and not c.contains(3, 5) and c.contains(7, 7)
    for bad in ["3", "w*2", "w^2+2", "0"]:
        with pytest.raises(MalformedAlpha):
            circle_relation(P(bad))


def test_symbolic_steps():
    c = circle_relation(P("w^3"))
    s1 = symbolic_step(c)
    assert (s1.bound, s1.inclusive) == (OMEGA, False)
    s2 = symbolic_step(s1)
    assert (s2.bound, s2.inclusive) == (OMEGA, True)
    lim = symbolic_limit(symbolic_step(symbolic_step(s2)), OMEGA)
    assert (lim.bound, lim.inclusive, lim.parity_index) == (omega_pow(OMEGA), False, OMEGA)
    with pytest.raises(ValueError):
        symbolic_limit(s2, P("5"))


@pytest.mark.parametrize("alpha,rank", RANK_TABLE)
def test_rank_table(alpha, rank):
    r, eq = symbolic_rank(P(alpha))
    assert r == P(rank) == rank_formula(P(alpha))
    assert eq


def _displayed(alpha, index, beta, beta2):
    # gamma < w^(lam+n), or gamma <= w^(lam+n) at odd indices
    d = decompose(index)
    bound = omega_pow(cnf_add(d.limit_part, d.n))
    lo, hi = sorted((beta, beta2))
    g = subtract(hi, lo)
    return g < bound or (d.b == 1 and g == bound)


@pytest.mark.parametrize("alpha", ["w^2+1", "w^3", "w^w+1"])
def test_characterization_on_sampled_pairs(alpha):
    a = P(alpha)
    t = symbolic_trace(a)
    pts = [P(s) for s in ["0", "1", "2", "5", "w", "w+1", "w+3", "w*2", "w*3+1", "w^2", "w^2+1", "w^2*2+4"]]
    pts = [p for p in pts if p < a]
    for step in t.steps:
        rel = step.relation
        assert (rel.bound, rel.inclusive) == characterization(a, step.index)
        for x in pts:
            for y in pts:
                assert rel.contains(x, y) == _displayed(a, step.index, x, y), (format_ordinal(step.index), x, y)


def test_trace_json_round_trip():
    t = symbolic_trace(P("w^w+1"))
    back = ProcessTrace.from_json(t.to_json(), CircleRelation.from_json)
    assert back.rank == t.rank and [s.relation for s in back.steps] == [s.relation for s in t.steps]


def test_limit_pair_audit():
    t = symbolic_trace(P("w^2"))
    rep = limit_pair_audit(t.relation_at(3), [(0, OMEGA)])
    e = rep.entries[0]
    assert rep.ok and e.present and e.witnesses == [(P("0"), P(str(m))) for m in range(1, 5)]
    t = symbolic_trace(P("w^2+1"))
    final = t.relation_at(t.rank)
    rep = limit_pair_audit(final, [(0, omega_pow(2)), (P("w+4"), P("w+4")), (1, P("w+5"))])
    top, diag, far = rep.entries
    assert top.verified and top.witnesses[0] == (P("0"), OMEGA)
    assert diag.reason == "diagonal" and diag.verified
    assert far.verified and far.present is (subtract(P("w+5"), 1) < final.threshold)
    assert rep.ok


def test_limit_pair_audit_absent():
    t = symbolic_trace(P("w^2"))
    rep = limit_pair_audit(t.relation_at(3), [(1, P("w+5")), (0, P("w*3"))])
    assert [e.present for e in rep.entries] == [False, False]
    assert rep.ok


def test_circle_sample_round_trip():
    s = circle_sample(P("w^2+1"), P("w*4"))
    assert len(s.points) == 4 * 6 + 1
    assert CircleSample.from_json(s.to_json()) == s
    with pytest.raises(ValueError):
        circle_sample(P("w^2+1"), P("w^2+1"))
    r = restrict(circle_relation(P("w^2+1")), s)
    assert (s.index(0), s.index(1)) in r and (s.index(0), s.index(2)) not in r


# odd condition


def test_odd_condition_full():
    s = FiniteTopSpace.from_opens(3, [0, 1, 3, 7])
    full = FiniteRelation.full(s)
    assert odd_condition_check(full, full, 2).holds
    with pytest.raises(ValueError):
        odd_condition_check(full, FiniteRelation.from_pairs(s, [(0, 1), (1, 2)]), 2)
    with pytest.raises(ValueError):
        odd_condition_check(full, full, 0)


def test_cliques_definition():
    s = FiniteTopSpace.discrete(3)
    e = FiniteRelation.from_pairs(s, [(0, 1)])
    got = set(cliques(e, 2))
    assert got == {(x, y) for x in range(3) for y in range(3) if (x, y) in e}


def test_odd_condition_three_intervals():
    cloud, e, labels = three_interval_cloud()
    res = odd_condition_check(e, e, 2)
    assert not res.holds
    x = [p[0] for p in cloud.coords]
    box = [t for t in res.witnesses
           if 0 <= x[t[0]] <= 1 and 1 <= x[t[1]] <= 2 and 1 <= x[t[2]] <= 2 and 2 <= x[t[3]] <= 3]
    assert box


def test_odd_condition_circle_fixture_passes():
    sample, e, prev = circle_odd_fixture("w^2+1", "w*4")
    assert odd_condition_check(e, prev, 2).holds


def test_odd_condition_circle_fixture_with_earlier_step_fails():
    # the relation two steps in splits the sample into omega-blocks
    sample, e, prev = circle_odd_fixture("w^2+1", "w*4", prev_index=P("2"))
    res = odd_condition_check(e, prev, 2, max_witnesses=1)
    assert not res.holds
    assert [sample.points[i] for i in res.witness] == [P("0"), P("0"), OMEGA, P("w+1")]


def test_odd_condition_budget():
    sample, e, prev = circle_odd_fixture()
    with pytest.raises(BudgetExceeded):
        odd_condition_check(e, prev, 2, budget=100)
