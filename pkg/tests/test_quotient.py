import random

import pytest

from cperank.closeup.fixtures import three_interval_cloud
from cperank.closeup.relations import FiniteRelation, top_closure, trans_closure
from cperank.closeup.spaces import FiniteTopSpace, enumerate_topologies
from cperank.quotient import (MapError, SpaceMap, automorphisms, doubled_cover, enumerate_quotient_maps,
                              find_non_open_violation, is_open, is_quotient, odd_condition_transfer_check,
                              process_transfer_check, pullback_relation, quotient_map, set_partitions,
                              symmetric_reflexive_relations, sweep_records)

SIERPINSKI = FiniteTopSpace.from_opens(2, [0, 0b01, 0b11])


def identity(space):
    return SpaceMap(space, space, tuple(range(space.n)))


def test_is_open_examples():
    s = FiniteTopSpace.from_opens(3, [0, 1, 3, 7])
    assert is_open(identity(s))
    point = FiniteTopSpace.discrete(1)
    assert is_open(SpaceMap(s, point, (0, 0, 0)))
    # discrete -> Sierpinski is continuous but {b} maps to a non-open set
    m = SpaceMap(FiniteTopSpace.discrete(2), SIERPINSKI, (0, 1))
    assert not is_open(m)
    with pytest.raises(MapError):
        SpaceMap(SIERPINSKI, FiniteTopSpace.discrete(2), (0, 1))


def test_is_open_matches_image_of_opens():
    rng = random.Random(3)
    tops = enumerate_topologies(3)
    checked = 0
    for _ in range(400):
        src, tgt = rng.choice(tops), rng.choice(tops)
        a = tuple(rng.randrange(3) for _ in range(3))
        try:
            m = SpaceMap(src, tgt, a)
        except MapError:
            continue
        checked += 1
        direct = all(tgt.is_open(m.image(o)) for o in src.opens)
        assert is_open(m) == direct
    assert checked > 50


def test_is_quotient_examples():
    s = FiniteTopSpace.from_opens(3, [0, 1, 3, 7])
    assert is_quotient(identity(s))
    inc = SpaceMap(FiniteTopSpace.discrete(1), FiniteTopSpace.discrete(2), (0,))
    assert not is_quotient(inc)


def test_quotient_topology_by_open_enumeration():
    rng = random.Random(11)
    tops = enumerate_topologies(4)
    for _ in range(30):
        src = rng.choice(tops)
        a = [0, 1] + [rng.randrange(2) for _ in range(2)]
        rng.shuffle(a)
        m = quotient_map(src, [{a[0]: 0, 1 - a[0]: 1}[v] for v in a])
        expected = {v for v in range(4) if src.is_open(m.preimage(v))}
        assert set(m.target.opens) == expected
        assert is_quotient(m)


def test_pullback_examples():
    tgt = FiniteTopSpace.discrete(2)
    m = SpaceMap(FiniteTopSpace.discrete(3), tgt, (0, 0, 1))
    f = pullback_relation(m, FiniteRelation.diagonal(tgt))
    assert set(f.pairs()) == {(x, y) for x in range(3) for y in range(3) if m.assignment[x] == m.assignment[y]}
    assert pullback_relation(m, FiniteRelation.full(tgt)).is_full()


def test_pullback_pointwise():
    for m in enumerate_quotient_maps(4, 3, open_only=None):
        for e in list(symmetric_reflexive_relations(m.target))[:4]:
            f = pullback_relation(m, e)
            a = m.assignment
            for x in range(m.source.n):
                for y in range(m.source.n):
                    assert ((x, y) in f) == ((a[x], a[y]) in e)


def test_pullback_commutes_with_closures_for_open_quotients():
    for m in enumerate_quotient_maps(4, 3, open_only=True):
        assert is_open(m) and is_quotient(m)
        for e in symmetric_reflexive_relations(m.target):
            f = pullback_relation(m, e)
            assert top_closure(f) == pullback_relation(m, top_closure(e))
            assert trans_closure(f) == pullback_relation(m, trans_closure(e))
            assert f.is_transitive() == e.is_transitive()


def test_transfer_identity_and_rank_corollary():
    s = FiniteTopSpace.from_opens(3, [0, 1, 3, 7])
    for e in symmetric_reflexive_relations(s):
        rep = process_transfer_check(identity(s), e)
        assert rep.holds and rep.target_rank == rep.source_rank


def test_sweep_small():
    recs = list(sweep_records(3, 3))
    assert recs and all(r["holds"] for r in recs)
    assert all(r["source_rank"] == r["target_rank"] and r["source_equalizing"] == r["target_equalizing"]
               for r in recs)
    assert list(sweep_records(1, 1)) and all(r["holds"] for r in sweep_records(1, 1))


def test_non_open_counterexample():
    found = find_non_open_violation(4, 3)
    assert found is not None
    m, e, rep = found
    assert not is_open(m) and is_quotient(m) and not rep.holds


def test_enumeration_dedup():
    assert list(set_partitions(3, 2)) == [(0, 0, 0), (0, 0, 1), (0, 1, 0), (0, 1, 1)]
    assert len(automorphisms(FiniteTopSpace.discrete(3))) == 6
    maps = list(enumerate_quotient_maps(3, 3, open_only=None))
    keys = {(m.source.nbhd, m.assignment) for m in maps}
    assert len(keys) == len(maps)


def test_map_json_round_trip():
    m = quotient_map(SIERPINSKI, (0, 0))
    assert SpaceMap.from_json(m.to_json()) == m


def test_odd_transfer_k1_and_k2_sweep():
    for k in (1, 2):
        for m in enumerate_quotient_maps(3, 3, open_only=True):
            for e in symmetric_reflexive_relations(m.target):
                rep = odd_condition_transfer_check(m, e, k)
                assert rep.holds, (m.to_json(), e.to_json(), rep.steps)


def test_odd_transfer_three_interval_cover():
    cloud, e, _ = three_interval_cloud()
    m = doubled_cover(cloud)
    assert is_open(m) and is_quotient(m)
    rep = odd_condition_transfer_check(m, e, 2)
    assert rep.holds
    fails = [(j, a, b) for j, a, b in rep.steps if not a]
    assert fails and all(not b for _, _, b in fails)
