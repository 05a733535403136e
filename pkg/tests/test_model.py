import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from orienteer.errors import InstanceError
from orienteer.model import (DIRECTED_CYCLE, EdgeSpec, Instance, TimeWindow, VertexSpec, Walk,
                             canonicalize_walk, cycle_distance, cycle_instance, cycle_length,
                             make_instance, merge_windows, normalize, parse_instance, parse_walk,
                             path_instance, require, serialize_instance, serialize_walk,
                             validate_instance, validate_walk)
from orienteer.generators import gen_random


def tiny_path():
    return path_instance([1], [1, 1], [[(0, 0)], [(1, 1)]], 1)


def test_minimal_path_is_valid():
    inst = path_instance([1], [0, 0], None, 5)
    assert validate_instance(inst).valid


def test_cycle_missing_edge_is_topology_mismatch():
    vertices = (VertexSpec(1, ()), VertexSpec(1, ()), VertexSpec(1, ()))
    inst = Instance(DIRECTED_CYCLE, 3, 0, 5, vertices, (EdgeSpec(0, 1, 1), EdgeSpec(1, 2, 1)))
    rep = validate_instance(inst)
    assert not rep.valid
    assert any("topology mismatch" in s for s in rep.issues)


def test_reversed_window_reported():
    inst = make_instance("directed_path", [1, 1], [(0, 1, 1)], 9, [[(5, 3)], []])
    rep = validate_instance(inst)
    assert any("release > deadline" in s for s in rep.issues)


def test_validate_instance_never_raises_on_garbage():
    inst = Instance("banana", 0, 0, -1, (), ())
    assert not validate_instance(inst).valid


def test_overflow_detected():
    inst = make_instance("directed_path", [2 ** 64], [], 1)
    assert any("overflow" in s for s in validate_instance(inst).issues)


def test_single_vertex_cycle_rejected():
    inst = make_instance(DIRECTED_CYCLE, [1], [], 3)
    assert any("cycle requires n >= 2" in s for s in validate_instance(inst).issues)


def test_normalize_clips_and_drops_windows():
    inst = path_instance([1], [1, 1], [[(2, 9), (20, 30)], [(0, 4)]], 6)
    norm = normalize(inst)
    assert norm.vertices[0].windows == (TimeWindow(2, 6),)
    assert norm.vertices[1].windows == (TimeWindow(0, 4),)


def test_merge_windows_touching():
    assert merge_windows([(4, 5), (1, 3)]) == (TimeWindow(1, 5),)
    assert merge_windows([(4, 5), (1, 3)], touching=False) == (TimeWindow(1, 3), TimeWindow(4, 5))


def test_walk_direct_traversal():
    rep = validate_walk(tiny_path(), Walk.of([(0, 0), (1, 1)]))
    assert rep.valid and rep.profit == 2 and rep.cost == 1


def test_walk_late_arrival_is_mismatch():
    rep = validate_walk(tiny_path(), Walk.of([(0, 0), (1, 2)]))
    assert not rep.valid
    assert "movement time mismatch" in rep.violation


def test_walk_over_inactive_edge():
    inst = path_instance([1], [1, 1], None, 5, active={0: [(0, 1)]})
    rep = validate_walk(inst, Walk.of([(0, 0), (0, 1), (1, 2)]))
    assert "edge inactive during traversal" in rep.violation
    assert validate_walk(inst, Walk.of([(0, 0), (1, 1)])).valid


@pytest.mark.parametrize("visits, needle", [
    ([], "empty walk"),
    ([(1, 0)], "walk must start at vertex"),
    ([(0, 0), (0, 0)], "wait must advance time"),
    ([(0, 0), (1, 1), (0, 2)], "no edge"),
    ([(0, 0), (0, 5), (1, 6)], "budget exceeded"),
])
def test_walk_violations(visits, needle):
    rep = validate_walk(tiny_path(), Walk.of(visits))
    assert not rep.valid and needle in rep.violation


def test_windowless_vertex_uncollectible_in_window_instance():
    inst = path_instance([1], [4, 7], [[], [(0, 5)]], 5)
    rep = validate_walk(inst, Walk.of([(0, 0), (1, 1)]))
    assert rep.collected == {1} and rep.profit == 7


def test_plain_op_collects_every_visit():
    inst = path_instance([2, 2], [1, 2, 3], None, 4)
    assert validate_walk(inst, Walk.of([(0, 0), (1, 2), (2, 4)])).profit == 6


def test_stay_collects_window_inside_wait():
    inst = path_instance([1], [0, 5], [[], [(3, 3)]], 9)
    assert validate_walk(inst, Walk.of([(0, 0), (1, 1), (1, 6)])).profit == 5
    assert validate_walk(inst, Walk.of([(0, 0), (1, 1)])).profit == 0


def test_cycle_distances():
    inst = cycle_instance([1] * 8, [0] * 8, None, 10)
    assert cycle_length(inst) == 8
    assert cycle_distance(inst, 0, 3) == 3
    assert cycle_distance(inst, 3, 0) == 5
    assert cycle_distance(inst, 4, 4) == 0
    with pytest.raises(InstanceError):
        cycle_distance(tiny_path(), 0, 1)


def test_missing_budget_names_field():
    doc = json.loads(serialize_instance(tiny_path()))
    del doc["budget"]
    with pytest.raises(InstanceError, match="budget"):
        parse_instance(json.dumps(doc))


def test_profit_overflow_names_field():
    doc = json.loads(serialize_instance(tiny_path()))
    doc["vertices"][1]["profit"] = 2 ** 64
    with pytest.raises(InstanceError, match=r"vertices\[1\]\.profit.*overflow"):
        parse_instance(json.dumps(doc))


def test_malformed_json():
    with pytest.raises(InstanceError, match="malformed JSON"):
        parse_instance("{")


def test_parse_walk_accepts_solution_document():
    doc = json.dumps({"profit": 1, "walk": {"visits": [[0, 0], [1, 1]]}, "algorithm": "x"})
    assert parse_walk(doc) == Walk.of([(0, 0), (1, 1)])
    assert parse_walk(serialize_walk(Walk.of([(0, 0)]))) == Walk.of([(0, 0)])


def test_require_raises_with_all_issues():
    inst = make_instance("directed_path", [1, 1], [(0, 1, 1)], 9, [[(5, 3)], []], start=1)
    with pytest.raises(InstanceError) as exc:
        require(inst)
    assert "start at vertex 0" in str(exc.value) and "release > deadline" in str(exc.value)


def test_canonicalize_loose_walk():
    inst = tiny_path().replace(budget=3)
    walk = canonicalize_walk(inst, [(0, 0), (1, 3)])
    assert walk == Walk.of([(0, 0), (1, 1), (1, 3)])
    assert validate_walk(inst, walk).valid
    dyn = path_instance([1], [1, 1], None, 9, active={0: [(4, 6)]})
    assert canonicalize_walk(dyn, [(0, 0), (1, 8)]) == Walk.of([(0, 0), (0, 4), (1, 5), (1, 8)])
    with pytest.raises(InstanceError):
        canonicalize_walk(dyn, [(0, 0), (1, 3)])


TOPOLOGIES = ["directed_path", "directed_cycle", "undirected_path", "tree", "general"]


@given(st.sampled_from(TOPOLOGIES), st.integers(2, 7), st.booleans(), st.integers(0, 10 ** 6))
def test_json_round_trip(topology, n, dynamic, seed):
    inst = gen_random({"topology": topology, "n": n, "dynamic": dynamic, "windows_per_vertex": 2},
                      seed)
    assert parse_instance(serialize_instance(inst)) == inst


@given(st.integers(0, 10 ** 6), st.data())
def test_inserting_a_wait_keeps_the_report(seed, data):
    from orienteer.oracle import oracle_op
    inst = gen_random({"topology": "undirected_path", "n": 4, "windows_per_vertex": 1,
                       "budget_factor": 3.0}, seed)
    walk = oracle_op(inst).walk
    visits = list(walk.visits)
    k = data.draw(st.integers(0, len(visits) - 1))
    v, t = visits[k]
    nxt = visits[k + 1][1] if k + 1 < len(visits) else None
    if nxt is None or visits[k + 1][0] != v or nxt - t < 2:
        return
    mid = data.draw(st.integers(t + 1, nxt - 1))
    padded = Walk.of(visits[:k + 1] + [(v, mid)] + visits[k + 1:])
    a, b = validate_walk(inst, walk), validate_walk(inst, padded)
    assert b.valid and (a.profit, a.collected) == (b.profit, b.collected)


@given(st.integers(0, 10 ** 6), st.integers(0, 20))
def test_budget_monotonicity_of_validity(seed, extra):
    from orienteer.oracle import oracle_op
    inst = gen_random({"topology": "tree", "n": 5, "windows_per_vertex": 0}, seed)
    walk = oracle_op(inst).walk
    assert validate_walk(inst.replace(budget=inst.budget + extra), walk).valid
