import pytest

from factories import rand_cycle, rand_dyn_path, rand_path, rand_tree, seeded
from orienteer.errors import ResourceLimitError
from orienteer.model import cycle_instance, make_instance, path_instance, validate_walk
from orienteer.oracle import event_times, oracle_cop, oracle_op


def test_event_times_plain_op_are_distances():
    inst = make_instance("tree", [1, 1, 1], [(0, 1, 2), (0, 2, 5)], 10)
    assert event_times(inst) == [0, 2, 5]


def test_event_times_window_shifts():
    inst = path_instance([1, 1], [0, 0, 1], [[], [], [(3, 5)]], 9, directed=False)
    ev = set(event_times(inst))
    assert {1, 2, 3, 4, 5, 6, 7} <= ev


def test_event_cap():
    inst = path_instance([1] * 5, [1] * 6, [[(k, k + 1)] for k in range(0, 12, 2)], 20)
    with pytest.raises(ResourceLimitError):
        event_times(inst, cap=3)
    with pytest.raises(ResourceLimitError):
        oracle_op(inst, event_cap=3)


def test_size_cap():
    inst = path_instance([1] * 12, [1] * 13, None, 5)
    with pytest.raises(ResourceLimitError):
        oracle_op(inst)
    assert oracle_op(inst, max_n=13).profit == 6


def test_zero_budget_and_zero_profits():
    inst = path_instance([1], [3, 4], [[(0, 2)], [(0, 2)]], 0)
    assert oracle_op(inst).profit == 3
    inst = path_instance([1], [3, 4], [[(1, 2)], [(0, 2)]], 0)
    assert oracle_op(inst).profit == 0
    assert oracle_op(path_instance([1], [0, 0], None, 5)).profit == 0


def test_cop_examples():
    a = cycle_instance([1, 1, 1], [1, 1, 1], [[(0, 10)], [(4, 4)], [(2, 2)]], 12)
    b = cycle_instance([1, 1, 1], [1, 1, 1], [[(0, 20)], [(4, 4)], [(6, 6)]], 20)
    for inst in (a, b):
        walk = oracle_cop(inst)
        assert walk is not None and len(validate_walk(inst, walk).collected) == 3


def test_cop_unreachable_window():
    inst = path_instance([1], [1, 1], [[(0, 5)], [(0, 0)]], 5, directed=False)
    assert oracle_cop(inst) is None


def test_cop_all_open_windows():
    inst = make_instance("tree", [1, 1, 1, 1], [(0, 1, 1), (1, 2, 2), (1, 3, 1)], 8,
                         [[(0, 8)]] * 4)
    assert oracle_cop(inst) is not None


def test_cop_windowless_vertex_infeasible():
    inst = path_instance([1], [1, 1], [[(0, 5)], []], 5)
    assert oracle_cop(inst) is None


def test_round_limit():
    inst = cycle_instance([1, 1], [0, 5], [[(0, 9)], [(3, 3)]], 9)
    assert oracle_op(inst).profit == 5
    assert oracle_op(inst, max_rounds=1).profit == 5  # waits at v1 in the first round
    inst = cycle_instance([1, 1], [5, 5], [[(4, 4)], [(1, 1)]], 9)
    assert oracle_op(inst, max_rounds=1).profit == 5
    assert oracle_op(inst, max_rounds=2).profit == 10


@pytest.mark.parametrize("factory", [rand_path, rand_cycle, rand_tree, rand_dyn_path])
def test_grid_search_agrees(factory):
    rng = seeded(99)
    for _ in range(25):
        inst = factory(rng)
        inst = inst.replace(budget=min(inst.budget, 15))
        if inst.has_windows:
            from orienteer.model import normalize
            inst = normalize(inst)
        ev = oracle_op(inst)
        assert ev.profit == oracle_op(inst, grid=True).profit
        rep = validate_walk(inst, ev.walk)
        assert rep.valid and rep.profit == ev.profit
