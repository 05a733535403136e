import json

import pytest

from orienteer.cli import main
from orienteer.model import cycle_instance, path_instance, serialize_instance


@pytest.fixture
def write(tmp_path):
    def _write(name, inst):
        p = tmp_path / name
        p.write_text(serialize_instance(inst))
        return str(p)
    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_trivial_path(write, capsys):
    p = write("p.json", path_instance([1], [1, 1], [[(0, 0)], [(1, 1)]], 1))
    code, out, _ = run(capsys, "solve", "--algorithm", "path-mtw", "--input", p)
    doc = json.loads(out)
    assert code == 0 and doc["profit"] == 2 and doc["algorithm"] == "path-mtw"


def test_solve_infeasible_cop(write, capsys):
    p = write("c.json", cycle_instance([1, 1, 1], [1, 1, 1], [[(0, 0)], [(0, 0)], [(2, 2)]], 5))
    code, out, _ = run(capsys, "solve", "-a", "cop-cycle", "-i", p)
    assert code == 1 and json.loads(out) == {"feasible": False}


def test_solve_long_window_is_input_error(write, capsys):
    p = write("c.json", cycle_instance([1, 1, 1], [1, 1, 1], [[(0, 5)], [], []], 9))
    code, _, err = run(capsys, "solve", "-a", "cycle-short", "-i", p)
    assert code == 2
    assert json.loads(err)["error"]["kind"] == "input"
    assert "window length >= C" in json.loads(err)["error"]["detail"]


def test_solve_resource_guard(write, capsys):
    p = write("c.json", cycle_instance([1, 1, 1], [1, 1, 1], [[(0, 9)]] * 3, 9))
    code, _, err = run(capsys, "solve", "-a", "cycle-fpt", "-i", p, "--cap", "0")
    assert code == 3 and json.loads(err)["error"]["kind"] == "resource"


def test_solve_missing_parameter(write, capsys):
    p = write("c.json", cycle_instance([1, 1, 1], [1, 1, 1], [[(0, 9)]] * 3, 9))
    code, _, err = run(capsys, "solve", "-a", "cycle-kround", "-i", p)
    assert code == 2 and "--k" in err


def test_malformed_input(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{")
    code, _, err = run(capsys, "solve", "-a", "path-mtw", "-i", str(p))
    assert code == 2 and "malformed JSON" in err


def test_unknown_algorithm_is_usage_error(capsys):
    assert run(capsys, "solve", "-a", "magic", "-i", "x")[0] == 2


def test_solver_walk_verifies(write, tmp_path, capsys):
    p = write("c.json", cycle_instance([1, 1, 1], [1, 1, 1], [[(0, 20)], [(4, 4)], [(6, 6)]], 20))
    sol = tmp_path / "sol.json"
    assert run(capsys, "solve", "-a", "cop-cycle", "-i", p, "-o", str(sol))[0] == 0
    code, out, _ = run(capsys, "verify", "-i", p, "-w", str(sol))
    assert code == 0 and json.loads(out)["valid"]


def test_verify_budget_exceeded(write, tmp_path, capsys):
    p = write("p.json", path_instance([1], [1, 1], None, 1))
    w = tmp_path / "w.json"
    w.write_text(json.dumps({"visits": [[0, 0], [0, 3], [1, 4]]}))
    code, out, _ = run(capsys, "verify", "-i", p, "-w", str(w))
    assert code == 1 and "budget exceeded" in json.loads(out)["violation"]


def test_partition_witness_round_trip(tmp_path, capsys):
    inst, wit = tmp_path / "i.json", tmp_path / "w.json"
    code = run(capsys, "gen", "3partition", "--items", "4,5,5,5,5,6", "-o", str(inst),
               "--witness", str(wit))[0]
    assert code == 0
    code, out, _ = run(capsys, "verify", "-i", str(inst), "-w", str(wit))
    assert code == 0 and json.loads(out)["profit"] == 33


def test_gen_random_then_oracle(tmp_path, capsys):
    inst = tmp_path / "r.json"
    assert run(capsys, "gen", "random", "--seed", "5", "--n", "5", "-o", str(inst))[0] == 0
    code, out, _ = run(capsys, "oracle", "-i", str(inst))
    assert code == 0
    code2, out2, _ = run(capsys, "solve", "-a", "path-mtw", "-i", str(inst))
    assert json.loads(out)["profit"] == json.loads(out2)["profit"]


def test_gen_knapsack_and_sat(tmp_path, capsys):
    code, out, _ = run(capsys, "gen", "knapsack", "--items", "[[2, 3], [4, 5]]", "--capacity", "4")
    assert code == 0 and json.loads(out)["budget"] == 4
    cnf = tmp_path / "f.cnf"
    cnf.write_text("p cnf 1 1\n1 1 1 0\n")
    wit = tmp_path / "w.json"
    code, out, _ = run(capsys, "gen", "3sat", "--cnf", str(cnf), "--witness", str(wit))
    assert code == 0 and json.loads(wit.read_text())["visits"]


def test_oracle_cop_infeasible(write, capsys):
    p = write("c.json", cycle_instance([1, 1, 1], [1, 1, 1], [[(0, 0)], [(0, 0)], [(2, 2)]], 5))
    code, out, _ = run(capsys, "oracle", "--cop", "-i", p)
    assert code == 1 and json.loads(out) == {"feasible": False}


def test_oracle_size_guard(write, capsys):
    p = write("p.json", path_instance([1] * 14, [1] * 15, None, 5))
    assert run(capsys, "oracle", "-i", p)[0] == 3


def test_compress(write, capsys):
    p = write("c.json", cycle_instance([1, 1], [1, 1], [[(0, 100)], [(200, 300)]], 300))
    code, out, _ = run(capsys, "compress", "-i", p)
    doc = json.loads(out)
    assert code == 0 and doc["instance"]["budget"] == 12
    assert doc["time_map"]["compressed"] == [0, 4, 8, 12]


def test_batch_mode(write, tmp_path, capsys):
    write("a.json", path_instance([1], [1, 1], None, 1))
    write("b.json", cycle_instance([1, 1], [1, 1], None, 3))
    code, out, _ = run(capsys, "solve", "-a", "path-mtw", "--input-dir", str(tmp_path))
    rows = [json.loads(line) for line in out.splitlines()]
    assert [r["exit"] for r in rows] == [0, 2] and code == 2
    assert rows[0]["solution"]["profit"] == 2


def test_bench_csv(capsys):
    code, out, _ = run(capsys, "bench", "--suite", "envelope", "--sizes", "64,128",
                       "--repetitions", "1")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "size,median_ns,ratio_to_previous"
    assert len(lines) == 3 and lines[1].startswith("64,")


def test_bench_bad_repetitions(capsys):
    code, _, err = run(capsys, "bench", "--suite", "path-mtw", "--repetitions", "0")
    assert code == 2 and "repetitions" in err


def test_bench_min_statistic(capsys):
    code, out, _ = run(capsys, "bench", "--suite", "cop-cycle", "--sizes", "8,16",
                       "--repetitions", "2", "--stat", "min")
    assert code == 0 and out.splitlines()[0] == "size,min_ns,ratio_to_previous"
