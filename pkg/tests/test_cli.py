import csv
import io
import json
import subprocess
import sys

import pytest

from wpmaxsat.cli import main
from wpmaxsat.generate import GeneratorSpec, generate, random_instance
from wpmaxsat.harness import CSV_HEADER, ComparisonTable, discover, run_benchmark
from wpmaxsat.solvers import ALGORITHMS, SolverConfig, solve
from wpmaxsat.wcnf import brute_force_optimum, read_wcnf, write_wcnf

from conftest import WORKED_DIR


def cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.splitlines(), out.err


def test_solve_linear_sat_example(capsys):
    code, lines, _ = cli(capsys, "solve", "--algorithm", "linear-sat", "--input", str(WORKED_DIR / "example1.wcnf"))
    assert code == 0
    o_lines = [l for l in lines if l.startswith("o ")]
    expected = iter(["o 40", "o 30", "o 20"])
    want = next(expected)
    for l in o_lines:  # the expected improvements appear in order (the engine may add more)
        if l == want:
            want = next(expected, None)
    assert want is None and o_lines[-1] == "o 20"
    assert lines[-2] == "s OPTIMUM FOUND"
    v = [int(x) for x in lines[-1].split()[1:]]
    assert [abs(x) for x in v] == list(range(1, 7))


def test_solve_verify_and_trace(capsys, tmp_path):
    trace = tmp_path / "t.jsonl"
    code, lines, _ = cli(capsys, "solve", "--algorithm", "wpm2", "--input", str(WORKED_DIR / "example1_unit.wcnf"),
                         "--verify", "--trace", str(trace))
    assert code == 0 and lines[-1] == "c verified against brute force"
    records = [json.loads(l) for l in trace.read_text().splitlines()]
    assert records[-1]["result"] == "SAT" and records[-1]["cost"] == 4


def test_solve_unsat_and_parse_error(capsys, tmp_path):
    bad = tmp_path / "bad.wcnf"
    bad.write_text("p wcnf 1 2 5\n5 1 0\n5 -1 0\n")
    code, lines, _ = cli(capsys, "solve", "--input", str(bad))
    assert code == 20 and lines[-1] == "s UNSATISFIABLE"
    bad.write_text("p wcnf 1 1 5\n2 3 0\n")
    code, lines, err = cli(capsys, "solve", "--input", str(bad))
    assert code == 2 and "line 2" in err
    code, _, err = cli(capsys, "solve", "--input", str(tmp_path / "missing.wcnf"))
    assert code == 2


def test_solve_rejects_weighted_fumalik(capsys):
    code, _, err = cli(capsys, "solve", "--algorithm", "fumalik", "--input", str(WORKED_DIR / "example1.wcnf"))
    assert code == 2 and "wpm1" in err


def test_solve_timeout_exit_code(tmp_path):
    spec = GeneratorSpec("wpmax3sat", 1, 200, 1200, 1, 50, 0.1, seed=3)
    (path,) = generate(spec, tmp_path)
    proc = subprocess.run([sys.executable, "-m", "wpmaxsat", "solve", "--algorithm", "wpm2", "--timeout", "1",
                           "--input", str(path)], capture_output=True, text=True, timeout=60)
    assert proc.returncode == 124
    assert proc.stdout.splitlines()[-1] == "s UNKNOWN"


def test_cli_matches_library(capsys):
    for algo in ("bin", "wmsu1-ror", "dcgbs"):
        code, lines, _ = cli(capsys, "solve", "--algorithm", algo, "--input", str(WORKED_DIR / "example1.wcnf"))
        lib = solve(read_wcnf(WORKED_DIR / "example1.wcnf"), SolverConfig(algorithm=algo))
        assert [l for l in lines if l.startswith("o ")][-1] == f"o {lib.cost}"


def test_generate_examples(tmp_path, capsys):
    code, lines, _ = cli(capsys, "generate", "--family", "wpmax2sat", "--count", "10", "--vars", "10",
                         "--clauses", "30", "--min-weight", "1", "--max-weight", "20", "--seed", "7",
                         "--out", str(tmp_path / "a"))
    assert code == 0 and len(lines) == 10
    cli(capsys, "generate", "--seed", "7", "--out", str(tmp_path / "b"))
    for name in sorted(p.name for p in (tmp_path / "a").iterdir()):
        a, b = (tmp_path / "a" / name).read_text(), (tmp_path / "b" / name).read_text()
        assert a == b
        inst = read_wcnf(tmp_path / "a" / name)
        assert inst.num_vars == 10 and len(inst.hard) + len(inst.soft) == 30
        assert all(1 <= w <= 20 for w in inst.weights)
        assert len(inst.hard) == 6


def test_generate_three_distinct_vars():
    spec = GeneratorSpec("wpmax3sat", 5, 6, 40, seed=1)
    for i in range(spec.count):
        inst = random_instance(spec, i)
        for c in list(inst.hard) + [c for c, _ in inst.soft]:
            assert len({abs(l) for l in c}) == 3


def test_generate_rejects_infeasible_spec(capsys, tmp_path):
    code, _, err = cli(capsys, "generate", "--family", "wpmax3sat", "--vars", "2", "--out", str(tmp_path))
    assert code == 2 and "width" in err


def test_generated_instances_all_agree(tmp_path):
    paths = generate(GeneratorSpec("wpmax2sat", 6, 10, 30, seed=11), tmp_path)
    paths += generate(GeneratorSpec("wpmax3sat", 6, 10, 30, seed=11), tmp_path)
    for p in paths:
        inst = read_wcnf(p)
        opt, _ = brute_force_optimum(inst)
        costs = {algo: solve(inst if algo != "fumalik" else inst.with_unit_weights(),
                             SolverConfig(algorithm=algo)).cost for algo in ALGORITHMS}
        unit_opt, _ = brute_force_optimum(inst.with_unit_weights())
        assert costs.pop("fumalik") == unit_opt
        assert set(costs.values()) == {opt}


@pytest.fixture
def bench_dir(tmp_path):
    generate(GeneratorSpec("wpmax2sat", 10, 10, 30, seed=7), tmp_path / "random2")
    return tmp_path


def parse_csv(text):
    return list(csv.reader(io.StringIO(text)))


def test_bench_two_rows_one_family(capsys, bench_dir):
    code, lines, _ = cli(capsys, "bench", "--dir", str(bench_dir), "--algorithms", "wpm1,wpm2",
                         "--timing", "off")
    rows = parse_csv("\n".join(lines))
    assert code == 0 and rows[0] == CSV_HEADER
    fam = [r for r in rows[1:] if r[1] != "Total"]
    assert [(r[0], r[1]) for r in fam] == [("wpm1", "random2"), ("wpm2", "random2")]
    assert all(r[2:5] == ["10", "10", "100.0"] and r[5] == "NA" for r in fam)


def test_bench_text_tables(capsys, bench_dir, tmp_path):
    out_csv = tmp_path / "s.csv"
    code, lines, _ = cli(capsys, "bench", "--dir", str(bench_dir), "--algorithms", "wpm1,bin",
                         "--csv", str(out_csv), "--runs-csv", str(tmp_path / "runs.csv"))
    text = "\n".join(lines)
    assert "Number of instances solved" in text and "Percentages of instances solved" in text
    assert "Time in seconds" in text and "100%" in text
    assert parse_csv(out_csv.read_text())[0] == CSV_HEADER
    runs = parse_csv((tmp_path / "runs.csv").read_text())
    assert len(runs) == 1 + 20


def test_bench_all_timeouts_give_zero_percent(capsys, tmp_path):
    generate(GeneratorSpec("wpmax3sat", 2, 200, 1200, 1, 50, 0.1, seed=5), tmp_path / "big")
    code, lines, _ = cli(capsys, "bench", "--dir", str(tmp_path), "--algorithms", "linear-unsat",
                         "--max-conflicts", "50", "--timing", "off")
    rows = parse_csv("\n".join(lines))
    assert rows[1] == ["linear-unsat", "big", "0", "2", "0.0", "NA"]


def test_bench_is_deterministic(capsys, bench_dir, tmp_path):
    write_wcnf(read_wcnf(WORKED_DIR / "example1.wcnf"), bench_dir / "worked" / "example1.wcnf") \
        if (bench_dir / "worked").mkdir() is None else None
    argv = ["bench", "--dir", str(bench_dir), "--algorithms", "linear-unsat,wpm1,cgbs", "--timing", "off",
            "--max-conflicts", "20000", "--seed", "3"]
    first = cli(capsys, *argv)[1]
    second = cli(capsys, *argv)[1]
    parallel = cli(capsys, *argv, "--jobs", "2")[1]
    assert first == second == parallel


def test_bench_counts_unreadable_files_as_errors(caplog, bench_dir):
    (bench_dir / "random2" / "broken.wcnf").write_text("p wcnf 1 1 5\n2 1\n")
    runs = run_benchmark(bench_dir, ["wpm1"])
    bad = [r for r in runs if r.path.endswith("broken.wcnf")]
    assert bad[0].status == "Error" and "line 2" in bad[0].message
    table = ComparisonTable(runs)
    assert table.cell("wpm1", "random2").solved == 10 and table.cell("wpm1", "random2").total == 11
    assert any("Error" in rec.message for rec in caplog.records)


def test_bench_unknown_algorithm(capsys, bench_dir):
    code, _, err = cli(capsys, "bench", "--dir", str(bench_dir), "--algorithms", "wpm9")
    assert code == 2 and "wpm9" in err


def test_discover_families(tmp_path):
    (tmp_path / "a").mkdir()
    (tmp_path / "a" / "x.wcnf").write_text("")
    (tmp_path / "y.wcnf").write_text("")
    assert [f for f, _ in discover(tmp_path)] == ["a", tmp_path.name]


def test_elapsed_respects_limit(tmp_path):
    generate(GeneratorSpec("wpmax3sat", 1, 200, 1200, 1, 50, 0.1, seed=9), tmp_path / "big")
    (run,) = run_benchmark(tmp_path, ["wpm1"], timeout=0.5)
    assert run.elapsed <= 0.5 + 2.0
