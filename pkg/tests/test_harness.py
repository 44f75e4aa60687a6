import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

scipy_optimize = pytest.importorskip("scipy.optimize")

from tightspan.core import Assignment, Instance, feasibility_factor
from tightspan.errors import ParseError
from tightspan.harness import cli
from tightspan.harness.bench import bench, general_report, restricted_report
from tightspan.harness.check import FAIL, PASS, SKIP, check_assignment
from tightspan.harness.driver import auto_drive_general, smallest_feasible_T
from tightspan.harness.generate import GeneratorSpec, default_seed, generate, legal_sets
from tightspan.harness.io import (
    dump_assignment, dump_instance, parse_assignment, parse_instance,
)
from tightspan.harness.report import COLUMNS, SolveReport, summary_row, to_csv
from tightspan.simplex import build_lp

P22 = Instance.from_rows([[2, 4], [3, 2]])


def write(tmp_path, name, inst):
    path = tmp_path / name
    path.write_text(dump_instance(inst))
    return path


# -- io ------------------------------------------------------------------

def test_parse_valid():
    inst = parse_instance(b'{"m":1,"n":1,"p":[[3]]}')
    assert inst == Instance(1, 1, ((3,),))


@pytest.mark.parametrize("text,row,column", [
    ('{"m":2,"n":1,"p":[[null,null]]}', 0, None),
    ('{"m":2,"n":1,"p":[[1,0]]}', 0, 1),
    ('{"m":2,"n":1,"p":[[1,1000001]]}', 0, 1),
    ('{"m":2,"n":1,"p":[[1,2.5]]}', 0, 1),
    ('{"m":2,"n":2,"p":[[1,1],[1]]}', 1, None),
    ('{"m":2,"n":2,"p":[[1,1]]}', None, None),
    ('{"m":0,"n":0,"p":[]}', None, None),
    ('{"m":1,"p":[]}', None, None),
    ('[1,2]', None, None),
    ('{"m":1,', None, None),
    (b'\xff\xfe', None, None),
])
def test_parse_errors(text, row, column):
    with pytest.raises(ParseError) as info:
        parse_instance(text)
    assert info.value.row == row and info.value.column == column


def test_round_trip():
    for seed in range(20):
        inst = generate(GeneratorSpec(m=4, n=7, pmax=30, k=2, seed=seed, restricted=seed % 2 == 0))
        assert parse_instance(dump_instance(inst)) == inst
    a = Assignment((0, 2, 1))
    assert dump_assignment(a) == "[1, 3, 2]"
    inst = Instance.from_rows([[1, 1, 1]] * 3)
    assert parse_assignment(dump_assignment(a), inst) == a
    with pytest.raises(ParseError):
        parse_assignment("[0, 1, 1]", inst)
    with pytest.raises(ParseError):
        parse_assignment("[1, 1]", inst)
    with pytest.raises(ParseError):
        parse_assignment('["a"]')


# -- generator -------------------------------------------------------------

def test_generator_deterministic():
    spec = GeneratorSpec(m=5, n=9, pmax=50, k=3, seed=42)
    assert generate(spec) == generate(spec)
    assert generate(spec) != generate(GeneratorSpec(m=5, n=9, pmax=50, k=3, seed=43))


def test_generator_feasibility_factor():
    for seed in range(1000):
        m = 2 + seed % 7
        k = 1 + seed % m
        spec = GeneratorSpec(m=m, n=1 + seed % 11, pmax=25, k=k, seed=seed, restricted=seed % 3 == 0)
        inst = generate(spec)
        assert feasibility_factor(inst, spec.pmax) == Fraction(k, m)
        assert [inst.machines_of(j) for j in range(inst.n)] == legal_sets(spec)


def test_generator_validation():
    with pytest.raises(ValueError):
        GeneratorSpec(m=3, n=2, pmax=5, k=4)
    with pytest.raises(ValueError):
        GeneratorSpec(m=0, n=2, pmax=5, k=1)


def test_default_seed(monkeypatch):
    monkeypatch.delenv("TIGHTSPAN_SEED", raising=False)
    assert default_seed() == 0
    monkeypatch.setenv("TIGHTSPAN_SEED", "17")
    assert default_seed() == 17


# -- auto driver -----------------------------------------------------------

def scipy_feasible(inst, T):
    try:
        model = build_lp(inst, T)
    except Exception:
        return False
    A_eq, b_eq, A_ub, b_ub = model.matrices()
    res = scipy_optimize.linprog(model.costs * 0, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                                 method="highs")
    return res.status == 0


def test_auto_drive_examples():
    drive = auto_drive_general(P22)
    assert (drive.T, drive.L) == (2, 2)
    one = Instance.from_rows([[3], [4], [5]])
    drive = auto_drive_general(one)
    assert drive.T == 12 and drive.L == 12


@pytest.mark.parametrize("seed", range(40))
def test_smallest_T_against_linear_scan(seed):
    inst = generate(GeneratorSpec(m=3, n=6, pmax=12, k=2, seed=seed))
    T, _, _ = smallest_feasible_T(inst)
    expected = next(t for t in range(1, 200) if scipy_feasible(inst, t))
    assert T == expected


# -- reports and bench -----------------------------------------------------

def test_csv_header_only_when_empty():
    text = to_csv([])
    assert text.strip() == ",".join(COLUMNS)
    assert bench([], ["general"]) == []


def test_summary_row():
    r = SolveReport("a", "general", 2, 2, makespan=5, certified_bound=Fraction(4))
    assert r.violation
    row = summary_row([r, SolveReport("b", "general", 1, 1, error="x")])
    assert row["error"] == "violations=1;errors=1;rows=2"


def test_bench_restricted_rows(tmp_path):
    instances = []
    for seed in range(10):
        inst = generate(GeneratorSpec(m=4, n=8, pmax=20, k=2, seed=seed, restricted=True))
        instances.append((f"r{seed}.json", inst))
    reports = bench(instances, ["restricted"])
    assert len(reports) == 10
    for r in reports:
        assert r.mode == "restricted" and not r.error and not r.violation
        assert r.makespan <= r.certified_bound
    rows = list(csv.DictReader(io.StringIO(to_csv(reports))))
    assert len(rows) == 11 and rows[-1]["instance"] == "__summary__"


def test_bench_oracle_columns():
    instances = [(f"g{s}.json", generate(GeneratorSpec(m=3, n=6, pmax=10, k=2, seed=s)))
                 for s in range(5)]
    reports = bench(instances, ["general", "oracle"], jobs=2)
    assert [r.mode for r in reports] == ["general", "oracle"] * 5
    assert [r.instance for r in reports[::2]] == [name for name, _ in instances]
    for g, o in zip(reports[::2], reports[1::2]):
        assert g.opt == o.opt and g.ratio_vs_opt == Fraction(g.makespan, o.opt)
        assert g.ratio_vs_opt <= 2


def test_bench_unrelated_in_restricted_mode():
    reports = bench([("x", P22)], ["restricted"])
    assert reports[0].error


def test_reports_record_bounds():
    rep, res = general_report(P22, "p22")
    assert rep.T == 2 and rep.bound_kind and not rep.violation
    inst = Instance.restricted([10, 2, 2, 2], [[0, 1, 2, 3]] * 4, 4)
    rep, _ = restricted_report(inst)
    assert rep.beats_33_17 and rep.q == Fraction(2, 5)


# -- check -----------------------------------------------------------------

def test_check_general_pass():
    checks = check_assignment(P22, Assignment((0, 1)))
    names = {c.name: c.status for c in checks}
    assert names["general-bound"] == PASS and names["small-jobs-sum"] == PASS


def test_check_detects_small_jobs_violation():
    inst = Instance.from_rows([[5, 9], [4, 9], [3, 9]])
    checks = check_assignment(inst, Assignment((0, 0, 0)), T=5, L=Fraction(5))
    status = {c.name: c.status for c in checks}
    assert status["small-jobs-sum"] == FAIL
    assert status["hall"] == SKIP


def test_check_restricted():
    inst = Instance.restricted([4, 6], [[0, 1], [0]], 2)
    status = {c.name: c.status for c in check_assignment(inst, Assignment((0, 0)))}
    assert status["fixed-point"] == FAIL
    status = {c.name: c.status for c in check_assignment(inst, Assignment((1, 0)))}
    assert status["fixed-point"] == PASS and status["restricted-bound"] == PASS


# -- CLI -------------------------------------------------------------------

def test_cli_gen_and_solve(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("TIGHTSPAN_SEED", "5")
    out = tmp_path / "i.json"
    assert cli.main(["gen", "--m", "3", "--n", "6", "--k", "2", "--pmax", "9", "--out", str(out)]) == 0
    assert parse_instance(out.read_text()) == generate(GeneratorSpec(3, 6, 9, 2, seed=5))
    assert cli.main(["solve", "general", "--instance", str(out), "--json"]) == 0
    line = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert line["makespan"] is not None and len(line["assignment"]) == 6


def test_cli_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"m":2,"n":1,"p":[[null,null]]}')
    assert cli.main(["solve", "general", "--instance", str(bad)]) == 3
    assert cli.main(["solve", "general", "--instance", str(tmp_path / "missing.json")]) == 3
    p22 = write(tmp_path, "p22.json", P22)
    assert cli.main(["solve", "general", "--instance", str(p22), "--T", "3", "--L", "39/20"]) == 4
    assert cli.main(["solve", "general", "--instance", str(p22), "--T", "3", "--L", "2"]) == 0
    assert cli.main(["solve", "restricted", "--instance", str(p22)]) == 3
    assert cli.main(["oracle", "--instance", str(p22)]) == 0
    assert "opt_makespan: 2" in capsys.readouterr().out
    assert cli.main(["oracle", "--instance", str(p22), "--T", "1", "--L", "1"]) == 4


def test_cli_check(tmp_path, capsys):
    inst = Instance.from_rows([[5, 9], [4, 9], [3, 9]])
    ipath = write(tmp_path, "i.json", inst)
    apath = tmp_path / "a.json"
    apath.write_text("[1, 1, 1]")
    assert cli.main(["check", "--instance", str(ipath), "--assignment", str(apath),
                     "--T", "5", "--L", "5"]) == 2
    assert "FAIL small-jobs-sum" in capsys.readouterr().out
    apath.write_text("[1, 1]")
    assert cli.main(["check", "--instance", str(ipath), "--assignment", str(apath)]) == 3


def test_cli_bench(tmp_path, capsys):
    d = tmp_path / "inst"
    d.mkdir()
    for s in range(3):
        write(d, f"r{s}.json", generate(GeneratorSpec(3, 5, 9, 2, seed=s, restricted=True)))
    out = tmp_path / "r.csv"
    assert cli.main(["bench", "--dir", str(d), "--modes", "general,restricted,oracle",
                     "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 10
    assert cli.main(["bench", "--dir", str(d), "--modes", "bogus"]) == 3
    empty = tmp_path / "empty"
    empty.mkdir()
    assert cli.main(["bench", "--dir", str(empty)]) == 0
    assert capsys.readouterr().out.strip() == ",".join(COLUMNS)


def test_module_entry_point(tmp_path):
    p22 = write(tmp_path, "p22.json", P22)
    proc = subprocess.run([sys.executable, "-m", "tightspan", "oracle", "--instance", str(p22)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "opt_makespan: 2" in proc.stdout


def test_pure_backend_forced_by_env(tmp_path):
    code = "from tightspan import kernels; print(kernels.BACKEND, kernels.compiled is None)"
    env = {**__import__("os").environ, "TIGHTSPAN_PURE": "1"}
    proc = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env)
    assert proc.stdout.split() == ["python", "True"]
