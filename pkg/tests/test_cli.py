import csv
import io
import json
import subprocess
import sys

import pytest

from infodistance import __version__, cli
from infodistance.chains import chain_to_json_dict, tripartite_chain
from infodistance.classical import ClassicalReport
from infodistance.distance import JointDistribution


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def run_json(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 0, err
    return json.loads(out), err


class TestEval:
    def test_tripartite(self, capsys, validate):
        rep, err = run_json(["eval", "tripartite_eq8.json"], capsys)
        validate(rep, "report")
        validate(rep["result"]["evaluation"], "evaluation")
        assert rep["result"]["evaluation"]["violation"] == pytest.approx(1.0, abs=1e-9)
        assert rep["seed"] == 0
        assert rep["tolerance"] == 1e-9
        assert rep["version"] == __version__
        assert rep["input_digest"].startswith("sha256:")
        assert "violation=1" in err

    def test_pm_mix(self, capsys):
        rep, _ = run_json(["eval", "pm_mix_half.json"], capsys)
        assert rep["result"]["evaluation"]["violation"] == 1.0

    def test_fig1a_distance(self, capsys):
        rep, _ = run_json(["eval", "classical_fig1a.json", "--distance", "A,B"], capsys)
        assert rep["result"]["distances"][0]["entropic"] == 0.0

    def test_csv(self, capsys):
        code, out, _ = run(["eval", "tripartite_eq8.json", "--format", "csv"], capsys)
        assert code == 0
        rows = list(csv.reader(io.StringIO(out, newline="")))
        assert rows[0] == ["scenario", "inequality", "lhs", "rhs", "violation"]
        assert out.endswith("\r\n")

    def test_byte_identical_reruns(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert cli.main(["eval", "multipartite_n6.json", "--output", str(a)]) == 0
        assert cli.main(["eval", "multipartite_n6.json", "--output", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_digest_tracks_input(self, capsys, tmp_path):
        rep1, _ = run_json(["eval", "tripartite_eq8.json"], capsys)
        path = tmp_path / "s.json"
        raw = json.loads(cli.resolve_scenario_path("tripartite_eq8.json").read_text())
        raw["binding"]["quantum"]["observables"]["A1"]["xy_angle"] = 0.1
        path.write_text(json.dumps(raw))
        rep2, _ = run_json(["eval", str(path)], capsys)
        assert rep1["input_digest"] != rep2["input_digest"]

    def test_missing_file_exit_2(self, capsys):
        code, _, err = run(["eval", "nope.json"], capsys)
        assert code == 2
        assert "error" in err

    def test_invalid_json_exit_2(self, capsys, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        assert run(["eval", str(p)], capsys)[0] == 2

    def test_bad_distribution_exit_2(self, capsys, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text(json.dumps({"binding": {"distribution": {"variables": ["A"], "probabilities": {"+": 0.7}}}}))
        assert run(["eval", str(p), "--distance", "A,A"], capsys)[0] == 2

    def test_numerical_failure_exit_3(self, capsys, tmp_path):
        obs = {lab: {"pauli": "".join("X" if q == i else "I" for q in range(3)), "phase": "+i"}
               for i, p in enumerate("ABC") for lab in (p + "1", p + "2")}
        raw = {"name": "nonhermitian", "inequality": "tripartite",
               "binding": {"quantum": {"state": {"ghz": 3}, "observables": obs}}}
        p = tmp_path / "nh.json"
        p.write_text(json.dumps(raw))
        code, _, err = run(["eval", str(p)], capsys)
        assert code == 3
        assert "numerical" in err


class TestSweep:
    def test_lambda(self, capsys):
        code, out, _ = run(["sweep", "pm_mix_half.json", "--param", "lambda",
                            "--start", "0", "--stop", "1", "--steps", "11"], capsys)
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out, newline="")))
        assert len(rows) == 11
        viol = [float(r["violation"]) for r in rows]
        assert max(range(11), key=viol.__getitem__) == 5
        assert viol[5] == 1.0

    def test_n(self, capsys):
        code, out, _ = run(["sweep", "multipartite_n4.json", "--param", "n",
                            "--start", "4", "--stop", "10", "--steps", "4"], capsys)
        rows = list(csv.DictReader(io.StringIO(out, newline="")))
        assert [r["n"] for r in rows] == ["4", "6", "8", "10"]
        for r in rows:
            assert float(r["violation"]) == pytest.approx(1.0, abs=1e-9)

    def test_empty_range(self, capsys):
        code, out, _ = run(["sweep", "pm_mix_half.json", "--param", "lambda",
                            "--start", "0", "--stop", "1", "--steps", "0"], capsys)
        assert code == 0
        assert out == "lambda,lhs,rhs,violation\r\n"

    def test_angle(self, capsys):
        code, out, _ = run(["sweep", "tripartite_eq8.json", "--param", "angle:A1",
                            "--start", "0", "--stop", "1", "--steps", "3"], capsys)
        assert code == 0
        assert out.splitlines()[0] == "angle:A1,lhs,rhs,violation"

    def test_jobs_do_not_change_output(self, capsys):
        args = ["sweep", "pm_mix_half.json", "--param", "lambda", "--start", "0", "--stop", "1", "--steps", "9"]
        _, serial, _ = run(args + ["--jobs", "1"], capsys)
        _, parallel, _ = run(args + ["--jobs", "4"], capsys)
        assert serial == parallel

    def test_jobs_env_default(self, monkeypatch):
        monkeypatch.setenv(cli.JOBS_ENV, "3")
        args = cli.build_parser().parse_args(["sweep", "x", "--param", "n", "--start", "4", "--stop", "4",
                                              "--steps", "1"])
        assert args.jobs == 3

    def test_json_format(self, capsys, validate):
        rep, _ = run_json(["sweep", "pm_mix_half.json", "--param", "lambda", "--start", "0",
                           "--stop", "1", "--steps", "3", "--format", "json"], capsys)
        validate(rep, "report")
        assert len(rep["result"]["rows"]) == 3

    def test_bad_param_exit_2(self, capsys):
        code, _, _ = run(["sweep", "pm_mix_half.json", "--param", "temperature",
                          "--start", "0", "--stop", "1", "--steps", "2"], capsys)
        assert code == 2


class TestOtherCommands:
    def test_optimize(self, capsys, validate):
        rep, _ = run_json(["optimize", "--inequality", "tripartite", "--grid", "32"], capsys)
        validate(rep, "report")
        validate(rep["result"], "optimizer")
        assert rep["result"]["objective"] >= 1 - 1e-6

    def test_certify_mermin(self, capsys, validate):
        rep, err = run_json(["certify", "mermin", "--vertex-only"], capsys)
        validate(rep["result"], "classical")
        assert rep["result"]["max_value"] == 2
        assert rep["result"]["vertices"] == 64
        assert "64 vertices" in err

    def test_certify_breach_exit_4(self, capsys, monkeypatch):
        def fake(ineq, *args):
            return ClassicalReport(ineq.name, 0.5, None, JointDistribution.uniform(["A"]), True, 2, 0, 0)
        monkeypatch.setattr(cli, "classical_max_violation", fake)
        code, _, err = run(["certify", "tripartite"], capsys)
        assert code == 4
        assert "invariant" in err

    def test_axioms(self, capsys, validate):
        rep, _ = run_json(["axioms", "--samples", "200", "--variables", "4", "--trials", "30"], capsys)
        validate(rep["result"], "axioms")
        for kind in ("entropic", "covariance"):
            assert rep["result"]["kinds"][kind]["passed"]
            assert rep["result"]["kinds"][kind]["worst_slack"] >= -1e-12

    def test_axioms_scenario(self, capsys):
        rep, _ = run_json(["axioms", "--scenario", "classical_fig2a.json", "--trials", "50"], capsys)
        assert rep["result"]["distributions"] == 1

    def test_axioms_bad_variables(self, capsys):
        assert run(["axioms", "--variables", "2"], capsys)[0] == 2

    def test_derive_pm(self, capsys, validate):
        allowed = ["A a alpha", "B b beta", "C c gamma", "A B C", "a b c", "alpha beta gamma"]
        argv = ["derive", "--target", "alpha beta gamma"]
        for a in allowed:
            argv += ["--allowed", a]
        rep, err = run_json(argv, capsys)
        validate(rep["result"]["chain"], "chain")
        assert rep["result"]["accepted"]
        assert len(rep["result"]["chain"]["leaves"]) == 5
        assert err.startswith("δ(alpha, beta, gamma) ≤ ")

    @pytest.mark.parametrize("preset", ["tripartite", "pm", "pm-synthesize"])
    def test_derive_presets(self, capsys, preset):
        rep, _ = run_json(["derive", "--preset", preset], capsys)
        assert rep["result"]["accepted"]

    def test_derive_multipartite(self, capsys):
        rep, _ = run_json(["derive", "--preset", "multipartite", "--n", "6"], capsys)
        assert len(rep["result"]["chain"]["leaves"]) == 7

    def test_derive_no_solution(self, capsys):
        rep, _ = run_json(["derive", "--target", "A1", "--allowed", "A2"], capsys)
        assert rep["result"] == {"found": False}

    def test_derive_chain_file(self, capsys, tmp_path):
        data = chain_to_json_dict(tripartite_chain())
        good = tmp_path / "good.json"
        good.write_text(json.dumps(data))
        assert run_json(["derive", "--chain", str(good)], capsys)[0]["result"]["accepted"]
        data["leaves"].pop()
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(data))
        rep, err = run_json(["derive", "--chain", str(bad)], capsys)
        assert not rep["result"]["accepted"]
        assert "rejected" in err

    def test_derive_structural_error_exit_2(self, capsys, tmp_path):
        data = {"target": ["A"], "steps": [{"u": ["B"], "v": ["C"], "w": ["B", "C"]}], "leaves": []}
        p = tmp_path / "c.json"
        p.write_text(json.dumps(data))
        assert run(["derive", "--chain", str(p)], capsys)[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "infodistance", "certify", "mermin", "--vertex-only"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["result"]["max_value"] == 2


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["--version"])
    assert info.value.code == 0
    assert __version__ in capsys.readouterr().out
