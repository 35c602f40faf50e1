import json
import os
import subprocess
from pathlib import Path

import pytest

import ftminmax as fm

ROOT = Path(__file__).resolve().parents[2]
SCENARIOS = ROOT / "scenarios"
CLI = os.environ.get("FTMM_CLI")


def cones(*centers, offset=0.0):
    return [fm.CostFunction.cone([c], 1.0, offset) for c in centers]


def cone_ensemble():
    return fm.Ensemble(cones(0.0, 1.0, -1.0), 1, fm.Hypercube([-2.0], [2.0]), True)


def test_rank_helpers():
    assert fm.rank_k([3, 1, 2], 1) == 3
    assert fm.rank_k([5, 5, 1], 2) == 5
    assert fm.rank_k([4, 9, 1, 7], 3) == 4
    assert fm.rank_k_index([5, 1, 5], 2) == 2
    with pytest.raises(ValueError):
        fm.rank_k([1.0], 2)


def test_objectives_and_exact_solver():
    ens = cone_ensemble()
    truth = fm.GroundTruth(3, 1, [2])
    assert fm.eval_hf(ens, [0.0]) == 1.0
    assert fm.eval_hf(ens, [0.5]) == 0.5
    assert fm.eval_g0(ens, truth, [0.5]) == 0.5
    res = fm.minimize_hf(ens, [4001])
    assert res.x_hat == [-0.5]
    assert res.v_hat == 0.5
    assert res.error_bound == pytest.approx(5e-4)
    assert res == fm.minimize_rank_r(ens, [0, 1, 2], 2, [4001])
    assert all(r.status == "pass" for r in fm.check_claim1(ens, truth, [4001]))


def test_refine_and_guarantee():
    honest = cones(0.0, 1.0)
    ens = fm.Ensemble(honest + [fm.make_above_all_adversary(honest, 0.5)], 1, fm.Hypercube([-2.0], [2.0]), True)
    truth = fm.GroundTruth(3, 1, [2])
    cfg = fm.ApproxConfig(epsilon=0.1, lipschitz=1.0)
    res = fm.refine(ens, cfg)
    assert res.terminated_by == "criterion"
    assert res.value <= 0.5 / 0.9
    assert len(res.partition) == res.cell_count
    records = {r.name: r for r in fm.check_approx_guarantee(ens, truth, res, cfg, [4001])}
    assert records["approx.guarantee"].status == "pass"
    assert records["approx.guarantee"].rhs == pytest.approx(0.5 / 0.9)


def test_adversaries_and_observations():
    assert fm.make_above_all_adversary(cones(0.0, 1.0), 1.0)([0.0]) == pytest.approx(2.0)
    dom = fm.Hypercube([-2.0], [2.0])
    assert fm.make_below_all_adversary(cones(0.0, 1.0, offset=2.0), 1.0, dom)([0.0]) == pytest.approx(1.0)
    recs = {r.name: r for r in fm.check_obs3(cones(0.0, 1.0, offset=1.0), 1, 10.0, 0.5, dom, 1, [4001])}
    assert recs["obs3.e2_unbounded"].lhs == pytest.approx(12.0)
    assert all(r.status == "pass" for r in recs.values())
    with pytest.raises(ValueError):
        fm.check_obs3(cones(0.0, 1.0), 1, 10.0, 0.5, dom, 2)


def test_lipschitz_self_test():
    ens = cone_ensemble()
    truth = fm.GroundTruth(3, 1, [2])
    assert fm.check_lipschitz_g0(ens, truth, 10000).status == "pass"
    assert fm.check_lipschitz_g0(ens, truth, 10000, lipschitz=0.5).status == "fail"


def test_python_callable_as_cost_function():
    q = fm.CostFunction.custom(lambda x: (x[0] - 0.25) ** 2, 1)
    ens = fm.Ensemble([q], 0, fm.Hypercube([-1.0], [1.0]))
    res = fm.minimize_hf(ens, [201], threads=2)
    assert res.x_hat[0] == pytest.approx(0.25, abs=0.01)
    assert res.error_bound is None


def test_generate_and_run_scenario_text():
    text = fm.generate_scenario_text(1, "cones-1d")
    assert text == fm.generate_scenario_text(1, "cones-1d")
    ens, truth = fm.expand_scenario(text)
    assert ens.n >= 2 * ens.f + 1
    out = fm.run_scenario(text, stages=["exact", "verify"])
    assert out["exit_code"] == 0
    report = json.loads(out["report"])
    assert "generated_at" not in report
    assert report["summary"]["fail"] == 0


def test_validation_error_is_line_anchored():
    bad = (SCENARIOS / "invalid-n4-f2.yaml").read_text()
    with pytest.raises(ValueError, match="line 4"):
        fm.expand_scenario(bad)


@pytest.mark.skipif(CLI is None, reason="FTMM_CLI not set")
class TestCli:
    def run(self, *args):
        return subprocess.run([CLI, *map(str, args)], capture_output=True, text=True)

    def test_cone_scenario(self, tmp_path):
        p = self.run("run", SCENARIOS / "cone-1d.yaml", "--out", tmp_path, "--no-timestamp")
        assert p.returncode == 0, p.stdout + p.stderr
        report = json.loads((tmp_path / "cone-1d.json").read_text())
        assert report["exact"]["v_hat"] == 0.5
        checks = {c["name"]: c for c in report["checks"]}
        assert all(checks[f"claim1.{k}"]["status"] == "pass" for k in ("upper", "middle", "lower"))
        curve = (tmp_path / "cone-1d.curve.csv").read_text().splitlines()
        assert curve[0] == "x,Q1,Q2,Q3,h_f,g_0,g_f"
        assert len(curve) == 402

    def test_sweep(self, tmp_path):
        p = self.run("run", SCENARIOS / "cone-above-all-1d.yaml", "--out", tmp_path, "--no-timestamp",
                     "--stages", "exact,approx,verify", "--sweep", "epsilon=0.05:0.5:0.05")
        assert p.returncode == 0, p.stdout + p.stderr
        approx = json.loads((tmp_path / "cone-above-all-1d.json").read_text())["approx"]
        assert len(approx) == 10
        for rec in approx:
            assert rec["bound_factor"] == pytest.approx(1 / (1 - rec["epsilon"]))

    def test_reports_are_reproducible(self, tmp_path):
        a = self.run("run", SCENARIOS / "quadratics-2d.yaml", "--out", tmp_path / "a", "--no-timestamp")
        b = self.run("run", SCENARIOS / "quadratics-2d.yaml", "--out", tmp_path / "b", "--no-timestamp")
        assert a.returncode == b.returncode == 0
        assert (tmp_path / "a" / "quadratics-2d.json").read_bytes() == (tmp_path / "b" / "quadratics-2d.json").read_bytes()
        c = self.run("run", SCENARIOS / "quadratics-2d.yaml", "--out", tmp_path / "c")
        assert "generated_at" in (tmp_path / "c" / "quadratics-2d.json").read_text()

    def test_exit_codes(self, tmp_path):
        p = self.run("run", SCENARIOS / "invalid-n4-f2.yaml", "--out", tmp_path)
        assert p.returncode == 2
        assert "line 4" in p.stderr
        assert self.run("run").returncode == 2
        assert self.run("run", SCENARIOS / "cone-1d.yaml", "--stages", "exact,bogus").returncode == 2
        assert self.run("run", SCENARIOS / "cone-1d.yaml", "--epsilon", "1.5").returncode == 2
        assert self.run("run", SCENARIOS / "cone-1d.yaml", "--sweep", "lipschitz=1:2:1").returncode == 2
        tight = tmp_path / "tight.yaml"
        tight.write_text((SCENARIOS / "cone-1d.yaml").read_text().replace("resolution: 4001",
                                                                          "resolution: 4001\n  budget: 100"))
        assert self.run("run", tight, "--out", tmp_path, "--stages", "exact").returncode == 3

    def test_check_failure_exit_code(self, tmp_path):
        # A declared L below the honest bound fails approx.lipschitz_valid.
        low = tmp_path / "low.yaml"
        low.write_text((SCENARIOS / "cone-1d.yaml").read_text().replace("lipschitz: 1", "lipschitz: 0.5"))
        p = self.run("run", low, "--out", tmp_path, "--no-timestamp")
        assert p.returncode == 1
        assert "FAIL" in p.stdout

    def test_generate(self, tmp_path):
        a, b = tmp_path / "a.yaml", tmp_path / "b.yaml"
        assert self.run("generate", "--seed", 1, "--template", "cones-1d", "--out", a).returncode == 0
        assert self.run("generate", "--seed", 1, "--template", "cones-1d", "--out", b).returncode == 0
        assert a.read_bytes() == b.read_bytes()
        assert self.run("run", a, "--out", tmp_path, "--no-timestamp").returncode == 0
        assert self.run("generate", "--seed", 1, "--template", "blobs-1d", "--out", a).returncode == 2
