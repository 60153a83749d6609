import json
import math
import os

import numpy as np
import pytest

from vecbandit.cli import main
from vecbandit.harness import (
    BAI_HEADER,
    REGRET_HEADER,
    ExperimentConfig,
    InstanceFormatError,
    fit_slope,
    gen_lb_instance,
    gen_table1,
    mean_regret_by_T,
    parse_instance,
    read_regret_csv,
    run_experiment,
    serialize_instance,
    write_rows,
)
from vecbandit.model import Family


class TestInstanceIO:
    def test_table1_roundtrip(self):
        doc = json.dumps({"family": "bernoulli", "means": [[1, 0, 0.5], [0, 1, 0.5]]})
        model = parse_instance(doc)
        assert (model.d, model.K) == (2, 3)
        again = parse_instance(serialize_instance(model))
        assert again.family is model.family
        assert np.array_equal(again.means, model.means)
        assert serialize_instance(again) == serialize_instance(model)

    def test_minimal(self):
        model = parse_instance('{"family": "gaussian", "means": [[0.5]]}')
        assert (model.d, model.K) == (1, 1)

    def test_out_of_range(self):
        with pytest.raises(InstanceFormatError):
            parse_instance('{"family": "gaussian", "means": [[1.2]]}')

    def test_malformed_json(self):
        with pytest.raises(InstanceFormatError):
            parse_instance("{not json")

    def test_ragged_rows(self):
        with pytest.raises(InstanceFormatError):
            parse_instance('{"family": "gaussian", "means": [[0.1, 0.2], [0.3]]}')

    def test_unknown_family(self):
        with pytest.raises(InstanceFormatError):
            parse_instance('{"family": "poisson", "means": [[0.5]]}')


class TestGenerators:
    def test_lb_means(self):
        model = gen_lb_instance(0.1)
        assert model.family is Family.GAUSSIAN
        assert np.allclose(model.means[:, 2], [0.3625, 0.3875])
        assert np.allclose(model.means[:, 0], [0.25, 0.75])

    def test_lb_alt_breaks_tie(self):
        m = gen_lb_instance(0.2, alt=True)
        assert np.allclose(m.means[:, 0], [0.2, 0.75])

    def test_epsilon_zero_limit(self):
        m = gen_lb_instance(1e-9)
        assert np.allclose(m.means[:, 2], m.means[:, 3], atol=1e-8)

    def test_epsilon_range(self):
        with pytest.raises(ValueError):
            gen_lb_instance(0.0)
        with pytest.raises(ValueError):
            gen_lb_instance(1.0)


class TestRunExperiment:
    def test_row_count(self, table1):
        cfg = ExperimentConfig(
            model=table1, algo="cp", horizons=(200,), replications=2, base_seed=1
        )
        rows = run_experiment(cfg)
        assert len(rows) == 2
        assert [r["run_id"] for r in rows] == [0, 1]

    def test_deterministic_apart_from_runtime(self, table1, tmp_path, monkeypatch):
        cfg = ExperimentConfig(
            model=table1, algo="cg", horizons=(200, 400), replications=2, base_seed=9
        )
        r1 = run_experiment(cfg)
        monkeypatch.setenv("VECBANDIT_THREADS", "1")
        r2 = run_experiment(cfg)
        for a, b in zip(r1, r2):
            for key in ("run_id", "algo", "T", "seed", "regret", "clamped_N"):
                assert a[key] == b[key]

    def test_csv_schema(self, table1, tmp_path):
        cfg = ExperimentConfig(
            model=table1, algo="cp", horizons=(100,), replications=2, base_seed=3
        )
        rows = run_experiment(cfg)
        path = tmp_path / "regret.csv"
        write_rows(rows, REGRET_HEADER, path)
        text = path.read_text().splitlines()
        assert text[0] == ",".join(REGRET_HEADER)
        parsed = read_regret_csv(path)
        assert [r["run_id"] for r in parsed] == [0, 1]

    def test_bai_rows(self, tmp_path):
        model = gen_lb_instance(0.3, alt=True)
        cfg = ExperimentConfig(
            model=model,
            algo="tas",
            deltas=(0.3,),
            replications=2,
            base_seed=4,
            max_rounds=10**5,
            oracle_cadence=50,
        )
        rows = run_experiment(cfg)
        assert len(rows) == 2
        for r in rows:
            assert r["tau"] >= model.K
            assert r["answer"] in (1, 2, 3, 4)  # 1-based
        path = tmp_path / "bai.csv"
        write_rows(rows, BAI_HEADER, path)
        assert path.read_text().splitlines()[0] == ",".join(BAI_HEADER)

    def test_invalid_config(self, table1):
        with pytest.raises(ValueError):
            ExperimentConfig(model=table1, algo="cp", horizons=(200, 100), replications=1)
        with pytest.raises(ValueError):
            ExperimentConfig(model=table1, algo="nope", horizons=(100,))
        with pytest.raises(ValueError):
            ExperimentConfig(model=table1, algo="cp", horizons=())


class TestFitSlope:
    def test_exact_power_law(self):
        pts = [(T, T ** (2 / 3)) for T in (100, 1000, 10000, 100000)]
        fit = fit_slope(pts)
        assert fit.slope == pytest.approx(2 / 3, abs=1e-9)
        assert fit.r2 == pytest.approx(1.0, abs=1e-12)

    def test_linear(self):
        pts = [(T, 3.5 * T) for T in (10, 100, 1000)]
        assert fit_slope(pts).slope == pytest.approx(1.0, abs=1e-9)

    def test_nonpositive_excluded(self):
        pts = [(10, 5.0), (100, 20.0), (1000, 80.0), (5000, -1.0)]
        fit = fit_slope(pts)
        assert fit.excluded == 1

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            fit_slope([(10, 1.0), (100, -1.0), (1000, -2.0)])


class TestCli:
    def test_gen_weights_chartime(self, tmp_path, capsys):
        inst = tmp_path / "t1.json"
        assert main(["gen", "--kind", "table1", "--out", str(inst)]) == 0
        assert main(["weights", "--instance", str(inst), "--grid-check", "0.01"]) == 0
        out = capsys.readouterr().out
        assert "value 0.5" in out
        assert "support 1 2" in out
        assert "grid_value" in out

    def test_gen_lb_and_regret_and_slope(self, tmp_path, capsys):
        inst = tmp_path / "lb.json"
        assert main(["gen", "--kind", "lb", "--epsilon", "0.1", "--out", str(inst)]) == 0
        outdir = tmp_path / "runs"
        rc = main(
            [
                "regret", "--algo", "cp", "--instance", str(inst),
                "--horizons", "256,512,1024", "--reps", "3",
                "--seed", "11", "--out", str(outdir),
            ]
        )
        assert rc == 0
        csv_path = outdir / "regret_cp.csv"
        assert csv_path.exists()
        assert main(["slope", "--in", str(csv_path)]) == 0
        out = capsys.readouterr().out
        assert "slope=" in out

    def test_bai_subcommand(self, tmp_path, capsys):
        inst = tmp_path / "lba.json"
        assert main(["gen", "--kind", "lb-alt", "--epsilon", "0.3", "--out", str(inst)]) == 0
        outdir = tmp_path / "bai"
        rc = main(
            [
                "bai", "--algo", "tas", "--instance", str(inst),
                "--delta", "0.3", "--reps", "2", "--seed", "2",
                "--out", str(outdir), "--max-rounds", "100000",
                "--cadence", "50",
            ]
        )
        assert rc == 0
        lines = (outdir / "bai_tas.csv").read_text().splitlines()
        assert lines[0] == ",".join(BAI_HEADER)
        assert len(lines) == 3

    def test_chartime(self, tmp_path, capsys):
        inst = tmp_path / "lba.json"
        main(["gen", "--kind", "lb-alt", "--epsilon", "0.3", "--out", str(inst)])
        assert main(["chartime", "--instance", str(inst)]) == 0
        out = capsys.readouterr().out
        assert "T_star" in out and "omega_star" in out

    def test_threads_env_cap(self, table1, monkeypatch):
        monkeypatch.setenv("VECBANDIT_THREADS", "1")
        cfg = ExperimentConfig(
            model=table1, algo="cp", horizons=(100,), replications=3, base_seed=5
        )
        rows = run_experiment(cfg)
        assert len(rows) == 3


class TestMeanRegret:
    def test_grouping(self):
        rows = [
            {"algo": "cp", "T": 10, "regret": 1.0},
            {"algo": "cp", "T": 10, "regret": 3.0},
            {"algo": "cp", "T": 20, "regret": 5.0},
        ]
        means = mean_regret_by_T(rows)
        assert means[("cp", 10)][0] == pytest.approx(2.0)
        assert means[("cp", 20)][0] == pytest.approx(5.0)
