import json
import subprocess
import sys

import jsonschema
import numpy as np
import pytest

from adspec import tables
from adspec.cli import main
from adspec.errors import InvalidInputError, InvalidParameterError
from adspec.harness import (
    Experiment,
    MCEstimate,
    ReplicationError,
    cell_seed,
    gate_standard_error,
    load_csv,
    read_columns,
    rejection_counts,
    rejection_probability,
    replication_seed,
    reproduce_table,
    write_csv,
)
from adspec.models import ModelSpec
from adspec.spectral import BivariateSeries

RESULT_SCHEMA = {
    "type": "object",
    "required": ["statistic", "critical_value", "p_value", "reject", "kind",
                 "T", "L", "B", "M", "alpha"],
    "additionalProperties": False,
    "properties": {
        "statistic": {"type": "number"},
        "critical_value": {"type": "number", "exclusiveMinimum": 0},
        "p_value": {"type": "number", "minimum": 0, "maximum": 1},
        "reject": {"type": "boolean"},
        "kind": {"enum": ["stationary", "blocked"]},
        "T": {"type": "integer", "minimum": 8},
        "L": {"type": "integer", "minimum": 2},
        "B": {"type": ["integer", "null"], "minimum": 1},
        "M": {"type": ["integer", "null"], "minimum": 8},
        "alpha": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "block_statistics": {"type": "array", "items": {"type": "number"}},
    },
}


def write_pair(path, x1, x2, header=True):
    with open(path, "w") as fh:
        if header:
            fh.write("x1,x2\n")
        for a, b in zip(x1, x2):
            fh.write(f"{float(a)!r},{float(b)!r}\n")


# --------------------------------------------------------------------------
# CSV


class TestCSV:
    def test_header_skipped(self, tmp_path):
        f = tmp_path / "d.csv"
        write_pair(f, np.arange(10.0), np.ones(10))
        s = load_csv(f)
        assert s.T == 10 and s.x1[3] == 3.0

    def test_no_header(self, tmp_path):
        f = tmp_path / "d.csv"
        write_pair(f, np.arange(10.0), np.ones(10), header=False)
        assert load_csv(f).T == 10

    def test_two_rows_then_rejected(self, tmp_path):
        f = tmp_path / "d.csv"
        write_pair(f, [1.0, 2.0], [3.0, 4.0])
        x1, x2 = read_columns(f)
        assert x1.size == 2 and x2.size == 2
        with pytest.raises(InvalidInputError, match="at least 8"):
            load_csv(f)

    def test_inf_names_line(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("x1,x2\n1,2\n3,inf\n")
        with pytest.raises(InvalidInputError, match="line 3"):
            read_columns(f)

    def test_nan(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("1,2\nnan,2\n")
        with pytest.raises(InvalidInputError, match="line 2"):
            read_columns(f)

    def test_parse_error(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("x1,x2\n1,2\n1,abc\n")
        with pytest.raises(InvalidInputError, match="line 3"):
            read_columns(f)

    def test_column_count(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("1,2\n1,2,3\n")
        with pytest.raises(InvalidInputError, match="line 2: expected 2 columns"):
            read_columns(f)

    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(0)
        s = BivariateSeries(rng.standard_normal(50), rng.standard_normal(50))
        f = tmp_path / "o.csv"
        write_csv(f, s)
        back = load_csv(f)
        assert np.array_equal(back.x1, s.x1) and np.array_equal(back.x2, s.x2)


# --------------------------------------------------------------------------
# Monte Carlo


class TestExperiment:
    def test_validation(self):
        spec = ModelSpec("A", 128)
        with pytest.raises(InvalidParameterError):
            Experiment(spec, replications=99)
        with pytest.raises(InvalidParameterError):
            Experiment(spec, alphas=(0.05, 1.0))
        with pytest.raises(InvalidParameterError):
            Experiment(spec, test_kind="other")

    def test_estimates(self):
        exp = Experiment(ModelSpec("A", 128, 0.5), replications=200, base_seed=3)
        est = rejection_probability(exp, workers=1)
        assert [e.alpha for e in est] == list(tables.ALPHAS)
        for e in est:
            assert isinstance(e, MCEstimate)
            assert e.rejection_rate * e.replications == pytest.approx(e.rejections)
            assert e.standard_error == pytest.approx(
                np.sqrt(e.rejection_rate * (1 - e.rejection_rate) / 200))
            assert e.base_seed == 3 and e.config["model"] == "A"
        counts = [e.rejections for e in est]
        assert counts == sorted(counts)

    def test_deterministic_and_parallel(self):
        exp = Experiment(ModelSpec("J", 256), replications=120, test_kind="blocked", base_seed=9)
        serial = rejection_counts(exp, workers=1)
        assert np.array_equal(serial, rejection_counts(exp, workers=1))
        assert np.array_equal(serial, rejection_counts(exp, workers=2))

    def test_seed_streams_distinct(self):
        a = np.random.default_rng(replication_seed(0, 1)).standard_normal(4)
        b = np.random.default_rng(replication_seed(0, 2)).standard_normal(4)
        c = np.random.default_rng(replication_seed(1, 1)).standard_normal(4)
        assert not np.array_equal(a, b) and not np.array_equal(a, c)
        seeds = {cell_seed(0, t, i) for t in range(1, 5) for i in range(24)}
        assert len(seeds) == 96

    def test_replication_error_index(self, monkeypatch):
        import adspec.harness as h
        from adspec.errors import DegenerateSpectrumError

        real = h.run_test

        def flaky(data, config, kind, calls=[0]):
            calls[0] += 1
            if calls[0] == 5:
                raise DegenerateSpectrumError("boom")
            return real(data, config, kind)
        monkeypatch.setattr(h, "run_test", flaky)
        with pytest.raises(ReplicationError) as info:
            rejection_counts(Experiment(ModelSpec("A", 128), replications=100), workers=1)
        assert info.value.index == 4

    def test_channel_swap_robustness(self):
        # swapping channels changes statistics but not the rejection rate
        from adspec.testkit import run_test
        spec = ModelSpec("F", 512, 0.5)
        from adspec.models import simulate
        a = b = 0
        for r in range(300):
            d = simulate(spec, replication_seed(1, r))
            a += run_test(d).reject
            b += run_test(d.swapped()).reject
        se = np.sqrt(2 * 0.6 * 0.4 / 300)
        assert abs(a - b) / 300 <= 3 * se

    def test_gate_standard_error(self):
        assert gate_standard_error(0.118, 1000) * 3 == pytest.approx(0.0306, abs=1e-3)
        assert gate_standard_error(0.260, 1000) * 3 == pytest.approx(0.0416, abs=1e-3)
        assert gate_standard_error(1.0, 1000) > 0


@pytest.mark.parametrize("model,T,rho,kind,alpha_index,published", [
    ("B", 512, 0.5, "stationary", 1, 0.118),
    ("H", 1024, 0.1, "stationary", 0, 0.260),
])
def test_published_examples(model, T, rho, kind, alpha_index, published):
    est = rejection_probability(Experiment(ModelSpec(model, T, rho), replications=1000,
                                           test_kind=kind, base_seed=2024))[alpha_index]
    assert abs(est.rejection_rate - published) <= 3 * gate_standard_error(published, 1000)


def test_model_Q_blocked_power():
    est = rejection_probability(Experiment(ModelSpec("Q", 1024), replications=200,
                                           test_kind="blocked", base_seed=1))[0]
    assert est.rejection_rate >= 0.98


class TestReproduceTable:
    def test_block_column_and_determinism(self):
        a = reproduce_table(3, replications=100, base_seed=5)
        b = reproduce_table(3, replications=100, base_seed=5)
        assert a.format() == b.format()
        assert a.rows() == b.rows()
        blocks = {c.T: c.B for c in a.cells}
        assert blocks == {128: 2, 256: 3, 512: 4, 1024: 6}
        assert len(a.cells) == 72
        for c in a.cells:
            assert c.estimate.replications == 100
            assert isinstance(c.estimate.rejections, int)
        assert " B " in a.format().splitlines()[2]

    def test_unknown_table(self):
        with pytest.raises(InvalidParameterError):
            reproduce_table(5, replications=100)

    def test_transcription(self):
        assert tables.TABLE_1["B"][0.5][512][1] == 0.118
        assert tables.TABLE_2["H"][0.1][1024][0] == 0.260
        assert tables.TABLE_4["Q"][1024][0] == 0.999
        assert sum(1 for _ in tables.cells(1)) == 40
        assert sum(1 for _ in tables.cells(2)) == 32
        assert sum(1 for _ in tables.cells(3)) == 24
        assert sum(1 for _ in tables.cells(4)) == 24


# --------------------------------------------------------------------------
# CLI


@pytest.fixture
def null_csv(tmp_path):
    f = tmp_path / "null.csv"
    rng = np.random.default_rng(77)
    x = rng.standard_normal(512)
    write_pair(f, x, rng.standard_normal(512))
    return f


class TestCLI:
    def test_test_json_schema(self, null_csv, capsys):
        code = main(["test", str(null_csv), "--json"])
        out = json.loads(capsys.readouterr().out)
        jsonschema.validate(out, RESULT_SCHEMA)
        assert code == (1 if out["reject"] else 0)
        assert out["kind"] == "stationary" and "block_statistics" not in out

    def test_blocked_json_schema(self, null_csv, capsys):
        main(["test", str(null_csv), "--json", "--mode", "blocked"])
        out = json.loads(capsys.readouterr().out)
        jsonschema.validate(out, RESULT_SCHEMA)
        assert out["B"] == 4 and len(out["block_statistics"]) == 4
        assert out["statistic"] == max(out["block_statistics"])

    def test_json_floats_round_trip(self, null_csv, capsys):
        from adspec.testkit import stationary_test
        main(["test", str(null_csv), "--json"])
        out = json.loads(capsys.readouterr().out)
        ref = stationary_test(load_csv(null_csv))
        assert out["statistic"] == ref.statistic
        assert out["p_value"] == ref.p_value

    def test_identical_channels_calibration(self, tmp_path, capsys):
        # channel equality in distribution: copies driven by one innovation path
        rejections = 0
        for seed in range(200):
            f = tmp_path / f"c{seed}.csv"
            assert main(["simulate", "--model", "A", "--T", "256", "--rho", "0.5",
                         "--seed", str(seed), "--out", str(f)]) == 0
            code = main(["test", str(f), "--json"])
            out = json.loads(capsys.readouterr().out)
            assert code == int(out["reject"])
            rejections += out["reject"]
        assert abs(rejections / 200 - 0.05) <= 3 * np.sqrt(0.05 * 0.95 / 200)

    def test_reject_exit_code(self, tmp_path, capsys):
        f = tmp_path / "alt.csv"
        rng = np.random.default_rng(0)
        write_pair(f, rng.standard_normal(1024), 3 * rng.standard_normal(1024))
        assert main(["test", str(f)]) == 1
        assert "reject" in capsys.readouterr().out

    def test_error_exit_code(self, tmp_path, capsys):
        f = tmp_path / "bad.csv"
        f.write_text("1,2\n3,inf\n")
        assert main(["test", str(f)]) == 2
        assert "line 2" in capsys.readouterr().err
        assert main(["test", str(tmp_path / "missing.csv")]) == 2

    def test_unknown_flag(self, null_csv, capsys):
        assert main(["test", str(null_csv), "--bogus"]) == 2
        assert "usage" in capsys.readouterr().err
        assert main([]) == 2

    def test_critical_values(self, capsys):
        assert main(["critical-values", "--alpha", "0.05", "--B", "1"]) == 0
        out = capsys.readouterr().out.splitlines()
        alpha, B, kappa = out[1].split()
        assert float(alpha) == 0.05 and int(B) == 1
        assert float(kappa) == pytest.approx(2.4924, abs=1e-3)

    def test_simulate_deterministic(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["simulate", "--model", "A", "--T", "128", "--rho", "0.5", "--seed", "7"]
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        assert load_csv(a).T == 128

    def test_simulate_custom(self, tmp_path):
        cfg = tmp_path / "m.ini"
        cfg.write_text("[model]\nrho = 0.2\n[x1]\nar = 0.5\n[x2]\nma = 0.3\n")
        out = tmp_path / "c.csv"
        assert main(["simulate", "--model", str(cfg), "--T", "100", "--out", str(out)]) == 0
        assert load_csv(out).T == 100

    def test_simulate_bad_model(self, tmp_path):
        assert main(["simulate", "--model", "Z", "--T", "100",
                     "--out", str(tmp_path / "x.csv")]) == 2

    def test_reproduce_table_json(self, capsys):
        assert main(["reproduce-table", "--table", "3", "--reps", "100", "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert len(payload["cells"]) == 72
        assert {c["B"] for c in payload["cells"]} == {2, 3, 4, 6}

    def test_installed_entry_point(self, null_csv):
        proc = subprocess.run([sys.executable, "-m", "adspec.cli", "test", str(null_csv)],
                              capture_output=True, text=True)
        assert proc.returncode in (0, 1)
        proc = subprocess.run([sys.executable, "-m", "adspec.cli", "nope"],
                              capture_output=True, text=True)
        assert proc.returncode == 2
