import io
import json
import math

import numpy as np
import pytest

from schurlab.formats import dumps_matrix, dumps_measure, dumps_symbol, loads_symbol
from schurlab.lab import cli
from schurlab.lab.config import ExperimentConfig, parse_config_text, parse_value
from schurlab.lab.experiments import REGISTRY, RatioRecord, experiment, registered, run_experiment
from schurlab.lab.fitting import fit_loglog, fit_scaling
from schurlab.lab.verify import Check, VerifyReport


class TestConfig:
    def test_values(self):
        assert parse_value("1/3") == pytest.approx(1 / 3)
        assert parse_value("2..5") == [2, 3, 4, 5]
        assert parse_value("0.5, 2/3") == [0.5, pytest.approx(2 / 3)]
        assert parse_value("inf") == math.inf
        assert parse_value("true") is True and parse_value("hankel") == "hankel"

    def test_text(self):
        d = parse_config_text("experiment = wiener-mean  # trailing\n\nN = 16, 64\n")
        assert d == {"experiment": "wiener-mean", "N": [16, 64]}
        with pytest.raises(ValueError, match="duplicate"):
            parse_config_text("a = 1\na = 2\n")
        with pytest.raises(ValueError, match="key = value"):
            parse_config_text("nonsense\n")

    def test_config_object(self):
        cfg = ExperimentConfig.from_text("experiment = x\np = 0.5\noutput = out.csv\n")
        assert cfg.experiment == "x" and cfg.output == "out.csv" and cfg.grid("p", None) == [0.5]
        with pytest.raises(ValueError):
            ExperimentConfig.from_text("p = 0.5\n")
        with pytest.raises(ValueError):
            ExperimentConfig("x", {"p": []})
        with pytest.raises(ValueError):
            ExperimentConfig("x", {"seed": [1, 2]}).scalar("seed", 0)


class TestFitting:
    def test_exact_slope(self):
        x = np.array([2.0, 4, 8, 16, 32])
        f = fit_loglog(x, 3 * x**-1.5)
        assert f.slope == pytest.approx(-1.5, abs=1e-12) and f.max_residual < 1e-12 and f.n == 5
        assert fit_loglog(x, np.full(5, 7.0)).slope == pytest.approx(0.0, abs=1e-12)

    def test_errors(self):
        with pytest.raises(ValueError):
            fit_loglog([1, 2, 3], [1, 2, 3])
        with pytest.raises(ValueError):
            fit_loglog([1, 2, 3, 4], [1, 0, 3, 4])
        with pytest.raises(ValueError):
            fit_loglog([2, 2, 2, 2], [1, 2, 3, 4])

    def test_fit_table(self):
        rows = [{"n": str(n), "v": str(n**3), "p": "0.5"} for n in range(1, 6)]
        rows.append({"n": "9", "v": "1", "p": "2"})
        assert fit_scaling(rows, "n", "v", {"p": 0.5}).slope == pytest.approx(3.0)
        with pytest.raises(ValueError):
            fit_scaling(rows, "n", "missing")


class TestExperiments:
    def test_registry(self):
        names = registered()
        assert len(names) == 19 and "fm-scaling" in names and names == sorted(REGISTRY)

    def test_unknown_experiment_lists_names(self):
        with pytest.raises(KeyError) as info:
            run_experiment(ExperimentConfig("nope"))
        assert "fm-scaling" in str(info.value)
        with pytest.raises(ValueError, match="unknown keys"):
            experiment("wiener-mean", bogus=1)

    def test_csv_deterministic(self):
        a = experiment("wiener-mean", N=[16, 64]).to_csv()
        b = experiment("wiener-mean", N=[16, 64]).to_csv()
        assert a == b
        lines = a.splitlines()
        assert lines[0].startswith("# anchor: ") and "runtime_ms" not in lines[1]
        assert len(lines) == 4
        assert "runtime_ms" in experiment("wiener-mean", N=[16]).to_csv(timing=True)

    def test_rows_filter(self):
        res = experiment("dirichlet-sum", m=[2, 4], grid=1024)
        assert len(res.rows(m=4)) == 1 and res.summary["max partial sum"] > 0

    def test_record_validation(self):
        with pytest.raises(ValueError):
            RatioRecord("x", {}, 1.0, 1.0, 0.0)


class TestVerifyReport:
    def test_pass_logic(self):
        ok = Check("s", "a", 3, 0, "")
        empty = Check("s", "b", 0, 0, "")
        assert ok.passed and not empty.passed
        rep = VerifyReport([ok, empty], 0.1)
        assert not rep.passed and len(rep.lines()) >= 2
        assert json.loads(rep.to_json())["passed"] is False


def run(argv):
    buf = io.StringIO()
    code = cli.main(argv, buf)
    return code, buf.getvalue()


class TestCli:
    def test_schatten(self, tmp_path):
        f = tmp_path / "a.txt"
        f.write_text(dumps_matrix(np.diag([3.0, 4.0])))
        code, text = run(["schatten", "--matrix", str(f), "--p", "1/2"])
        assert code == 0
        assert text.splitlines()[1].split(",")[1] == f"{(math.sqrt(3) + 2) ** 2:.12g}"

    def test_multnorm_and_blocks(self, tmp_path):
        f = tmp_path / "a.txt"
        f.write_text(dumps_matrix(np.eye(4)))
        b = tmp_path / "b.txt"
        b.write_text("0 2 4\n0 2 4\n")
        w = tmp_path / "w.txt"
        code, text = run(["multnorm", "--matrix", str(f), "--p", "0.5", "--restarts", "4",
                          "--blocks", str(b), "--witness", str(w)])
        assert code == 0 and w.exists()
        low, up = (float(v) for v in text.splitlines()[1].split(",")[:2])
        assert low == pytest.approx(4.0, rel=1e-6) and up == pytest.approx(4.0)
        b.write_text("0 2 4\n")
        assert run(["multnorm", "--matrix", str(f), "--p", "0.5", "--blocks", str(b)])[0] == 2

    def test_hankel(self, tmp_path):
        f = tmp_path / "s.txt"
        f.write_text(dumps_symbol([1.0, 2.0, 3.0]))
        code, text = run(["hankel", "--symbol", str(f), "--p", "2/3", "--restarts", "4"])
        assert code == 0 and text.startswith("size,")
        code, text = run(["hankel", "--symbol", str(f), "--dump"])
        assert code == 0 and text.startswith("3 3")
        f.write_text(dumps_symbol([1.0, 1.0], lo=-1))
        assert run(["hankel", "--symbol", str(f)])[0] == 2

    def test_toeplitz_measure(self, tmp_path):
        f = tmp_path / "m.txt"
        f.write_text(dumps_measure([0.5, 2.5], [1.0, -1.0]))
        code, text = run(["toeplitz-measure", "--measure", str(f), "--p", "0.5", "--window", "64"])
        assert code == 0
        ratio = float(text.splitlines()[1].split(",")[3])
        assert 0.9 < ratio <= 1 + 1e-12

    def test_besov(self, tmp_path):
        f = tmp_path / "s.txt"
        f.write_text(dumps_symbol([0, 0, 0, 0, 1.0]))
        code, text = run(["besov", "--symbol", str(f), "--s", "1", "--p", "0.5", "--q", "inf"])
        assert code == 0 and text.startswith("# norm = 4\n")
        assert run(["besov", "--symbol", str(f), "--s", "1", "--p", "0.5", "--q", "1", "--cutoff", "x"])[0] == 2

    def test_kernel(self):
        code, text = run(["kernel", "dirichlet", "--n", "2"])
        c, lo = loads_symbol(text)
        assert code == 0 and lo == -2 and c.tolist() == [1] * 5
        for kind in ("fejer", "omega", "sampled"):
            assert run(["kernel", kind, "--n", "3"])[0] == 0
        assert run(["kernel", "phi", "--n", "2", "--order", "1"])[0] == 0

    def test_sweep(self, tmp_path):
        cfg = tmp_path / "c.txt"
        out = tmp_path / "o.csv"
        cfg.write_text("experiment = wiener-mean\nN = 16, 64\n")
        assert run(["sweep", str(cfg), "-o", str(out)])[0] == 0
        first = out.read_text()
        assert run(["sweep", str(cfg), "-o", str(out)])[0] == 0
        assert out.read_text() == first
        code, text = run(["sweep", "--list"])
        assert code == 0 and "mollifier" in text.split()
        cfg.write_text("experiment = nope\n")
        assert run(["sweep", str(cfg)])[0] == 2
        assert run(["sweep"])[0] == 2

    def test_verify_exit_codes(self, monkeypatch):
        good = VerifyReport([Check("core", "x", 1, 0, "")], 0.0)
        bad = VerifyReport([Check("core", "x", 1, 1, "")], 0.0)
        monkeypatch.setattr(cli, "verify", lambda suite, seed: good)
        assert run(["verify", "core"])[0] == 0
        monkeypatch.setattr(cli, "verify", lambda suite, seed: bad)
        code, text = run(["verify"])
        assert code == 1 and '"passed": false' in text

    def test_missing_file(self):
        assert run(["schatten", "--matrix", "/nonexistent", "--p", "1"])[0] == 2
