"""File outputs, schemas, determinism and exit codes of the CLI."""

import json
import subprocess
import sys

import pytest

from pggdyn.cli import main
from conftest import CAPTION_SETS


def flags_for(n, extra=()):
    kw = CAPTION_SETS[n]
    out = ["--d", str(kw["d"]), "--r", str(kw["r"]), "--c", str(kw["c"]),
           "--q", str(kw["q"]), "--mu", str(kw["mu"]),
           "--delta", str(kw["delta"]), "--a", str(kw["a_lev"]),
           "--b", str(kw["b_lev"]), "--omega", str(kw["omega"])]
    out.extend(extra)
    return out


def read_lines(path):
    return path.read_text().splitlines()


class TestEquilibriaCommand:
    def test_four_root_csv(self, tmp_path):
        out = tmp_path / "eq"
        assert main(["equilibria", *flags_for(4), "--out", str(out)]) == 0
        lines = read_lines(out.with_suffix(".csv"))
        assert lines[0] == "x,stability,residual,slope"
        assert len(lines) == 5
        pattern = [line.split(",")[1] for line in lines[1:]]
        assert pattern == ["unstable", "stable", "unstable", "stable"]

    def test_json_mirror_carries_same_values(self, tmp_path):
        out = tmp_path / "eq"
        main(["equilibria", *flags_for(3), "--out", str(out)])
        lines = read_lines(out.with_suffix(".csv"))[1:]
        payload = json.loads(out.with_suffix(".json").read_text())
        for line, root in zip(lines, payload["roots"]):
            x, stab, residual, slope = line.split(",")
            assert float(x) == root["x"]
            assert stab == root["stability"]
            assert float(residual) == root["residual"]
            assert float(slope) == root["slope"]

    def test_census_boundary_flags(self, tmp_path):
        out = tmp_path / "eq"
        rc = main(["equilibria", "--d", "7", "--r", "5", "--c", "10",
                   "--q", "0", "--mu", "0", "--delta", "0", "--a", "1",
                   "--b", "1", "--omega", "0.5", "--out", str(out)])
        assert rc == 0
        lines = read_lines(out.with_suffix(".csv"))
        assert [l.split(",")[0] for l in lines[1:]] == ["0", "1"]

    def test_validation_error_names_flag(self, tmp_path, capsys):
        rc = main(["equilibria", *flags_for(1), "--out", str(tmp_path / "x")])
        assert rc == 0
        rc = main(["equilibria", "--d", "7", "--r", "5", "--c", "10",
                   "--q", "0.7", "--mu", "0.1", "--delta", "1", "--a", "1",
                   "--b", "1", "--omega", "0.5"])
        assert rc == 2
        err = capsys.readouterr().err
        assert "q" in err and "1/2" in err

    def test_missing_flag_is_validation_error(self, capsys):
        rc = main(["equilibria", "--d", "7"])
        assert rc == 2
        assert "--r" in capsys.readouterr().err

    def test_manifest_lists_outputs(self, tmp_path):
        out = tmp_path / "eq"
        main(["equilibria", *flags_for(2), "--out", str(out)])
        manifest = json.loads((tmp_path / "eq.manifest.json").read_text())
        assert manifest["command"] == "equilibria"
        assert manifest["parameters"]["d"] == 5
        assert str(out.with_suffix(".csv")) in manifest["outputs"]
        assert "pggdyn" in manifest["versions"]

    def test_manifest_reproduces_run(self, tmp_path):
        out1 = tmp_path / "first"
        main(["equilibria", *flags_for(3), "--out", str(out1)])
        out2 = tmp_path / "second"
        rc = main(["equilibria", "--config",
                   str(tmp_path / "first.manifest.json"), "--out", str(out2)])
        assert rc == 0
        assert (out1.with_suffix(".csv").read_text()
                == out2.with_suffix(".csv").read_text())


class TestSampleCommand:
    def test_byte_identical_reruns(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for out in (a, b):
            rc = main(["sample", "--d", "6", "--iters", "400", "--seed", "42",
                       "--out", str(out)])
            assert rc == 0
        assert a.with_suffix(".csv").read_bytes() == b.with_suffix(".csv").read_bytes()
        assert a.with_suffix(".json").read_bytes() == b.with_suffix(".json").read_bytes()

    def test_histogram_schema(self, tmp_path):
        out = tmp_path / "h"
        main(["sample", "--d", "4", "--iters", "100", "--seed", "1",
              "--out", str(out)])
        lines = read_lines(out.with_suffix(".csv"))
        assert lines[0] == "root_count,frequency"
        assert [l.split(",")[0] for l in lines[1:]] == ["0", "1", "2", "3", "4"]
        total = sum(int(l.split(",")[1]) for l in lines[1:])
        assert total == 100


class TestCensusCommand:
    def test_q0_cell(self, tmp_path):
        out = tmp_path / "c"
        rc = main(["census", "--case", "q0", "--iters", "400", "--seed", "7",
                   "--out", str(out)])
        assert rc == 0
        lines = read_lines(out.with_suffix(".csv"))
        assert lines[0] == ("case,draw_count,count0,count1,count2,count3,"
                            "count4,pass")
        cells = lines[1].split(",")
        assert cells[0] == "q0"
        assert cells[7] == "1"
        counts = list(map(int, cells[2:7]))
        assert counts[0] == counts[2] == counts[4] == 0  # only 1 or 3

    def test_pair_case_spelling(self, tmp_path):
        out = tmp_path / "c"
        rc = main(["census", "--case", "mu0+q0", "--iters", "200",
                   "--seed", "3", "--out", str(out)])
        assert rc == 0

    def test_unknown_case_is_flag_error(self, capsys):
        assert main(["census", "--case", "zeta0"]) == 2
        assert "--case" in capsys.readouterr().err


class TestOtherCommands:
    def test_simulate_writes_trajectory(self, tmp_path):
        out = tmp_path / "t"
        rc = main(["simulate", *flags_for(1), "--x0", "0.2", "--t-end", "5",
                   "--dt", "0.001", "--out", str(out)])
        assert rc == 0
        lines = read_lines(out.with_suffix(".csv"))
        assert lines[0] == "t,x"
        assert len(lines) == 5002

    def test_bifurcate_schema_and_spot_counts(self, tmp_path):
        out = tmp_path / "b"
        rc = main(["bifurcate", *flags_for(3), "--grid", "1024",
                   "--out", str(out)])
        assert rc == 0
        lines = read_lines(out.with_suffix(".csv"))
        assert lines[0] == "x,mu,side,is_critical"
        assert all(line.split(",")[2] in ("left", "right") for line in lines[1:])

    def test_asymptote_payload(self, tmp_path):
        out = tmp_path / "a"
        rc = main(["asymptote", *flags_for(2), "--out", str(out)])
        assert rc == 0
        payload = json.loads(out.with_suffix(".json").read_text())
        assert "g1_slope" in payload and "limit_roots" in payload

    def test_config_file_with_flag_override(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        kw = CAPTION_SETS[1]
        cfg.write_text("\n".join([
            f"d={kw['d']}", f"r={kw['r']}", f"c={kw['c']}", f"q={kw['q']}",
            f"mu={kw['mu']}", f"delta={kw['delta']}", f"a={kw['a_lev']}",
            f"b={kw['b_lev']}", "omega=0.9",
        ]))
        out = tmp_path / "eq"
        rc = main(["equilibria", "--config", str(cfg),
                   "--omega", str(kw["omega"]), "--out", str(out)])
        assert rc == 0
        manifest = json.loads((tmp_path / "eq.manifest.json").read_text())
        assert manifest["parameters"]["omega"] == kw["omega"]

    def test_json_only_format(self, tmp_path):
        out = tmp_path / "eq"
        rc = main(["equilibria", *flags_for(1), "--out", str(out),
                   "--format", "json"])
        assert rc == 0
        assert out.with_suffix(".json").exists()
        assert not out.with_suffix(".csv").exists()


class TestEntryPoint:
    def test_module_invocation(self, tmp_path):
        res = subprocess.run(
            [sys.executable, "-m", "pggdyn.cli", "sample", "--d", "3",
             "--iters", "50", "--seed", "2", "--out", str(tmp_path / "h")],
            capture_output=True, text=True)
        assert res.returncode == 0
        assert (tmp_path / "h.csv").exists()
