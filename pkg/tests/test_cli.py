"""Command-line interface: argument parsing, output formats, manifest
sidecars, and exit codes."""

import json

import pytest

from qtail.cli import (
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_VALIDATION,
    EXIT_VERIFY_FAIL,
    emit_complex,
    main,
    parse_complex,
    parse_point,
)
from qtail import DomainError, LatticePoint

from conftest import DELTA_REF, GAMMA_REF

LATTICE = ["--q", "0.5", "--zeta-plus", "1.3", "--zeta-minus", "-0.55"]
PAIR = ["--gamma", str(GAMMA_REF), "--delta", str(DELTA_REF)]
QUAD = PAIR + ["--alpha", str(GAMMA_REF * 0.125), "--beta", str(DELTA_REF * 0.125)]


class TestParsing:
    @pytest.mark.parametrize("s,expect", [
        ("1.5", 1.5 + 0j),
        ("-0.25", -0.25 + 0j),
        ("1+2i", 1 + 2j),
        ("0.5-0.3i", 0.5 - 0.3j),
        ("[1.5,-2]", 1.5 - 2j),
    ])
    def test_parse_complex(self, s, expect):
        assert parse_complex(s) == expect

    def test_parse_complex_rejects_garbage(self):
        with pytest.raises((DomainError, ValueError)):
            parse_complex("[1,2,3]")

    @pytest.mark.parametrize("s,expect", [
        ("+:3", LatticePoint(1, 3)),
        ("-:0", LatticePoint(-1, 0)),
        ("+1:-2", LatticePoint(1, -2)),
    ])
    def test_parse_point(self, s, expect):
        assert parse_point(s) == expect

    def test_parse_point_rejects_garbage(self):
        with pytest.raises(DomainError):
            parse_point("up:3")

    def test_emit_complex(self):
        assert emit_complex(1.5 - 2j) == [1.5, -2.0]


class TestEval:
    def test_elliptic_json(self, capsys):
        rc = main(["eval", "elliptic", *LATTICE, *PAIR, "--x", "+:0", "--y", "+:1"])
        assert rc == EXIT_OK
        out = json.loads(capsys.readouterr().out)
        assert out["kind"] == "elliptic"
        re, im = out["value"]
        assert abs(im) < 1e-10 and abs(re) > 1e-4

    def test_elliptic_diag_trace(self, capsys):
        vals = []
        for pt in ("+:0", "-:0"):
            main(["eval", "elliptic", *LATTICE, *PAIR, f"--x={pt}", f"--y={pt}"])
            vals.append(json.loads(capsys.readouterr().out)["value"][0])
        assert sum(vals) == pytest.approx(1.0, abs=1e-10)

    def test_basic_kernel(self, capsys):
        rc = main(["eval", "basic", *LATTICE, *QUAD, "--x", "+:0", "--y=-:1"])
        assert rc == EXIT_OK
        out = json.loads(capsys.readouterr().out)
        assert abs(out["value"][1]) < 1e-9

    def test_fourier_matrix(self, capsys):
        rc = main(["eval", "fourier", *LATTICE, *PAIR, "--eta", "0.7"])
        assert rc == EXIT_OK
        out = json.loads(capsys.readouterr().out)
        m = out["matrix"]
        trace = m[0][0][0] + m[1][1][0]
        assert trace == pytest.approx(1.0, abs=1e-10)

    def test_trig_and_sine(self, capsys):
        rc = main(["eval", "trig", "--c", "0.3", "--d", "0.7",
                   "--u", "0.4", "--v", "0.1", "--i", "1", "--j", "2"])
        assert rc == EXIT_OK
        capsys.readouterr()
        rc = main(["eval", "sine", "--phi", "1.2", "--m", "2", "--n", "0"])
        assert rc == EXIT_OK

    def test_csv_format(self, capsys):
        rc = main(["eval", "elliptic", *LATTICE, *PAIR, "--x", "+:0", "--y", "+:2",
                   "--format", "csv"])
        assert rc == EXIT_OK
        text = capsys.readouterr().out
        assert text.splitlines()[0] == "kind,value"


class TestOutputFiles:
    def test_out_with_manifest(self, tmp_path, capsys):
        out = tmp_path / "res.json"
        rc = main(["eval", "elliptic", *LATTICE, *PAIR, "--x", "+:0", "--y", "+:1",
                   "--out", str(out)])
        assert rc == EXIT_OK
        data = json.loads(out.read_text())
        assert data["kind"] == "elliptic"
        manifest = json.loads((tmp_path / "res.json.manifest.json").read_text())
        assert manifest["schema_version"] == 1
        assert manifest["tool"] == "qtail"
        assert manifest["backend"] in ("compiled", "python")
        assert manifest["params"]["q"] == 0.5
        assert manifest["params"]["gamma"] == [GAMMA_REF, 0.0]


class TestVerify:
    def test_small_suite_passes(self, capsys):
        rc = main(["verify", "weierstrass", "--seed", "5", "--draws", "20"])
        assert rc == EXIT_OK
        out = capsys.readouterr().out
        assert "PASS weierstrass/weierstrass_three_term" in out

    def test_prints_one_line_per_check(self, capsys):
        rc = main(["verify", "projection", "--seed", "2", "--draws", "5"])
        assert rc == EXIT_OK
        lines = [l for l in capsys.readouterr().out.splitlines() if l]
        assert len(lines) == 4
        assert all(l.startswith("PASS") for l in lines)


class TestScan:
    def test_tail_scan(self, capsys):
        rc = main(["scan", "tail", *LATTICE, *QUAD, "--x", "+:0", "--y", "+:1",
                   "--m-max", "10"])
        assert rc == EXIT_OK
        out = json.loads(capsys.readouterr().out)
        errs = [p["error"] for p in out["points"]]
        assert len(errs) == 11 and errs[-1] < errs[0]

    def test_sine_scan_default_sweep(self, capsys):
        rc = main(["scan", "sine", "--phi", "1.2", "--m", "1", "--n", "0",
                   "--q-sweep", "0.9", "0.95"])
        assert rc == EXIT_OK
        out = json.loads(capsys.readouterr().out)
        assert [p["q"] for p in out["points"]] == [0.9, 0.95]


class TestSample:
    def test_sample_outcomes(self, capsys):
        rc = main(["sample", *LATTICE, *PAIR, "--points", "+:0,+:1,-:0",
                   "--draws", "200", "--seed", "3"])
        assert rc == EXIT_OK
        out = json.loads(capsys.readouterr().out)
        assert sum(r["count"] for r in out["outcomes"]) == 200
        assert len(out["rho1"]) == 3
        assert all(0.0 < r < 1.0 for r in out["rho1"])


class TestExitCodes:
    def test_validation_error(self, capsys):
        rc = main(["eval", "elliptic", "--q", "0.5", "--gamma", "0.3", "--delta", "-0.3",
                   "--x", "+:0", "--y", "+:1"])
        assert rc == EXIT_VALIDATION

    def test_numerical_error(self, capsys):
        # theta magnitudes leave the double range at this depth and base
        rc = main(["eval", "basic", "--q", "0.4", "--zeta-plus", "1.3",
                   "--zeta-minus", "-0.55", "--gamma", "0.2384615",
                   "--delta", "0.1538462", "--alpha", str(0.2384615 * 0.4 ** 3),
                   "--beta", str(0.1538462 * 0.4 ** 3),
                   "--x", "+:40", "--y", "+:41"])
        assert rc == EXIT_NUMERICAL
