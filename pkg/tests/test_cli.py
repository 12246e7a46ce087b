import json
import math
import subprocess
import sys

import pytest

from funnelzeta.cli import EXIT_BOUND, EXIT_CONFIG, EXIT_NUMERIC, RunConfig, run
from funnelzeta.errors import DomainError


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_delta(capsys):
    code, out, _ = call(capsys, "delta", "--b", "4.71238898", "--n", "14")
    assert code == 0
    assert float(out) == pytest.approx(0.1469, abs=2e-4)


def test_spectrum(capsys):
    code, out, _ = call(capsys, "spectrum", "--b", "4", "--m", "6")
    assert code == 0
    counts = sorted(int(line.split(",")[2]) for line in out.strip().splitlines()[1:])
    assert counts == [6, 6, 18, 36]


def test_eval_empty_sum(capsys):
    code, out, _ = call(capsys, "eval", "--b", "4", "--n", "0", "--s", "0.3+2i")
    assert code == 0 and out.strip() == "1+0i"


def test_eval_17_digits(capsys):
    code, out, _ = call(capsys, "eval", "--b", "4", "--s", "0.3+2i")
    re_part = out.strip().split("+")[0].split("-")[0]
    assert len(re_part.replace(".", "").lstrip("0")) >= 15


def test_surface_json(capsys):
    code, out, _ = call(capsys, "surface", "--b", "4")
    data = json.loads(out)
    assert data["b"] == 4.0 and len(data["eps"]) == 3


def test_bound_codes(capsys):
    code, _, err = call(capsys, "bound", "--b", "4", "--n", "14", "--T", "10")
    assert code == EXIT_BOUND and "not proven" in err
    code, out, _ = call(capsys, "bound", "--b", "20", "--n", "14", "--T", "10")
    assert code == 0 and float(json.loads(out)["eta"]) > 0


@pytest.mark.parametrize("argv", [
    ["eval", "--b", "-1", "--s", "1"],
    ["eval", "--b", "4", "--n", "7", "--s", "1"],
    ["eval", "--b", "4", "--s", "abc"],
    ["zeros", "--b", "4", "--rect", "0,2,0,1"],
    ["zeros", "--b", "4"],
])
def test_invalid_config(capsys, argv):
    assert call(capsys, *argv)[0] == EXIT_CONFIG


def test_unknown_subcommand(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate"])
    assert exc.value.code == 2


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    out = tmp_path / "z.csv"
    cfg.write_text(json.dumps({"b": 4.0, "n": 14, "rect": [0.0, 0.2, 0.0, 5.0], "output_path": str(out),
                               "threads": 1}))
    code, _, _ = call(capsys, "zeros", "--config", str(cfg), "--audit")
    assert code == 0
    text = out.read_text()
    assert text.startswith("re,im,residual,iterations,multiplicity\n")
    # a flag overrides the file
    code, stdout, _ = call(capsys, "zeros", "--config", str(cfg), "--output", "", "--format", "json")
    assert code == 0 and json.loads(stdout)["b"] == 4.0


def test_config_validation():
    with pytest.raises(DomainError):
        RunConfig.from_json('{"b": 4, "bogus": 1}')
    with pytest.raises(DomainError):
        RunConfig.from_json("[1, 2]")
    with pytest.raises(DomainError):
        RunConfig.from_json('{"format": "xml"}')
    assert RunConfig.from_json('{"b": 5, "rect": [0, 0.1, 0, 1]}').rect == (0, 0.1, 0, 1)


def test_zero_pipeline(tmp_path, capsys):
    zcsv = tmp_path / "z.csv"
    rect = "-0.02,0.2,-60,60"
    assert call(capsys, "zeros", "--b", "4", "--rect=" + rect, "-o", str(zcsv), "--threads", "1")[0] == 0
    first = zcsv.read_bytes()
    assert call(capsys, "zeros", "--b", "4", "--rect=" + rect, "-o", str(zcsv), "--threads", "2")[0] == 0
    assert zcsv.read_bytes() == first

    code, out, _ = call(capsys, "rescale", "--b", "4", "--input", str(zcsv))
    assert code == 0 and out.startswith("re,im\n")

    # compare needs zeros covering the rescaled window |Im| <= pi - 0.1, i.e. |t| <= ~170
    code, out, err = call(capsys, "compare", "--b", "4", "--input", str(zcsv), "--window", "0.3")
    assert code == 0, err
    rep = json.loads(out)
    assert float(rep["distance"]) > 0

    code, out, _ = call(capsys, "lattice", "--b", "4", "--input", str(zcsv), "--rect=" + rect, "--kappa", "1.05")
    assert code == 0 and float(json.loads(out)["distance"]) < 1.0

    code, out, _ = call(capsys, "translate", "--b", "4", "--input", str(zcsv), "--rect=" + rect,
                        "--tau", "0", "--eps", "1e-9")
    assert code == 0 and json.loads(out)["passed"]

    svg = tmp_path / "p.svg"
    code, _, _ = call(capsys, "plot", "--b", "4", "--input", str(zcsv), "--curves", "--rescaled", "-o", str(svg))
    assert code == 0
    text = svg.read_text()
    assert text.startswith("<?xml") and "<circle" in text and "<polyline" in text


def test_curves(capsys):
    code, out, _ = call(capsys, "curves", "--t-max", "0.01", "--dt", "0.001")
    assert code == 0 and out.splitlines()[0] == "t,sigma1,sigma2,sigma3,sigma4"


def test_lfunction(capsys):
    code, out, _ = call(capsys, "lfunction", "--b", "4", "--s", "0.2+1i", "--generator", "2")
    assert code == 0 and out.strip().endswith("i")
    code, out, _ = call(capsys, "lfunction", "--b", "4", "--rect=-0.02,0.2,0,2")
    assert code == 0 and out.splitlines()[0].endswith(",character")


def test_audit_failure_exit(monkeypatch, capsys):
    import funnelzeta.cli as cli
    from funnelzeta.zerofinder import ZeroSet
    import numpy as np

    def fake(*a, **k):
        return ZeroSet(np.zeros(0, complex), np.zeros(0), np.zeros(0, np.int64), (0, 0.2, 0, 1), 14, 4.0,
                       audit=(1, 0))

    monkeypatch.setattr(cli, "find_zeros_rect", fake)
    assert call(capsys, "zeros", "--b", "4", "--rect", "0,0.2,0,1", "--audit")[0] == EXIT_NUMERIC


def test_console_script():
    res = subprocess.run([sys.executable, "-m", "funnelzeta.cli", "eval", "--b", "4", "--n", "0", "--s", "1"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout.strip() == "1+0i"


def test_round_trip_matches_in_process(tmp_path, capsys):
    from conftest import table_for
    from funnelzeta.zerofinder import find_zeros_rect
    from funnelzeta.zerogeom import rescale_zeros

    zcsv = tmp_path / "z.csv"
    assert call(capsys, "zeros", "--b", "4", "--rect=0,0.2,0,40", "-o", str(zcsv))[0] == 0
    code, out, _ = call(capsys, "rescale", "--b", "4", "--input", str(zcsv))
    rows = [tuple(map(float, r.split(","))) for r in out.strip().splitlines()[1:]]
    ref = rescale_zeros(find_zeros_rect(table_for(4.0), 14, (0, 0.2, 0, 40)), 4.0)
    assert rows == [(z.real, z.imag) for z in ref]
