import csv
import io
import json
import subprocess
import sys

import pytest

from rcx.cli import EXIT_DATA, EXIT_USAGE, main
from rcx.complexes import dumps, gen_circulant, gen_complete, loads


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_spectrum_check(capsys):
    code, out, _ = run(capsys, "spectrum-check", "--d", "2", "--q", "2", "--lambda", "3,0")
    assert code == 2 and out.startswith("NOT in S_2; roots 1.414, 0.707")
    code, out, _ = run(capsys, "spectrum-check", "--d", "2", "--q", "2", "--lambda", "0,0")
    assert code == 0 and out.startswith("in S_2")
    code, _, _ = run(capsys, "spectrum-check", "--d", "3", "--q", "2", "--lambda", "1,0")
    assert code == EXIT_USAGE


def test_usage_errors_exit_64(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["build-ball", "--d", "2"])
    assert exc.value.code == EXIT_USAGE


def test_domain_errors_exit_65(capsys, tmp_path):
    code, _, err = run(capsys, "bounds", "--d", "3", "--q", "6")
    assert code == EXIT_DATA and "prime power" in err
    code, _, _ = run(capsys, "build-ball", "--d", "3", "--q", "3", "--radius", "5", "--cap", "100")
    assert code == EXIT_DATA
    bad = tmp_path / "bad.rcx"
    bad.write_text("rcx 1\nd 2\nq 2\nn 2\ne 1 0 9\n")
    code, _, err = run(capsys, "verify", str(bad))
    assert code == EXIT_DATA and "[range] line 5" in err


def test_build_ball_json(capsys, tmp_path):
    out = tmp_path / "ball.json"
    code, _, _ = run(capsys, "build-ball", "--d", "3", "--q", "2", "--radius", "1", "--out", str(out))
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["vertex_count"] == 15 and doc["params"] == {"d": 3, "q": 2, "modulus": None, "radius": 1}
    code, text, _ = run(capsys, "build-ball", "--d", "2", "--q", "4", "--modulus", "1,1,1", "--radius", "1")
    assert json.loads(text)["vertex_count"] == 6


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "f.toml"
    cfg.write_text("q = 9\nmodulus = [1, 0, 1]\n")
    code, out, _ = run(capsys, "bounds", "--d", "3", "--config", str(cfg))
    assert code == 0 and "degree [3,1]_9 = 91" in out


def test_verify_exit_codes_and_outputs(capsys, tmp_path):
    k4 = tmp_path / "k4.rcx"
    k4.write_text(dumps(gen_complete(4)))
    js, cs, svg = tmp_path / "r.json", tmp_path / "r.csv", tmp_path / "r.svg"
    code, out, _ = run(capsys, "verify", str(k4), "--json", str(js), "--csv", str(cs), "--svg", str(svg))
    assert code == 0 and out.startswith("Ramanujan")
    assert json.loads(js.read_text())["verdict"] == "Ramanujan"
    rows = list(csv.reader(io.StringIO(cs.read_text())))
    assert rows[0][:2] == ["re1", "im1"] and len(rows) == 3
    assert svg.read_text().startswith("<svg")
    c24 = tmp_path / "c24.rcx"
    c24.write_text(dumps(gen_circulant(24, [1, 12], q=2)))
    code, out, _ = run(capsys, "verify", str(c24))
    assert code == 2 and "worst offender: (-2.931851653" in out


def test_gen_variants(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "complete", "--m", "4")
    assert code == 0 and loads(out).n == 4
    code, out, _ = run(capsys, "gen", "circulant", "--m", "6", "--jumps", "1,3", "--q", "2")
    assert loads(out).regular_degrees() == (3,)
    perms = tmp_path / "p.txt"
    perms.write_text("1 1 2 0\n")
    code, out, _ = run(capsys, "gen", "cayley", "--perms", str(perms), "--d", "3", "--q", "2")
    assert loads(out, closure="strict").n == 3
    base = tmp_path / "k4.rcx"
    base.write_text(dumps(gen_complete(4)))
    volts = tmp_path / "v.txt"
    volts.write_text("0 1 1\n")
    dest = tmp_path / "cover.rcx"
    code, _, _ = run(capsys, "gen", "cover", "--base", str(base), "--m", "3", "--voltages", str(volts), "--out", str(dest))
    assert code == 0 and loads(dest.read_text()).n == 12


def test_curve_csv(capsys):
    code, out, _ = run(capsys, "curve", "--d", "3", "--q", "2", "--k", "1", "--samples", "16")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["theta", "re", "im"] and len(rows) == 17
    assert float(rows[1][1]) == pytest.approx(6.0)


def test_bounds_output(capsys):
    code, out, _ = run(capsys, "bounds", "--d", "2", "--q", "2")
    assert code == 0 and "no uniform gap" in out and "trivial zeta=-1: (-3)" in out


def test_entry_point_reads_stdin():
    text = dumps(gen_complete(4))
    proc = subprocess.run(
        [sys.executable, "-m", "rcx.cli", "verify", "-"], input=text, capture_output=True, text=True, env={"RCX_THREADS": "1", "PATH": ""}
    )
    assert proc.returncode == 0 and proc.stdout.startswith("Ramanujan")


def test_same_seed_gives_identical_outputs(capsys, tmp_path):
    src = tmp_path / "c.rcx"
    src.write_text(dumps(gen_circulant(24, [1, 12], q=2)))
    outs = []
    for i in range(2):
        js, cs = tmp_path / f"r{i}.json", tmp_path / f"r{i}.csv"
        run(capsys, "verify", str(src), "--seed", "11", "--json", str(js), "--csv", str(cs))
        outs.append((js.read_bytes(), cs.read_bytes()))
    assert outs[0] == outs[1]


@pytest.mark.parametrize(
    "argv",
    [["build-ball"], ["verify"], ["curve"], ["bounds"], ["spectrum-check"], ["gen"], ["gen", "cover"]],
)
def test_help_documents_formats(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv + ["--help"])
    assert exc.value.code == 0
    assert "usage: rcx" in capsys.readouterr().out
