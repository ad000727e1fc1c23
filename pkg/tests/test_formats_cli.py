import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from epsap import formats
from epsap.cli import main
from epsap.colorings import Coloring, build_simple_r2_coloring, verify_no_mono_ap
from epsap.search import enumerate_eps_aps

F = Fraction
SRC = str(Path(__file__).resolve().parent.parent / "src")


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------

def test_set_round_trip():
    pts = [(3, 1), (1, 2), (1, 1)]
    text = formats.write_set(pts, comment="three points")
    assert text.startswith("# three points\n")
    assert text.endswith("\n")
    assert formats.read_set(text) == ((1, 1), (1, 2), (3, 1))


def test_set_rejects_ragged_rows():
    with pytest.raises(ValueError):
        formats.read_set("1 2\n3\n")


def test_coloring_round_trip():
    coloring = Coloring.from_list([1, 2, 1, 2, 2], r=2)
    text = formats.write_coloring(coloring, F(1, 3), 3)
    assert text.splitlines()[0] == "# N=5 r=2 eps=1/3 k=3"
    back, eps, k = formats.read_coloring(text)
    assert back.to_list() == coloring.to_list()
    assert (eps, k) == (F(1, 3), 3)


def test_coloring_header_mismatch():
    with pytest.raises(ValueError):
        formats.read_coloring("# N=3 r=2 eps=1/3 k=3\n1\n2\n")


def test_hypergraph_bad_edge_line():
    with pytest.raises(ValueError):
        formats.read_hypergraph("# N=5 k=3 eps=1/4\n3 2 1\n")


# ---------------------------------------------------------------------------
# CLI behavior (in-process)
# ---------------------------------------------------------------------------

def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_cli_recognize_accept(capsys):
    code, out, _ = run_cli(capsys, "recognize", "ap", "--points", "1,3,6",
                           "--eps", "1/3", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["accepted"] is True
    assert payload["witness"]["a"] == {"num": 3, "den": 4}
    assert payload["witness"]["margin"]["num"] > 0


def test_cli_recognize_reject(capsys):
    code, out, _ = run_cli(capsys, "recognize", "ap", "--points", "1,3,6",
                           "--eps", "1/100")
    assert code == 1 and out.strip() == "rejected"


def test_cli_rejects_decimal_eps(capsys):
    code, _, _ = run_cli(capsys, "recognize", "ap", "--points", "1,3,6",
                         "--eps", "0.333")
    assert code == 2


def test_cli_wnumber_pigeonhole(capsys):
    code, out, _ = run_cli(capsys, "wnumber", "--k", "2", "--r", "3",
                           "--eps", "1/4", "--nmax", "10", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["kind"] == "value" and payload["value"] == 4


def test_cli_unknown_command(capsys):
    assert run_cli(capsys, "frobnicate")[0] == 2


def test_cli_workers_validated(capsys):
    code, _, err = run_cli(capsys, "recognize", "ap", "--points", "1,2,3",
                           "--eps", "1/4", "--workers", "0")
    assert code == 2 and "workers" in err


def test_cli_json_deterministic(capsys):
    args = ("wnumber", "--k", "3", "--r", "2", "--eps", "1/3",
            "--nmax", "20", "--json", "--seed", "7")
    _, out1, _ = run_cli(capsys, *args)
    _, out2, _ = run_cli(capsys, *args)
    assert out1 == out2


def test_cli_construct_verify_coloring_round_trip(tmp_path, capsys):
    path = tmp_path / "coloring.txt"
    code, _, _ = run_cli(capsys, "construct", "simple-r2", "--k", "7",
                         "--eps", "1/5", "--out", str(path))
    assert code == 0
    coloring, eps, k = formats.read_coloring(path.read_text())
    assert coloring.to_list() == build_simple_r2_coloring(7).to_list()
    code, out, _ = run_cli(capsys, "verify", "coloring", "--file", str(path),
                           "--json")
    expected = verify_no_mono_ap(coloring, k, eps) is None
    assert (code == 0) == expected
    assert json.loads(out)["free_of_monochromatic_ap"] is expected


def test_cli_hypergraph_file_round_trip(tmp_path, capsys):
    path = tmp_path / "hg.txt"
    code, _, _ = run_cli(capsys, "hypergraph", "--N", "6", "--k", "3",
                         "--eps", "1/3", "--out", str(path))
    assert code == 0
    parsed = formats.read_hypergraph(path.read_text())
    assert parsed == enumerate_eps_aps(6, 3, F(1, 3))


def test_cli_verify_set_product(tmp_path, capsys):
    a_path = tmp_path / "a.txt"
    s_path = tmp_path / "s.txt"
    a_path.write_text(formats.write_set([(x,) for x in (3, 4, 8, 9)]))
    code, _, _ = run_cli(capsys, "construct", "product", "--set", str(a_path),
                         "--m", "2", "--N", "9", "--out", str(s_path))
    assert code == 0
    code, out, _ = run_cli(capsys, "verify", "set", "--file", str(s_path),
                           "--m", "2", "--k", "3", "--eps", "1/125")
    assert code == 0 and out.strip() == "free"


def test_cli_verify_set_catches_lattice(tmp_path, capsys):
    path = tmp_path / "cube.txt"
    path.write_text(formats.write_set(
        [(a, b) for a in range(3) for b in range(3)]))
    code, _, _ = run_cli(capsys, "verify", "set", "--file", str(path),
                         "--m", "2", "--k", "3", "--eps", "1/4")
    assert code == 1


def test_cli_recognize_cube_from_file(tmp_path, capsys):
    path = tmp_path / "grid.txt"
    path.write_text(formats.write_set(
        [(10 * a + 1, 10 * b + 2) for a in range(2) for b in range(2)]))
    code, out, _ = run_cli(capsys, "recognize", "cube", "--file", str(path),
                           "--m", "2", "--k", "2", "--eps", "1/4", "--json")
    assert code == 0
    assert json.loads(out)["status"] == "feasible"


def test_cli_translate(tmp_path, capsys):
    a_path = tmp_path / "a.txt"
    x_path = tmp_path / "x.txt"
    a_path.write_text(formats.write_set([(1, 1), (2, 2)]))
    x_path.write_text(formats.write_set(
        [(i, j) for i in range(1, 5) for j in range(1, 5) if (i + j) % 2 == 0]))
    code, out, _ = run_cli(capsys, "translate", "--set-a", str(a_path),
                           "--set-x", str(x_path), "--N", "4", "--m", "2",
                           "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["count"] * payload["bound"]["den"] >= payload["bound"]["num"]


def test_cli_construct_behrend_csv(capsys):
    code, out, _ = run_cli(capsys, "construct", "behrend", "--eps", "1/125",
                           "--h", "2", "--format", "csv")
    assert code == 0
    assert [int(x) for x in out.split()] == [2, 3, 7, 8, 17, 18, 22, 23]


def test_cli_construct_cube_blowup(tmp_path, capsys):
    path = tmp_path / "blowup.txt"
    code, _, _ = run_cli(capsys, "construct", "cube-blowup", "--m", "2",
                         "--k", "3", "--eps", "1/2", "--alpha", "4/5",
                         "--out", str(path))
    assert code == 0
    pts = formats.read_set(path.read_text(), m=2)
    assert len(pts) == 81


def test_cli_lowerbound_full_coloring(tmp_path, capsys):
    path = tmp_path / "lb.txt"
    code, _, _ = run_cli(capsys, "construct", "lowerbound", "--k", "771",
                         "--r", "2", "--eps", "1/30", "--eps0", "1/30",
                         "--out", str(path))
    assert code == 0
    coloring, eps, k = formats.read_coloring(path.read_text())
    assert (coloring.N, coloring.r, eps, k) == (148992, 2, F(1, 30), 771)


def test_cli_recognize_cube_infeasible(tmp_path, capsys):
    path = tmp_path / "grid.txt"
    path.write_text(formats.write_set([(0, 0), (1, 5), (9, 1), (10, 9)]))
    code, out, _ = run_cli(capsys, "recognize", "cube", "--file", str(path),
                           "--m", "2", "--k", "2", "--eps", "1/5", "--json")
    assert code == 1
    assert json.loads(out)["status"] in ("infeasible", "boundary")


def test_cli_verify_coloring_overrides(tmp_path, capsys):
    path = tmp_path / "c.txt"
    coloring = Coloring.from_list([1, 1, 1], r=1)
    path.write_text(formats.write_coloring(coloring, F(1, 5), 4))
    # header k=4 is good for this tiny domain, override k=3 finds the hit
    assert run_cli(capsys, "verify", "coloring", "--file", str(path))[0] == 0
    assert run_cli(capsys, "verify", "coloring", "--file", str(path),
                   "--k", "3")[0] == 1


def test_cli_workers_env_default(capsys, monkeypatch):
    monkeypatch.setenv("EPSAP_WORKERS", "3")
    code, out, _ = run_cli(capsys, "recognize", "ap", "--points", "5,7,9",
                           "--eps", "1/4")
    assert code == 0 and out.splitlines()[0] == "accepted"


def test_cli_lowerbound_params_only(capsys):
    code, out, _ = run_cli(capsys, "construct", "lowerbound", "--k", "771",
                           "--r", "2", "--eps", "1/30", "--eps0", "1/30",
                           "--params-only", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["params"][0]["n1"] == 148992


def test_cli_density_exact_aps(capsys):
    code, out, _ = run_cli(capsys, "density", "--N", "9", "--k", "3",
                           "--exact-aps", "--json")
    assert code == 0
    assert json.loads(out)["value"] == 5


def test_cli_module_entry_point():
    result = subprocess.run(
        [sys.executable, "-m", "epsap", "recognize", "ap",
         "--points", "5,7,9", "--eps", "1/10"],
        capture_output=True, text=True, env={"PYTHONPATH": SRC, "PATH": "/usr/bin:/bin"},
    )
    assert result.returncode == 0
    assert "accepted" in result.stdout
