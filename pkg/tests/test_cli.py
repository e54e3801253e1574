import json
import shutil
import subprocess

import pytest

from conftest import RING, SINGLE, WEAKLY
from polyalg.cli import main


@pytest.fixture
def write(tmp_path):
    def _write(cells, name="p.json"):
        path = tmp_path / name
        path.write_text(json.dumps(cells))
        return str(path)

    return _write


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    lines = [json.loads(line) for line in out.out.splitlines() if line.startswith("{")]
    return rc, lines, out


def test_classify_and_order(capsys, write):
    rc, (out,), _ = run(capsys, "classify", write(RING))
    assert rc == 0 and out["closed_path"] and out["zigzag"] is None
    rc, (out,), _ = run(capsys, "order", write(RING), "--rule", "asc")
    assert rc == 0 and out["rule"] == "asc" and out["ranking"][8:] == [f"{i}'" for i in range(8, 0, -1)]


def test_groebner_complex_hseries_pass(capsys, write):
    path = write(RING)
    rc, (gb,), _ = run(capsys, "groebner", path)
    assert rc == 0 and gb["is_groebner"] and len(gb["basis"]) == 20
    rc, (cx,), _ = run(capsys, "complex", path)
    assert rc == 0 and cx["h_vector"][:5] == [1, 8, 16, 8, 1] and cx["krull"]["equal"]
    rc, (hs,), _ = run(capsys, "hseries", path)
    assert rc == 0 and hs["equal"] and hs["h"] == hs["rook"]


def test_shell_modes(capsys, write):
    path = write(RING)
    rc, (out,), _ = run(capsys, "shell", path)
    assert rc == 0 and out["method"] == "constructed" and out["verified"]
    assert out["h_from_restrictions"] == [1, 8, 16, 8, 1]
    rc, (out,), _ = run(capsys, "shell", path, "--generic")
    assert rc == 0 and out["method"] == "search" and out["found"]


def test_rook_conventions(capsys, write):
    rc, (out,), _ = run(capsys, "rook", write([[0, 0], [1, 0], [0, 1], [1, 1]]))
    assert rc == 0 and out["polynomial"] == "1 + 4t + 2t^2"
    rc, (out,), _ = run(capsys, "rook", write(RING), "--convention", "grid-line")
    assert rc == 0 and out["rook_number"] == 3


def test_phi_mismatch_exit_code(capsys, write):
    rc, (out,), _ = run(capsys, "phi", write(RING))
    assert out["counts_by_rooks"] == [1, 8, 16, 8, 1]
    assert rc == (0 if out["bijection_ok"] else 2)


def test_budget_exit_code(capsys, write):
    rc, _, out = run(capsys, "complex", write(RING), "--budget-facets", "5")
    assert rc == 3 and "budget" in out.err
    rc, _, _ = run(capsys, "groebner", write(RING), "--budget-pairs", "1")
    assert rc == 3


def test_input_error_exit_code(capsys, write, tmp_path):
    rc, _, out = run(capsys, "classify", write([[0, 0], [4, 4]]))
    assert rc == 4 and "input error" in out.err
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "rook", str(bad))[0] == 4
    assert run(capsys, "phi", write(SINGLE))[0] == 4
    assert run(capsys, "rook", str(tmp_path / "missing.json"))[0] == 4


def test_single_cell_fallback(capsys, write):
    rc, (out,), _ = run(capsys, "hseries", write(SINGLE))
    assert rc == 0 and out["h"] == [1, 1] and out["d"] == 3


def test_export_macaulay2(capsys, write, tmp_path):
    target = tmp_path / "ring.m2"
    rc, _, _ = run(capsys, "groebner", write(RING), "--export-macaulay2", str(target))
    assert rc == 0
    text = target.read_text()
    assert text.startswith("R = QQ[x_1, x_2")
    assert "MonomialOrder => Lex" in text and "I = ideal(" in text
    ideal = text.split("I = ideal(", 1)[1]
    assert ideal.count("-") == 20 and ideal.count(",") == 19
    w = tmp_path / "weakly.m2"
    run(capsys, "hseries", write(WEAKLY["ring3-corner"]), "--export-macaulay2", str(w))
    assert "w, MonomialOrder" in w.read_text()


def test_gen(capsys):
    rc, lines, _ = run(capsys, "gen", "--max-cells", "10")
    # one 8-cell and two 10-cell closed paths
    assert rc == 0 and len(lines) == 3


def test_run_all(capsys, tmp_path):
    figs = tmp_path / "figs"
    rc, lines, _ = run(capsys, "run-all", "--max-cells", "8", "--figures", str(figs))
    assert rc == 0
    *records, summary = lines
    assert len(records) == 1 and records[0]["status"] == "pass"
    assert summary["instances"] == 1
    assert len(list(figs.glob("*.svg"))) == 1
    rc, lines, _ = run(capsys, "run-all", "--max-cells", "7")
    assert rc == 0 and lines[-1]["instances"] == 0


def test_render(capsys, write, tmp_path):
    path = write(RING)
    rc, _, out = run(capsys, "render", path)
    assert rc == 0
    rows = out.out.splitlines()
    # three cell rows between border rows; the hole sits in the middle one
    assert len(rows) == 7 and [r.count("#") for r in rows[1::2]] == [3, 2, 3]
    for fmt in ("svg", "png"):
        target = tmp_path / f"ring.{fmt}"
        rc, _, _ = run(capsys, "render", path, "--format", fmt, "-o", str(target), "--labels", "--rooks", "4")
        assert rc == 0 and target.stat().st_size > 0
    assert (tmp_path / "ring.png").read_bytes()[:4] == b"\x89PNG"
    assert b"<svg" in (tmp_path / "ring.svg").read_bytes()


@pytest.mark.skipif(shutil.which("polyalg") is None, reason="console script not installed")
def test_console_script(tmp_path):
    path = tmp_path / "ring.json"
    path.write_text(json.dumps(RING))
    proc = subprocess.run(["polyalg", "rook", str(path)], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["rook_number"] == 4
