import subprocess
import sys

import pytest

from hsymcurl.cli import CSV_HEADER, main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_converge_csv_file(tmp_path, capsys):
    path = tmp_path / "lag.csv"
    code, out, _ = run(["converge", "--element", "lagrange", "--benchmark", "vortex", "--levels", "2,4", "--csv", str(path)], capsys)
    assert code == 0
    lines = path.read_text().splitlines()
    assert lines[0] == CSV_HEADER == "elements,dofs,l2_error,hsc_error"
    assert len(lines) == 3
    elements, dofs, l2, hsc = lines[1].split(",")
    assert (elements, dofs) == ("40", "243")
    assert float(l2) == pytest.approx(2.0013, rel=0.15)
    # 15 significant digits in scientific notation
    assert len(l2.split("e")[0].replace(".", "").lstrip("-")) == 15
    assert lines[2].startswith("320,1125,")
    assert "rate l2: n/a" in out  # two levels are not enough for a fit


def test_converge_norm_degree_flag(capsys):
    code, out, _ = run(["converge", "--element", "lagrange", "--benchmark", "vortex", "--levels", "2", "--norm-degree", "2"], capsys)
    assert code == 0
    assert out.splitlines()[1].startswith("40,243,2.00126818")


def test_converge_exact_rate(capsys):
    code, out, _ = run(["converge", "--element", "symcurl", "--benchmark", "identity-jump", "--levels", "2"], capsys)
    assert code == 0
    assert "rate l2: exact" in out and "rate hsc: exact" in out


def test_converge_deterministic(tmp_path, capsys):
    argv = ["converge", "--element", "nedelec", "--benchmark", "normal-jump", "--levels", "2,4"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(argv + ["--csv", str(a)], capsys)[0] == 0
    assert run(argv + ["--csv", str(b)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_converge_svg(tmp_path, capsys):
    svg = tmp_path / "plot.svg"
    code, _, _ = run(["converge", "--element", "lagrange", "--benchmark", "normal-jump", "--levels", "2,4", "--svg", str(svg)], capsys)
    assert code == 0
    text = svg.read_text()
    assert text.startswith("<?xml") and "<svg" in text and "polyline" in text


@pytest.mark.parametrize(
    "argv",
    [
        ["converge", "--benchmark", "vortex"],
        ["converge", "--element", "quadratic", "--benchmark", "vortex"],
        ["converge", "--element", "lagrange", "--benchmark", "vortex", "--levels", "3"],
        ["converge", "--element", "lagrange", "--benchmark", "vortex", "--tol", "-1"],
        ["mesh-export", "3", "out.vtk"],
        ["verify-identities", "--count", "-1"],
        [],
    ],
)
def test_invalid_flags_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_unwritable_csv_exits_1(tmp_path, capsys):
    target = tmp_path / "missing" / "out.csv"
    code, _, err = run(["converge", "--element", "lagrange", "--benchmark", "vortex", "--levels", "2", "--csv", str(target)], capsys)
    assert code == 1 and "cannot write" in err


def test_verify_identities(capsys):
    code, out, _ = run(["verify-identities", "--count", "10"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 4 and all(line.startswith("PASS") for line in lines)
    code2, out2, _ = run(["verify-identities", "--count", "10"], capsys)
    assert out2 == out


def test_verify_identities_zero_count(capsys):
    code, out, err = run(["verify-identities", "--count", "0"], capsys)
    assert code == 0 and "warning" in err
    assert out.count("PASS") == 4


@pytest.mark.parametrize("n, points, cells", [(2, 27, 40), (10, 1331, 5000)])
def test_mesh_export(tmp_path, capsys, n, points, cells):
    path = tmp_path / "m.vtk"
    code, out, _ = run(["mesh-export", str(n), str(path)], capsys)
    assert code == 0
    text = path.read_text()
    assert f"POINTS {points} double" in text
    assert f"CELLS {cells} {5 * cells}" in text
    assert f"CELL_TYPES {cells}" in text


def test_mesh_export_unwritable(tmp_path, capsys):
    code, _, err = run(["mesh-export", "2", str(tmp_path / "no" / "m.vtk")], capsys)
    assert code == 1 and "cannot write" in err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "hsymcurl", "--help"], capture_output=True, text=True)
    assert res.returncode == 0
    for sub in ("converge", "verify-identities", "mesh-export"):
        assert sub in res.stdout
