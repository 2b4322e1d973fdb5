import json
from pathlib import Path

import numpy as np
import pytest

from zeromodules import jsonio
from zeromodules.cli import main
from zeromodules.statespace import evaluate, eval_grid

DATA = Path(__file__).resolve().parent.parent / "data"
GOLDEN = Path(__file__).resolve().parent / "golden"
R2 = np.sqrt(2.0)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_allpass(capsys):
    code, out, _ = run(capsys, "analyze", DATA / "scalar_allpass.json")
    assert code == 0
    assert "finite zeros: 1.0" in out
    assert "counting identity: OK" in out
    assert "(C,A) observable: yes" in out and "A spectrum in closed LHP: yes" in out


def test_analyze_identity_constant(capsys):
    code, out, _ = run(capsys, "analyze", DATA / "identity_constant.json", "--json")
    doc = json.loads(out)
    zr = doc["zero_report"]
    assert code == 0 and (zr["dim_Z"], zr["dim_Zinf"], zr["dim_Wker"], zr["dim_WIm"]) == (0, 0, 0, 0)


def test_analyze_row(capsys):
    code, out, _ = run(capsys, "analyze", DATA / "row_example.json")
    assert code == 0 and "kernel indices: [1]" in out


@pytest.mark.parametrize("name", ["scalar_allpass", "row_example", "column_example"])
def test_golden_json(capsys, name):
    code, out, _ = run(capsys, "analyze", DATA / f"{name}.json", "--json")
    assert code == 0
    assert json.loads(out) == json.loads((GOLDEN / f"{name}.analyze.json").read_text())


def test_factorize_worked_example(capsys, tmp_path):
    code, out, _ = run(capsys, "factorize", DATA / "row_example.json", "--out", tmp_path)
    assert code == 0
    names = {"K", "L", "K_left", "L_left", "F_r", "F_rl"}
    assert {p.stem for p in tmp_path.glob("*.json")} == names | {"certificates"}
    Fr, _ = jsonio.load_system(tmp_path / "F_r.json")
    assert np.allclose(Fr.A, -1) and np.allclose(Fr.B, -(R2 + 1)) and np.allclose(Fr.C, 1) and np.allclose(Fr.D, 1)
    cert = json.loads((tmp_path / "certificates.json").read_text())
    assert cert["right"]["grid_defect"] < 1e-12 and cert["hypotheses"]["holds"]


def test_factorize_square_invertible(capsys, tmp_path):
    src = DATA / "scalar_allpass.json"
    code, _, _ = run(capsys, "factorize", src, "--out", tmp_path)
    assert code == 0
    F, _ = jsonio.load_system(src)
    Frl, _ = jsonio.load_system(tmp_path / "F_rl.json")
    K, _ = jsonio.load_system(tmp_path / "K.json")
    assert K.q == 0
    for z in eval_grid(F):
        assert np.allclose(evaluate(Frl, z), evaluate(F, z))


def test_factorize_without_out(capsys):
    code, _, _ = run(capsys, "factorize", DATA / "row_example.json")
    assert code == 2


def test_verify_passes_on_worked_example(capsys):
    code, out, _ = run(capsys, "verify", DATA / "row_example.json", "--samples", 5)
    assert code == 0 and "FAIL" not in out and out.count("PASS") >= 10


def test_verify_constant_is_vacuous(capsys):
    code, out, _ = run(capsys, "verify", DATA / "identity_constant.json")
    assert code == 0 and "FAIL" not in out


def test_verify_detects_perturbed_data(capsys, tmp_path):
    assert run(capsys, "factorize", DATA / "row_example.json", "--out", tmp_path)[0] == 0
    code, out, _ = run(capsys, "verify", DATA / "row_example_perturbed.json", "--factors", tmp_path)
    assert code == 1
    assert any(line.startswith("FAIL") and "annihilation F K" in line for line in out.splitlines())


@pytest.mark.parametrize("name", ["scalar_allpass", "row_example", "column_example", "constant_row"])
def test_oracle_full_match(capsys, name):
    code, out, _ = run(capsys, "oracle", DATA / f"{name}.json")
    assert code == 0 and "oracle: full match" in out


def test_oracle_empty_kernel(capsys):
    _, out, _ = run(capsys, "oracle", DATA / "scalar_allpass.json")
    assert "minimal basis: none" in out


def test_oracle_irrational_exit(capsys):
    code, _, err = run(capsys, "oracle", DATA / "irrational_entry.json")
    assert code == 5


def test_unobservable_exit_and_force(capsys):
    assert run(capsys, "analyze", DATA / "unobservable.json")[0] == 3
    code, out, _ = run(capsys, "analyze", DATA / "unobservable.json", "--force")
    assert code == 0 and "observable: no" in out


def test_parse_errors(capsys, tmp_path):
    assert run(capsys, "analyze", tmp_path / "missing.json")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"A": [[NaN]], "B": [[1]], "C": [[1]], "D": [[0]]}')
    assert run(capsys, "analyze", bad)[0] == 2
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2


def test_tol_flag_propagates(capsys, tmp_path):
    # D = diag(1, 1e-7): full rank at the default tolerance, rank one at 1e-4
    f = tmp_path / "near_singular.json"
    f.write_text('{"A": [], "B": [], "C": [[], []], "D": [[1, 0], [0, 1e-7]]}')
    _, out, _ = run(capsys, "analyze", f, "--json")
    assert json.loads(out)["zero_report"]["kernel_indices"] == []
    _, out, _ = run(capsys, "analyze", f, "--json", "--tol", "1e-4")
    assert json.loads(out)["zero_report"]["kernel_indices"] == [0]
