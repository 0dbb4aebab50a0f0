import json
import math

import numpy as np
import pytest

from adnorm.cli import main
from adnorm.io import load_matrix, matrix_from_dict, matrix_to_dict, save_matrix
from adnorm.linalg import from_eigen, haar_unitary


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


@pytest.fixture
def files(tmp_path):
    c = np.array([1.0, 0.0, -1.0]) / math.sqrt(2)
    U = haar_unitary(3, 7)
    paths = {}
    for name, A in {
        "C": from_eigen(c, U),
        "D": from_eigen([2.0, 1.0, -3.0]),
        "Z": from_eigen([0.5, 0.0, -0.5], U),
        "W": from_eigen([1.0, 0.0, -1.0]),
        "X": from_eigen([0.3, -0.1, 0.2], haar_unitary(3, 8)),
    }.items():
        p = tmp_path / f"{name}.json"
        save_matrix(A, p)
        paths[name] = p
    return paths


def test_matrix_round_trip(tmp_path):
    A = from_eigen([0.123456789012345, -1.0, 2.5], haar_unitary(3, 1))
    save_matrix(A, tmp_path / "a.json")
    assert np.max(np.abs(load_matrix(tmp_path / "a.json") - A)) <= 1e-12
    with pytest.raises(ValueError):
        matrix_from_dict({"re": [[1.0, 0.0], [0.0, 0.0]], "im": [[0, 0], [0, 0]]})
    with pytest.raises(ValueError):
        matrix_from_dict({"n": 3, **{k: v for k, v in matrix_to_dict(np.zeros((2, 2))).items() if k != "n"}})


def test_norm_orbit_example(capsys, files):
    code, out, err = run(capsys, "norm", "--gauge", '{"kind":"orbit","c":[0.7071,0,-0.7071]}', "--matrix", files["C"])
    assert code == 0
    assert out["value"] == pytest.approx(1.0, abs=1e-4)
    assert "norm" in err


def test_dual_and_norming(capsys, files):
    code, out, _ = run(capsys, "dual", "--gauge", '{"kind":"ky_fan","k":2}', "--matrix", files["D"])
    assert code == 0 and out["value"] == pytest.approx(3.0)
    code, out, _ = run(capsys, "norming", "--gauge", '{"kind":"p","p":2}', "--matrix", files["D"])
    assert code == 0
    N = matrix_from_dict(out["N"])
    assert np.allclose(N, from_eigen([2.0, 1.0, -3.0]) / math.sqrt(14))
    assert out["certificates"]["pairing"] <= 1e-12
    code, out, _ = run(capsys, "norming", "--gauge", '{"kind":"ky_fan","k":2}', "--matrix", files["D"],
                       "--ky-fan-distinguished")
    assert code == 0 and out["value_at_target"] == pytest.approx(5.0)
    code, _, _ = run(capsys, "norming", "--gauge", '{"kind":"p","p":2}', "--matrix", files["D"],
                     "--ky-fan-distinguished")
    assert code == 3


def test_taylor_and_birkhoff(capsys, files, tmp_path):
    save_matrix(np.zeros((3, 3)), tmp_path / "zero.json")
    code, out, _ = run(capsys, "taylor", "--gauge", '{"kind":"spectral"}', "--a", files["D"], "--b", tmp_path / "zero.json")
    assert code == 0 and out["value"] == pytest.approx(3.0)
    code, out, _ = run(capsys, "birkhoff", "--gauge", '{"kind":"p","p":2}', "--v", files["D"], "--x", files["X"])
    assert code == 0 and abs(out["gap"]) <= 1e-10


def test_majorize(capsys, tmp_path):
    (tmp_path / "z.json").write_text("[0, 0, 0]")
    (tmp_path / "w.json").write_text('{"vector": [1.5, -0.5, -1.0]}')
    code, out, _ = run(capsys, "majorize", "--z", tmp_path / "z.json", "--w", tmp_path / "w.json", "--witness")
    assert code == 0 and out["holds"]
    assert np.allclose(np.array(out["witness"]), 1 / 3)
    code, out, _ = run(capsys, "majorize", "--z", tmp_path / "w.json", "--w", tmp_path / "z.json")
    assert code == 0 and not out["holds"]


def test_hull(capsys, files, tmp_path):
    dec = tmp_path / "dec.json"
    code, out, _ = run(capsys, "hull", files["Z"], files["W"], "--emit-decomposition", dec)
    assert code == 0 and out["in_hull"] and out["residual"] <= 1e-9
    d = json.loads(dec.read_text())
    W = from_eigen([1.0, 0.0, -1.0])
    R = sum(l * (np.array(U["re"]) + 1j * np.array(U["im"])) @ W @ (np.array(U["re"]) + 1j * np.array(U["im"])).conj().T
            for l, U in zip(d["weights"], d["conjugators"]))
    assert np.allclose(R, load_matrix(files["Z"]), atol=1e-9)
    code, out, _ = run(capsys, "hull", files["W"], files["Z"])
    assert code == 0 and not out["in_hull"]


def test_polytope_polar_selfdual(capsys, tmp_path):
    hexf = tmp_path / "hex.json"
    csvf = tmp_path / "hex.csv"
    code, out, _ = run(capsys, "polytope", "--c", "[1, 0, -1]", "--out", hexf, "--emit-csv", csvf)
    assert code == 0 and len(out["vertices"]) == 6
    assert csvf.read_text().startswith("x,y\n")
    dual = tmp_path / "dual.json"
    code, out, _ = run(capsys, "polar", "--polytope", hexf, "--out", dual)
    assert code == 0
    V = np.array(out["vertices"])
    assert len(V) == 6
    V /= np.abs(V).max(axis=1, keepdims=True)
    classes = {tuple(sorted(np.round(2 * v).astype(int))) for v in V}
    assert classes == {(-2, 1, 1), (-1, -1, 2)}
    code, out, _ = run(capsys, "selfdual", "--polytope", hexf)
    assert code == 0 and out["self_dual"]
    code, out, _ = run(capsys, "selfdual", "--c", "[3, -1, -2]", "--normalize")
    assert code == 0 and not out["self_dual"]


def test_verify_command(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": [2], "trials": 2, "properties": ["dissipative", "curvature"]}))
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    code, summary, _ = run(capsys, "verify", "--config", cfg, "--out", out1, "--seed", 3)
    assert code == 0 and summary["passed"]
    monkeypatch.setenv("ADNORM_SEED", "3")
    code, _, _ = run(capsys, "verify", "--config", cfg, "--out", out2)
    assert code == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert json.loads(out1.read_text())["config"]["seeds"] == [3]
    cfg.write_text(json.dumps({"gauges": []}))
    code, summary, _ = run(capsys, "verify", "--config", cfg)
    assert code == 0 and summary["reports"] == 0


def test_exit_codes(capsys, files, tmp_path):
    assert run(capsys, "norm", "--gauge", '{"kind":"bogus"}', "--matrix", files["D"])[0] == 3
    assert run(capsys, "norm", "--gauge", '{"kind":"spectral"}', "--matrix", tmp_path / "missing.json")[0] == 1
    (tmp_path / "bad.json").write_text("{not json")
    assert run(capsys, "norm", "--gauge", '{"kind":"spectral"}', "--matrix", tmp_path / "bad.json")[0] == 1
    (tmp_path / "cfg.json").write_text('{"bogus": 1}')
    assert run(capsys, "verify", "--config", tmp_path / "cfg.json")[0] == 3
    assert run(capsys, "nope")[0] == 3
    assert run(capsys, "polar")[0] == 3
    assert run(capsys, "hull", files["D"], tmp_path / "missing.json")[0] == 1


def test_module_entry_point():
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "adnorm", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "verify" in res.stdout
