import json

import pytest

import goldens as g
from toricres import io
from toricres.cli import main
from toricres.fans import affine_space, hirzebruch, projective_space
from toricres.poly import Poly


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, f in (("p2", projective_space(2)), ("f1", hirzebruch(1)), ("a1", affine_space(1)),
                    ("zp2", g.orbifold_quotient().target)):
        paths[name] = tmp_path / f"{name}.json"
        io.write_json(paths[name], io.fan_to_dict(f))
    paths["quotient"] = tmp_path / "quotient.json"
    io.write_json(paths["quotient"], io.morphism_to_dict(g.orbifold_quotient()))
    return paths


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


def test_validate(files, capsys, tmp_path):
    code, out = run(capsys, "validate", "--fan", files["p2"])
    assert code == 0 and json.loads(out)["valid"]
    bad = tmp_path / "bad.json"
    io.write_json(bad, {"rank_L": 2, "rank_N": 2, "beta": [[1, 0], [0, 1]], "rays": [[2, 0], [0, 1]],
                        "cones": [[0, 1]]})
    assert run(capsys, "validate", "--fan", bad)[0] == 1


def test_thomsen_and_resolve(files, capsys):
    code, out = run(capsys, "thomsen", "--fan", files["p2"])
    assert code == 0 and sorted(e["label"] for e in json.loads(out)["thomsen"]) == ["O", "O(-1)", "O(-2)"]
    code, out = run(capsys, "resolve", "--fan", files["p2"], "--sub", "point")
    assert code == 0 and json.loads(out)["ranks"] == {"0": 1, "1": 3, "2": 2}


def test_resolve_then_verify(files, capsys, tmp_path):
    out = tmp_path / "res.json"
    assert run(capsys, "resolve", "--fan", files["f1"], "--out", out)[0] == 0
    code, text = run(capsys, "verify", "--complex", out, "--trials", 20)
    report = json.loads(text)
    assert code == 0 and report["passed"] and report["checks"]["koszul"]


def test_verify_fails_on_a_broken_complex(files, capsys, tmp_path):
    aug = g.resolution_point(projective_space(2))
    c = aug.complex
    key = sorted(c.differential[2])[0]
    c.differential[2][key] = c.differential[2][key] * Poly.const(c.nvars, 3)
    path = tmp_path / "broken.json"
    io.write_json(path, io.complex_to_dict(c, aug.alpha, aug.target))
    code, text = run(capsys, "verify", "--complex", path, "--trials", 20)
    assert code == 1 and not json.loads(text)["passed"]


def test_restrict_diagonal_and_pushforward(files, capsys, tmp_path):
    code, out = run(capsys, "restrict", "--fan", files["p2"], "--chart", 1)
    assert code == 0 and json.loads(out)["koszul_match"]
    code, out = run(capsys, "diagonal", "--fan", files["p2"])
    assert code == 0 and json.loads(out)["ranks"] == {"0": 1, "1": 3, "2": 2}
    point = tmp_path / "a1point.json"
    assert run(capsys, "resolve", "--fan", files["a1"], "--out", point)[0] == 0
    code, out = run(capsys, "pushforward", "--complex", point, "--map", files["quotient"])
    assert code == 0 and len(json.loads(out)["blocks"]) == 1


def test_frobenius_and_genreport(files, capsys):
    code, out = run(capsys, "frobenius", "--fan", files["p2"], "--divisor", "1", "--ell", 2)
    payload = json.loads(out)
    assert code == 0 and payload["rank"] == 4
    # h^0(O(1)) = 3 forces three copies of O
    assert sorted((e["label"], e["multiplicity"]) for e in payload["summands"]) == [("O", 3), ("O(-1)", 1)]
    code, out = run(capsys, "frobenius", "--fan", files["p2"])
    assert code == 0 and json.loads(out)["certificate"]["stable"]
    code, out = run(capsys, "genreport", "--fan", files["p2"], "--divisor", "-1")
    assert code == 0 and not json.loads(out)["unobstructed"]


def test_render(files, capsys, tmp_path):
    svg = tmp_path / "p2.svg"
    code, out = run(capsys, "render", "--fan", files["p2"], "--svg", svg)
    assert code == 0 and json.loads(out)["hair"] == 9 and svg.read_text().startswith("<svg")


def test_input_errors_exit_with_two(files, capsys, tmp_path):
    assert run(capsys, "resolve")[0] == 2
    assert run(capsys, "resolve", "--fan", tmp_path / "missing.json")[0] == 2
    assert run(capsys, "restrict", "--fan", files["p2"], "--chart", 7)[0] == 2
    assert run(capsys, "frobenius", "--fan", files["p2"], "--divisor", "1,2")[0] == 2
    assert run(capsys, "pushforward", "--complex", files["p2"])[0] == 2
    assert run(capsys, "nonsense")[0] == 2


def test_repeated_runs_are_byte_identical(files, capsys, tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"run{i}.json"
        assert run(capsys, "diagonal", "--fan", files["f1"], "--out", path)[0] == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    first = run(capsys, "stratify", "--fan", files["f1"])[1]
    assert run(capsys, "stratify", "--fan", files["f1"])[1] == first
