import json
import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from ndrot import io
from ndrot.cli import main
from ndrot.isoclinic import isoclinic_rotation
from ndrot.rotation import rotation_nd
from ndrot.sampling import random_spec

GOLDEN = sorted((Path(__file__).parent / "data" / "golden").glob("*.json"))


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write_spec(tmp_path, data, name="spec.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return path


def spec_to_json(spec):
    return {
        "dim": spec.dim,
        "planes": [{"a": p.a.tolist(), "b": p.b.tolist(), "angle_radians": p.angle} for p in spec.planes],
        **({"axis": spec.axis.tolist()} if spec.axis is not None else {}),
    }


ISO = {"dim": 4, "planes": [
    {"a": [1, 0, 0, 0], "b": [0, 1, 0, 0], "angle_degrees": 60},
    {"a": [0, 0, 1, 0], "b": [0, 0, 0, 1], "angle_degrees": 60},
]}
DOUBLE = {"dim": 4, "planes": [
    {"a": [1, 0, 0, 0], "b": [0, 1, 0, 0], "angle_radians": math.pi / 3},
    {"a": [0, 0, 1, 0], "b": [0, 0, 0, 1], "angle_radians": math.pi / 4},
]}


# -- formats -----------------------------------------------------------------

@pytest.mark.parametrize("x, text", [
    (0.0, "0.000000000000"),
    (-3e-13, "0.000000000000"),
    (0.5, "0.500000000000"),
    (-1.0, "-1.00000000000"),
    (12.5, "12.5000000000"),
    (2e-5, "0.0000200000000000"),
])
def test_format_entry(x, text):
    assert io.format_entry(x) == text


def test_format_entry_twelve_significant_digits(rng):
    for x in rng.uniform(-1, 1, 200) * 10.0 ** rng.integers(-10, 4, 200):
        s = io.format_entry(x)
        assert "e" not in s
        if abs(x) >= 1e-12:
            ulp12 = 10.0 ** (math.floor(math.log10(abs(x))) - 11)
            assert abs(float(s) - x) <= 0.5 * ulp12 * (1 + 1e-9)


def test_parse_matrix_text_and_json():
    M = io.parse_matrix("# comment\n1 2\n\n3 4\n")
    assert M.tolist() == [[1, 2], [3, 4]]
    assert io.parse_matrix("[[1, 2], [3, 4]]").tolist() == [[1, 2], [3, 4]]
    with pytest.raises(io.ParseError, match="line 2"):
        io.parse_matrix("1 2\n3\n")
    with pytest.raises(io.ParseError, match="line 1"):
        io.parse_matrix("1 x\n")


@pytest.mark.parametrize("data, field", [
    ({"planes": []}, "dim"),
    ({"dim": "3"}, "dim"),
    ({"dim": 2, "planes": [{"a": [1, 0], "b": [0, 1]}]}, "planes[0]"),
    ({"dim": 2, "planes": [{"a": [1, 0], "b": [0, 1], "angle_degrees": 1, "angle_radians": 1}]}, "planes[0]"),
    ({"dim": 2, "planes": [{"a": [1, "x"], "b": [0, 1], "angle_degrees": 1}]}, "planes[0].a[1]"),
    ({"dim": 2, "planes": [{"b": [0, 1], "angle_degrees": 1}]}, "planes[0].a"),
    ({"dim": 2, "planes": [], "colour": 1}, "colour"),
    ({"dim": 2, "planes": [], "seed": -1}, "seed"),
])
def test_malformed_spec_exit_2_names_field(tmp_path, capsys, data, field):
    code, _, err = run(["build", write_spec(tmp_path, data)], capsys)
    assert code == 2
    assert field in err


def test_json_syntax_error_reports_line(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"dim": 2,\n "planes": [,]}')
    code, _, err = run(["build", path], capsys)
    assert code == 2 and "line 2" in err


def test_missing_file_is_parse_error(tmp_path, capsys):
    code, _, err = run(["build", tmp_path / "nope.json"], capsys)
    assert code == 2 and "cannot read" in err


# -- build -------------------------------------------------------------------

def test_build_quarter_turn(tmp_path, capsys):
    spec = {"dim": 2, "planes": [{"a": [1, 0], "b": [0, 1], "angle_degrees": 90}]}
    code, out, _ = run(["build", write_spec(tmp_path, spec)], capsys)
    assert code == 0
    assert out == "0.000000000000 -1.00000000000\n1.00000000000 0.000000000000\n"
    code, out, _ = run(["build", write_spec(tmp_path, spec), "--output", "json"], capsys)
    assert np.max(np.abs(np.array(json.loads(out)) - [[0, -1], [1, 0]])) < 1e-12


def test_build_isoclinic_matches_library(tmp_path, capsys):
    code, out, _ = run(["build", write_spec(tmp_path, ISO), "--output", "json"], capsys)
    assert code == 0
    expected = isoclinic_rotation(list(np.eye(4)), math.pi / 3)
    assert np.max(np.abs(np.array(json.loads(out)) - expected)) < 1e-12


@pytest.mark.parametrize("data", [
    {"dim": 3, "planes": [{"a": [1, 0], "b": [0, 1], "angle_degrees": 10}]},
    {"dim": 3, "planes": [{"a": [1, 0, 0], "b": [2, 0, 0], "angle_degrees": 10}]},
    {"dim": 4, "planes": [{"a": [1, 0, 0, 0], "b": [0, 1, 0, 0], "angle_degrees": 10},
                          {"a": [1, 0, 1, 0], "b": [0, 0, 0, 1], "angle_degrees": 10}]},
    {"dim": 3, "planes": [{"a": [1, 0, 0], "b": [0, 1, 0], "angle_degrees": 10}], "axis": [1, 0, 1]},
])
def test_invalid_spec_exit_3(tmp_path, capsys, data):
    code, _, err = run(["build", write_spec(tmp_path, data)], capsys)
    assert code == 3 and "invalid spec" in err


def test_strict_rejects_repairable_input(tmp_path, capsys):
    data = {"dim": 3, "planes": [{"a": [2, 0, 0], "b": [1, 1, 0], "angle_degrees": 10}]}
    path = write_spec(tmp_path, data)
    assert run(["build", path], capsys)[0] == 0
    assert run(["build", path, "--strict"], capsys)[0] == 3


def test_text_and_json_agree_to_twelve_digits(tmp_path, capsys):
    for path in GOLDEN:
        _, text, _ = run(["build", path], capsys)
        _, js, _ = run(["build", path, "--output", "json"], capsys)
        T = io.parse_matrix(text)
        J = np.array(json.loads(js))
        for t, j in zip(T.ravel(), J.ravel()):
            if abs(j) < io.ZERO_CUTOFF:
                assert t == 0.0
            else:
                unit = 10.0 ** (math.floor(math.log10(abs(j))) - 11)
                assert abs(t - j) <= unit


# -- apply -------------------------------------------------------------------

def test_apply_identity_spec(tmp_path, capsys):
    data = {"dim": 4, "planes": [{"a": [1, 0, 0, 0], "b": [0, 1, 1, 0], "angle_degrees": 0}]}
    code, out, _ = run(["apply", write_spec(tmp_path, data), "--vector", "1,-2,3.5,4", "--output", "json"], capsys)
    assert code == 0
    assert np.max(np.abs(np.array(json.loads(out)) - [1, -2, 3.5, 4])) < 1e-15


def test_apply_rodrigues_case(tmp_path, capsys):
    data = {"dim": 3, "planes": [{"a": [1, 0, 0], "b": [0, 1, 0], "angle_radians": math.pi / 2}]}
    code, out, _ = run(["apply", write_spec(tmp_path, data), "--vector", "1,0,0", "--output", "json"], capsys)
    assert code == 0
    assert np.max(np.abs(np.array(json.loads(out)) - [0, 1, 0])) < 1e-12


def test_apply_random_matches_emitted_matrix(tmp_path, capsys, rng):
    for i in range(10):
        spec = random_spec(int(rng.integers(2, 10)), rng)
        path = write_spec(tmp_path, spec_to_json(spec), f"s{i}.json")
        x = rng.uniform(-1, 1, spec.dim)
        _, out, _ = run(["apply", path, "--vector=" + ",".join(repr(float(v)) for v in x), "--output", "json"], capsys)
        _, mat, _ = run(["build", path, "--output", "json"], capsys)
        y = np.array(json.loads(out))
        assert np.max(np.abs(y - np.array(json.loads(mat)) @ x)) < 1e-12


def test_apply_errors(tmp_path, capsys):
    path = write_spec(tmp_path, ISO)
    assert run(["apply", path, "--vector", "1,2"], capsys)[0] == 3
    assert run(["apply", path, "--vector", "1,a,2,3"], capsys)[0] == 2


# -- verify ------------------------------------------------------------------

def test_verify_identity(tmp_path, capsys):
    path = tmp_path / "I.txt"
    path.write_text("1 0 0\n0 1 0\n0 0 1\n")
    code, out, _ = run(["verify", path], capsys)
    assert code == 0
    assert "ortho_residual 0.000000e+00" in out and "is_rotation true" in out
    assert "det_value 1.00000000000" in out


def test_verify_reflection(tmp_path, capsys):
    path = tmp_path / "refl.json"
    path.write_text("[[1, 0, 0], [0, 1, 0], [0, 0, -1]]")
    code, out, _ = run(["verify", path], capsys)
    assert code == 1 and "det_value -1.00000000000" in out and "is_rotation false" in out


def test_verify_non_square(tmp_path, capsys):
    path = tmp_path / "rect.txt"
    path.write_text("1 0 0\n0 1 0\n")
    assert run(["verify", path], capsys)[0] == 3


def test_verify_accepts_spec_file(capsys):
    assert run(["verify", GOLDEN[0]], capsys)[0] == 0


# -- invariant ---------------------------------------------------------------

def _witnesses(out):
    planes = []
    for line in out.splitlines():
        if line.strip().startswith("[") and "u = [" in line:
            u = line.split("u = [")[1].split("]")[0]
            v = line.split("v = [")[1].split("]")[0]
            planes.append((np.array(u.split(), float), np.array(v.split(), float)))
    return planes


def test_invariant_isoclinic(tmp_path, capsys):
    path = write_spec(tmp_path, ISO)
    code, out, _ = run(["invariant", path, "--samples", "8", "--seed", "3"], capsys)
    assert code == 0
    assert "classification all_J_planes" in out and "\nJ\n" in out
    R = rotation_nd(io.load_spec(path).to_spec())
    planes = _witnesses(out)
    assert len(planes) == 8
    for u, v in planes:
        Ru, Rv = R @ u, R @ v
        for w in (Ru, Rv):
            # 12-digit printed vectors: allow for the rounding of u and v
            assert np.linalg.norm(w - (w @ u) * u - (w @ v) * v) < 1e-10


def test_invariant_double_rotation(tmp_path, capsys):
    code, out, _ = run(["invariant", write_spec(tmp_path, DOUBLE), "--samples", "300"], capsys)
    assert code == 0
    assert "classification none_extra" in out
    assert "rotation planes 2" in out
    assert "0 of 300 invariant" in out
    assert out.count(" invariant\n") == 2 or out.count("residual") == 2


def test_invariant_identity_degenerate(tmp_path, capsys):
    data = json.loads(json.dumps(ISO))
    for p in data["planes"]:
        p["angle_degrees"] = 0
    code, out, _ = run(["invariant", write_spec(tmp_path, data), "--samples", "2"], capsys)
    assert code == 0 and "all_J_planes" in out and "every 2-D subspace is invariant" in out


def test_invariant_inapplicable(tmp_path, capsys):
    data = {"dim": 3, "planes": [{"a": [1, 0, 0], "b": [0, 1, 0], "angle_degrees": 10}]}
    code, _, err = run(["invariant", write_spec(tmp_path, data)], capsys)
    assert code == 3 and "no fixed directions" in err


def test_invariant_uses_seed_from_file(tmp_path, capsys):
    data = dict(ISO, seed=5)
    path = write_spec(tmp_path, data)
    _, a, _ = run(["invariant", path, "--samples", "3"], capsys)
    _, b, _ = run(["invariant", path, "--samples", "3", "--seed", "5"], capsys)
    assert a == b and "seed 5" in a


# -- det ---------------------------------------------------------------------

def test_det_identity_both_methods(tmp_path, capsys):
    path = tmp_path / "I4.txt"
    path.write_text(io.format_matrix_text(np.eye(4)))
    code, out, _ = run(["det", path], capsys)
    assert code == 0 and "det_perm 1\n" in out and "det_lu 1\n" in out


def test_det_random_methods_agree(tmp_path, capsys, rng):
    path = tmp_path / "A.json"
    path.write_text(json.dumps(rng.uniform(-1, 1, (5, 5)).tolist()))
    code, out, _ = run(["det", path, "--method", "both"], capsys)
    vals = dict(line.split() for line in out.splitlines())
    assert float(vals["relative_difference"]) < 1e-10


def test_det_perm_too_large(tmp_path, capsys):
    path = tmp_path / "big.json"
    path.write_text(json.dumps(np.eye(11).tolist()))
    assert run(["det", path, "--method", "perm"], capsys)[0] == 3
    assert run(["det", path, "--method", "lu"], capsys)[0] == 0


def test_det_product(tmp_path, capsys, rng):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    a.write_text(json.dumps(rng.uniform(-1, 1, (4, 4)).tolist()))
    b.write_text(json.dumps(rng.uniform(-1, 1, (4, 4)).tolist()))
    code, out, _ = run(["det-product", a, b], capsys)
    assert code == 0
    assert float(out.split("residual ")[1]) < 1e-9
    c = tmp_path / "c.json"
    c.write_text(json.dumps(np.eye(3).tolist()))
    assert run(["det-product", a, c], capsys)[0] == 3


# -- selftest ----------------------------------------------------------------

def test_selftest_passes_and_is_deterministic(capsys):
    code, first, _ = run(["selftest", "--seed", "7"], capsys)
    assert code == 0
    _, second, _ = run(["selftest", "--seed", "7"], capsys)
    assert first == second


@pytest.mark.parametrize("mutation", ["colrow-offset", "perm-sign", "sin-sign", "drop-complement", "rodrigues-sign"])
def test_selftest_catches_mutations(capsys, mutation):
    code, out, _ = run(["selftest", "--mutate", mutation], capsys)
    assert code != 0 and "first failure" in out


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "ndrot", "build", str(GOLDEN[0])],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("0.000000000000 -1.00000000000")
