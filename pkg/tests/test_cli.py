import json
import math

import numpy as np
import pytest

from sectorial.cli import main, matrix_payload, read_matrix, write_matrix


def _write(tmp_path, name, matrix):
    path = tmp_path / name
    write_matrix(str(path), np.asarray(matrix, dtype=complex))
    return str(path)


@pytest.fixture
def identity_file(tmp_path):
    return _write(tmp_path, "eye.json", np.eye(2))


@pytest.fixture
def jordan_file(tmp_path):
    return _write(tmp_path, "jordan.json", [[1.0, 1j], [0.0, 1.0]])


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out.strip()
    return code, json.loads(out.splitlines()[-1]) if out else None


def test_matrix_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    path = _write(tmp_path, "m.json", m)
    back = read_matrix(path)
    assert np.array_equal(back, m)


def test_compute_radius_identity(capsys, identity_file):
    code, out = _run(capsys, ["compute", identity_file, "--op", "radius"])
    assert code == 0
    assert out == {"value": 1.0}


def test_compute_sector(capsys, jordan_file):
    code, out = _run(capsys, ["compute", jordan_file, "--op", "sector"])
    assert code == 0
    assert out["alpha"] == pytest.approx(math.pi / 6.0, abs=1e-9)


def test_compute_norm_and_power(capsys, tmp_path):
    path = _write(tmp_path, "d.json", np.diag([4.0, 9.0]))
    code, out = _run(capsys, ["compute", path, "--op", "norm"])
    assert code == 0 and out["value"] == pytest.approx(9.0, abs=1e-10)
    code, out = _run(capsys, ["compute", path, "--op", "power:0.5"])
    assert code == 0
    got = np.asarray(out["matrix"]["re"])
    np.testing.assert_allclose(got, np.diag([2.0, 3.0]), atol=1e-8)


def test_compute_mean_requires_second(capsys, tmp_path):
    a = _write(tmp_path, "a.json", np.diag([4.0]))
    b = _write(tmp_path, "b.json", np.diag([9.0]))
    code, out = _run(capsys, ["compute", a, "--op", "mean:geometric:0.5"])
    assert code == 2
    code, out = _run(capsys, ["compute", a, "--op", "mean:geometric:0.5", "--second", b])
    assert code == 0
    assert out["matrix"]["re"][0][0] == pytest.approx(6.0, abs=1e-8)


def test_compute_malformed_file(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"n": 2, "re": [[1, 0]], "im": [[0, 0]]}))
    code, out = _run(capsys, ["compute", str(path), "--op", "radius"])
    assert code == 2
    assert out["error"]["type"] == "usage"


def test_compute_non_accretive_sector_is_domain_error(capsys, tmp_path):
    path = _write(tmp_path, "nil.json", [[0.0, 1.0], [0.0, 0.0]])
    code, out = _run(capsys, ["compute", path, "--op", "sector"])
    assert code == 3
    assert out["error"]["type"] == "NotAccretiveError"


def test_compute_power_out_of_range(capsys, identity_file):
    code, out = _run(capsys, ["compute", identity_file, "--op", "power:1.5"])
    assert code == 2


def test_compute_unknown_op(capsys, identity_file):
    code, out = _run(capsys, ["compute", identity_file, "--op", "trace"])
    assert code == 2


def test_check_runs_and_is_byte_identical(capsys, tmp_path):
    out1 = str(tmp_path / "r1.json")
    out2 = str(tmp_path / "r2.json")
    argv = ["check", "--checks", "T7", "--dims", "2", "3", "--alphas", "0",
            "0.6", "--trials", "3", "--seed", "42"]
    code, summary = _run(capsys, argv + ["--out", out1])
    assert code == 0
    assert summary["verdict"] == "pass"
    code, _ = _run(capsys, argv + ["--out", out2])
    assert code == 0
    assert open(out1, "rb").read() == open(out2, "rb").read()
    csv_text = open(out1[:-5] + ".csv").read()
    assert csv_text.splitlines()[0].startswith("check,dim,alpha")
    assert len(csv_text.splitlines()) == 1 + 4  # header + cells


def test_check_rejects_unknown_check(capsys, tmp_path):
    code, out = _run(capsys, ["check", "--checks", "T99", "--trials", "1",
                              "--out", str(tmp_path / "r.json")])
    assert code == 2


def test_replay_matches_report(capsys, tmp_path):
    out = str(tmp_path / "rep.json")
    code, _ = _run(capsys, ["check", "--checks", "T13", "--dims", "3",
                            "--alphas", "0.9", "--trials", "4", "--seed", "7",
                            "--out", out])
    assert code == 0
    payload = json.load(open(out))
    cell = payload["cells"][0]
    code, replayed = _run(capsys, ["replay", out, "T13", "0"])
    assert code == 0
    assert replayed["recomputed"]["margin"] == cell["worst_margin"]
    assert replayed["stored"]["worst_margin"] == cell["worst_margin"]
    assert replayed["recomputed"]["pass"] is True


def test_replay_wrong_check_is_usage_error(capsys, tmp_path):
    out = str(tmp_path / "rep.json")
    _run(capsys, ["check", "--checks", "T7", "--dims", "2", "--alphas", "0",
                  "--trials", "2", "--seed", "1", "--out", out])
    code, payload = _run(capsys, ["replay", out, "T13", "0"])
    assert code == 2
    code, payload = _run(capsys, ["replay", out, "T7", "5"])
    assert code == 2


def test_payload_round_trips_17_digits():
    m = np.array([[1.0 / 3.0 + 1e-17j]])
    payload = matrix_payload(m)
    assert json.loads(json.dumps(payload)) == payload


def test_check_violation_exits_one(capsys, tmp_path, monkeypatch):
    import sectorial.harness as harness
    from sectorial.harness import CheckDefinition

    rigged = CheckDefinition(
        id="T1", statement="always violated", arity=1,
        evaluate=lambda mats, alpha, p: (2.0, 1.0, -1.0),
    )
    monkeypatch.setitem(harness._BY_ID, "T1", rigged)
    out = str(tmp_path / "bad.json")
    code, summary = _run(capsys, ["check", "--checks", "T1", "--dims", "2",
                                  "--alphas", "0", "--trials", "2",
                                  "--seed", "1", "--out", out])
    assert code == 1
    assert summary["verdict"] == "fail"
    assert summary["violations"] == 2
