import json
import subprocess


def run(cli, *args):
    return subprocess.run([cli, *map(str, args)], capture_output=True, text=True)


def test_find_critical_with_verification(cli, data_dir):
    r = run(cli, "find-critical", data_dir / "two_point.json", "--verify")
    assert r.returncode == 0, r.stderr
    assert r.stdout.count("\n") >= 3


def test_classify_saddle(cli, data_dir):
    r = run(cli, "classify", data_dir / "two_point.json", "--point", "0,0")
    assert r.returncode == 0, r.stderr
    assert "Critical" in r.stdout


def test_validation_exit_codes(cli, data_dir):
    assert run(cli, "validate", data_dir / "torus_single.json").returncode == 0
    bad = run(cli, "validate", data_dir / "axis_distance.json")
    assert bad.returncode == 2
    assert "NonConvexPiece" in bad.stdout + bad.stderr
    empty = run(cli, "validate", data_dir / "empty.json")
    assert empty.returncode == 2
    assert "EmptyFamily" in empty.stdout + empty.stderr
    broken = run(cli, "validate", data_dir / "malformed.json")
    assert broken.returncode == 3
    assert "line 4" in broken.stdout + broken.stderr


def test_usage_error(cli):
    assert run(cli, "no-such-command").returncode != 0


def test_emit_round_trip(cli, data_dir, tmp_path):
    out = tmp_path / "normalized.json"
    assert run(cli, "validate", data_dir / "two_point.json", "--emit", out).returncode == 0
    doc = json.loads(out.read_text())
    assert doc["kind"] == "point_sites"
