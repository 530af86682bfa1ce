import csv
import json

import pytest

from gmoat.cli import dispatch, read_decomposition_csv, write_decomposition_csv
from gmoat import GapKind, GapModel, GaussianPrime, NormSegment
from gmoat.paths import Path as PrimePath, PathDecomposition


def run(capsys, *argv):
    code = dispatch(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_circle_count_json(capsys):
    code, out, _ = run(capsys, "circle", "count", "--R", "1", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["report"]["N"] == 5
    assert doc["manifest"]["command"] == "circle count"
    assert doc["report"]["within_classical_bound"] is True


def test_bad_segment_exits_1(capsys):
    code, _, err = run(capsys, "paths", "build", "--segment", "bad")
    assert code == 1
    assert "error" in err


def test_unknown_command_exits_1(capsys):
    code, _, _ = run(capsys, "frobnicate")
    assert code == 1


def test_no_command_exits_1(capsys):
    code, _, _ = run(capsys)
    assert code == 1


def test_walk_no_candidate(capsys):
    code, out, _ = run(
        capsys, "walk", "run", "--M", "0.5", "--start", "1,1", "--region", "100", "--json"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["report"]["n_steps"] == 0
    assert doc["report"]["terminated_reason"] == "NO_CANDIDATE"


def test_domain_error_exits_1(capsys):
    code, _, err = run(capsys, "paths", "isolate", "--prime", "2,2", "--bound", "3")
    assert code == 1
    assert "not a Gaussian prime" in err


def test_inconclusive_region_exits_1(capsys):
    code, _, err = run(capsys, "moat", "escape", "--seed", "1,1", "--region", "10")
    assert code == 1
    assert "region" in err


def test_json_reruns_identical_minus_wall_time(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "sieve", "--segment", "2:200", "--json", str(a))[0] == 0
    assert run(capsys, "sieve", "--segment", "2:200", "--json", str(b))[0] == 0
    da, db = json.loads(a.read_text()), json.loads(b.read_text())
    da["manifest"].pop("wall_time_ms")
    db["manifest"].pop("wall_time_ms")
    assert da == db


def test_csv_has_manifest_comment(tmp_path, capsys):
    f = tmp_path / "rows.csv"
    assert run(capsys, "sieve", "--segment", "2:30", "--csv", str(f))[0] == 0
    lines = f.read_text().splitlines()
    manifest = json.loads(lines[0][2:])
    assert manifest["params"]["segment"] == "2:30"
    rows = list(csv.reader(lines[1:]))
    assert rows[0] == ["a", "b", "norm"]
    assert rows[1] == ["1", "1", "2"]
    assert len(rows) == 6


def test_paths_build_audit_roundtrip(tmp_path, capsys):
    f = tmp_path / "d.csv"
    assert run(
        capsys, "paths", "build", "--segment", "10^2:10^3", "--gap", "cramer", "--out", str(f)
    )[0] == 0
    code, out, _ = run(capsys, "paths", "audit", "--in", str(f), "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["report"]["disjoint"] and doc["report"]["coverage"]
    assert doc["report"]["n_paths"] == 67
    d, manifest = read_decomposition_csv(f)
    assert d.n_primes == 69
    assert manifest["command"] == "paths build"


def test_audit_of_overlapping_paths_exits_2(tmp_path, capsys):
    p = GaussianPrime(1, 1)
    d = PathDecomposition(
        segment=NormSegment(2, 30),
        model=GapModel(kind=GapKind.CONSTANT, const_value=1.0),
        include_axis=False,
        paths=(
            PrimePath(index=1, members=(p, GaussianPrime(2, 1))),
            PrimePath(index=2, members=(p,)),  # duplicate membership
        ),
    )
    f = tmp_path / "bad.csv"
    manifest = {
        "command": "paths build",
        "params": {
            "segment": "2:30",
            "gap": "const",
            "gap_c": 1.0,
            "gap_delta": 0.025,
            "gap_const": 1.0,
            "log10": False,
            "include_axis": False,
        },
        "version": "test",
        "input_digests": {},
        "wall_time_ms": 0,
    }
    write_decomposition_csv(d, f, manifest)
    code, _, err = run(capsys, "paths", "audit", "--in", str(f))
    assert code == 2
    assert "invariant" in err


def test_moat_component_svg(tmp_path, capsys):
    svg = tmp_path / "c.svg"
    code, _, _ = run(
        capsys, "moat", "component", "--seed", "1,1", "--k2", "2", "--region", "1000",
        "--svg", str(svg), "--json", str(tmp_path / "c.json"),
    )
    assert code == 0
    text = svg.read_text()
    assert text.startswith("<svg")
    assert "</svg>" in text
    doc = json.loads((tmp_path / "c.json").read_text())
    assert doc["report"]["size"] == 12


def test_cache_env_roundtrip(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("GMOAT_CACHE_DIR", str(tmp_path))
    code, out, _ = run(capsys, "sieve", "--segment", "2:500", "--cache", "--json")
    assert code == 0
    first = json.loads(out)
    assert first["manifest"]["input_digests"] == {}  # cold run sieves then writes
    files = list(tmp_path.iterdir())
    assert len(files) == 1 and files[0].suffix == ".gmoat"
    code, out, _ = run(capsys, "sieve", "--segment", "2:500", "--cache", "--json")
    second = json.loads(out)
    assert code == 0
    assert second["report"] == first["report"]
    assert list(second["manifest"]["input_digests"]) == [str(files[0])]  # warm hit


def test_cache_write_verify_read(tmp_path, capsys):
    f = tmp_path / "seg.bin"
    assert run(capsys, "cache", "write", "--segment", "2:300", "--out", str(f))[0] == 0
    assert run(capsys, "cache", "verify", "--in", str(f))[0] == 0
    code, out, _ = run(capsys, "cache", "read", "--in", str(f), "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["report"]["count"] > 5
    assert doc["report"]["first"][0] == [1, 1]
    blob = bytearray(f.read_bytes())
    blob[len(blob) // 2] ^= 0x40
    f.write_bytes(bytes(blob))
    code, _, err = run(capsys, "cache", "verify", "--in", str(f))
    assert code == 1


def test_dominance_csv(tmp_path, capsys):
    f = tmp_path / "dom.csv"
    code, _, _ = run(capsys, "walk", "dominance", "--M", "10", "--A", "2:6", "--csv", str(f))
    assert code == 0
    lines = f.read_text().splitlines()
    rows = list(csv.reader(lines[1:]))
    assert rows[0][0] == "A"
    assert len(rows) == 1 + 5 * 3  # header + 5 exponents x 3 models


def test_bound_json(capsys):
    code, out, _ = run(capsys, "paths", "bound", "--gap", "cramer", "--A", "4", "--json")
    assert code == 0
    assert json.loads(out)["report"]["bound_value"] == pytest.approx(5.08, abs=1e-9)


def test_factorial_json(capsys):
    code, out, _ = run(capsys, "moat", "factorial", "--n", "6", "--json")
    assert code == 0
    rep = json.loads(out)["report"]
    assert rep["plus_one"] == 721
    assert rep["plus_one_is_prime"] is False
    assert len(rep["primes_found"]) == 15
