import json

import pytest

from pnh.cli import run


def test_fvector_table(tmp_path):
    out = tmp_path / "t.txt"
    assert run(["fvector", "--type", "A3", "--building", "minimal",
                "--output", str(out)]) == 0
    text = out.read_text()
    assert "120" in text and "192" in text and "74" in text


def test_verify_pass_and_fail(tmp_path):
    out = tmp_path / "r.txt"
    assert run(["verify", "--type", "A2", "--a", "1",
                "--output", str(out)]) == 0
    assert "FAIL" not in out.read_text()
    assert run(["verify", "--type", "A2", "--epsilons", "1/3,1",
                "--output", str(out)]) == 1
    assert "FAIL" in out.read_text()


def test_build_emits_parseable_json(tmp_path):
    out = tmp_path / "a2.json"
    assert run(["build", "--type", "A2", "--output", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert len(doc["hrep"]) == 12
    assert len(doc["vrep"]) == 12
    assert doc["config"]["type"] == "A2"


def test_build_with_verification_gate(tmp_path):
    out = tmp_path / "gate.json"
    assert run(["build", "--type", "A2", "--verify", "full",
                "--output", str(out)]) == 0
    assert run(["build", "--type", "A2", "--epsilons", "1/3,1",
                "--verify", "fast", "--output", str(out)]) == 1


def test_usage_errors_exit_two(tmp_path):
    assert run(["build", "--type", "Q7"]) == 2
    assert run(["build", "--type", "A2", "--building", "nonsense"]) == 2
    assert run(["build", "--type", "A2", "--a", "0"]) == 2
    assert run(["nonsense"]) == 2
    assert run([]) == 2
    # rank 2 cannot be meshed
    assert run(["export", "--type", "A2", "--format", "off"]) == 2


def test_interval_building(tmp_path):
    out = tmp_path / "iv.json"
    assert run(["build", "--type", "A1^3", "--building", "interval",
                "--output", str(out)]) == 0
    doc = json.loads(out.read_text())
    # associahedron per chamber: 5 maximal nested sets, 8 chambers
    assert doc["f_vector"][0] == 40
    assert run(["build", "--type", "A2", "--building", "interval"]) == 2


def test_building_from_file(tmp_path):
    spec = tmp_path / "family.json"
    spec.write_text(json.dumps({
        "roots": [[1, 0], [0, 1], [1, 1]],
        "flats": [[0], [1], [2], [0, 1, 2]],
    }))
    out = tmp_path / "custom.json"
    assert run(["build", "--type", "A2",
                "--building", f"file:{spec}", "--output", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["f_vector"] == [12, 12, 1]
    # wrong roots are rejected
    spec.write_text(json.dumps({
        "roots": [[1, 0], [0, 1], [2, 1]],
        "flats": [[0], [1], [2], [0, 1, 2]],
    }))
    assert run(["build", "--type", "A2",
                "--building", f"file:{spec}"]) == 2


def test_poset_and_off_outputs(tmp_path):
    poset = tmp_path / "p.json"
    assert run(["poset", "--type", "A2", "--output", str(poset)]) == 0
    doc = json.loads(poset.read_text())
    assert len(doc["nodes"]) == 25 and len(doc["edges"]) == 36
    mesh = tmp_path / "m.off"
    assert run(["export", "--type", "A3", "--format", "off",
                "--output", str(mesh)]) == 0
    assert mesh.read_text().startswith("OFF\n")


def test_missing_file_is_usage_error():
    assert run(["build", "--type", "A2", "--building", "file:/nonexistent"]) == 2
