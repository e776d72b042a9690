import json

from click.testing import CliRunner

from splinkage import linkage_to_json
from splinkage.cli import main

from helpers import cycle_linkage, strands_fixture


def run(args, stdin=None):
    return CliRunner().invoke(main, args, input=stdin)


def fixture_json():
    return json.dumps(linkage_to_json(strands_fixture()))


def k4_json():
    rows = []
    verts = ["1", "2", "3", "4"]
    n = 0
    for i in range(4):
        for j in range(i + 1, 4):
            n += 1
            rows.append({"id": f"k{n}", "u": verts[i], "v": verts[j], "length": "1"})
    return json.dumps({"vertices": verts, "edges": rows})


def test_check_fixture_disconnected():
    result = run(["check", "--input", "-"], stdin=fixture_json())
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["status"] == "disconnected"
    assert any(step.get("r") == "[3,4]" for step in doc["trace"])


def test_check_rhombus_connected():
    payload = json.dumps(linkage_to_json(cycle_linkage([1, 1, 1, 1])))
    result = run(["check", "--input", "-"], stdin=payload)
    assert result.exit_code == 0
    assert json.loads(result.output)["status"] == "connected"


def test_check_k4_exit_2():
    result = run(["check", "--input", "-"], stdin=k4_json())
    assert result.exit_code == 2
    assert "series-parallel" in result.stderr


def test_check_malformed_exit_1():
    result = run(["check", "--input", "-"], stdin="{broken")
    assert result.exit_code == 1


def test_range_plain_and_json():
    result = run(["range", "--input", "-", "--terminals", "a,h"], stdin=fixture_json())
    assert result.exit_code == 0
    assert result.output.strip() == "[3,5]"
    result = run(
        ["range", "--input", "-", "--terminals", "a,h", "--json"],
        stdin=fixture_json(),
    )
    doc = json.loads(result.output)
    assert doc["range"] == "[3,5]"
    assert "[3,5]∩[0,4]=[3,4]" in doc["steps"]


def test_range_rerooted():
    result = run(["range", "--input", "-", "--terminals", "c,h"], stdin=fixture_json())
    assert result.output.strip() == "[3,4]"


def test_range_empty_prints_empty():
    doubled = json.dumps(
        {
            "vertices": ["u", "v"],
            "edges": [
                {"id": "a", "u": "u", "v": "v", "length": "1"},
                {"id": "b", "u": "u", "v": "v", "length": "3"},
            ],
        }
    )
    result = run(["range", "--input", "-", "--terminals", "u,v"], stdin=doubled)
    assert result.output.strip() == "empty"


def test_range_bad_terminals_exit_2():
    # interiors of two different parallel strands cannot both be terminals
    result = run(["range", "--input", "-", "--terminals", "f,g"], stdin=fixture_json())
    assert result.exit_code == 2


def test_nabla_command():
    assert run(["nabla", "1", "1", "1"]).output.strip() == "[1,3]"
    assert run(["nabla", "4", "1"]).output.strip() == "{3,5}"
    assert run(["nabla", "2", "2"]).output.strip() == "{0,4}"
    result = run(["nabla", "5"])
    assert result.exit_code == 1


def test_tree_dot_output():
    result = run(["tree", "--input", "-", "--terminals", "a,h"], stdin=fixture_json())
    assert result.exit_code == 0
    assert result.output.startswith("digraph")
    assert "p4a" in result.output


def test_realize_and_infeasible():
    result = run(
        ["realize", "--input", "-", "--terminals", "a,h", "--distance", "4"],
        stdin=fixture_json(),
    )
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["distance"] == 4.0
    assert doc["placement"]["a"] == [0.0, 0.0]
    assert doc["placement"]["h"] == [4.0, 0.0]
    result = run(
        ["realize", "--input", "-", "--terminals", "a,h", "--distance", "99"],
        stdin=fixture_json(),
    )
    assert result.exit_code == 3


def test_oracle_fiber_json():
    path = json.dumps(
        {
            "vertices": ["s", "m", "t"],
            "edges": [
                {"id": "e1", "u": "s", "v": "m", "length": "1"},
                {"id": "e2", "u": "m", "v": "t", "length": "1"},
            ],
        }
    )
    result = run(
        ["oracle", "--input", "-", "--mode", "fiber", "--distance", "1.0"],
        stdin=path,
    )
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["components"] == 2
    assert doc["resolution"] == 200


def test_oracle_moduli_json():
    payload = json.dumps(linkage_to_json(cycle_linkage([1, 1, 1])))
    result = run(
        ["oracle", "--input", "-", "--mode", "moduli", "--samples", "400", "--seed", "5"],
        stdin=payload,
    )
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["components"] == 2
    assert doc["n"] == 400 and doc["seed"] == 5


def test_output_byte_stable():
    args = ["check", "--input", "-"]
    first = run(args, stdin=fixture_json()).output
    second = run(args, stdin=fixture_json()).output
    assert first == second
    args = [
        "oracle", "--input", "-", "--mode", "moduli", "--samples", "300", "--seed", "9",
    ]
    payload = json.dumps(linkage_to_json(cycle_linkage([1, 1, 1, 1])))
    assert run(args, stdin=payload).output == run(args, stdin=payload).output


def test_round_trip_identity():
    from splinkage import parse_linkage

    doc = fixture_json()
    linkage = parse_linkage(doc)
    assert json.dumps(linkage_to_json(linkage)) == json.dumps(
        linkage_to_json(parse_linkage(json.dumps(linkage_to_json(linkage))))
    )
