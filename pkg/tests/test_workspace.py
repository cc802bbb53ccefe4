import json

import pytest

from rlsheaf import cli, rlcore, workspace


def bundled_text():
    from importlib import resources

    return resources.files("rlsheaf.data").joinpath("paper_fixtures.json").read_text("utf-8")


def test_bundled_corpus_loads_clean():
    ws = workspace.parse_workspace(bundled_text())
    assert not ws.diagnostics
    assert set(ws.lattices) == {"A2", "A3", "A4", "A6", "A8"}
    assert "etspecha4" in ws.rl_bundles
    assert "rle_m1" in ws.morphisms
    assert ws.expectations["filters"]["A4"]["F2"] == ["1", "a"]


def test_empty_document_gives_empty_workspace():
    ws = workspace.parse_workspace("{}")
    assert not ws.lattices and not ws.spaces and not ws.bundles


def test_unknown_top_level_key_rejected():
    with pytest.raises(workspace.WorkspaceSyntaxError):
        workspace.parse_workspace('{"widgets": {}}')


def test_unknown_entry_key_rejected():
    doc = {"spaces": {"s": {"points": ["x"], "opens": [[], ["x"]], "color": "red"}}}
    with pytest.raises(workspace.WorkspaceSyntaxError):
        workspace.parse_workspace(json.dumps(doc))


def test_invalid_json_is_syntax_error():
    with pytest.raises(workspace.WorkspaceSyntaxError):
        workspace.parse_workspace("{not json")


def test_dangling_bundle_base_reference_names_the_key():
    doc = {
        "spaces": {"t": {"points": ["a"], "opens": [[], ["a"]]}},
        "bundles": {"b": {"total": "t", "base": "missing", "proj": {"a": "a"}}},
    }
    with pytest.raises(workspace.WorkspaceReferenceError) as err:
        workspace.parse_workspace(json.dumps(doc))
    assert "missing" in str(err.value)


def test_mul_symmetrization_and_conflict():
    base = {
        "carrier": ["0", "1"],
        "hasse": [["0", "1"]],
        "bot": "0",
        "top": "1",
    }
    ok = dict(base, mul={"0,0": "0", "0,1": "0", "1,1": "1"})
    ws = workspace.parse_workspace(json.dumps({"lattices": {"L": ok}}))
    assert ws.lattices["L"].mul[("1", "0")] == "0"
    bad = dict(base, mul={"0,0": "0", "0,1": "0", "1,0": "1", "1,1": "1"})
    with pytest.raises(workspace.WorkspaceSyntaxError):
        workspace.parse_workspace(json.dumps({"lattices": {"L": bad}}))


def test_incomplete_mul_table_is_parse_error():
    doc = {
        "lattices": {
            "L": {
                "carrier": ["0", "1"],
                "hasse": [["0", "1"]],
                "mul": {"1,1": "1"},
                "bot": "0",
                "top": "1",
            }
        }
    }
    with pytest.raises(workspace.WorkspaceSyntaxError):
        workspace.parse_workspace(json.dumps(doc))


def test_validation_failure_strict_vs_lenient():
    doc = {
        "spaces": {"s": {"points": ["x", "y"], "opens": [[], ["x"], ["y"]]}},
    }
    with pytest.raises(workspace.WorkspaceValidationError):
        workspace.parse_workspace(json.dumps(doc))
    ws = workspace.parse_workspace(json.dumps(doc), strict=False)
    assert ws.diagnostics and "spaces.s" in ws.diagnostics[0]
    assert "s" not in ws.spaces


def test_leq_form_lattice():
    doc = {
        "lattices": {
            "L": {
                "carrier": ["0", "1"],
                "leq": [["0", "1"]],
                "mul": {"0,0": "0", "0,1": "0", "1,1": "1"},
                "bot": "0",
                "top": "1",
            }
        }
    }
    ws = workspace.parse_workspace(json.dumps(doc))
    assert rlcore.verify_rl(ws.lattices["L"]).ok


def test_round_trip_serialize_parse():
    ws = workspace.parse_workspace(bundled_text())
    doc = workspace.serialize_workspace(ws)
    ws2 = workspace.parse_workspace(json.dumps(doc))
    assert workspace.serialize_workspace(ws2) == doc
    assert set(ws2.lattices) == set(ws.lattices)
    assert all(ws2.lattices[k] == ws.lattices[k] for k in ws.lattices)
    assert all(ws2.spaces[k] == ws.spaces[k] for k in ws.spaces)
    assert set(ws2.rl_bundles) == set(ws.rl_bundles)
