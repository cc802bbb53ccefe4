"""Regenerate src/rlsheaf/data/paper_fixtures.json from the programmatic fixtures.

Run from the repository root:  python3 scripts/build_fixture_corpus.py
"""

from __future__ import annotations

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from rlsheaf import basechange, bundle, fintop, fixtures, rlcore, workspace


def lattice_doc(lat: rlcore.ResiduatedLattice) -> dict:
    # imp intentionally omitted: loading re-derives it from the order and mul
    return {
        "carrier": list(lat.carrier),
        "leq": sorted([x, y] for (x, y) in lat.leq),
        "mul": {f"{x},{y}": lat.mul[x, y] for x in lat.carrier for y in lat.carrier},
        "bot": lat.bot,
        "top": lat.top,
    }


def space_doc(sp: fintop.FiniteSpace) -> dict:
    return {"points": sorted(sp.points), "opens": [sorted(o) for o in sp.sorted_opens()]}


def bundle_doc(rb: bundle.RLBundle, total_name: str, base_name: str) -> dict:
    ops = rb.ops
    return {
        "total": total_name,
        "base": base_name,
        "proj": dict(rb.proj.table),
        "stalk_ops": {
            p: {
                name: {f"{x},{y}": tab[x, y] for (x, y) in sorted(tab)}
                for name, tab in [
                    ("join", ops.join[p]), ("meet", ops.meet[p]),
                    ("mul", ops.mul[p]), ("imp", ops.imp[p]),
                ]
            }
            for p in sorted(ops.zero)
        },
        "zero": dict(sorted(ops.zero.items())),
        "one": dict(sorted(ops.one.items())),
    }


def main() -> None:
    doc: dict = {"lattices": {}, "spaces": {}, "maps": {}, "bundles": {}, "rl_bundles": {}, "morphisms": {}, "rle_spaces": {}}

    for name, fn in fixtures.LATTICES.items():
        doc["lattices"][name] = lattice_doc(fn())

    spec_h_a4 = fixtures.spectrum_space("A4", "spec", "hull")
    max_d_a6 = fixtures.spectrum_space("A6", "max", "dual")
    min_p_a8 = fixtures.spectrum_space("A8", "min", "patch")
    pt = fixtures.space_point()
    pt_f2 = fintop.subspace(spec_h_a4, ["F2"])

    spaces = {
        "point": pt,
        "sierpinski": fixtures.space_sierpinski(),
        "disc2": fintop.discrete(["m", "n"]),
        "spec_h_a4": spec_h_a4,
        "max_d_a6": max_d_a6,
        "min_p_a8": min_p_a8,
        "pt_f2": pt_f2,
    }

    rl_bundles = {
        "etspecha4": (fixtures.et_spec_h_a4(), "spec_h_a4"),
        "etmaxda6": (fixtures.et_max_d_a6(), "max_d_a6"),
        "etminpa8": (fixtures.et_min_p_a8(), "min_p_a8"),
        "a2_over_point": (fixtures.a2_over_point(), "point"),
        "indiscrete_a2_over_point": (fixtures.indiscrete_a2_over_point(), "point"),
        "trivial_a2_over_spec_h_a4": (fixtures.trivial_a2_over_spec_h_a4(), "spec_h_a4"),
    }
    incl = fintop.space_map(pt_f2, spec_h_a4, {"F2": "F2"})
    stalk_f2, _ = basechange.pullback_rl_etale(incl, fixtures.et_spec_h_a4())
    rl_bundles["stalk_f2"] = (stalk_f2, "pt_f2")

    for name, (rb, base_name) in rl_bundles.items():
        total_name = f"total_{name}"
        spaces[total_name] = rb.total
        doc["rl_bundles"][name] = bundle_doc(rb, total_name, base_name)

    for name, sp in spaces.items():
        doc["spaces"][name] = space_doc(sp)

    doc["maps"] = {
        "id_spec_h_a4": {"dom": "spec_h_a4", "cod": "spec_h_a4", "table": {"F2": "F2", "F3": "F3"}},
        "swap_spec_h_a4": {"dom": "spec_h_a4", "cod": "spec_h_a4", "table": {"F2": "F3", "F3": "F2"}},
        "incl_f2": {"dom": "pt_f2", "cod": "spec_h_a4", "table": {"F2": "F2"}},
        "fold_spec_h_a4": {"dom": "spec_h_a4", "cod": "point", "table": {"F2": "pt", "F3": "pt"}},
        "fold_disc2": {"dom": "disc2", "cod": "point", "table": {"m": "pt", "n": "pt"}},
        "pick_f2": {"dom": "point", "cod": "spec_h_a4", "table": {"pt": "F2"}},
        "fold_min_p_a8": {"dom": "min_p_a8", "cod": "point", "table": {"F3": "pt", "F4": "pt"}},
        "fold_max_d_a6": {"dom": "max_d_a6", "cod": "point", "table": {"F2": "pt", "F3": "pt"}},
    }

    doc["rle_spaces"] = {
        "R_speca4": {"base": "spec_h_a4", "etale": "etspecha4"},
        "R_point_a2": {"base": "point", "etale": "a2_over_point"},
        "R_trivial": {"base": "spec_h_a4", "etale": "trivial_a2_over_spec_h_a4"},
        "R_stalk_f2": {"base": "pt_f2", "etale": "stalk_f2"},
    }

    et4 = fixtures.et_spec_h_a4()
    trivial = fixtures.trivial_a2_over_spec_h_a4()
    collapse_table = {}
    for t in sorted(et4.total.points):
        b = et4.proj(t)
        val = "0" if t.startswith("0") else "1"
        collapse_table[t] = fintop.pair_id(b, val)

    doc["morphisms"] = {
        "f_a6_a4": {
            "kind": "rl", "dom": "A6", "cod": "A4",
            "table": {"0": "0", "a": "a", "b": "a", "c": "b", "d": "1", "1": "1"},
        },
        "id_etspecha4": {
            "kind": "bundle", "src": "etspecha4", "dst": "etspecha4",
            "table": {t: t for t in sorted(et4.total.points)},
        },
        "collapse_etspecha4": {
            "kind": "bundle", "src": "etspecha4", "dst": "trivial_a2_over_spec_h_a4",
            "table": collapse_table,
        },
        # a 3-chain of RLE_inv morphisms for the category-law suite
        "rle_m1": {
            "kind": "rle_inv", "src": "R_speca4", "dst": "R_point_a2",
            "base_map": {"F2": "pt", "F3": "pt"},
            "alpha": {
                fintop.pair_id(b, fintop.pair_id("pt", x)): f"{x}_{sfx}"
                for b, sfx in [("F2", "1"), ("F3", "2")]
                for x in ["0", "1"]
            },
        },
        "rle_m2": {
            "kind": "rle_inv", "src": "R_point_a2", "dst": "R_trivial",
            "base_map": {"pt": "F2"},
            "alpha": {
                fintop.pair_id("pt", fintop.pair_id("F2", x)): fintop.pair_id("pt", x)
                for x in ["0", "1"]
            },
        },
        "rle_m3": {
            "kind": "rle_inv", "src": "R_trivial", "dst": "R_point_a2",
            "base_map": {"F2": "pt", "F3": "pt"},
            "alpha": {
                fintop.pair_id(b, fintop.pair_id("pt", x)): fintop.pair_id(b, x)
                for b in ["F2", "F3"]
                for x in ["0", "1"]
            },
        },
        "rle_incl_f2": {
            "kind": "rle_inv", "src": "R_stalk_f2", "dst": "R_speca4",
            "base_map": {"F2": "F2"},
            "alpha": {
                fintop.pair_id("F2", t): fintop.pair_id("F2", t)
                for t in ["0_1", "1_1"]
            },
        },
    }

    doc["expectations"] = {
        "filters": {
            name: {fname: sorted(els) for fname, els in fixtures.FILTER_NAMES[name]}
            for name in ["A4", "A6", "A8"]
        },
        "classification": {
            "A4": {"max": ["F2", "F3"], "min": ["F2", "F3"], "spec": ["F2", "F3"]},
            "A6": {"max": ["F2", "F3"], "min": ["F1"], "spec": ["F1", "F2", "F3"]},
            "A8": {"max": ["F2"], "min": ["F3", "F4"], "spec": ["F2", "F3", "F4"]},
        },
        "spectra": {
            "A4:spec:hull": [[], ["F2"], ["F3"], ["F2", "F3"]],
            "A6:max:dual": [[], ["F2"], ["F3"], ["F2", "F3"]],
        },
        "deviations": {
            "A8:min:patch": {
                "computed": [[], ["F3"], ["F4"], ["F3", "F4"]],
                "listed": [[], ["F3"], ["F4"], ["F3", "F4"], ["F2", "F3", "F4"]],
                "note": "the listed family mentions F2, which is not a minimal prime filter; it is not a topology on the minimal spectrum, so the engine computes the patch topology from first principles",
            }
        },
    }

    text = json.dumps(doc, indent=1, sort_keys=True)
    ws = workspace.parse_workspace(text)
    assert not ws.diagnostics
    again = json.dumps(workspace.serialize_workspace(ws), sort_keys=True)
    ws2 = workspace.parse_workspace(again)
    assert workspace.serialize_workspace(ws2) == workspace.serialize_workspace(ws)

    out = pathlib.Path(__file__).resolve().parents[1] / "src" / "rlsheaf" / "data" / "paper_fixtures.json"
    out.write_text(text + "\n", encoding="utf-8")
    print(f"wrote {out} ({len(text)} bytes); round-trip OK")


if __name__ == "__main__":
    main()
