"""Command-line interface: fixture ingestion, verification commands, reports, diagrams.

Exit codes: 0 success, 1 failed assertion or validation, 2 usage, syntax,
or reference errors.  Output ordering is lexicographic throughout; the
machine-readable format is a single JSON object per invocation.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from typing import Any

from . import basechange, bundle, dot, fintop, fixtures, rlcore, sheafify, spectra, suites, workspace
from .report import fmt_set


class CommandError(Exception):
    def __init__(self, message: str, exit_code: int):
        super().__init__(message)
        self.exit_code = exit_code


def load_workspace(path: str | None, strict: bool = True) -> workspace.Workspace:
    if path is None:
        text = resources.files("rlsheaf.data").joinpath("paper_fixtures.json").read_text("utf-8")
    else:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise CommandError(f"cannot read workspace: {e}", 2)
    return workspace.parse_workspace(text, strict=strict)


def _filter_names_for(ws: workspace.Workspace, name: str, lat: rlcore.ResiduatedLattice) -> dict[frozenset[str], str]:
    exp = ws.expectations.get("filters", {}).get(name)
    if exp:
        return {frozenset(v): k for k, v in exp.items()}
    fam = rlcore.all_filters(lat).filters
    return {f: f"F{i + 1}" for i, f in enumerate(fam)}


def _need(ws_dict: dict, name: str, kind: str) -> Any:
    if name not in ws_dict:
        raise CommandError(f"unknown {kind} {name!r}", 2)
    return ws_dict[name]


def cmd_validate(ws: workspace.Workspace, args) -> dict:
    lines = []
    ok = True
    for name, lat in sorted(ws.lattices.items()):
        rep = rlcore.verify_rl(lat)
        ok &= rep.ok
        lines.append(f"lattice {name}: {'valid' if rep.ok else 'INVALID'}")
    for name, sp in sorted(ws.spaces.items()):
        rep = fintop.verify_topology(sp.points, sp.opens)
        ok &= rep.ok
        lines.append(f"space {name}: {'valid' if rep.ok else 'INVALID'}")
    for name, b in sorted(ws.bundles.items()):
        lines.append(f"bundle {name}: valid (continuous projection)")
    for name, rb in sorted(ws.rl_bundles.items()):
        rep = bundle.verify_rl_bundle(rb)
        ok &= rep.ok
        lines.append(f"rl_bundle {name}: {'valid' if rep.ok else 'INVALID: ' + str(rep.violations[0])}")
    for name in sorted(ws.morphisms):
        lines.append(f"morphism {name}: valid")
    for name in sorted(ws.rle_spaces):
        lines.append(f"rle_space {name}: valid")
    for diag in ws.diagnostics:
        ok = False
        lines.append(f"diagnostic: {diag}")
    exp = ws.expectations
    if exp:
        for lname, table in sorted(exp.get("filters", {}).items()):
            lat = ws.lattices.get(lname)
            if lat is None:
                continue
            found = {frozenset(v) for v in table.values()}
            actual = set(rlcore.all_filters(lat).filters)
            good = found == actual
            ok &= good
            lines.append(f"expectation filters[{lname}]: {'match' if good else 'MISMATCH'}")
    return {"ok": ok, "lines": lines}


def cmd_filters(ws: workspace.Workspace, args) -> dict:
    lat = _need(ws.lattices, args.name, "lattice")
    fl = rlcore.all_filters(lat)
    names = _filter_names_for(ws, args.name, lat)
    rows = sorted((names[f], sorted(f)) for f in fl.filters)
    return {
        "ok": True,
        "lines": [f"{n} = {fmt_set(els)}" for n, els in rows],
        "filters": [{"name": n, "elements": els} for n, els in rows],
    }


def cmd_classify(ws: workspace.Workspace, args) -> dict:
    lat = _need(ws.lattices, args.name, "lattice")
    fl = rlcore.all_filters(lat)
    names = _filter_names_for(ws, args.name, lat)
    rows = []
    for f in fl.filters:
        flags = fl.classification[f]
        kinds = [k for k in ("proper", "principal", "maximal", "prime", "minimal_prime") if getattr(flags, k)]
        rows.append((names[f], sorted(f), kinds))
    rows.sort()
    return {
        "ok": True,
        "lines": [f"{n} {fmt_set(e)}: {', '.join(k) if k else 'improper'}" for n, e, k in rows],
        "classification": [{"name": n, "elements": e, "flags": k} for n, e, k in rows],
    }


def cmd_quotient(ws: workspace.Workspace, args) -> dict:
    lat = _need(ws.lattices, args.name, "lattice")
    elements = frozenset(x.strip() for x in args.filter.split(",") if x.strip())
    if not rlcore.is_filter(lat, elements):
        raise CommandError(f"{fmt_set(elements)} is not a filter of {args.name}", 1)
    q, proj = rlcore.quotient(lat, elements)
    rep = rlcore.verify_rl(q)
    lines = [f"quotient of {args.name} by {fmt_set(elements)}: {len(q.carrier)} classes"]
    lines += [f"  {x} -> {proj(x)}" for x in lat.carrier]
    lines.append(f"verify_rl: {'valid' if rep.ok else 'INVALID'}")
    return {
        "ok": rep.ok,
        "lines": lines,
        "classes": list(q.carrier),
        "projection": {x: proj(x) for x in lat.carrier},
    }


def cmd_spectrum(ws: workspace.Workspace, args) -> dict:
    lat = _need(ws.lattices, args.name, "lattice")
    fl = rlcore.all_filters(lat)
    pi = fl.select(args.set)
    cfg = spectra.SpectrumConfig(lat, pi, args.flavor)
    names = _filter_names_for(ws, args.name, lat)
    sp = spectra.spectral_space(cfg, names)
    opens = [sorted(o) for o in sp.sorted_opens()]
    lines = [f"points: {fmt_set(sp.points)}"] + [f"open: {fmt_set(o)}" for o in opens]
    key = f"{args.name}:{args.set}:{args.flavor}"
    expected = ws.expectations.get("spectra", {}).get(key)
    ok = True
    if expected is not None:
        ok = sorted(map(sorted, expected)) == sorted(opens)
        lines.append(f"expectation {key}: {'match' if ok else 'MISMATCH'}")
    deviation = ws.expectations.get("deviations", {}).get(key)
    if deviation is not None:
        ok = ok and sorted(map(sorted, deviation["computed"])) == sorted(opens)
        lines.append(f"documented deviation: {deviation['note']}")
    return {"ok": ok, "lines": lines, "points": sorted(sp.points), "opens": opens}


def cmd_sections(ws: workspace.Workspace, args) -> dict:
    b = ws.bundle_like(args.bundle, "sections")
    dom = frozenset(x.strip() for x in args.open.split(",") if x.strip()) if args.open else b.base.points
    if not dom <= b.base.points:
        raise CommandError(f"subset {fmt_set(dom)} escapes the base", 2)
    secs = bundle.sections(b, dom)
    return {
        "ok": True,
        "lines": [f"sections over {fmt_set(dom)}: {len(secs)}"] + [f"  {s.id_str}" for s in secs],
        "sections": [s.id_str for s in secs],
    }


def cmd_check_etale(ws: workspace.Workspace, args) -> dict:
    b = ws.bundle_like(args.bundle, "check-etale")
    et = bundle.is_etale(b)
    return {"ok": et, "lines": [f"etale: {'yes' if et else 'no'}"], "etale": et}


def cmd_check_rl_bundle(ws: workspace.Workspace, args) -> dict:
    rb = _need(ws.rl_bundles, args.bundle, "rl_bundle")
    rep = bundle.verify_rl_bundle(rb)
    return {"ok": rep.ok, "lines": rep.lines(), "violations": [str(v) for v in rep.violations]}


def cmd_sheafify(ws: workspace.Workspace, args) -> dict:
    b = ws.bundle_like(args.bundle, "sheafify")
    gs = sheafify.etale_of(b)
    crep = sheafify.counit_report(b, gs)
    et = bundle.is_etale(gs.as_bundle)
    flags = crep["injective"] and crep["open_relative"] and crep["continuous"]
    lines = [
        f"etale: {'yes' if et else 'no'}; germs: {len(gs.germs)}; "
        f"counit injective/open/continuous: {'yes' if flags else 'no'}"
    ]
    lines += [f"germ: {g}" for g in sorted(gs.germs)]
    return {"ok": et and flags, "lines": lines, "germs": sorted(gs.germs), "counit": crep}


def cmd_counit_check(ws: workspace.Workspace, args) -> dict:
    b = ws.bundle_like(args.bundle, "counit-check")
    crep = sheafify.counit_report(b)
    iso = bundle.is_etale(b) and sheafify.counit_is_iso(b)
    lines = [f"{k}: {'yes' if v else 'no'}" for k, v in sorted(crep.items())]
    lines.append(f"isomorphism (etale inputs): {'yes' if iso else 'n/a' if not bundle.is_etale(b) else 'no'}")
    ok = crep["injective"] and crep["continuous"] and crep["open_relative"]
    return {"ok": ok, "lines": lines, "counit": crep, "iso_at_etale": iso}


def cmd_pullback(ws: workspace.Workspace, args) -> dict:
    f = _need(ws.maps, args.map, "map")
    name = args.bundle
    if name in ws.rl_bundles:
        pulled, fprime = basechange.pullback_rl_etale(f, ws.rl_bundles[name])
        rep = bundle.verify_rl_bundle(pulled)
        et = bundle.is_etale(pulled.bundle)
        lines = [
            f"pullback total: {fmt_set(pulled.total.points)}",
            f"etale: {'yes' if et else 'no'}; rl-bundle valid: {'yes' if rep.ok else 'no'}",
        ]
        return {"ok": rep.ok, "lines": lines, "total": sorted(pulled.total.points), "etale": et}
    b = ws.bundle_like(name, "pullback")
    pe = basechange.pullback_etale(f, b)
    et = bundle.is_etale(pe.result)
    lines = [f"pullback total: {fmt_set(pe.result.total.points)}", f"etale: {'yes' if et else 'no'}"]
    return {"ok": True, "lines": lines, "total": sorted(pe.result.total.points), "etale": et}


def cmd_compose_rle(ws: workspace.Workspace, args) -> dict:
    m1 = _need(ws.morphisms, args.m1, "morphism")
    m2 = _need(ws.morphisms, args.m2, "morphism")
    for m, n in [(m1, args.m1), (m2, args.m2)]:
        if not isinstance(m, basechange.RLEInvMorphism):
            raise CommandError(f"{n} is not an rle_inv morphism", 2)
    try:
        comp = basechange.compose_rle_inv(m1, m2)
    except ValueError as e:
        raise CommandError(str(e), 1)
    lines = [
        f"base map: {dict(comp.f.table)}",
        f"alpha: {dict(comp.alpha.table)}",
    ]
    return {"ok": True, "lines": lines, "base_map": dict(comp.f.table), "alpha": dict(comp.alpha.table)}


def cmd_gamma(ws: workspace.Workspace, args) -> dict:
    x = _need(ws.rle_spaces, args.rlespace, "rle_space")
    ga = basechange.section_functor_object(x)
    rep = rlcore.verify_rl(ga.algebra)
    lines = [f"Gamma carrier ({len(ga.algebra.carrier)} sections):"]
    lines += [f"  {s}" for s in ga.algebra.carrier]
    lines.append(f"verify_rl: {'valid' if rep.ok else 'INVALID'}")
    return {"ok": rep.ok, "lines": lines, "sections": list(ga.algebra.carrier)}


def cmd_adjunction_suite(ws: workspace.Workspace, args) -> dict:
    rep = suites.adjunction_suite()
    return {"ok": rep.ok, "lines": rep.lines(), **rep.as_dict()}


def cmd_law_suite(ws: workspace.Workspace, args) -> dict:
    rep = suites.law_suite()
    return {"ok": rep.ok, "lines": rep.lines(), **rep.as_dict()}


def cmd_export_dot(ws: workspace.Workspace, args) -> dict:
    name = args.object
    if name in ws.lattices:
        text = dot.lattice_dot(name, ws.lattices[name])
    elif name in ws.spaces:
        text = dot.space_dot(name, ws.spaces[name])
    elif name in ws.bundles or name in ws.rl_bundles:
        text = dot.bundle_dot(name, ws.bundle_like(name, "export-dot"))
    else:
        raise CommandError(f"unknown object {name!r}", 2)
    return {"ok": True, "lines": [text], "dot": text}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rlsheaf", description=__doc__)
    p.add_argument("--workspace", help="path to a workspace JSON document (default: bundled fixture corpus)")
    p.add_argument("--format", choices=["text", "machine-readable"], default="text")
    p.add_argument("--lenient", action="store_true", help="record validation diagnostics instead of failing")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("validate")
    sp = sub.add_parser("filters"); sp.add_argument("name")
    sp = sub.add_parser("classify"); sp.add_argument("name")
    sp = sub.add_parser("quotient"); sp.add_argument("name"); sp.add_argument("filter")
    sp = sub.add_parser("spectrum")
    sp.add_argument("name")
    sp.add_argument("--set", required=True, choices=["spec", "max", "min"])
    sp.add_argument("--flavor", required=True, choices=["hull", "dual", "patch"])
    sp = sub.add_parser("sections"); sp.add_argument("bundle"); sp.add_argument("--open", default=None)
    sp = sub.add_parser("check-etale"); sp.add_argument("bundle")
    sp = sub.add_parser("check-rl-bundle"); sp.add_argument("bundle")
    sp = sub.add_parser("sheafify"); sp.add_argument("bundle")
    sp = sub.add_parser("counit-check"); sp.add_argument("bundle")
    sp = sub.add_parser("pullback"); sp.add_argument("map"); sp.add_argument("bundle")
    sp = sub.add_parser("compose-rle"); sp.add_argument("m1"); sp.add_argument("m2")
    sp = sub.add_parser("gamma"); sp.add_argument("rlespace")
    sub.add_parser("adjunction-suite")
    sub.add_parser("law-suite")
    sp = sub.add_parser("export-dot"); sp.add_argument("object")
    return p


HANDLERS = {
    "validate": cmd_validate,
    "filters": cmd_filters,
    "classify": cmd_classify,
    "quotient": cmd_quotient,
    "spectrum": cmd_spectrum,
    "sections": cmd_sections,
    "check-etale": cmd_check_etale,
    "check-rl-bundle": cmd_check_rl_bundle,
    "sheafify": cmd_sheafify,
    "counit-check": cmd_counit_check,
    "pullback": cmd_pullback,
    "compose-rle": cmd_compose_rle,
    "gamma": cmd_gamma,
    "adjunction-suite": cmd_adjunction_suite,
    "law-suite": cmd_law_suite,
    "export-dot": cmd_export_dot,
}


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        ws = load_workspace(args.workspace, strict=not args.lenient)
        result = HANDLERS[args.command](ws, args)
    except CommandError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except (workspace.WorkspaceSyntaxError, workspace.WorkspaceReferenceError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except workspace.WorkspaceValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    if args.format == "machine-readable":
        payload = {k: v for k, v in result.items() if k != "lines"}
        payload["command"] = args.command
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in result["lines"]:
            print(line)
    return 0 if result["ok"] else 1


def main() -> None:
    raise SystemExit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
