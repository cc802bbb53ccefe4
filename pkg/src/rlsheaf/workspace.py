"""Structure-file ingestion: named registries of lattices, spaces, maps, bundles, and morphisms.

The input format is UTF-8 JSON built around explicit finite tables:
orders come as Hasse diagrams or full order relations, commutative tables
may be given upper-triangular and are symmetrized, residuals are derived
when absent.  Unknown keys are rejected; diagnostics carry document paths.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping

from . import basechange, bundle, fintop, rlcore


class WorkspaceSyntaxError(ValueError):
    """Malformed document: JSON errors, unknown keys, bad shapes. CLI exit 2."""


class WorkspaceReferenceError(ValueError):
    """A named cross-reference does not resolve. CLI exit 2."""


class WorkspaceValidationError(ValueError):
    """An object failed its module validator in strict mode. CLI exit 1."""


TOP_KEYS = {"lattices", "spaces", "maps", "bundles", "rl_bundles", "morphisms", "rle_spaces", "expectations"}


@dataclass
class Workspace:
    lattices: dict[str, rlcore.ResiduatedLattice] = field(default_factory=dict)
    spaces: dict[str, fintop.FiniteSpace] = field(default_factory=dict)
    maps: dict[str, fintop.SpaceMap] = field(default_factory=dict)
    bundles: dict[str, bundle.Bundle] = field(default_factory=dict)
    rl_bundles: dict[str, bundle.RLBundle] = field(default_factory=dict)
    morphisms: dict[str, Any] = field(default_factory=dict)
    rle_spaces: dict[str, basechange.RLESpace] = field(default_factory=dict)
    expectations: dict[str, Any] = field(default_factory=dict)
    diagnostics: list[str] = field(default_factory=list)
    morphism_docs: dict[str, dict] = field(default_factory=dict)

    def bundle_like(self, name: str, path: str) -> bundle.Bundle:
        if name in self.bundles:
            return self.bundles[name]
        if name in self.rl_bundles:
            return self.rl_bundles[name].bundle
        raise WorkspaceReferenceError(f"{path}: unknown bundle {name!r}")


def _require_keys(obj: Mapping, allowed: set[str], required: set[str], path: str):
    if not isinstance(obj, dict):
        raise WorkspaceSyntaxError(f"{path}: expected an object")
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise WorkspaceSyntaxError(f"{path}: unknown keys {unknown}")
    missing = sorted(required - set(obj))
    if missing:
        raise WorkspaceSyntaxError(f"{path}: missing keys {missing}")


def _parse_pairs(raw: Any, path: str) -> list[tuple[str, str]]:
    if not isinstance(raw, list) or not all(isinstance(p, list) and len(p) == 2 for p in raw):
        raise WorkspaceSyntaxError(f"{path}: expected a list of [x,y] pairs")
    return [(str(a), str(b)) for a, b in raw]


def _parse_binary_table(raw: Any, carrier: set[str], path: str, symmetrize: bool) -> dict[tuple[str, str], str]:
    if not isinstance(raw, dict):
        raise WorkspaceSyntaxError(f"{path}: expected an object keyed 'x,y'")
    out: dict[tuple[str, str], str] = {}
    for key, val in raw.items():
        parts = key.split(",")
        if len(parts) != 2:
            raise WorkspaceSyntaxError(f"{path}.{key}: key must be 'x,y'")
        x, y = parts[0].strip(), parts[1].strip()
        v = str(val)
        for el in (x, y, v):
            if el not in carrier:
                raise WorkspaceSyntaxError(f"{path}.{key}: {el!r} is not a carrier element")
        if (x, y) in out and out[x, y] != v:
            raise WorkspaceSyntaxError(f"{path}.{key}: conflicting duplicate entry")
        out[x, y] = v
        if symmetrize:
            if (y, x) in out and out[y, x] != v:
                raise WorkspaceSyntaxError(f"{path}.{key}: symmetrization conflict at ({y},{x})")
            out[y, x] = v
    missing = [(x, y) for x in carrier for y in carrier if (x, y) not in out]
    if missing:
        x, y = sorted(missing)[0]
        raise WorkspaceSyntaxError(f"{path}: table incomplete, e.g. ({x},{y}) missing")
    return out


def _parse_lattice(name: str, raw: Any) -> rlcore.ResiduatedLattice:
    path = f"lattices.{name}"
    _require_keys(raw, {"carrier", "leq", "hasse", "mul", "imp", "bot", "top"}, {"carrier", "mul", "bot", "top"}, path)
    if ("leq" in raw) == ("hasse" in raw):
        raise WorkspaceSyntaxError(f"{path}: exactly one of 'leq'/'hasse' is required")
    carrier = [str(x) for x in raw["carrier"]]
    if len(set(carrier)) != len(carrier):
        raise WorkspaceSyntaxError(f"{path}.carrier: duplicate elements")
    cset = set(carrier)
    mul = _parse_binary_table(raw["mul"], cset, f"{path}.mul", symmetrize=True)
    imp = None
    if "imp" in raw:
        imp = _parse_binary_table(raw["imp"], cset, f"{path}.imp", symmetrize=False)
    bot, top = str(raw["bot"]), str(raw["top"])
    if bot not in cset or top not in cset:
        raise WorkspaceSyntaxError(f"{path}: bot/top outside the carrier")
    if "hasse" in raw:
        hasse = _parse_pairs(raw["hasse"], f"{path}.hasse")
        try:
            return rlcore.make_lattice(carrier, hasse, mul, bot, top, imp)
        except (ValueError, rlcore.NotResiduated) as e:
            raise WorkspaceValidationError(f"{path}: {e}")
    pairs = _parse_pairs(raw["leq"], f"{path}.leq")
    leq = frozenset(pairs) | frozenset((x, x) for x in carrier)
    elems = tuple(sorted(carrier))
    join: dict[tuple[str, str], str] = {}
    meet: dict[tuple[str, str], str] = {}
    for x in elems:
        for y in elems:
            j = rlcore.lub(elems, leq, [x, y])
            m = rlcore.glb(elems, leq, [x, y])
            if j is None or m is None:
                raise WorkspaceValidationError(f"{path}.leq: not a lattice at ({x},{y})")
            join[x, y] = j
            meet[x, y] = m
    try:
        derived = imp if imp is not None else rlcore.derive_residual(elems, leq, mul)
    except rlcore.NotResiduated as e:
        raise WorkspaceValidationError(f"{path}: {e}")
    return rlcore.ResiduatedLattice(elems, leq, join, meet, mul, derived, bot, top)


def _parse_space(name: str, raw: Any) -> fintop.FiniteSpace:
    path = f"spaces.{name}"
    _require_keys(raw, {"points", "opens"}, {"points", "opens"}, path)
    points = [str(p) for p in raw["points"]]
    if not isinstance(raw["opens"], list):
        raise WorkspaceSyntaxError(f"{path}.opens: expected a list of lists")
    opens = [[str(p) for p in o] for o in raw["opens"]]
    rep = fintop.verify_topology(points, opens)
    if not rep.ok:
        raise WorkspaceValidationError(f"{path}: {rep.violations[0]}")
    return fintop.space_from_opens(points, opens)


def _parse_point_map(raw: Any, path: str) -> dict[str, str]:
    if not isinstance(raw, dict):
        raise WorkspaceSyntaxError(f"{path}: expected an object of point -> point")
    return {str(k): str(v) for k, v in raw.items()}


def _parse_stalk_ops(raw: Any, bnd: bundle.Bundle, path: str) -> bundle.StalkOps:
    if not isinstance(raw, dict):
        raise WorkspaceSyntaxError(f"{path}: expected per-point operation tables")
    join: dict[str, dict] = {}
    meet: dict[str, dict] = {}
    mul: dict[str, dict] = {}
    imp: dict[str, dict] = {}
    for pt, tabs in raw.items():
        if pt not in bnd.base.points:
            raise WorkspaceReferenceError(f"{path}.{pt}: not a base point")
        _require_keys(tabs, {"join", "meet", "mul", "imp"}, {"join", "meet", "mul", "imp"}, f"{path}.{pt}")
        stalk = set(bnd.stalk_points(pt))
        join[pt] = _parse_binary_table(tabs["join"], stalk, f"{path}.{pt}.join", symmetrize=True)
        meet[pt] = _parse_binary_table(tabs["meet"], stalk, f"{path}.{pt}.meet", symmetrize=True)
        mul[pt] = _parse_binary_table(tabs["mul"], stalk, f"{path}.{pt}.mul", symmetrize=True)
        imp[pt] = _parse_binary_table(tabs["imp"], stalk, f"{path}.{pt}.imp", symmetrize=False)
    missing = sorted(set(bnd.base.points) - set(raw))
    if missing:
        raise WorkspaceSyntaxError(f"{path}: missing stalk tables for {missing}")
    return bundle.StalkOps(join=join, meet=meet, mul=mul, imp=imp, zero={}, one={})


def parse_workspace(text: str | dict, strict: bool = True) -> Workspace:
    """Parse a JSON document into a workspace; see module docstring for the format."""
    if isinstance(text, str):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise WorkspaceSyntaxError(f"document: invalid JSON ({e})")
    else:
        doc = text
    if not isinstance(doc, dict):
        raise WorkspaceSyntaxError("document: top level must be an object")
    unknown = sorted(set(doc) - TOP_KEYS)
    if unknown:
        raise WorkspaceSyntaxError(f"document: unknown keys {unknown}")

    ws = Workspace()

    def guard(path: str, fn):
        try:
            return fn()
        except (WorkspaceSyntaxError, WorkspaceReferenceError):
            raise
        except (WorkspaceValidationError, ValueError) as e:
            if strict:
                if isinstance(e, WorkspaceValidationError):
                    raise
                raise WorkspaceValidationError(f"{path}: {e}")
            ws.diagnostics.append(f"{path}: {e}")
            return None

    for name, raw in sorted(doc.get("lattices", {}).items()):
        lat = guard(f"lattices.{name}", lambda: _parse_lattice(name, raw))
        if lat is not None:
            rep = rlcore.verify_rl(lat)
            if rep.ok:
                ws.lattices[name] = lat
            elif strict:
                raise WorkspaceValidationError(f"lattices.{name}: {rep.violations[0]}")
            else:
                ws.diagnostics.append(f"lattices.{name}: {rep.violations[0]}")

    for name, raw in sorted(doc.get("spaces", {}).items()):
        sp = guard(f"spaces.{name}", lambda: _parse_space(name, raw))
        if sp is not None:
            ws.spaces[name] = sp

    for name, raw in sorted(doc.get("maps", {}).items()):
        path = f"maps.{name}"
        _require_keys(raw, {"dom", "cod", "table"}, {"dom", "cod", "table"}, path)
        dom, cod = str(raw["dom"]), str(raw["cod"])
        for ref in (dom, cod):
            if ref not in ws.spaces:
                raise WorkspaceReferenceError(f"{path}: unknown space {ref!r}")
        m = guard(path, lambda: fintop.space_map(ws.spaces[dom], ws.spaces[cod], _parse_point_map(raw["table"], f"{path}.table")))
        if m is not None:
            ws.maps[name] = m

    def parse_bundle_entry(name: str, raw: Any, want_ops: bool, section: str):
        path = f"{section}.{name}"
        allowed = {"total", "base", "proj", "stalk_ops", "zero", "one"}
        required = {"total", "base", "proj"} | ({"stalk_ops", "zero", "one"} if want_ops else set())
        _require_keys(raw, allowed, required, path)
        for ref in (str(raw["total"]), str(raw["base"])):
            if ref not in ws.spaces:
                raise WorkspaceReferenceError(f"{path}: unknown space {ref!r}")
        total, base = ws.spaces[str(raw["total"])], ws.spaces[str(raw["base"])]

        def build():
            proj = fintop.space_map(total, base, _parse_point_map(raw["proj"], f"{path}.proj"))
            bnd = bundle.Bundle(total, base, proj)
            if not want_ops and "stalk_ops" not in raw:
                return bnd
            ops = _parse_stalk_ops(raw["stalk_ops"], bnd, f"{path}.stalk_ops")
            ops.zero = _parse_point_map(raw["zero"], f"{path}.zero")
            ops.one = _parse_point_map(raw["one"], f"{path}.one")
            rb = bundle.RLBundle(bnd, ops)
            rep = bundle.verify_rl_bundle(rb)
            if not rep.ok:
                raise WorkspaceValidationError(f"{path}: {rep.violations[0]}")
            return rb
        return guard(path, build)

    for name, raw in sorted(doc.get("bundles", {}).items()):
        b = parse_bundle_entry(name, raw, want_ops=False, section="bundles")
        if isinstance(b, bundle.RLBundle):
            ws.rl_bundles[name] = b
            ws.bundles[name] = b.bundle
        elif b is not None:
            ws.bundles[name] = b

    for name, raw in sorted(doc.get("rl_bundles", {}).items()):
        b = parse_bundle_entry(name, raw, want_ops=True, section="rl_bundles")
        if b is not None:
            ws.rl_bundles[name] = b

    for name, raw in sorted(doc.get("rle_spaces", {}).items()):
        path = f"rle_spaces.{name}"
        _require_keys(raw, {"base", "etale"}, {"base", "etale"}, path)
        base, et = str(raw["base"]), str(raw["etale"])
        if base not in ws.spaces:
            raise WorkspaceReferenceError(f"{path}: unknown space {base!r}")
        if et not in ws.rl_bundles:
            raise WorkspaceReferenceError(f"{path}: unknown rl_bundle {et!r}")
        x = guard(path, lambda: basechange.RLESpace(ws.spaces[base], ws.rl_bundles[et]))
        if x is not None:
            ws.rle_spaces[name] = x

    for name, raw in sorted(doc.get("morphisms", {}).items()):
        path = f"morphisms.{name}"
        if not isinstance(raw, dict) or "kind" not in raw:
            raise WorkspaceSyntaxError(f"{path}: missing 'kind'")
        kind = raw["kind"]
        if kind == "rl":
            _require_keys(raw, {"kind", "dom", "cod", "table"}, {"kind", "dom", "cod", "table"}, path)
            for ref in (str(raw["dom"]), str(raw["cod"])):
                if ref not in ws.lattices:
                    raise WorkspaceReferenceError(f"{path}: unknown lattice {ref!r}")
            m = guard(path, lambda: rlcore.RLMorphism(
                ws.lattices[str(raw["dom"])], ws.lattices[str(raw["cod"])],
                _parse_point_map(raw["table"], f"{path}.table")))
        elif kind == "bundle":
            _require_keys(raw, {"kind", "src", "dst", "table"}, {"kind", "src", "dst", "table"}, path)
            src = ws.bundle_like(str(raw["src"]), path)
            dst = ws.bundle_like(str(raw["dst"]), path)
            m = guard(path, lambda: bundle.BundleMorphism(
                src, dst, fintop.space_map(src.total, dst.total, _parse_point_map(raw["table"], f"{path}.table"))))
        elif kind == "rle_inv":
            _require_keys(raw, {"kind", "src", "dst", "base_map", "alpha"}, {"kind", "src", "dst", "base_map", "alpha"}, path)
            for ref in (str(raw["src"]), str(raw["dst"])):
                if ref not in ws.rle_spaces:
                    raise WorkspaceReferenceError(f"{path}: unknown rle_space {ref!r}")
            src_x = ws.rle_spaces[str(raw["src"])]
            dst_x = ws.rle_spaces[str(raw["dst"])]

            def build_rle():
                f = fintop.space_map(src_x.base, dst_x.base, _parse_point_map(raw["base_map"], f"{path}.base_map"))
                pulled, _ = basechange.pullback_rl_etale(f, dst_x.etale)
                alpha = fintop.space_map(pulled.total, src_x.etale.total, _parse_point_map(raw["alpha"], f"{path}.alpha"))
                return basechange.RLEInvMorphism(src_x, dst_x, f, alpha)
            m = guard(path, build_rle)
        else:
            raise WorkspaceSyntaxError(f"{path}: unknown kind {kind!r}")
        if m is not None:
            ws.morphisms[name] = m
            ws.morphism_docs[name] = raw

    if "expectations" in doc:
        exp = doc["expectations"]
        _require_keys(exp, {"filters", "classification", "spectra", "deviations"}, set(), "expectations")
        ws.expectations = exp

    return ws


def serialize_workspace(ws: Workspace) -> dict:
    """Inverse of parse_workspace up to table normalization; round-trips to an equal workspace."""
    doc: dict[str, Any] = {}
    if ws.lattices:
        doc["lattices"] = {
            name: {
                "carrier": list(lat.carrier),
                "leq": sorted([x, y] for (x, y) in lat.leq),
                "mul": {f"{x},{y}": lat.mul[x, y] for x in lat.carrier for y in lat.carrier},
                "imp": {f"{x},{y}": lat.imp[x, y] for x in lat.carrier for y in lat.carrier},
                "bot": lat.bot,
                "top": lat.top,
            }
            for name, lat in sorted(ws.lattices.items())
        }
    if ws.spaces:
        doc["spaces"] = {
            name: {"points": sorted(sp.points), "opens": [sorted(o) for o in sp.sorted_opens()]}
            for name, sp in sorted(ws.spaces.items())
        }
    if ws.maps:
        doc["maps"] = {}
        for name, m in sorted(ws.maps.items()):
            dom = next(k for k, v in ws.spaces.items() if v == m.dom)
            cod = next(k for k, v in ws.spaces.items() if v == m.cod)
            doc["maps"][name] = {"dom": dom, "cod": cod, "table": dict(m.table)}
    plain = {n: b for n, b in ws.bundles.items() if n not in ws.rl_bundles}
    if plain:
        doc["bundles"] = {}
        for name, b in sorted(plain.items()):
            doc["bundles"][name] = _serialize_bundle(ws, b, None)
    if ws.rl_bundles:
        doc["rl_bundles"] = {}
        for name, rb in sorted(ws.rl_bundles.items()):
            doc["rl_bundles"][name] = _serialize_bundle(ws, rb.bundle, rb.ops)
    if ws.rle_spaces:
        doc["rle_spaces"] = {}
        for name, x in sorted(ws.rle_spaces.items()):
            base = next(k for k, v in ws.spaces.items() if v == x.base)
            et = next(k for k, v in ws.rl_bundles.items() if v is x.etale or v == x.etale)
            doc["rle_spaces"][name] = {"base": base, "etale": et}
    if ws.morphisms:
        doc["morphisms"] = {name: ws.morphism_docs[name] for name in sorted(ws.morphisms)}
    if ws.expectations:
        doc["expectations"] = ws.expectations
    return doc


def _serialize_bundle(ws: Workspace, b: bundle.Bundle, ops: bundle.StalkOps | None) -> dict:
    total = next(k for k, v in ws.spaces.items() if v == b.total)
    base = next(k for k, v in ws.spaces.items() if v == b.base)
    out = {"total": total, "base": base, "proj": dict(b.proj.table)}
    if ops is not None:
        out["stalk_ops"] = {
            p: {
                name: {f"{x},{y}": t[x, y] for (x, y) in sorted(t)}
                for name, t in [("join", ops.join[p]), ("meet", ops.meet[p]), ("mul", ops.mul[p]), ("imp", ops.imp[p])]
            }
            for p in sorted(ops.zero)
        }
        out["zero"] = dict(sorted(ops.zero.items()))
        out["one"] = dict(sorted(ops.one.items()))
    return out
