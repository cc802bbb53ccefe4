"""Finite topological spaces, continuous maps, and the local-homeomorphism calculus.

Topologies are stored as the explicit family of open sets.  Every finite
space is Alexandrov, so each point has a minimal open neighbourhood; the
heavier constructions (products, pullbacks, generated topologies) go
through those minimal neighbourhoods, which is exact in the finite case.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .report import ValidationReport, Violation, fmt_set

PointSet = frozenset[str]

# Masks guard against accidentally materializing huge topologies.
MAX_OPENS = 1 << 20


def _set_key(s: Iterable[str]) -> tuple:
    t = sorted(s)
    return (len(t), t)


def pair_id(left: str, right: str) -> str:
    """Canonical name for a point of a product or pullback."""
    return f"({left}|{right})"


# ---------------------------------------------------------------------------
# mask helpers: a family of subsets of an indexed point list as ints


def _index(points: Iterable[str]) -> tuple[list[str], dict[str, int]]:
    pts = sorted(points)
    return pts, {p: i for i, p in enumerate(pts)}

def _to_mask(s: Iterable[str], idx: Mapping[str, int]) -> int:
    m = 0
    for p in s:
        m |= 1 << idx[p]
    return m

def _from_mask(m: int, pts: list[str]) -> PointSet:
    return frozenset(p for i, p in enumerate(pts) if m >> i & 1)


def _union_closure(masks: Iterable[int]) -> set[int]:
    """All unions of subfamilies (the empty union included)."""
    basis = sorted(set(masks))
    seen = {0}
    frontier = [0]
    while frontier:
        cur = frontier.pop()
        for b in basis:
            nxt = cur | b
            if nxt not in seen:
                if len(seen) >= MAX_OPENS:
                    raise ValueError("refusing to materialize topology with > 2^20 opens")
                seen.add(nxt)
                frontier.append(nxt)
    return seen


def _mins_from_family(pts: list[str], idx: dict[str, int], family: Iterable[int]) -> list[int]:
    """Minimal neighbourhood masks: intersection of all members containing the point."""
    full = (1 << len(pts)) - 1
    mins = [full] * len(pts)
    for m in family:
        for i in range(len(pts)):
            if m >> i & 1:
                mins[i] &= m
    return mins


@dataclass(frozen=True)
class FiniteSpace:
    """A finite topological space: point ids plus the full open-set family."""

    points: PointSet
    opens: frozenset[PointSet]

    def __post_init__(self):
        rep = verify_topology(self.points, self.opens)
        if not rep.ok:
            raise ValueError(str(rep))

    @cached_property
    def sorted_points(self) -> tuple[str, ...]:
        return tuple(sorted(self.points))

    @cached_property
    def min_nbhd_map(self) -> dict[str, PointSet]:
        pts, idx = _index(self.points)
        masks = [_to_mask(o, idx) for o in self.opens]
        mins = _mins_from_family(pts, idx, masks)
        return {p: _from_mask(mins[i], pts) for i, p in enumerate(pts)}

    def is_open(self, s: Iterable[str]) -> bool:
        return frozenset(s) in self.opens

    def is_discrete(self) -> bool:
        return all(frozenset({p}) in self.opens for p in self.points)

    def is_hausdorff(self) -> bool:
        # finite Hausdorff == discrete
        return self.is_discrete()

    def sorted_opens(self) -> list[PointSet]:
        return sorted(self.opens, key=_set_key)


def verify_topology(points: Iterable[str], family: Iterable[Iterable[str]]) -> ValidationReport:
    """Report every violated topology axiom with a witness; valid iff empty."""
    pts = frozenset(points)
    fam = [frozenset(s) for s in family]
    famset = set(fam)
    bad: list[Violation] = []
    for s in fam:
        if not s <= pts:
            bad.append(Violation("member-not-subset", fmt_set(s)))
    if frozenset() not in famset:
        bad.append(Violation("missing-empty-set", "{}"))
    if pts not in famset:
        bad.append(Violation("missing-full-set", fmt_set(pts)))
    if len(famset) <= 4096:
        for a, b in itertools.combinations(sorted(famset, key=_set_key), 2):
            if a | b not in famset:
                bad.append(Violation("union-escapes", f"{fmt_set(a)} + {fmt_set(b)} -> {fmt_set(a | b)}"))
            if a & b not in famset:
                bad.append(Violation("intersection-escapes", f"{fmt_set(a)} * {fmt_set(b)} -> {fmt_set(a & b)}"))
    else:
        # Alexandrov route: closure under union+intersection, checked via
        # minimal neighbourhoods, avoids the quadratic scan on huge families.
        plist, idx = _index(pts)
        masks = {_to_mask(s, idx) for s in famset}
        mins = _mins_from_family(plist, idx, masks)
        regen = _union_closure(mins)
        if masks != regen:
            extra = next(iter(masks - regen), None)
            missing = next(iter(regen - masks), None)
            if extra is not None:
                bad.append(Violation("family-not-closed", fmt_set(_from_mask(extra, plist))))
            if missing is not None:
                bad.append(Violation("family-incomplete", fmt_set(_from_mask(missing, plist))))
    # deduplicate violations, keep deterministic order
    seen = set()
    uniq = []
    for v in bad:
        if (v.rule, v.witness) not in seen:
            seen.add((v.rule, v.witness))
            uniq.append(v)
    return ValidationReport("topology", tuple(uniq))


def space_from_opens(points: Iterable[str], opens: Iterable[Iterable[str]]) -> FiniteSpace:
    return FiniteSpace(frozenset(points), frozenset(frozenset(o) for o in opens))


def discrete(points: Iterable[str]) -> FiniteSpace:
    pts = frozenset(points)
    plist, idx = _index(pts)
    fam = _union_closure([1 << i for i in range(len(plist))])
    return FiniteSpace(pts, frozenset(_from_mask(m, plist) for m in fam))


def indiscrete(points: Iterable[str]) -> FiniteSpace:
    pts = frozenset(points)
    return FiniteSpace(pts, frozenset({frozenset(), pts}))


def sierpinski(open_point: str = "x", closed_point: str = "y") -> FiniteSpace:
    pts = frozenset({open_point, closed_point})
    return FiniteSpace(pts, frozenset({frozenset(), frozenset({open_point}), pts}))


def topology_from_basis(points: Iterable[str], basis: Iterable[Iterable[str]]) -> FiniteSpace:
    """Generated topology: all unions of basis members, plus the whole space."""
    pts = frozenset(points)
    plist, idx = _index(pts)
    fam = _union_closure([_to_mask(b, idx) for b in basis] + [(1 << len(plist)) - 1])
    return FiniteSpace(pts, frozenset(_from_mask(m, plist) for m in fam))


def topology_from_subbasis(points: Iterable[str], subbasis: Iterable[Iterable[str]]) -> FiniteSpace:
    """Generated topology: finite intersections of subbasis members, then unions.

    Computed through minimal neighbourhoods (the intersection of all
    subbasis members containing a point), which generate the same topology.
    """
    pts = frozenset(points)
    plist, idx = _index(pts)
    full = (1 << len(plist)) - 1
    mins = [full] * len(plist)
    for s in subbasis:
        m = _to_mask(s, idx)
        for i in range(len(plist)):
            if m >> i & 1:
                mins[i] &= m
    fam = _union_closure(mins + [full])
    return FiniteSpace(pts, frozenset(_from_mask(m, plist) for m in fam))


@dataclass(frozen=True)
class SpaceMap:
    """A total function between finite spaces; continuity is a checked property."""

    dom: FiniteSpace
    cod: FiniteSpace
    table: tuple[tuple[str, str], ...]

    def __post_init__(self):
        mapping = dict(self.table)
        if set(mapping) != set(self.dom.points):
            missing = sorted(set(self.dom.points) - set(mapping))
            raise ValueError(f"map not total, missing {missing}" if missing else "map has extra keys")
        stray = sorted(v for v in mapping.values() if v not in self.cod.points)
        if stray:
            raise ValueError(f"map values escape codomain: {stray}")
        object.__setattr__(self, "table", tuple(sorted(mapping.items())))

    @cached_property
    def mapping(self) -> dict[str, str]:
        return dict(self.table)

    def __call__(self, p: str) -> str:
        return self.mapping[p]

    def image(self, s: Iterable[str]) -> PointSet:
        return frozenset(self.mapping[p] for p in s)

    def preimage(self, s: Iterable[str]) -> PointSet:
        t = set(s)
        return frozenset(p for p, v in self.table if v in t)

    @property
    def id_str(self) -> str:
        return "{" + ",".join(f"{k}:{v}" for k, v in self.table) + "}"


def space_map(dom: FiniteSpace, cod: FiniteSpace, table: Mapping[str, str]) -> SpaceMap:
    return SpaceMap(dom, cod, tuple(sorted(table.items())))


def identity_map(s: FiniteSpace) -> SpaceMap:
    return space_map(s, s, {p: p for p in s.points})


def compose(second: SpaceMap, first: SpaceMap) -> SpaceMap:
    """second after first."""
    if first.cod != second.dom:
        raise ValueError("composition mismatch")
    return space_map(first.dom, second.cod, {p: second(first(p)) for p in first.dom.points})


def subspace(s: FiniteSpace, carrier: Iterable[str]) -> FiniteSpace:
    sub = frozenset(carrier)
    if not sub <= s.points:
        raise ValueError(f"carrier {fmt_set(sub)} escapes the space")
    return FiniteSpace(sub, frozenset(o & sub for o in s.opens))


def restrict_map(m: SpaceMap, carrier: Iterable[str]) -> SpaceMap:
    sub = subspace(m.dom, carrier)
    return space_map(sub, m.cod, {p: m(p) for p in sub.points})


def is_continuous(m: SpaceMap) -> bool:
    return all(m.preimage(v) in m.dom.opens for v in m.cod.opens)


def is_open_map(m: SpaceMap) -> bool:
    return all(m.image(u) in m.cod.opens for u in m.dom.opens)


def is_locally_injective(m: SpaceMap) -> bool:
    for p in m.dom.points:
        found = False
        for u in m.dom.opens:
            if p in u and len(m.image(u)) == len(u):
                found = True
                break
        if not found:
            return False
    return True


def _restriction_is_homeo_onto_open(m: SpaceMap, u: PointSet) -> bool:
    """m|_u a homeomorphism onto an open image, subspace topologies on both sides."""
    img = m.image(u)
    if img not in m.cod.opens:
        return False
    if len(img) != len(u):
        return False
    sub_dom = {o & u for o in m.dom.opens}
    sub_img = {o & img for o in m.cod.opens}
    # continuity of the restriction
    for v in sub_img:
        if frozenset(p for p in u if m(p) in v) not in sub_dom:
            return False
    # openness of the restriction
    for o in sub_dom:
        if m.image(o) not in sub_img:
            return False
    return True


def is_local_homeomorphism_direct(m: SpaceMap) -> bool:
    """Literal neighbourhood definition: each point has an open nbhd mapped homeomorphically onto an open set."""
    for p in m.dom.points:
        if not any(p in u and _restriction_is_homeo_onto_open(m, u) for u in m.dom.opens):
            return False
    return True


def is_local_homeomorphism(m: SpaceMap) -> bool:
    return is_continuous(m) and is_open_map(m) and is_locally_injective(m)


def is_homeomorphism(m: SpaceMap) -> bool:
    return (
        len(m.image(m.dom.points)) == len(m.dom.points)
        and m.image(m.dom.points) == m.cod.points
        and is_continuous(m)
        and is_open_map(m)
    )


def local_homeo_basis(m: SpaceMap) -> list[PointSet]:
    """Opens on which m restricts to a homeomorphism onto an open image.

    Requires m to be a local homeomorphism; the result is a basis of dom.
    """
    if not is_local_homeomorphism(m):
        raise ValueError("map is not a local homeomorphism")
    fam = [u for u in m.dom.sorted_opens() if _restriction_is_homeo_onto_open(m, u)]
    for u in m.dom.opens:
        cover = frozenset(itertools.chain.from_iterable(v for v in fam if v <= u))
        if cover != u:
            raise AssertionError(f"family is not a basis at {fmt_set(u)}")
    return fam


def minimal_neighborhood(s: FiniteSpace, p: str) -> PointSet:
    """Intersection of all opens containing p; open because the space is finite."""
    if p not in s.points:
        raise ValueError(f"unknown point {p}")
    m = s.min_nbhd_map[p]
    if m not in s.opens:
        raise AssertionError("minimal neighbourhood escaped the open family")
    return m


def product(s1: FiniteSpace, s2: FiniteSpace) -> tuple[FiniteSpace, SpaceMap, SpaceMap]:
    """Product space on pair ids `(p|q)` plus the two projections."""
    pts = {pair_id(p, q): (p, q) for p in s1.points for q in s2.points}
    basis = []
    for p in s1.points:
        for q in s2.points:
            m1 = s1.min_nbhd_map[p]
            m2 = s2.min_nbhd_map[q]
            basis.append([pair_id(a, b) for a in m1 for b in m2])
    space = topology_from_basis(pts, basis)
    p1 = space_map(space, s1, {k: v[0] for k, v in pts.items()})
    p2 = space_map(space, s2, {k: v[1] for k, v in pts.items()})
    return space, p1, p2


def final_topology(points: Iterable[str], family: Iterable[tuple[FiniteSpace, Mapping[str, str]]]) -> FiniteSpace:
    """Finest topology making every given map continuous.

    `family` pairs a source space with the table of a map into the carrier.
    """
    pts = frozenset(points)
    fams = []
    for src, table in family:
        t = dict(table)
        if set(t) != set(src.points) or not set(t.values()) <= pts:
            raise ValueError("family member is not a total map into the carrier")
        fams.append((src, t))
    plist, idx = _index(pts)
    opens = []
    for bits in range(1 << len(plist)):
        u = _from_mask(bits, plist)
        if all(frozenset(p for p in src.points if t[p] in u) in src.opens for src, t in fams):
            opens.append(u)
    return FiniteSpace(pts, frozenset(opens))


def pullback_space(f: SpaceMap, g: SpaceMap) -> tuple[FiniteSpace, SpaceMap, SpaceMap]:
    """Fiber product {(b,s) | f(b)=g(s)} with the subspace-of-product topology."""
    if f.cod != g.cod:
        raise ValueError("pullback codomains differ")
    pairs = {
        pair_id(b, s): (b, s)
        for b in f.dom.points
        for s in g.dom.points
        if f(b) == g(s)
    }
    carrier = frozenset(pairs)
    pieces = set()
    for u in f.dom.opens:
        for v in g.dom.opens:
            pieces.add(frozenset(k for k, (b, s) in pairs.items() if b in u and s in v))
    space = topology_from_basis(carrier, pieces)
    p1 = space_map(space, f.dom, {k: v[0] for k, v in pairs.items()})
    p2 = space_map(space, g.dom, {k: v[1] for k, v in pairs.items()})
    return space, p1, p2


def pullback_universal_check(
    f: SpaceMap, g: SpaceMap, z1: SpaceMap, z2: SpaceMap
) -> SpaceMap:
    """Mediating map for a commuting cone (z1, z2); unique by construction of pair ids."""
    if z1.dom != z2.dom:
        raise ValueError("cone legs have different domains")
    if any(f(z1(p)) != g(z2(p)) for p in z1.dom.points):
        raise ValueError("cone does not commute")
    space, p1, p2 = pullback_space(f, g)
    u = space_map(z1.dom, space, {p: pair_id(z1(p), z2(p)) for p in z1.dom.points})
    if not is_continuous(u):
        raise AssertionError("mediating map is not continuous")
    if compose(p1, u).table != z1.table or compose(p2, u).table != z2.table:
        raise AssertionError("mediating map does not commute")
    return u


def continuous_maps(dom: FiniteSpace, cod: FiniteSpace) -> list[SpaceMap]:
    """All continuous maps dom -> cod, enumerated with min-neighbourhood pruning."""
    pts = list(dom.sorted_points)
    mins_d = dom.min_nbhd_map
    mins_c = cod.min_nbhd_map
    cod_pts = sorted(cod.points)
    out: list[SpaceMap] = []
    assign: dict[str, str] = {}

    def ok(p: str, v: str) -> bool:
        # continuity == specialization monotone: q in min(p) forces f(q) in min(f(p))
        for q, w in assign.items():
            if q in mins_d[p] and w not in mins_c[v]:
                return False
            if p in mins_d[q] and v not in mins_c[w]:
                return False
        return True

    def rec(i: int):
        if i == len(pts):
            out.append(space_map(dom, cod, dict(assign)))
            return
        p = pts[i]
        for v in cod_pts:
            if ok(p, v):
                assign[p] = v
                rec(i + 1)
                del assign[p]

    rec(0)
    return out
