"""Finite function spaces with the compact-open topology and the adjunction law suites.

Every subset of a finite space is compact, so the compact-open subbasis
ranges over all subsets of the domain.  Continuity claims that need a
locally compact Hausdorff base are asserted only for finite discrete bases;
an off-by-default flag allows exploratory checks elsewhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from . import bundle as bnd
from . import fintop, rlcore
from .bundle import Bundle, RLBundle, Section
from .fintop import FiniteSpace, SpaceMap, pair_id
from .report import ValidationReport, Violation


@dataclass
class FunctionSpace:
    """C(dom, cod): continuous maps as points, compact-open topology."""

    dom: FiniteSpace
    cod: FiniteSpace
    maps: tuple[SpaceMap, ...]
    space: FiniteSpace

    def by_id(self) -> dict[str, SpaceMap]:
        return {m.id_str: m for m in self.maps}


def _subsets(points: Iterable[str]) -> list[frozenset[str]]:
    pts = sorted(points)
    return [frozenset(c) for r in range(len(pts) + 1) for c in itertools.combinations(pts, r)]


def compact_open_space(x: FiniteSpace, y: FiniteSpace) -> FunctionSpace:
    """All continuous maps x -> y with the topology from the sets S(C,U)."""
    maps = tuple(sorted(fintop.continuous_maps(x, y), key=lambda m: m.id_str))
    ids = [m.id_str for m in maps]
    subbasis = []
    for c in _subsets(x.points):
        for u in y.opens:
            subbasis.append(frozenset(m.id_str for m in maps if m.image(c) <= u))
    space = fintop.topology_from_subbasis(ids, subbasis)
    return FunctionSpace(x, y, maps, space)


def curry(h: SpaceMap, p1: SpaceMap, p2: SpaceMap, fs: FunctionSpace) -> SpaceMap:
    """h: BxX -> T becomes X -> C(B,T); pair ids are decoded through the projections."""
    b_space, x_space = p1.cod, p2.cod
    table: dict[str, str] = {}
    for xpt in x_space.points:
        sub = {p1(k): h(k) for k in h.dom.points if p2(k) == xpt}
        m = fintop.space_map(b_space, h.cod, sub)
        if m.id_str not in fs.space.points:
            raise ValueError(f"curried slice at {xpt} is not continuous")
        table[xpt] = m.id_str
    return fintop.space_map(x_space, fs.space, table)


def uncurry(k: SpaceMap, p1: SpaceMap, p2: SpaceMap, fs: FunctionSpace) -> SpaceMap:
    """k: X -> C(B,T) becomes BxX -> T on the canonical product."""
    lookup = fs.by_id()
    prod = p1.dom
    table = {pt: lookup[k(p2(pt))](p1(pt)) for pt in prod.points}
    return fintop.space_map(prod, fs.cod, table)


def corestrict_to_sections(b: Bundle, h: SpaceMap, p1: SpaceMap, p2: SpaceMap) -> dict[str, Section]:
    """For h: BxX -> total over the base, the family x -> (curried section)."""
    if any(b.proj(h(k)) != p1(k) for k in h.dom.points):
        raise ValueError("h does not commute with the projections")
    out: dict[str, Section] = {}
    for xpt in p2.cod.points:
        table = {p1(k): h(k) for k in h.dom.points if p2(k) == xpt}
        out[xpt] = Section(b, frozenset(b.base.points), table)
    return out


def gamma_space(b: Bundle) -> tuple[FiniteSpace, dict[str, Section]]:
    """Global sections with the subspace topology inherited from C(base, total).

    The subspace topology is produced from the compact-open subbasis through
    minimal neighbourhoods, so the ambient function space is never materialized.
    """
    secs = bnd.sections(b, b.base.points)
    by_id = {s.id_str: s for s in secs}
    mins: dict[str, set[str]] = {sid: set(by_id) for sid in by_id}
    for c in _subsets(b.base.points):
        images = {sid: frozenset(s(p) for p in c) for sid, s in by_id.items()}
        for u in b.total.opens:
            inside = {sid for sid, img in images.items() if img <= u}
            for sid in inside:
                mins[sid] &= inside
    space = fintop.topology_from_basis(by_id, [frozenset(v) for v in mins.values()])
    return space, by_id


@dataclass
class TopologicalRL:
    """A residuated lattice whose carrier wears a topology; all operations continuous."""

    algebra: rlcore.ResiduatedLattice
    topology: FiniteSpace

    def __post_init__(self):
        if set(self.algebra.carrier) != set(self.topology.points):
            raise ValueError("topology carrier mismatch")


def binary_op_continuous(s1: FiniteSpace, s2: FiniteSpace, cod: FiniteSpace, tab) -> bool:
    """Continuity from the product topology via the rectangle basis of minimal neighbourhoods."""
    m1, m2, mc = s1.min_nbhd_map, s2.min_nbhd_map, cod.min_nbhd_map
    for x in s1.points:
        for y in s2.points:
            target = mc[tab[x, y]]
            for a in m1[x]:
                for b in m2[y]:
                    if tab[a, b] not in target:
                        return False
    return True


def verify_topological_rl(trl: TopologicalRL) -> ValidationReport:
    bad: list[Violation] = []
    rep = rlcore.verify_rl(trl.algebra)
    if not rep.ok:
        bad.extend(Violation(f"algebra[{v.rule}]", v.witness) for v in rep.violations[:3])
    for name, tab in [
        ("join", trl.algebra.join),
        ("meet", trl.algebra.meet),
        ("mul", trl.algebra.mul),
        ("imp", trl.algebra.imp),
    ]:
        if not binary_op_continuous(trl.topology, trl.topology, trl.topology, tab):
            bad.append(Violation("operation-discontinuous", name))
    return ValidationReport("topological-rl", tuple(bad))


def lift_compact_open_rl(b: FiniteSpace, a: TopologicalRL) -> tuple[TopologicalRL, FunctionSpace]:
    """Pointwise operations on C(b, A), verified continuous for the compact-open topology."""
    fs = compact_open_space(b, a.topology)
    by_id = fs.by_id()
    carrier = tuple(sorted(by_id))

    def lift(tab) -> dict[tuple[str, str], str]:
        out = {}
        for i1, m1 in by_id.items():
            for i2, m2 in by_id.items():
                combined = {p: tab[m1(p), m2(p)] for p in b.points}
                m = fintop.space_map(b, a.topology, combined)
                if m.id_str not in by_id:
                    raise AssertionError("pointwise combination left the function space")
                out[i1, i2] = m.id_str
        return out

    join, meet = lift(a.algebra.join), lift(a.algebra.meet)
    mul, imp = lift(a.algebra.mul), lift(a.algebra.imp)
    const = lambda v: fintop.space_map(b, a.topology, {p: v for p in b.points}).id_str
    leq = frozenset((i, j) for i in carrier for j in carrier if meet[i, j] == i)
    alg = rlcore.ResiduatedLattice(
        carrier, leq, join, meet, mul, imp, const(a.algebra.bot), const(a.algebra.top)
    )
    trl = TopologicalRL(alg, fs.space)
    rep = verify_topological_rl(trl)
    if not rep.ok:
        raise AssertionError(f"lifted algebra failed: {rep.violations[0]}")
    return trl, fs


def gamma_topological_rl(rb: RLBundle) -> TopologicalRL:
    """Gamma(base, -) lifted: pointwise algebra on global sections, subspace topology."""
    space, _ = gamma_space(rb.bundle)
    alg = bnd.pointwise_rl_on_sections(rb, rb.base.points).algebra
    trl = TopologicalRL(alg, space)
    rep = verify_topological_rl(trl)
    if not rep.ok:
        raise AssertionError(f"section algebra failed: {rep.violations[0]}")
    return trl


def product_rl_bundle(b: FiniteSpace, a: TopologicalRL) -> RLBundle:
    """pi_B lifted: B x A with the stalkwise copied operations."""
    space, p1, p2 = fintop.product(b, a.topology)
    proj = fintop.space_map(space, b, {k: p1(k) for k in space.points})
    bd = Bundle(space, b, proj)

    def lift(tab) -> dict[str, dict[tuple[str, str], str]]:
        return {
            pt: {
                (pair_id(pt, x), pair_id(pt, y)): pair_id(pt, tab[x, y])
                for x in a.algebra.carrier
                for y in a.algebra.carrier
            }
            for pt in b.points
        }

    ops = bnd.StalkOps(
        join=lift(a.algebra.join), meet=lift(a.algebra.meet),
        mul=lift(a.algebra.mul), imp=lift(a.algebra.imp),
        zero={pt: pair_id(pt, a.algebra.bot) for pt in b.points},
        one={pt: pair_id(pt, a.algebra.top) for pt in b.points},
    )
    return RLBundle(bd, ops)


# ---------------------------------------------------------------------------
# adjunction law suites


def _continuous_count(dom: FiniteSpace, cod: FiniteSpace) -> int:
    return len(fintop.continuous_maps(dom, cod))


def check_exponential_adjunction(b: FiniteSpace, x: FiniteSpace, t: FiniteSpace, explore_nondiscrete: bool = False) -> dict:
    """Hom-set bijection Top(BxX, T) = Top(X, C(B,T)) plus curry/uncurry round trips."""
    if not b.is_discrete() and not explore_nondiscrete:
        raise ValueError("continuity half asserted only for finite discrete bases")
    prod, p1, p2 = fintop.product(b, x)
    fs = compact_open_space(b, t)
    lhs = fintop.continuous_maps(prod, t)
    rhs = fintop.continuous_maps(x, fs.space)
    curried = {}
    for h in lhs:
        k = curry(h, p1, p2, fs)
        if not fintop.is_continuous(k):
            raise AssertionError("curry of a continuous map is not continuous")
        curried[h.id_str] = k.id_str
        back = uncurry(k, p1, p2, fs)
        if back.table != h.table:
            raise AssertionError("uncurry . curry is not the identity")
    for k in rhs:
        h = uncurry(k, p1, p2, fs)
        if not fintop.is_continuous(h):
            raise AssertionError("uncurry of a continuous map is not continuous")
        again = curry(h, p1, p2, fs)
        if again.table != k.table:
            raise AssertionError("curry . uncurry is not the identity")
    bijective = len(lhs) == len(rhs) and len(set(curried.values())) == len(lhs)
    return {"lhs": len(lhs), "rhs": len(rhs), "bijective": bijective}


def check_section_adjunction(b: Bundle, x: FiniteSpace, explore_nondiscrete: bool = False) -> dict:
    """Hom-set bijection Bundle(B)(pi_B(X), b) = Top(X, Gamma(B,b))."""
    if not b.base.is_discrete() and not explore_nondiscrete:
        raise ValueError("continuity half asserted only for finite discrete bases")
    prod, p1, p2 = fintop.product(b.base, x)
    lhs = [
        h
        for h in fintop.continuous_maps(prod, b.total)
        if all(b.proj(h(k)) == p1(k) for k in prod.points)
    ]
    g_space, by_id = gamma_space(b)
    rhs = fintop.continuous_maps(x, g_space)
    sent = set()
    for h in lhs:
        fam = corestrict_to_sections(b, h, p1, p2)
        k = fintop.space_map(x, g_space, {xp: fam[xp].id_str for xp in x.points})
        if not fintop.is_continuous(k):
            raise AssertionError("corestriction is not continuous")
        sent.add(k.id_str)
    bijective = len(lhs) == len(rhs) == len(sent)
    return {"lhs": len(lhs), "rhs": len(rhs), "bijective": bijective}


def check_projection_adjunction(xb: Bundle, y: FiniteSpace) -> dict:
    """Hom-set bijection Top(U_B(X,f), Y) = Bundle(B)((X,f), pi_B(Y)) via g -> <f,g>."""
    prod, p1, p2 = fintop.product(xb.base, y)
    lhs = fintop.continuous_maps(xb.total, y)
    rhs = [
        k
        for k in fintop.continuous_maps(xb.total, prod)
        if all(p1(k(t)) == xb.proj(t) for t in xb.total.points)
    ]
    paired = set()
    for g in lhs:
        k = fintop.space_map(
            xb.total, prod, {t: pair_id(xb.proj(t), g(t)) for t in xb.total.points}
        )
        if not fintop.is_continuous(k):
            raise AssertionError("pairing of continuous maps is not continuous")
        back = fintop.compose(p2, k)
        if back.table != g.table:
            raise AssertionError("projection round trip failed")
        paired.add(k.id_str)
    bijective = len(lhs) == len(rhs) == len(paired)
    return {"lhs": len(lhs), "rhs": len(rhs), "bijective": bijective}


def check_triangle_identities(b: FiniteSpace, x: FiniteSpace) -> dict:
    """C(B,X) = Gamma(B, pi_B(X)) and BxX = U_B(pi_B(X)), through the canonical isos."""
    if not b.is_discrete():
        raise ValueError("triangle identities asserted for discrete bases")
    prod, p1, p2 = fintop.product(b, x)
    proj_bundle = Bundle(prod, b, p1)
    fs = compact_open_space(b, x)
    g_space, by_id = gamma_space(proj_bundle)
    table = {}
    for m in fs.maps:
        graph = {pt: pair_id(pt, m(pt)) for pt in b.points}
        sec = Section(proj_bundle, frozenset(b.points), graph)
        table[m.id_str] = sec.id_str
    if set(table.values()) != set(g_space.points) or len(set(table.values())) != len(table):
        raise AssertionError("graph correspondence is not bijective")
    iso = fintop.space_map(fs.space, g_space, table)
    upper = fintop.is_homeomorphism(iso)
    lower = prod == proj_bundle.total  # U_B(pi_B(X)) is literally BxX
    return {"upper_triangle_iso": upper, "lower_triangle_strict": lower}
