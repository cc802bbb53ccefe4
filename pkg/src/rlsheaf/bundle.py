"""Bundles and etales of residuated lattices over a finite base.

Kernel pairs, proper operations, stalk algebras, sections, and the
verification suite for bundle validity.  Continuity of kernel-pair
operations is checked through the product-basis criterion (minimal
neighbourhoods), which agrees with the subspace-of-product topology on
finite spaces without materializing it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

from . import fintop, rlcore
from .fintop import FiniteSpace, SpaceMap, pair_id
from .report import ValidationReport, Violation, fmt_set

Subset = frozenset[str]


@dataclass
class Bundle:
    """A continuous projection total -> base."""

    total: FiniteSpace
    base: FiniteSpace
    proj: SpaceMap

    def __post_init__(self):
        if self.proj.dom != self.total or self.proj.cod != self.base:
            raise ValueError("projection endpoints do not match the bundle spaces")
        if not fintop.is_continuous(self.proj):
            raise ValueError("projection is not continuous")

    def stalk_points(self, b: str) -> Subset:
        return self.proj.preimage({b})


def stalk(b: Bundle, p: str) -> FiniteSpace:
    """Subspace on the fiber over p (possibly empty)."""
    if p not in b.base.points:
        raise ValueError(f"unknown base point {p}")
    return fintop.subspace(b.total, b.stalk_points(p))


@dataclass
class KernelPair:
    parent: Bundle
    space: FiniteSpace
    p1: SpaceMap
    p2: SpaceMap


def kernel_pair_points(b: Bundle) -> dict[str, tuple[str, str]]:
    return {
        pair_id(t1, t2): (t1, t2)
        for t1 in b.total.points
        for t2 in b.total.points
        if b.proj(t1) == b.proj(t2)
    }


def kernel_pair(b: Bundle) -> KernelPair:
    space, p1, p2 = fintop.pullback_space(b.proj, b.proj)
    return KernelPair(b, space, p1, p2)


@dataclass
class StalkOps:
    """Per-base-point operation tables on the stalks, plus the 0/1 constants."""

    join: dict[str, dict[tuple[str, str], str]]
    meet: dict[str, dict[tuple[str, str], str]]
    mul: dict[str, dict[tuple[str, str], str]]
    imp: dict[str, dict[tuple[str, str], str]]
    zero: dict[str, str]
    one: dict[str, str]

    OPS = ("join", "meet", "mul", "imp")

    def op(self, name: str) -> dict[str, dict[tuple[str, str], str]]:
        return getattr(self, name)


@dataclass
class RLBundle:
    bundle: Bundle
    ops: StalkOps

    @property
    def base(self) -> FiniteSpace:
        return self.bundle.base

    @property
    def total(self) -> FiniteSpace:
        return self.bundle.total

    @property
    def proj(self) -> SpaceMap:
        return self.bundle.proj


def stalk_rl(rb: RLBundle, b: str) -> rlcore.ResiduatedLattice:
    """The stalk algebra over b, with order derived from the meet table."""
    pts = tuple(sorted(rb.bundle.stalk_points(b)))
    meet = rb.ops.meet[b]
    leq = frozenset((x, y) for x in pts for y in pts if meet.get((x, y)) == x)
    return rlcore.ResiduatedLattice(
        pts, leq, dict(rb.ops.join[b]), dict(meet), dict(rb.ops.mul[b]), dict(rb.ops.imp[b]),
        rb.ops.zero[b], rb.ops.one[b],
    )


def proper_map_from_stalk_ops(b: Bundle, ops: StalkOps, name: str) -> dict[str, str]:
    """Collapse per-stalk tables into one map on kernel-pair ids."""
    tabs = ops.op(name)
    out: dict[str, str] = {}
    for k, (t1, t2) in kernel_pair_points(b).items():
        out[k] = tabs[b.proj(t1)][t1, t2]
    return out


def stalk_ops_from_proper_map(b: Bundle, rho: Mapping[str, str]) -> dict[str, dict[tuple[str, str], str]]:
    """Slice a kernel-pair map back into per-stalk binary tables."""
    out: dict[str, dict[tuple[str, str], str]] = {p: {} for p in b.base.points}
    for k, (t1, t2) in kernel_pair_points(b).items():
        out[b.proj(t1)][t1, t2] = rho[k]
    return out


def _kernel_min_nbhds(b: Bundle) -> dict[str, Subset]:
    """Minimal neighbourhoods of kernel-pair points in the subspace-of-product topology."""
    mins = b.total.min_nbhd_map
    pairs = kernel_pair_points(b)
    out = {}
    for k, (t1, t2) in pairs.items():
        m1, m2 = mins[t1], mins[t2]
        out[k] = frozenset(
            kk for kk, (u1, u2) in pairs.items() if u1 in m1 and u2 in m2
        )
    return out


def _proper_map_continuous(b: Bundle, rho: Mapping[str, str]) -> tuple[bool, str]:
    mins_t = b.total.min_nbhd_map
    for k, nb in _kernel_min_nbhds(b).items():
        target = mins_t[rho[k]]
        for kk in nb:
            if rho[kk] not in target:
                return False, f"{k} -> {kk}"
    return True, ""


def verify_rl_bundle(rb: RLBundle) -> ValidationReport:
    """Stalk algebras valid, proper maps continuous, constants continuous sections, projection onto."""
    bad: list[Violation] = []
    b = rb.bundle
    for p in sorted(b.base.points):
        pts = b.stalk_points(p)
        if not pts:
            bad.append(Violation("stalk-empty", p))
            continue
        for name in StalkOps.OPS:
            tab = rb.ops.op(name).get(p, {})
            for x, y in itertools.product(sorted(pts), repeat=2):
                v = tab.get((x, y))
                if v is None:
                    bad.append(Violation(f"stalk-{name}-missing", f"{p}:({x},{y})"))
                elif v not in pts:
                    bad.append(Violation(f"stalk-{name}-escapes", f"{p}:({x},{y})->{v}"))
        if rb.ops.zero.get(p) not in pts or rb.ops.one.get(p) not in pts:
            bad.append(Violation("stalk-constants-escape", p))
    if bad:
        return ValidationReport("rl-bundle", tuple(bad))

    for p in sorted(b.base.points):
        rep = rlcore.verify_rl(stalk_rl(rb, p))
        if not rep.ok:
            v = rep.violations[0]
            bad.append(Violation(f"stalk-not-rl[{v.rule}]", f"{p}: {v.witness}"))

    for name in StalkOps.OPS:
        rho = proper_map_from_stalk_ops(b, rb.ops, name)
        ok, witness = _proper_map_continuous(b, rho)
        if not ok:
            bad.append(Violation(f"proper-map-discontinuous[{name}]", witness))

    for cname, tab in [("zero", rb.ops.zero), ("one", rb.ops.one)]:
        try:
            sec = fintop.space_map(b.base, b.total, dict(tab))
        except ValueError as e:
            bad.append(Violation(f"{cname}-not-a-map", str(e)))
            continue
        if any(b.proj(sec(p)) != p for p in b.base.points):
            bad.append(Violation(f"{cname}-not-a-section", cname))
        elif not fintop.is_continuous(sec):
            bad.append(Violation(f"{cname}-discontinuous", cname))

    if b.proj.image(b.total.points) != b.base.points:
        bad.append(Violation("projection-not-surjective", fmt_set(b.base.points - b.proj.image(b.total.points))))

    return ValidationReport("rl-bundle", tuple(bad))


def is_etale(b: Bundle) -> bool:
    return fintop.is_local_homeomorphism(b.proj)


# ---------------------------------------------------------------------------
# sections


@dataclass
class Section:
    """A continuous right inverse of the projection over a subset of the base."""

    parent: Bundle
    domain: Subset
    table: dict[str, str]

    def __post_init__(self):
        if set(self.table) != set(self.domain):
            raise ValueError("section table does not match its domain")
        for p, t in self.table.items():
            if self.parent.proj(t) != p:
                raise ValueError(f"not a right inverse at {p}")
        sub = fintop.subspace(self.parent.base, self.domain)
        m = fintop.space_map(sub, self.parent.total, self.table)
        if not fintop.is_continuous(m):
            raise ValueError("section is not continuous")

    def __call__(self, p: str) -> str:
        return self.table[p]

    @property
    def id_str(self) -> str:
        return "{" + ",".join(f"{k}:{v}" for k, v in sorted(self.table.items())) + "}"

    def image(self) -> Subset:
        return frozenset(self.table.values())

    def restrict(self, sub: Iterable[str]) -> "Section":
        s = frozenset(sub)
        if not s <= self.domain:
            raise ValueError("restriction escapes the domain")
        return Section(self.parent, s, {p: self.table[p] for p in s})

    def as_map(self) -> SpaceMap:
        sub = fintop.subspace(self.parent.base, self.domain)
        return fintop.space_map(sub, self.parent.total, self.table)


def sections(b: Bundle, x: Iterable[str]) -> list[Section]:
    """All sections over the subset x, in id order (exactly one empty section for x=empty)."""
    dom = frozenset(x)
    if not dom <= b.base.points:
        raise ValueError("section domain escapes the base")
    pts = sorted(dom)
    choices = [sorted(b.stalk_points(p)) for p in pts]
    if any(not c for c in choices):
        return []
    sub = fintop.subspace(b.base, dom)
    mins_sub = sub.min_nbhd_map
    mins_tot = b.total.min_nbhd_map
    out = []
    assign: dict[str, str] = {}

    def compatible(p: str, t: str) -> bool:
        for q, u in assign.items():
            if q in mins_sub[p] and u not in mins_tot[t]:
                return False
            if p in mins_sub[q] and t not in mins_tot[u]:
                return False
        return True

    def rec(i: int):
        if i == len(pts):
            out.append(Section(b, dom, dict(assign)))
            return
        p = pts[i]
        for t in choices[i]:
            if compatible(p, t):
                assign[p] = t
                rec(i + 1)
                del assign[p]

    rec(0)
    return sorted(out, key=lambda s: s.id_str)


def section_through_point(e: Bundle, t: str) -> tuple[Subset, Section]:
    """A basis-open witness (U, sigma) with sigma(proj(t)) = t; requires an etale."""
    if not is_etale(e):
        raise ValueError("bundle is not an etale")
    for v in sorted(e.total.opens, key=lambda s: (len(s), sorted(s))):
        if t in v and fintop._restriction_is_homeo_onto_open(e.proj, v):
            u = e.proj.image(v)
            inv = {e.proj(s): s for s in v}
            return u, Section(e, u, inv)
    raise AssertionError("etale admits no basis open through the point")


def equalizer(s1: Section, s2: Section) -> tuple[Subset, dict[str, bool]]:
    """Agreement set of two sections plus topology facts about it."""
    if s1.parent.base != s2.parent.base:
        raise ValueError("sections live over different bases")
    common = s1.domain & s2.domain
    eq = frozenset(p for p in common if s1(p) == s2(p))
    base = s1.parent.base
    facts = {
        "domains_open": s1.domain in base.opens and s2.domain in base.opens,
        "open_in_base": eq in base.opens,
        "clopen_in_common": frozenset(common - eq) in {o & common for o in base.opens}
        and eq in {o & common for o in base.opens},
    }
    return eq, facts


def section_image_basis(e: Bundle) -> list[Subset]:
    """{sigma(U) | U open, sigma over U}; checked to be an open basis of the total space."""
    if not is_etale(e):
        raise ValueError("bundle is not an etale")
    fam = set()
    for u in e.base.sorted_opens():
        for s in sections(e, u):
            img = s.image()
            if img not in e.total.opens:
                raise AssertionError(f"section image {fmt_set(img)} is not open")
            fam.add(img)
    for o in e.total.opens:
        cover = frozenset(itertools.chain.from_iterable(v for v in fam if v <= o))
        if cover != o:
            raise AssertionError(f"section images do not form a basis at {fmt_set(o)}")
    return sorted(fam, key=lambda s: (len(s), sorted(s)))


class SectionClosureError(ValueError):
    """A pointwise combination of sections failed continuity: the bundle is not valid."""


@dataclass
class SectionAlgebra:
    algebra: rlcore.ResiduatedLattice
    sections: dict[str, Section]


def pointwise_rl_on_sections(rb: RLBundle, x: Iterable[str]) -> SectionAlgebra:
    """Gamma(x) as a residuated lattice under pointwise stalk operations."""
    dom = frozenset(x)
    secs = sections(rb.bundle, dom)
    by_id = {s.id_str: s for s in secs}
    carrier = tuple(sorted(by_id))

    def combine(name: str, s1: Section, s2: Section) -> str:
        tabs = rb.ops.op(name)
        table = {p: tabs[p][s1(p), s2(p)] for p in dom}
        try:
            out = Section(rb.bundle, dom, table)
        except ValueError as e:
            raise SectionClosureError(f"{name}({s1.id_str},{s2.id_str}) is not a section: {e}")
        if out.id_str not in by_id:
            raise SectionClosureError(f"{name} escaped the enumerated section set")
        return out.id_str

    tables = {}
    for name in StalkOps.OPS:
        tables[name] = {
            (a, b): combine(name, by_id[a], by_id[b]) for a in carrier for b in carrier
        }
    for cname, tab in [("zero", rb.ops.zero), ("one", rb.ops.one)]:
        try:
            sec = Section(rb.bundle, dom, {p: tab[p] for p in dom})
        except ValueError as e:
            raise SectionClosureError(f"constant {cname} is not a section: {e}")
        if sec.id_str not in by_id:
            raise SectionClosureError(f"constant {cname} escaped the section set")
        if cname == "zero":
            bot = sec.id_str
        else:
            top = sec.id_str
    leq = frozenset((a, b) for a in carrier for b in carrier if tables["meet"][a, b] == a)
    alg = rlcore.ResiduatedLattice(
        carrier, leq, tables["join"], tables["meet"], tables["mul"], tables["imp"], bot, top
    )
    rep = rlcore.verify_rl(alg)
    if not rep.ok:
        raise SectionClosureError(f"pointwise algebra failed verification: {rep.violations[0]}")
    return SectionAlgebra(alg, by_id)


# ---------------------------------------------------------------------------
# morphisms


@dataclass
class BundleMorphism:
    """A map of totals over the same base; continuity and the triangle are checked."""

    src: Bundle
    dst: Bundle
    map: SpaceMap

    def __post_init__(self):
        if self.src.base != self.dst.base:
            raise ValueError("bundle morphism needs a common base")
        if self.map.dom != self.src.total or self.map.cod != self.dst.total:
            raise ValueError("morphism endpoints do not match")
        if any(self.dst.proj(self.map(t)) != self.src.proj(t) for t in self.src.total.points):
            raise ValueError("triangle over the base does not commute")
        if not fintop.is_continuous(self.map):
            raise ValueError("bundle morphism is not continuous")

    def __call__(self, t: str) -> str:
        return self.map(t)


def base_compatible_tables(src: Bundle, dst: Bundle) -> Iterable[dict[str, str]]:
    """All stalk-respecting tables total(src)->total(dst), continuity not imposed."""
    pts = sorted(src.total.points)
    choices = [sorted(dst.stalk_points(src.proj(t))) for t in pts]
    if any(not c for c in choices):
        return
    for combo in itertools.product(*choices):
        yield dict(zip(pts, combo))


def constrained_continuous_tables(
    src: FiniteSpace, dst: FiniteSpace, choices: Mapping[str, Iterable[str]]
) -> Iterable[dict[str, str]]:
    """Continuous tables src->dst with per-point value constraints, by pruned search.

    Continuity is the specialization-monotonicity criterion, exact on finite spaces.
    """
    pts = sorted(src.points)
    opts = [sorted(choices[p]) for p in pts]
    if any(not o for o in opts):
        return
    mins_s = src.min_nbhd_map
    mins_d = dst.min_nbhd_map
    assign: dict[str, str] = {}

    def ok(p: str, v: str) -> bool:
        for q, w in assign.items():
            if q in mins_s[p] and w not in mins_d[v]:
                return False
            if p in mins_s[q] and v not in mins_d[w]:
                return False
        return True

    def rec(i: int):
        if i == len(pts):
            yield dict(assign)
            return
        p = pts[i]
        for v in opts[i]:
            if ok(p, v):
                assign[p] = v
                yield from rec(i + 1)
                del assign[p]

    yield from rec(0)


def bundle_morphisms(src: Bundle, dst: Bundle) -> list[BundleMorphism]:
    choices = {t: dst.stalk_points(src.proj(t)) for t in src.total.points}
    out = []
    for table in constrained_continuous_tables(src.total, dst.total, choices):
        m = fintop.space_map(src.total, dst.total, table)
        out.append(BundleMorphism(src, dst, m))
    return out


def is_rl_bundle_morphism(h: SpaceMap, src: RLBundle, dst: RLBundle) -> bool:
    return not rl_bundle_morphism_violations(h, src, dst)


def rl_bundle_morphism_violations(h: SpaceMap, src: RLBundle, dst: RLBundle) -> list[str]:
    """Triangle, continuity, and stalkwise RL-morphism conditions with witnesses."""
    out = []
    if src.base != dst.base:
        return ["different bases"]
    if h.dom != src.total or h.cod != dst.total:
        return ["endpoints do not match"]
    for t in sorted(src.total.points):
        if dst.proj(h(t)) != src.proj(t):
            out.append(f"triangle fails at {t}")
    if out:
        return out
    if not fintop.is_continuous(h):
        out.append("not continuous")
    for b in sorted(src.base.points):
        table = {t: h(t) for t in src.bundle.stalk_points(b)}
        bad = rlcore.rl_morphism_violations(table, stalk_rl(src, b), stalk_rl(dst, b))
        out.extend(f"stalk {b}: {w}" for w in bad[:1])
    return out


def proper_square_commutes(h: SpaceMap, src: RLBundle, dst: RLBundle) -> bool:
    """The kernel-pair square definition of an RL-bundle morphism.

    Covers the four proper binary maps plus the two global-section squares
    (the nullary operations), which the stalkwise reading also demands.
    """
    pairs = kernel_pair_points(src.bundle)
    for name in StalkOps.OPS:
        rho_src = proper_map_from_stalk_ops(src.bundle, src.ops, name)
        rho_dst = proper_map_from_stalk_ops(dst.bundle, dst.ops, name)
        for k, (t1, t2) in pairs.items():
            if h(rho_src[k]) != rho_dst[pair_id(h(t1), h(t2))]:
                return False
    for src_tab, dst_tab in [(src.ops.zero, dst.ops.zero), (src.ops.one, dst.ops.one)]:
        for b in src.base.points:
            if h(src_tab[b]) != dst_tab[b]:
                return False
    return True
