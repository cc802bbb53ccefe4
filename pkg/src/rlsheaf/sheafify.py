"""The germ construction: coreflection of etales in bundles and its residuated-lattice lift.

Germs are canonicalized by restricting to the minimal open neighbourhood of
the base point, which on finite spaces coincides with the exists-a-smaller-
neighbourhood equivalence (that coincidence is itself under test).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import bundle as bnd
from . import fintop
from .bundle import Bundle, BundleMorphism, RLBundle, Section, StalkOps
from .fintop import FiniteSpace, SpaceMap
from .report import fmt_set

Subset = frozenset[str]


def germ_id(base_point: str, table: dict[str, str]) -> str:
    body = ",".join(f"{k}:{v}" for k, v in sorted(table.items()))
    return f"({base_point} ⊳ {body})"


@dataclass
class Germ:
    """A section germ, represented by its restriction to the minimal open neighbourhood."""

    base_point: str
    rep: Section

    def __post_init__(self):
        want = fintop.minimal_neighborhood(self.rep.parent.base, self.base_point)
        if self.rep.domain != want:
            raise ValueError("representative is not cut to the minimal neighbourhood")

    @property
    def id_str(self) -> str:
        return germ_id(self.base_point, self.rep.table)

    def value(self) -> str:
        return self.rep(self.base_point)


def germ_at(b: Bundle, s: Section, p: str) -> Germ:
    """Germ of a section over an open set at a point of that set."""
    if s.domain not in b.base.opens:
        raise ValueError(f"section domain {fmt_set(s.domain)} is not open")
    if p not in s.domain:
        raise ValueError(f"{p} is outside the section domain")
    rep = s.restrict(fintop.minimal_neighborhood(b.base, p))
    return Germ(p, rep)


def germs_equivalent_exists_w(b: Bundle, s: Section, t: Section, p: str) -> bool:
    """The textual definition: some open W containing p inside both domains where they agree."""
    for w in b.base.opens:
        if p in w and w <= s.domain and w <= t.domain and all(s(q) == t(q) for q in w):
            return True
    return False


@dataclass
class GermSpace:
    """Etale of germs over the source bundle's base."""

    source: Bundle
    space: FiniteSpace
    proj: SpaceMap
    germs: dict[str, Germ]

    @property
    def as_bundle(self) -> Bundle:
        return Bundle(self.space, self.source.base, self.proj)


def _min_sections(b: Bundle, p: str) -> list[Section]:
    return bnd.sections(b, fintop.minimal_neighborhood(b.base, p))


def etale_of(b: Bundle) -> GermSpace:
    """Germ space with the topology generated by the section-image basis Im(s_U)."""
    germs: dict[str, Germ] = {}
    for p in sorted(b.base.points):
        for s in _min_sections(b, p):
            g = Germ(p, s)
            germs[g.id_str] = g
    basis: set[frozenset[str]] = {frozenset()}
    for u in b.base.sorted_opens():
        for s in bnd.sections(b, u):
            basis.add(frozenset(germ_at(b, s, p).id_str for p in u))
    space = fintop.topology_from_basis(germs, basis)
    proj = fintop.space_map(space, b.base, {k: g.base_point for k, g in germs.items()})
    gs = GermSpace(b, space, proj, germs)
    if not fintop.is_local_homeomorphism(proj):
        raise AssertionError("germ projection is not a local homeomorphism")
    return gs


def counit(b: Bundle, gs: GermSpace | None = None) -> SpaceMap:
    """epsilon: germ space -> total, a germ goes to its representative's value."""
    gs = gs or etale_of(b)
    eps = fintop.space_map(gs.space, b.total, {k: g.value() for k, g in gs.germs.items()})
    if any(b.proj(eps(k)) != gs.proj(k) for k in gs.space.points):
        raise AssertionError("counit does not commute over the base")
    return eps


def counit_report(b: Bundle, gs: GermSpace | None = None) -> dict[str, bool]:
    """Property record for the counit.

    `open_relative` is the openness equation of the construction (the image
    of each basis open Im(s_U) equals the section image s(U)); `open_in_total`
    is plain openness into the total topology, which holds at etales.
    """
    gs = gs or etale_of(b)
    eps = counit(b, gs)
    values = [eps(k) for k in sorted(gs.space.points)]
    section_images = set()
    rel_ok = True
    for u in b.base.sorted_opens():
        for s in bnd.sections(b, u):
            img_basis = frozenset(germ_at(b, s, p).id_str for p in u)
            if eps.image(img_basis) != s.image():
                rel_ok = False
            section_images.add(s.image())
    landing = _unions(section_images)
    return {
        "injective": len(set(values)) == len(values),
        "continuous": fintop.is_continuous(eps),
        "open_in_total": fintop.is_open_map(eps),
        "open_relative": rel_ok and all(eps.image(o) in landing for o in gs.space.opens),
    }


def _unions(fam: set[Subset]) -> set[Subset]:
    basis = sorted(fam, key=lambda s: (len(s), sorted(s)))
    seen = {frozenset()}
    frontier = [frozenset()]
    while frontier:
        cur = frontier.pop()
        for piece in basis:
            nxt = cur | piece
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return seen


def counit_is_iso(b: Bundle, gs: GermSpace | None = None) -> bool:
    """At an etale the counit is an isomorphism of bundles."""
    gs = gs or etale_of(b)
    eps = counit(b, gs)
    return (
        fintop.is_homeomorphism(eps)
        and eps.image(gs.space.points) == b.total.points
    )


def coreflect_morphism(h: BundleMorphism) -> SpaceMap:
    """Lift a bundle morphism to germ spaces: [s]_b goes to [h s]_b."""
    gs_src = etale_of(h.src)
    gs_dst = etale_of(h.dst)
    table = {}
    for k, g in gs_src.germs.items():
        pushed = {p: h(t) for p, t in g.rep.table.items()}
        table[k] = germ_id(g.base_point, pushed)
        if table[k] not in gs_dst.germs:
            raise AssertionError("pushed germ escaped the target germ space")
    m = fintop.space_map(gs_src.space, gs_dst.space, table)
    BundleMorphism(gs_src.as_bundle, gs_dst.as_bundle, m)
    return m


def couniversal_factorization(h: BundleMorphism) -> SpaceMap:
    """Unique etale morphism hbar with counit . hbar = h, for etale source."""
    if not bnd.is_etale(h.src):
        raise ValueError("source bundle is not an etale")
    gs = etale_of(h.dst)
    table = {}
    for y in sorted(h.src.total.points):
        u, s = bnd.section_through_point(h.src, y)
        p = h.src.proj(y)
        pushed = {q: h(s(q)) for q in fintop.minimal_neighborhood(h.src.base, p)}
        table[y] = germ_id(p, pushed)
        if table[y] not in gs.germs:
            raise AssertionError("factorization left the germ space")
    m = fintop.space_map(h.src.total, gs.space, table)
    BundleMorphism(h.src, gs.as_bundle, m)
    eps = counit(h.dst, gs)
    if any(eps(m(y)) != h(y) for y in h.src.total.points):
        raise AssertionError("factorization does not recover the morphism")
    return m


def factorizations_by_search(h: BundleMorphism) -> list[SpaceMap]:
    """All base-compatible continuous maps k with counit . k = h (uniqueness oracle)."""
    gs = etale_of(h.dst)
    eps = counit(h.dst, gs)
    choices = {
        y: [k for k, g in gs.germs.items() if g.base_point == h.src.proj(y) and eps(k) == h(y)]
        for y in h.src.total.points
    }
    return [
        fintop.space_map(h.src.total, gs.space, table)
        for table in bnd.constrained_continuous_tables(h.src.total, gs.space, choices)
    ]


def rl_germ_ops(rb: RLBundle) -> tuple[RLBundle, GermSpace]:
    """Transport stalk operations to the germ space through pointwise operations on representatives."""
    b = rb.bundle
    gs = etale_of(b)
    by_point: dict[str, list[str]] = {}
    for k, g in gs.germs.items():
        by_point.setdefault(g.base_point, []).append(k)

    join: dict[str, dict[tuple[str, str], str]] = {}
    meet: dict[str, dict[tuple[str, str], str]] = {}
    mul: dict[str, dict[tuple[str, str], str]] = {}
    imp: dict[str, dict[tuple[str, str], str]] = {}
    zero: dict[str, str] = {}
    one: dict[str, str] = {}
    for p, keys in by_point.items():
        dom = fintop.minimal_neighborhood(b.base, p)
        for name, store in [("join", join), ("meet", meet), ("mul", mul), ("imp", imp)]:
            tabs = rb.ops.op(name)
            t = {}
            for k1, k2 in itertools.product(keys, repeat=2):
                r1, r2 = gs.germs[k1].rep, gs.germs[k2].rep
                combined = {q: tabs[q][r1(q), r2(q)] for q in dom}
                t[k1, k2] = germ_id(p, combined)
            store[p] = t
        zero[p] = germ_id(p, {q: rb.ops.zero[q] for q in dom})
        one[p] = germ_id(p, {q: rb.ops.one[q] for q in dom})
    ops = StalkOps(join=join, meet=meet, mul=mul, imp=imp, zero=zero, one=one)
    return RLBundle(gs.as_bundle, ops), gs


def coreflection_hom_counts(t: Bundle, x: Bundle) -> tuple[int, int, bool]:
    """|Hom_bundle(T,X)| vs |Hom_etale(T, GermSpace(X))| and bijectivity of h -> hbar."""
    gs = etale_of(x)
    homs_bundle = bnd.bundle_morphisms(t, x)
    homs_etale = bnd.bundle_morphisms(t, gs.as_bundle)
    lifted = set()
    for h in homs_bundle:
        lifted.add(couniversal_factorization(h).id_str)
    etale_ids = {m.map.id_str for m in homs_etale}
    bijective = len(lifted) == len(homs_bundle) and lifted == etale_ids
    return len(homs_bundle), len(homs_etale), bijective
