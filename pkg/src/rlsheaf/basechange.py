"""Pullback of (RL-)etales along continuous maps, RLE-spaces, and the section functor."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import bundle as bnd
from . import fintop, rlcore
from .bundle import Bundle, BundleMorphism, RLBundle, SectionAlgebra, StalkOps
from .fintop import FiniteSpace, SpaceMap, pair_id


@dataclass
class PullbackEtale:
    """The canonical pullback bundle along a base map, with the upper leg f'."""

    along: SpaceMap
    source: Bundle
    result: Bundle
    fprime: SpaceMap


def pullback_etale(f: SpaceMap, e: Bundle) -> PullbackEtale:
    """Pullback of a bundle over cod(f) to a bundle over dom(f); etale when e is."""
    if f.cod != e.base:
        raise ValueError("base map does not land in the bundle's base")
    if not fintop.is_continuous(f):
        raise ValueError("base map is not continuous")
    space, p1, p2 = fintop.pullback_space(f, e.proj)
    result = Bundle(space, f.dom, p1)
    if bnd.is_etale(e) and not bnd.is_etale(result):
        raise AssertionError("pullback of an etale failed to be an etale")
    return PullbackEtale(f, e, result, p2)


def pullback_morphism(f: SpaceMap, h: BundleMorphism) -> BundleMorphism:
    """f*h acts as (b,s) -> (b, h(s)) between the canonical pullbacks."""
    src = pullback_etale(f, h.src)
    dst = pullback_etale(f, h.dst)
    table = {}
    for k in src.result.total.points:
        b = src.result.proj(k)
        s = src.fprime(k)
        table[k] = pair_id(b, h(s))
    m = fintop.space_map(src.result.total, dst.result.total, table)
    return BundleMorphism(src.result, dst.result, m)


def pullback_rl_etale(f: SpaceMap, re: RLBundle) -> tuple[RLBundle, SpaceMap]:
    """Transport stalk operations componentwise along the pullback."""
    pe = pullback_etale(f, re.bundle)
    result = pe.result

    def lift(tabs: dict[str, dict[tuple[str, str], str]]) -> dict[str, dict[tuple[str, str], str]]:
        out: dict[str, dict[tuple[str, str], str]] = {}
        for b in result.base.points:
            c = f(b)
            src_tab = tabs[c]
            t = {}
            for s1 in re.bundle.stalk_points(c):
                for s2 in re.bundle.stalk_points(c):
                    t[pair_id(b, s1), pair_id(b, s2)] = pair_id(b, src_tab[s1, s2])
            out[b] = t
        return out

    ops = StalkOps(
        join=lift(re.ops.join),
        meet=lift(re.ops.meet),
        mul=lift(re.ops.mul),
        imp=lift(re.ops.imp),
        zero={b: pair_id(b, re.ops.zero[f(b)]) for b in result.base.points},
        one={b: pair_id(b, re.ops.one[f(b)]) for b in result.base.points},
    )
    return RLBundle(result, ops), pe.fprime


def lambda_iso(f: SpaceMap, g: SpaceMap, e: Bundle) -> SpaceMap:
    """The unique pullback-comparison iso (gf)*e -> f*(g*e), (b,t) -> (b,(f(b),t))."""
    if f.cod != g.dom or g.cod != e.base:
        raise ValueError("maps do not compose into the bundle base")
    gf = fintop.compose(g, f)
    outer = pullback_etale(gf, e)
    inner = pullback_etale(g, e)
    nested = pullback_etale(f, inner.result)
    table = {}
    for k in outer.result.total.points:
        b = outer.result.proj(k)
        t = outer.fprime(k)
        table[k] = pair_id(b, pair_id(f(b), t))
    m = fintop.space_map(outer.result.total, nested.result.total, table)
    if not fintop.is_homeomorphism(m):
        raise AssertionError("lambda comparison map is not a homeomorphism")
    BundleMorphism(outer.result, nested.result, m)
    return m


def lambda_uniqueness_witnesses(f: SpaceMap, g: SpaceMap, e: Bundle) -> list[SpaceMap]:
    """All maps between the two pullback totals commuting with both cone legs."""
    gf = fintop.compose(g, f)
    outer = pullback_etale(gf, e)
    inner = pullback_etale(g, e)
    nested = pullback_etale(f, inner.result)
    upper = fintop.compose(inner.fprime, nested.fprime)  # nested -> e total
    out = []
    pts = sorted(outer.result.total.points)
    cod_pts = sorted(nested.result.total.points)
    for combo in itertools.product(cod_pts, repeat=len(pts)):
        table = dict(zip(pts, combo))
        if all(
            nested.result.proj(table[k]) == outer.result.proj(k)
            and upper(table[k]) == outer.fprime(k)
            for k in pts
        ):
            m = fintop.space_map(outer.result.total, nested.result.total, table)
            out.append(m)
    return out


@dataclass
class RLESpace:
    """A base space together with an RL-etale over it."""

    base: FiniteSpace
    etale: RLBundle

    def __post_init__(self):
        if self.etale.base != self.base:
            raise ValueError("etale does not live over the declared base")
        if not bnd.is_etale(self.etale.bundle):
            raise ValueError("projection is not a local homeomorphism")
        rep = bnd.verify_rl_bundle(self.etale)
        if not rep.ok:
            raise ValueError(f"not an RL-bundle: {rep.violations[0]}")


@dataclass
class RLEInvMorphism:
    """(f, alpha): base map plus an RL-etale morphism f* T_dst -> T_src over src.base."""

    src: RLESpace
    dst: RLESpace
    f: SpaceMap
    alpha: SpaceMap

    def __post_init__(self):
        if self.f.dom != self.src.base or self.f.cod != self.dst.base:
            raise ValueError("base map endpoints do not match")
        pulled, _ = pullback_rl_etale(self.f, self.dst.etale)
        if self.alpha.dom != pulled.total or self.alpha.cod != self.src.etale.total:
            raise ValueError("alpha endpoints do not match the canonical pullback")
        bad = bnd.rl_bundle_morphism_violations(self.alpha, pulled, self.src.etale)
        if bad:
            raise ValueError(f"alpha is not an RL-bundle morphism: {bad[0]}")


def identity_rle_morphism(x: RLESpace) -> RLEInvMorphism:
    """Identity uses alpha = second projection from the canonical pullback along 1."""
    f = fintop.identity_map(x.base)
    pe = pullback_etale(f, x.etale.bundle)
    return RLEInvMorphism(x, x, f, pe.fprime)


def compose_rle_inv(m1: RLEInvMorphism, m2: RLEInvMorphism) -> RLEInvMorphism:
    """(g,beta) after (f,alpha) is (gf, alpha . f*beta . lambda)."""
    if m1.dst is not m2.src and m1.dst != m2.src:
        raise ValueError("morphisms are not composable")
    f, g = m1.f, m2.f
    gf = fintop.compose(g, f)
    outer = pullback_etale(gf, m2.dst.etale.bundle)
    table = {}
    for k in outer.result.total.points:
        b = outer.result.proj(k)
        t = outer.fprime(k)
        table[k] = m1.alpha(pair_id(b, m2.alpha(pair_id(f(b), t))))
    alpha = fintop.space_map(outer.result.total, m1.src.etale.total, table)
    return RLEInvMorphism(m1.src, m2.dst, gf, alpha)


def section_functor_object(x: RLESpace) -> SectionAlgebra:
    return bnd.pointwise_rl_on_sections(x.etale, x.base.points)


def section_functor_morphism(m: RLEInvMorphism) -> rlcore.RLMorphism:
    """Gamma is contravariant: sections pull back along (f, alpha)."""
    g_src = section_functor_object(m.dst)
    g_dst = section_functor_object(m.src)
    table = {}
    for sid, sec in g_src.sections.items():
        pulled = {b: m.alpha(pair_id(b, sec(m.f(b)))) for b in m.src.base.points}
        out = bnd.Section(m.src.etale.bundle, frozenset(m.src.base.points), pulled)
        if out.id_str not in g_dst.sections:
            raise AssertionError("pulled section escaped the section algebra")
        table[sid] = out.id_str
    return rlcore.RLMorphism(g_src.algebra, g_dst.algebra, table)
