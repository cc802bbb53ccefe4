"""Seed-fixed law suites: randomized generators plus the checks the CLI and tests share.

The seed comes from the RLSHEAF_SEED environment variable when set.
"""

from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass, field

from . import adjunction, basechange, bundle as bnd, fintop, fixtures, sheafify

DEFAULT_SEED = 271828


def suite_seed() -> int:
    return int(os.environ.get("RLSHEAF_SEED", DEFAULT_SEED))


@dataclass
class SuiteReport:
    name: str
    checks: list[tuple[str, bool, str]] = field(default_factory=list)

    def add(self, label: str, ok: bool, detail: str = ""):
        self.checks.append((label, bool(ok), detail))

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def lines(self) -> list[str]:
        out = [f"{self.name}: {'PASS' if self.ok else 'FAIL'}"]
        for label, ok, detail in self.checks:
            suffix = f" ({detail})" if detail else ""
            out.append(f"  [{'ok' if ok else 'FAIL'}] {label}{suffix}")
        return out

    def as_dict(self) -> dict:
        return {
            "suite": self.name,
            "ok": self.ok,
            "checks": [{"label": l, "ok": o, "detail": d} for l, o, d in self.checks],
        }


# ---------------------------------------------------------------------------
# random generators


def random_space(rng: random.Random, max_points: int = 5, prefix: str = "p") -> fintop.FiniteSpace:
    n = rng.randint(1, max_points)
    pts = [f"{prefix}{i}" for i in range(n)]
    subbasis = []
    for _ in range(rng.randint(0, n + 2)):
        subbasis.append([p for p in pts if rng.random() < 0.5])
    return fintop.topology_from_subbasis(pts, subbasis)


def random_map(rng: random.Random, dom: fintop.FiniteSpace, cod: fintop.FiniteSpace) -> fintop.SpaceMap:
    cod_pts = sorted(cod.points)
    return fintop.space_map(dom, cod, {p: rng.choice(cod_pts) for p in dom.points})


def random_nonetale_bundles(rng: random.Random, count: int, max_total: int = 6) -> list[bnd.Bundle]:
    """Non-etale bundles over discrete bases, like every bundled fixture's base."""
    out = []
    attempts = 0
    while len(out) < count and attempts < 10000:
        attempts += 1
        base = fintop.discrete([f"b{i}" for i in range(rng.randint(1, 2))])
        total = random_space(rng, max_points=max_total, prefix="t")
        table = {t: rng.choice(sorted(base.points)) for t in total.points}
        for b in base.points:
            if b not in table.values():
                table[sorted(total.points)[0]] = b
        if set(table.values()) != set(base.points):
            continue
        proj = fintop.space_map(total, base, table)
        if not fintop.is_continuous(proj):
            continue
        b = bnd.Bundle(total, base, proj)
        if not bnd.is_etale(b):
            out.append(b)
    if len(out) < count:
        raise AssertionError("generator failed to produce enough non-etale bundles")
    return out


# ---------------------------------------------------------------------------
# the structural law suite (local homeomorphisms, sections, sheafification, base change)


def law_suite(seed: int | None = None, random_maps: int = 120) -> SuiteReport:
    rng = random.Random(suite_seed() if seed is None else seed)
    rep = SuiteReport("law-suite")

    # local homeomorphism characterization on fixtures and random maps
    fixture_maps = [rb.proj for rb in fixtures.rl_bundle_fixtures().values()]
    fixture_maps += [fintop.identity_map(fixtures.space_sierpinski())]
    agree = 0
    for m in fixture_maps:
        if fintop.is_local_homeomorphism(m) == fintop.is_local_homeomorphism_direct(m):
            agree += 1
    ok = agree == len(fixture_maps)
    seen_true = seen_false = 0
    for _ in range(random_maps):
        dom = random_space(rng, 5, "d")
        cod = random_space(rng, 5, "c")
        m = random_map(rng, dom, cod)
        a = fintop.is_local_homeomorphism(m)
        if a != fintop.is_local_homeomorphism_direct(m):
            ok = False
        seen_true += a
        seen_false += not a
    rep.add(
        "local-homeo iff continuous+open+locally-injective",
        ok and seen_true > 0 and seen_false > 0,
        f"{len(fixture_maps)} fixture maps, {random_maps} random maps",
    )

    etales = {n: rb for n, rb in fixtures.etale_fixtures().items()}
    eq_ok = True
    for name, rb in etales.items():
        b = rb.bundle
        discrete_total = b.total.is_discrete()
        secs_by_open = {u: bnd.sections(b, u) for u in b.base.sorted_opens()}
        for u, s1s in secs_by_open.items():
            for v, s2s in secs_by_open.items():
                for s1 in s1s:
                    for s2 in s2s:
                        _, facts = bnd.equalizer(s1, s2)
                        if not facts["open_in_base"]:
                            eq_ok = False
                        if discrete_total and not facts["clopen_in_common"]:
                            eq_ok = False
    rep.add("equalizers of sections over opens are open (clopen for discrete totals)", eq_ok)

    basis_ok = True
    final_ok = True
    stalk_ok = True
    for name, rb in etales.items():
        b = rb.bundle
        try:
            bnd.section_image_basis(b)
        except AssertionError:
            basis_ok = False
        all_secs = []
        for x in _subsets(sorted(b.base.points)):
            sub = fintop.subspace(b.base, x)
            for s in bnd.sections(b, x):
                all_secs.append((sub, dict(s.table)))
        fin = fintop.final_topology(b.total.points, all_secs)
        if fin.opens != b.total.opens:
            final_ok = False
        for p in b.base.points:
            if not bnd.stalk(b, p).is_discrete():
                stalk_ok = False
    rep.add("section images form a basis of each etale total", basis_ok)
    rep.add("etale topology equals the final topology of its sections", final_ok)
    rep.add("etale stalks are discrete", stalk_ok)

    # sheafification behaviour on the named non-etale fixture and random bundles
    sheaf_ok = True
    details = []
    targets = [("indiscrete_a2_over_point", fixtures.indiscrete_a2_over_point().bundle)]
    targets += [(f"random{i}", b) for i, b in enumerate(random_nonetale_bundles(rng, 5))]
    for name, b in targets:
        gs = sheafify.etale_of(b)
        crep = sheafify.counit_report(b, gs)
        if not (bnd.is_etale(gs.as_bundle) and crep["injective"] and crep["continuous"] and crep["open_relative"]):
            sheaf_ok = False
            details.append(name)
        t = gs.as_bundle
        choices = {p: b.stalk_points(t.proj(p)) for p in t.total.points}
        tables = bnd.constrained_continuous_tables(t.total, b.total, choices)
        checked = 0
        for table in itertools.islice(tables, 8):
            h = bnd.BundleMorphism(t, b, fintop.space_map(t.total, b.total, table))
            m = sheafify.couniversal_factorization(h)
            wits = sheafify.factorizations_by_search(h)
            if len(wits) != 1 or wits[0].table != m.table:
                sheaf_ok = False
                details.append(f"{name}:factorization")
            checked += 1
        if checked == 0:
            sheaf_ok = False
            details.append(f"{name}:no-morphisms")
    rep.add("sheafification: etale output, counit properties, unique factorization", sheaf_ok, ",".join(details))

    iso_ok = all(sheafify.counit_is_iso(rb.bundle) for rb in etales.values())
    rep.add("counit at etale fixtures is an isomorphism", iso_ok)

    # base change stability on fixtures
    pb_ok = True
    spec_base = fixtures.et_spec_h_a4().base
    pt = fixtures.space_point()
    base_maps = [
        fintop.identity_map(spec_base),
        fintop.space_map(spec_base, pt, {p: "pt" for p in spec_base.points}),
        fintop.space_map(pt, spec_base, {"pt": "F2"}),
    ]
    for f in base_maps:
        for name, rb in etales.items():
            if rb.base != f.cod:
                continue
            pe = basechange.pullback_etale(f, rb.bundle)
            if not bnd.is_etale(pe.result):
                pb_ok = False
            pulled, fprime = basechange.pullback_rl_etale(f, rb)
            if not bnd.verify_rl_bundle(pulled).ok:
                pb_ok = False
    rep.add("pullbacks of etale fixtures along fixture base maps stay etale and valid", pb_ok)

    return rep


def _subsets(points):
    return [
        frozenset(c)
        for r in range(len(points) + 1)
        for c in itertools.combinations(points, r)
    ]


# ---------------------------------------------------------------------------
# the adjunction suite


def adjunction_suite(seed: int | None = None) -> SuiteReport:
    rep = SuiteReport("adjunction-suite")
    pt = fixtures.space_point()
    d2 = fintop.discrete(["m", "n"])
    d3 = fintop.discrete(["u", "v", "w"])
    sk = fixtures.space_sierpinski()
    t2 = fintop.discrete(["s", "t"])
    chain3 = fintop.space_from_opens(
        ["x", "y", "z"], [[], ["x"], ["x", "y"], ["x", "y", "z"]]
    )
    four = fintop.discrete(["q0", "q1", "q2", "q3"])

    exp_ok = True
    for b, x, t in [
        (pt, four, t2),
        (d2, sk, t2),
        (d2, chain3, t2),
        (d3, d2, t2),
        (d2, four, sk),
    ]:
        r = adjunction.check_exponential_adjunction(b, x, t)
        if not r["bijective"]:
            exp_ok = False
    rep.add("exponential adjunction hom-set bijections and curry/uncurry inverses", exp_ok)

    rb4 = fixtures.et_spec_h_a4()
    sect_ok = True
    for b, x in [
        (rb4.bundle, pt),
        (rb4.bundle, d2),
        (rb4.bundle, sk),
        (fixtures.a2_over_point().bundle, d2),
        (fixtures.et_min_p_a8().bundle, d2),
    ]:
        r = adjunction.check_section_adjunction(b, x)
        if not r["bijective"]:
            sect_ok = False
    rep.add("section-functor adjunction hom-set bijections", sect_ok)

    proj_ok = True
    for xb, y in [
        (rb4.bundle, pt),
        (rb4.bundle, t2),
        (fixtures.identity_bundle(d2), t2),
        (fixtures.indiscrete_a2_over_point().bundle, sk),
    ]:
        r = adjunction.check_projection_adjunction(xb, y)
        if not r["bijective"]:
            proj_ok = False
    rep.add("projection/forgetful adjunction hom-set bijections", proj_ok)

    a2t = adjunction.TopologicalRL(fixtures.rl_a2(), fintop.discrete(fixtures.rl_a2().carrier))
    a3t = adjunction.TopologicalRL(fixtures.rl_a3(), fintop.discrete(fixtures.rl_a3().carrier))
    a3i = adjunction.TopologicalRL(fixtures.rl_a3(), fintop.indiscrete(fixtures.rl_a3().carrier))
    lift_ok = True
    for b, a in [(pt, a2t), (d2, a2t), (d2, a3i), (pt, a3t)]:
        trl, _ = adjunction.lift_compact_open_rl(b, a)
        if not adjunction.verify_topological_rl(trl).ok:
            lift_ok = False
    rep.add("C(B,A) lifts to a topological residuated lattice", lift_ok)

    gamma_ok = True
    for rb in [rb4, fixtures.a2_over_point(), fixtures.et_max_d_a6(), fixtures.indiscrete_a2_over_point()]:
        trl = adjunction.gamma_topological_rl(rb)
        if not adjunction.verify_topological_rl(trl).ok:
            gamma_ok = False
    rep.add("Gamma(B,b) lifts to a topological residuated lattice", gamma_ok)

    pi_ok = True
    for b, a in [(pt, a2t), (d2, a2t), (d2, a3i)]:
        prb = adjunction.product_rl_bundle(b, a)
        if not bnd.verify_rl_bundle(prb).ok:
            pi_ok = False
    rep.add("pi_B lifts: B x A is a valid RL-bundle", pi_ok)

    tri_ok = True
    for b, x in [(pt, four), (d2, sk), (d2, d2), (d3, t2), (d2, fintop.discrete([]))]:
        r = adjunction.check_triangle_identities(b, x)
        if not (r["upper_triangle_iso"] and r["lower_triangle_strict"]):
            tri_ok = False
    rep.add("triangle identities relating C(B,-), Gamma(B,-), pi_B, U_B", tri_ok)

    return rep
