import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import all_partitions, brute_force_filters, residual_by_formula, rl_isomorphic
from rlsheaf import fixtures, rlcore

A4 = fixtures.rl_a4()
A6 = fixtures.rl_a6()
A8 = fixtures.rl_a8()
FIXTURE_LATTICES = {"A2": fixtures.rl_a2(), "A3": fixtures.rl_a3(), "A4": A4, "A6": A6, "A8": A8}


@pytest.mark.parametrize("name", sorted(FIXTURE_LATTICES))
def test_fixture_lattices_verify(name):
    assert rlcore.verify_rl(FIXTURE_LATTICES[name]).ok


def test_broken_mul_reports_witness():
    mul = dict(A4.mul)
    mul[("a", "b")] = "1"
    mul[("b", "a")] = "1"
    broken = rlcore.ResiduatedLattice(
        A4.carrier, A4.leq, dict(A4.join), dict(A4.meet), mul, dict(A4.imp), "0", "1"
    )
    rep = rlcore.verify_rl(broken)
    assert not rep.ok
    assert any(v.rule in ("adjointness-fails", "mul-not-associative", "unit-fails") for v in rep.violations)


@pytest.mark.parametrize("lat", [A4, A6, A8], ids=["A4", "A6", "A8"])
def test_derived_residual_matches_independent_formula(lat):
    derived = rlcore.derive_residual(lat.carrier, lat.leq, lat.mul)
    for x in lat.carrier:
        for y in lat.carrier:
            assert derived[x, y] == residual_by_formula(lat, x, y)


def test_specific_residual_values():
    assert A4.imp["a", "b"] == "b"
    assert A6.imp["c", "a"] == residual_by_formula(A6, "c", "a")
    for lat in FIXTURE_LATTICES.values():
        for x in lat.carrier:
            assert lat.imp[lat.top, x] == x


def test_derive_residual_raises_on_non_residuated_input():
    # meet on the non-distributive M3 is not residuated
    carrier = ("0", "a", "b", "c", "1")
    hasse = [("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")]
    leq = rlcore._leq_from_hasse(carrier, hasse)
    meet = {
        (x, y): rlcore.glb(carrier, leq, [x, y]) for x in carrier for y in carrier
    }
    with pytest.raises(rlcore.NotResiduated):
        rlcore.derive_residual(carrier, leq, meet)


def test_negation_and_power():
    assert A4.power("a", 2) == "a"
    assert A4.negation("a") == "b"
    for lat in FIXTURE_LATTICES.values():
        assert lat.negation(lat.top) == lat.bot
        for a in lat.carrier:
            assert lat.power(a, 0) == lat.top
            assert lat.power(a, 1) == a
    with pytest.raises(ValueError):
        A4.power("a", -1)


def test_is_filter_examples():
    assert rlcore.is_filter(A4, {"b", "1"})
    for lat in FIXTURE_LATTICES.values():
        assert rlcore.is_filter(lat, {lat.top})
    assert not rlcore.is_filter(A4, {"a", "b", "1"})
    assert not rlcore.is_filter(A4, set())


TABLE4 = {
    "A4": [{"1"}, {"a", "1"}, {"b", "1"}, {"0", "a", "b", "1"}],
    "A6": [{"1"}, {"a", "b", "d", "1"}, {"c", "d", "1"}, {"d", "1"}, {"0", "a", "b", "c", "d", "1"}],
    "A8": [{"1"}, {"a", "c", "d", "e", "f", "1"}, {"c", "e", "1"}, {"f", "1"}, set("0abcdef1")],
}


@pytest.mark.parametrize("name", ["A4", "A6", "A8"])
def test_all_filters_match_table_and_brute_force(name):
    lat = FIXTURE_LATTICES[name]
    fl = rlcore.all_filters(lat)
    assert set(fl.filters) == {frozenset(f) for f in TABLE4[name]}
    assert set(fl.filters) == brute_force_filters(lat)


def test_two_element_lattice_has_two_filters():
    fl = rlcore.all_filters(fixtures.rl_a2())
    assert set(fl.filters) == {frozenset({"1"}), frozenset({"0", "1"})}


def test_generated_filter_examples():
    assert rlcore.generated_filter(A4, {"a"}) == frozenset({"a", "1"})
    assert rlcore.generated_filter(A4, set()) == frozenset({"1"})
    # oracle: least brute-force filter containing d
    candidates = [f for f in brute_force_filters(A8) if "d" in f]
    least = min(candidates, key=len)
    assert all(least <= f for f in candidates)
    assert rlcore.generated_filter(A8, {"d"}) == least


@given(st.sets(st.sampled_from(sorted(A6.carrier)), max_size=6))
@settings(max_examples=60, deadline=None)
def test_generated_filter_is_least_filter_containing_seed(xs):
    gen = rlcore.generated_filter(A6, xs)
    assert rlcore.is_filter(A6, gen) and set(xs) <= gen
    for f in brute_force_filters(A6):
        if set(xs) <= f:
            assert gen <= f


def test_filter_join_examples():
    assert rlcore.filter_join(A4, [{"a", "1"}, {"b", "1"}]) == frozenset(A4.carrier)
    f3 = frozenset({"c", "d", "1"})
    assert rlcore.filter_join(A6, [f3, frozenset({"d", "1"})]) == f3
    for f in brute_force_filters(A6):
        assert rlcore.filter_join(A6, [f, {"1"}]) == f


TABLE5 = {
    "A4": ({"a1": {"a", "1"}},),
}


def _named(lat_name):
    return {n: frozenset(e) for n, e in fixtures.FILTER_NAMES[lat_name]}


@pytest.mark.parametrize(
    "name,max_names,min_names",
    [("A4", {"F2", "F3"}, {"F2", "F3"}), ("A6", {"F2", "F3"}, {"F1"}), ("A8", {"F2"}, {"F3", "F4"})],
)
def test_classification_matches_table5(name, max_names, min_names):
    lat = FIXTURE_LATTICES[name]
    names = _named(name)
    fl = rlcore.all_filters(lat)
    assert {f for f in fl.filters if fl.classification[f].maximal} == {names[n] for n in max_names}
    assert {f for f in fl.filters if fl.classification[f].minimal_prime} == {names[n] for n in min_names}


@pytest.mark.parametrize("name", ["A4", "A6", "A8"])
def test_maximal_filters_are_prime(name):
    fl = rlcore.all_filters(FIXTURE_LATTICES[name])
    for f in fl.filters:
        flags = fl.classification[f]
        if flags.maximal:
            assert flags.prime
        if flags.minimal_prime:
            assert flags.prime


def test_congruence_of_trivial_filters():
    cong = rlcore.congruence_of_filter(A4, {"1"})
    assert all(len(b) == 1 for b in cong.blocks)
    cong = rlcore.congruence_of_filter(A4, frozenset(A4.carrier))
    assert len(cong.blocks) == 1


def test_congruence_of_principal_filter_matches_relation_oracle():
    f = frozenset({"a", "1"})
    cong = rlcore.congruence_of_filter(A4, f)
    related = lambda x, y: A4.imp[x, y] in f and A4.imp[y, x] in f
    for x in A4.carrier:
        for y in A4.carrier:
            assert cong.related(x, y) == related(x, y)
    assert set(cong.blocks) == {frozenset({"0", "b"}), frozenset({"a", "1"})}


def test_quotient_by_trivial_filter_is_isomorphic():
    q, proj = rlcore.quotient(A4, {"1"})
    assert rl_isomorphic(A4, q)
    assert rlcore.coker(proj.table, q.top) == frozenset({"1"})


def test_quotient_by_whole_is_degenerate():
    q, proj = rlcore.quotient(A4, frozenset(A4.carrier))
    assert len(q.carrier) == 1
    assert q.bot == q.top


def test_quotient_a6_by_f4():
    q, proj = rlcore.quotient(A6, {"d", "1"})
    assert rlcore.verify_rl(q).ok
    assert 2 <= len(q.carrier) < len(A6.carrier)
    assert rlcore.coker(proj.table, q.top) == frozenset({"d", "1"})


@pytest.mark.parametrize("name", ["A4", "A6", "A8"])
def test_quotient_projection_coker_equals_filter(name):
    lat = FIXTURE_LATTICES[name]
    for f in rlcore.all_filters(lat).filters:
        q, proj = rlcore.quotient(lat, f)
        assert rlcore.coker(proj.table, q.top) == f
        cong = rlcore.congruence_of_filter(lat, f)
        assert rlcore.filter_of_congruence(lat, cong) == f


def test_example_morphism_a6_to_a4():
    m = fixtures.morphism_a6_to_a4()
    assert rlcore.is_rl_morphism(m.table, A6, A4)
    assert rlcore.coker(m.table, A4.top) == frozenset({"d", "1"})


def test_identity_morphism_and_injectivity_law():
    ident = {x: x for x in A4.carrier}
    assert rlcore.is_rl_morphism(ident, A4, A4)
    assert rlcore.coker(ident, A4.top) == frozenset({"1"})
    # injectivity iff coker == {1}, across the fixture morphisms
    morphisms = [
        (fixtures.morphism_a6_to_a4().table, A6, A4),
        (ident, A4, A4),
    ]
    for name, lat in FIXTURE_LATTICES.items():
        for f in rlcore.all_filters(lat).filters:
            q, proj = rlcore.quotient(lat, f)
            morphisms.append((proj.table, lat, q))
    for table, dom, cod in morphisms:
        injective = len(set(table.values())) == len(table)
        assert injective == (rlcore.coker(table, cod.top) == frozenset({dom.top}))


def test_rl_morphism_constructor_rejects_bad_maps():
    with pytest.raises(ValueError):
        rlcore.RLMorphism(A4, A4, {x: "1" if x != "0" else "0" for x in A4.carrier})


@pytest.mark.parametrize("name", ["A4", "A6", "A8"])
def test_filter_lattice_satisfies_jid(name):
    lat = FIXTURE_LATTICES[name]
    fam = list(rlcore.all_filters(lat).filters)
    for a in fam:
        for r in range(len(fam) + 1):
            for combo in itertools.combinations(fam, r):
                big_join = rlcore.filter_join(lat, combo) if combo else frozenset({lat.top})
                lhs = a & big_join
                rhs = rlcore.filter_join(lat, [a & s for s in combo]) if combo else frozenset({lat.top})
                assert lhs == rhs


@pytest.mark.parametrize("name,lat", [("A4", A4), ("A6", A6), ("A8", A8)])
def test_filter_congruence_order_isomorphism(name, lat):
    filters = sorted(brute_force_filters(lat), key=sorted)
    congruences = {
        frozenset(frozenset(b) for b in part)
        for part in all_partitions(list(lat.carrier))
        if rlcore.is_congruence(lat, part)
    }
    image = {}
    for f in filters:
        cong = rlcore.congruence_of_filter(lat, f)
        image[f] = frozenset(cong.blocks)
        assert image[f] in congruences
    assert len(set(image.values())) == len(filters) == len(congruences)
    refines = lambda c1, c2: all(any(b1 <= b2 for b2 in c2) for b1 in c1)
    for f1 in filters:
        for f2 in filters:
            assert (f1 <= f2) == refines(image[f1], image[f2])
