from fractions import Fraction

import pytest

from nilclose import automata
from nilclose.automata import parse_expression
from nilclose.closures import DyadicNorm, distance, pseudonorm
from nilclose.errors import PreconditionError, ResourceCapError, caps
from nilclose.freegroup import Alphabet
from nilclose.monoids import builtin_monoids, nilpotency_class
from nilclose.oracle import (ClosureOracle, FiniteGroupTable, approx_closure_check, cyclic,
                             dihedral, enum_homs, group_product, image_of_language, load_catalog,
                             nilpotent_catalog, nilpotent_residual, normal_subgroups, quaternion)

A1 = Alphabet.of("a")


def names(catalog):
    return [g.name for g in catalog]


def test_catalog_examples():
    assert names(nilpotent_catalog(1)) == ["Z/1"]
    assert "Z/6" in names(nilpotent_catalog(6))
    eight = {g.name: g for g in nilpotent_catalog(8)}
    assert eight["Q8"].nilpotency_class == 2 and eight["D4"].nilpotency_class == 2
    with pytest.raises(PreconditionError):
        nilpotent_catalog(0)


def test_catalog_members_are_nilpotent():
    for g in nilpotent_catalog(16):
        assert g.order <= 16
        assert g.check_nilpotent()
        assert nilpotency_class(g.monoid) == g.nilpotency_class


def test_shipped_catalog_matches_generator():
    shipped = load_catalog()
    fresh = nilpotent_catalog(16)
    assert names(shipped) == names(fresh)
    assert all(a.monoid.table == b.monoid.table for a, b in zip(shipped, fresh))


def test_non_abelian_members():
    q8, d4 = quaternion(), dihedral(4)
    for g in (q8, d4):
        t = g.monoid.table
        assert any(t[x][y] != t[y][x] for x in range(8) for y in range(8))
    assert nilpotency_class(dihedral(3).monoid) is None


def test_group_table_rejects_non_groups():
    with pytest.raises(PreconditionError):
        FiniteGroupTable(builtin_monoids()["U1"])


def test_enum_homs_counts(ab):
    assert len(enum_homs(ab, cyclic(2))) == 4
    assert len(enum_homs(A1, cyclic(1))) == 1
    assert len(enum_homs(ab, group_product(cyclic(6), cyclic(6)))) == 36 ** 2
    with caps(max_homs=10):
        with pytest.raises(ResourceCapError):
            enum_homs(ab, cyclic(6))


def test_image_of_language_examples(ab, H):
    z2 = cyclic(2)
    phi = next(h for h in enum_homs(ab, z2) if h.assignment == (1, 0))
    assert image_of_language(H.language, phi) == {0}
    assert image_of_language(automata.empty_automaton(ab), phi) == frozenset()
    assert image_of_language(automata.universal_automaton(ab), phi) == {0, 1}


def test_image_respects_union_and_concat(ab, rng):
    x = automata.benois_reduce(automata.compile_expression(parse_expression("ab*A", ab), ab))
    y = automata.benois_reduce(automata.compile_expression(parse_expression("(bb|a)*B", ab), ab))
    u = automata.combine("union", x, y)
    c = automata.combine("concat", x, y)
    for g in (cyclic(3), dihedral(4), quaternion()):
        t = g.monoid.table
        for phi in enum_homs(ab, g):
            ix, iy = image_of_language(x, phi), image_of_language(y, phi)
            assert image_of_language(u, phi) == ix | iy
            assert image_of_language(c, phi) == {t[p][q] for p in ix for q in iy}


def test_approx_closure_check_examples(ab, H, K):
    union_lang = automata.union_automata([H.language, K.language], ab)
    catalog = load_catalog() + [group_product(cyclic(6), cyclic(6))]
    assert not approx_closure_check(union_lang, ab.reduced("ab"), catalog)
    assert approx_closure_check(union_lang, ab.reduced("aa"), catalog)
    pos = automata.benois_reduce(automata.compile_expression(parse_expression("aa*", A1), A1))
    assert approx_closure_check(pos, A1.reduced(""), nilpotent_catalog(8))


def test_oracle_counterexample_names_a_map(ab, H, K):
    union_lang = automata.union_automata([H.language, K.language], ab)
    o = ClosureOracle(union_lang, [group_product(cyclic(6), cyclic(6))])
    phi = o.counterexample(ab.parse("ab").letters)
    assert phi is not None and phi.describe()["group"] == "Z/6xZ/6"


def test_pseudonorm_examples(ab):
    catalog = [cyclic(1), cyclic(2)]
    assert pseudonorm(ab.identity(), catalog).norm == DyadicNorm(None)
    assert pseudonorm(ab.identity(), catalog).witness is None
    r = pseudonorm(ab.reduced("a"), catalog)
    assert r.norm.value == Fraction(1, 4) and r.witness.target.name == "Z/2"
    abelian = [g for g in nilpotent_catalog(16) if g.nilpotency_class <= 1]
    assert pseudonorm(ab.reduced("abAB"), abelian).norm.value == 0
    r = pseudonorm(ab.reduced("abAB"), nilpotent_catalog(16))
    assert r.norm.r == 8
    with pytest.raises(PreconditionError):
        pseudonorm(ab.reduced("a"), [])


def test_distance_is_norm_of_quotient(ab):
    catalog = nilpotent_catalog(8)
    assert distance(ab.reduced("ab"), ab.reduced("ab"), catalog).norm.value == 0
    assert distance(ab.reduced("aab"), ab.reduced("b"), catalog).norm == \
        pseudonorm(ab.reduced("aa"), catalog).norm


def test_pseudonorm_is_ultrametric(ab):
    catalog = nilpotent_catalog(8)
    words = ["a", "b", "aa", "ab", "abAB", "aaa", "bab"]
    for u in words:
        for v in words:
            g, h = ab.reduced(u), ab.reduced(v)
            nuv = pseudonorm(g * h, catalog).norm.value
            assert nuv <= max(pseudonorm(g, catalog).norm.value, pseudonorm(h, catalog).norm.value)


def test_nilpotent_residual_of_s3():
    s3 = builtin_monoids()["S3"]
    assert {s3.name(x) for x in nilpotent_residual(s3)} == {"e", "(123)", "(132)"}
    assert len(normal_subgroups(s3)) == 3
    assert nilpotent_residual(builtin_monoids()["Z6"]) == {0}


def test_refuted_agrees_with_single_checks(ab, H, K):
    union_lang = automata.union_automata([H.language, K.language], ab)
    o = ClosureOracle(union_lang, nilpotent_catalog(6))
    from nilclose.freegroup import reduced_words
    words = list(reduced_words(ab, 3))
    bad = o.refuted(words)
    for w in words:
        assert (w in bad) == (not o.check(w))
