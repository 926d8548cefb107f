import itertools
import json
import math
import random

import pytest

from conftest import random_reduced
from nilclose import automata
from nilclose.errors import AlphabetMismatch, ResourceCapError, caps
from nilclose.freegroup import Alphabet, reduce_codes, reduced_words
from nilclose.stallings import (StallingsGraph, conjugate, contains, fold, intersect, join,
                                member, overgroups, subgroup, subgroup_report, trivial, whole)


def exponent_sums(codes):
    sums = [0, 0]
    for c in codes:
        sums[c >> 1] += -1 if c & 1 else 1
    return sums


def test_fold_examples(ab, H):
    assert trivial(ab).graph.vertices == 1 and not trivial(ab).graph.positive_edges()
    assert fold([], ab) == trivial(ab)
    assert H.graph.vertices == 2
    assert sorted(H.graph.positive_edges()) == [(0, 0, 1), (0, 2, 0), (1, 0, 0)]
    aa = subgroup(ab, "a,a")
    assert aa.graph.vertices == 1 and aa.graph.positive_edges() == [(0, 0, 0)]


def test_h_membership_matches_exponent_sum_oracle(ab, H):
    # H = <a^2, b> is the set of words whose path stays in the 2-cycle; an
    # element lies in H iff it is a product of a^±2 and b^±1 blocks
    for w in reduced_words(ab, 6):
        oracle = True
        run = 0
        for c in w:
            if c >> 1 == 0:
                run += 1
            else:
                if run % 2:
                    oracle = False
                run = 0
        oracle = oracle and run % 2 == 0
        assert member(H, w) == oracle


def test_member_examples(ab, H, K):
    assert member(H, ab.reduced("aa"))
    assert not member(H, ab.reduced("a"))
    assert member(K, ab.reduced(""))
    with pytest.raises(AlphabetMismatch):
        member(H, Alphabet.of("abc").reduced("a"))


def test_subgroup_report(ab, H):
    r = subgroup_report(trivial(ab))
    assert r["basis"] == [] and r["rank"] == 0 and r["index"] == math.inf
    r = subgroup_report(H)
    assert r["rank"] == 2 and r["index"] == math.inf
    assert subgroup(ab, "aa,b,abA").index == 2
    assert subgroup(ab, "a").rank == 1 and subgroup(ab, "a").index == math.inf
    assert whole(ab).index == 1


def test_language_matches_membership(ab, H, K):
    for h in (H, K, subgroup(ab, "abA,bb")):
        lang = subgroup_report(h)["language"]
        assert lang.reduced and lang.check_reduced()
        for w in reduced_words(ab, 8):
            assert automata.accepts(lang, w) == member(h, w)


def test_intersect(ab, H, K):
    assert intersect(H, H) == H
    assert intersect(subgroup(ab, "a"), subgroup(ab, "b")) == trivial(ab)
    m = intersect(H, K)
    assert member(m, ab.reduced("aa")) and not member(m, ab.reduced("b"))
    for w in reduced_words(ab, 6):
        assert member(m, w) == (member(H, w) and member(K, w))


def test_conjugate(ab, H):
    assert conjugate(H, ab.reduced("")) == H
    c = conjugate(subgroup(ab, "a"), ab.reduced("b"))
    assert member(c, ab.reduced("Bab"))
    g = ab.reduced("abA")
    assert conjugate(conjugate(H, g), g.inverse()) == H


def test_join(ab, H):
    assert join([subgroup(ab, "a"), ab.reduced("b")]) == whole(ab)
    assert join([H]) == H
    assert join([subgroup(ab, "aa"), subgroup(ab, "aaa")]) == subgroup(ab, "a")
    with pytest.raises(ValueError):
        join([])


def test_contains(ab, H):
    assert contains(whole(ab), H)
    assert contains(H, subgroup(ab, "aaaa"))
    assert not contains(H, subgroup(ab, "a"))


def test_overgroups_examples(ab, H):
    assert overgroups(H) == [H, whole(ab)]
    assert overgroups(subgroup(ab, "a")) == [subgroup(ab, "a")]
    assert overgroups(trivial(ab)) == [trivial(ab)]
    six = overgroups(subgroup(ab, "aaaaaa"))
    assert {repr(s) for s in six} == {"<aaaaaa>", "<aaa>", "<aa>", "<a>"}


def test_overgroups_properties(ab):
    h = subgroup(ab, "aab,bA")
    og = overgroups(h)
    assert og[0] == h
    assert all(contains(s, h) for s in og)
    assert all(s.graph.vertices <= h.graph.vertices for s in og)
    members = set(og)
    for s, t in itertools.combinations(og, 2):
        assert join([s, t]) in members


def test_overgroup_cap(ab):
    with caps(max_overgroups=2):
        with pytest.raises(ResourceCapError):
            overgroups(subgroup(ab, "aaaaaa"))


def random_generators(rng, alphabet, count, max_len):
    return [random_reduced(rng, alphabet, max_len, 1) for _ in range(count)]


def test_folding_confluence(ab, rng):
    for _ in range(50):
        gens = random_generators(rng, ab, rng.randint(1, 3), 6)
        ref = fold(gens, ab)
        for seed in range(5):
            assert fold(gens, ab, rng=random.Random(seed)) == ref


def test_membership_of_generated_products(ab, rng):
    for _ in range(10):
        gens = random_generators(rng, ab, 2, 3)
        h = fold(gens, ab)
        letters = [g for g in gens] + [tuple(c ^ 1 for c in reversed(g)) for g in gens]
        products = {()}
        for _ in range(3):
            products |= {reduce_codes(p + g) for p in products for g in letters}
        for w in products:
            if len(w) <= 6:
                assert member(h, w)


def test_graph_invariants(ab, rng):
    for _ in range(30):
        h = fold(random_generators(rng, ab, rng.randint(1, 3), 6), ab)
        g = h.graph
        for v, row in enumerate(g.rows):
            for x, w in enumerate(row):
                if w >= 0:
                    assert g.rows[w][x ^ 1] == v
            if v:
                assert g.degree(v) >= 2
        assert h.rank == len(g.positive_edges()) - g.vertices + 1
        for b in h.basis:
            assert member(h, b)


def test_json_round_trip(ab, H):
    data = json.loads(json.dumps(H.graph.to_json()))
    assert data["base"] == 0
    assert StallingsGraph.from_json(data) == H.graph
    assert "digraph" in H.graph.to_dot()
