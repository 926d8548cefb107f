import json

import pytest

from conftest import random_reduced
from nilclose import automata
from nilclose.automata import (EMPTY, Lit, Saturation, accepts, benois_reduce, combine, compare,
                               compile_expression, concat, extract_expression, is_empty,
                               is_universal, language_words, parse_expression, star, union,
                               universal_automaton)
from nilclose.errors import ReducedFlagError, ResourceCapError, caps
from nilclose.freegroup import Alphabet, reduce_codes, reduced_words
from nilclose.stallings import intersect


def compiled(text, alphabet):
    return compile_expression(parse_expression(text, alphabet), alphabet)


def reduced_lang(text, alphabet):
    return benois_reduce(compiled(text, alphabet))


def words(alphabet, *texts):
    return {tuple(alphabet.tokens(t)) for t in texts}


def test_compile_literal(ab):
    a = compiled("a", ab)
    assert a.states == 2
    assert language_words(a, 3) == words(ab, "a")


def test_compile_star_of_word(ab):
    a = compile_expression(star(Lit(ab.reduced("ab"))), ab)
    assert language_words(a, 4) == words(ab, "", "ab", "abab")


def test_compile_union_of_empty_and_epsilon(ab):
    e = union(EMPTY, Lit(ab.identity()))
    assert language_words(compile_expression(e, ab), 3) == {()}


def test_benois_examples(ab):
    assert language_words(reduced_lang("aA", ab), 4) == {()}
    assert language_words(reduced_lang("abB|a", ab), 4) == words(ab, "a")


def test_benois_matches_subgroup_language(ab, H):
    a = reduced_lang("(aa|AA|b|B)*", ab)
    assert a.reduced and a.check_reduced()
    for w in reduced_words(ab, 8):
        assert accepts(a, w) == (H.graph.read(w) == 0)
    assert compare(a, H.language) == "equal"


def test_submonoid_star_is_not_the_subgroup(ab, H):
    # (aa|b)* reaches only positive words, so it sits strictly inside H
    assert compare(reduced_lang("(aa|b)*", ab), H.language) == "strict_subset"


def test_accepts_is_literal(ab):
    a = compiled("a", ab)
    assert accepts(a, ab.parse("a"))
    assert not accepts(a, ab.parse("aAa"))
    assert accepts(reduced_lang("aA", ab), ab.parse(""))


def test_compare_examples(ab, H):
    x = reduced_lang("ab*", ab)
    u = universal_automaton(ab)
    assert compare(x, x) == "equal"
    assert compare(automata.empty_automaton(ab), u) == "strict_subset"
    assert compare(u, H.language) == "strict_superset"
    assert compare(H.language, u) == "strict_subset"
    assert compare(reduced_lang("a", ab), reduced_lang("b", ab)) == "incomparable"


def test_compare_needs_reduced_flag(ab):
    with pytest.raises(ReducedFlagError):
        compare(compiled("a", ab), universal_automaton(ab))


def test_combine_reduced_modes(ab, H, K):
    x = reduced_lang("a*B|ba", ab)
    u = universal_automaton(ab)
    assert compare(combine("intersect_reduced", u, x), x) == "equal"
    twice = combine("complement_reduced", combine("complement_reduced", x))
    assert compare(twice, x) == "equal"
    meet = combine("intersect_reduced", H.language, K.language)
    assert compare(meet, intersect(H, K).language) == "equal"
    assert accepts(meet, ab.parse("aa")) and not accepts(meet, ab.parse("b"))
    assert is_empty(combine("difference_reduced", x, x))
    with pytest.raises(ReducedFlagError):
        combine("intersect_reduced", compiled("a", ab), u)


def test_combine_rational_modes(ab):
    a, b = compiled("a", ab), compiled("B", ab)
    assert language_words(combine("union", a, b), 2) == words(ab, "a", "B")
    assert language_words(combine("concat", a, b), 2) == words(ab, "aB")
    assert language_words(combine("star", a), 2) == words(ab, "", "a", "aa")
    with pytest.raises(ValueError):
        combine("union", a)


def test_universal_and_empty(ab):
    assert is_universal(reduced_lang("(a|A|b|B)*", ab))
    assert not is_universal(reduced_lang("(a|b|B)*", ab))
    assert is_empty(reduced_lang("0", ab))
    assert is_empty(automata.empty_automaton(ab))


def test_extract_expression_examples(ab):
    assert extract_expression(automata.epsilon_automaton(ab)) == Lit(ab.identity())
    a_star = compiled("a*", ab)
    back = benois_reduce(compile_expression(extract_expression(a_star), ab))
    assert compare(back, benois_reduce(a_star)) == "equal"


def test_extract_expression_round_trip_on_cayley_automaton():
    from nilclose.monoids import builtin_monoids, cayley_language

    u1 = builtin_monoids()["U1"]
    a = cayley_language(u1, 1)
    e = extract_expression(a)
    back = benois_reduce(compile_expression(e, u1.alphabet))
    assert compare(back, benois_reduce(compiled("aa*", u1.alphabet))) == "equal"


def test_json_round_trip(ab):
    a = reduced_lang("(ab|B)*a", ab)
    again = automata.WordAutomaton.from_json(json.dumps(a.to_json()))
    assert again.reduced and compare(again, a) == "equal"
    assert "digraph" in a.to_dot()


def test_resource_cap(ab):
    with caps(max_states=2):
        with pytest.raises(ResourceCapError):
            benois_reduce(compiled("(ab|ba|aB)*", ab))


def test_parse_errors(ab):
    for bad in ("(a", "a|*", "a)", "a$"):
        with pytest.raises(ValueError):
            parse_expression(bad, ab)


def test_concat_merges_literals(ab):
    e = concat(Lit(ab.reduced("ab")), Lit(ab.reduced("Ba")))
    assert e == Lit(ab.reduced("aa"))
    assert concat(Lit(ab.reduced("a")), Lit(ab.reduced("A"))) == Lit(ab.identity())


def random_expression(rng, alphabet, depth):
    if depth == 0 or rng.random() < 0.25:
        return Lit(alphabet.identity().__class__(alphabet, random_reduced(rng, alphabet, 3)))
    kind = rng.choice(["union", "concat", "star"])
    if kind == "star":
        return star(random_expression(rng, alphabet, depth - 1))
    parts = [random_expression(rng, alphabet, depth - 1) for _ in range(2)]
    return union(*parts) if kind == "union" else concat(*parts)


def test_benois_bounded_soundness_and_completeness(ab, rng):
    for _ in range(100):
        e = random_expression(rng, ab, 4)
        a = automata.trim(compile_expression(e, ab))
        r = benois_reduce(a)
        assert r.check_reduced()
        for w in language_words(a, 8):
            assert accepts(r, reduce_codes(w))
        sat = Saturation(a, witnesses=True)
        accepted = sorted(language_words(r, 8))
        for u in accepted[:50] + rng.sample(accepted, min(100, len(accepted))):
            v = sat.preimage(u)
            assert v is not None and accepts(a, v) and reduce_codes(v) == u
            assert len(v) <= len(u) + (len(u) + 1) * sat.cancel_bound


def test_extract_round_trip_random(ab, rng):
    for _ in range(30):
        e = random_expression(rng, ab, 3)
        r = benois_reduce(compile_expression(e, ab))
        back = benois_reduce(compile_expression(extract_expression(r), ab))
        assert compare(back, r) == "equal"


def test_translate(ab, H):
    t = automata.translate(ab.reduced("a"), H.language)
    assert accepts(t, ab.parse("a")) and accepts(t, ab.parse("ab"))
    assert not accepts(t, ab.parse("aa"))


def test_multi_letter_alphabet_expressions():
    x = Alphabet.of(["x1", "x2"])
    a = benois_reduce(compile_expression(parse_expression("(x1 X2)* x2", x), x))
    assert accepts(a, x.parse("x2")) and accepts(a, x.parse("x1"))
