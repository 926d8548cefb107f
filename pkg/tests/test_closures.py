import pytest

from nilclose import automata
from nilclose.automata import Lit, accepts, compare, concat, parse_expression, star, union
from nilclose.closures import (ALL_PRIMES, NO_PRIMES, ClosureNormalForm, PrimeSet, Term,
                               dense_primes, nf_to_automaton, nil_closure_product,
                               nil_closure_rational, nil_closure_subgroup, p_closure,
                               p_closure_product, primes_closed, pro_g_closure, product_automaton,
                               simplify_product, union_p_dense)
from nilclose.errors import PreconditionError
from nilclose.freegroup import Alphabet, reduced_words
from nilclose.stallings import member, subgroup, trivial, whole

A1 = Alphabet.of("a")


def subgroup_union_expression(*hs):
    """Rational expression (b₁|B₁|b₂|B₂|…)* for each subgroup, joined by union."""
    parts = []
    for h in hs:
        gens = [Lit(b) for b in h.basis] + [Lit(b.inverse()) for b in h.basis]
        parts.append(star(union(*gens)) if gens else Lit(h.alphabet.identity()))
    return union(*parts)


def test_primes_closed_examples(ab, H, K):
    assert primes_closed(H) == PrimeSet.finite([2])
    assert primes_closed(K) == PrimeSet.finite([3])
    assert primes_closed(subgroup(ab, "a")) == ALL_PRIMES
    assert primes_closed(subgroup(A1, "aaaaaa")) == NO_PRIMES


def test_p_closure_examples(ab, H, F):
    assert p_closure(H, 2) == H
    assert p_closure(H, 3) == F
    for p in (2, 3, 5):
        assert p_closure(trivial(ab), p) == trivial(ab)
    assert p_closure(subgroup(A1, "aaaaaa"), 2) == subgroup(A1, "aa")
    assert p_closure(subgroup(A1, "aaaaaa"), 3) == subgroup(A1, "aaa")
    assert p_closure(subgroup(A1, "aaaaaa"), 5) == whole(A1)
    with pytest.raises(PreconditionError):
        p_closure(H, 4)


def test_p_closure_is_maximal_dense_overgroup(ab):
    k = subgroup(ab, "aab,bA,bbb")
    for p in (2, 3, 5):
        c = p_closure(k, p)
        assert p in dense_primes(k, c)
        assert p in primes_closed(c)


def test_p_closure_product_examples(ab, H, K):
    assert compare(p_closure_product([H], 3), p_closure(H, 3).language) == "equal"
    assert automata.is_universal(p_closure_product([H, K], 5))
    a, b = subgroup(ab, "a"), subgroup(ab, "b")
    ab_words = product_automaton([a, b])
    for p in (2, 3, 5):
        assert compare(p_closure_product([a, b], p), ab_words) == "equal"


def test_nil_closure_subgroup_examples(ab, H, K, F):
    assert nil_closure_subgroup(H) == H
    assert nil_closure_subgroup(K) == K
    assert nil_closure_subgroup(F) == F
    assert nil_closure_subgroup(subgroup(A1, "aa")) == subgroup(A1, "aa")
    assert nil_closure_subgroup(subgroup(A1, "aaaaaa")) == subgroup(A1, "aaaaaa")


def test_nil_closure_product_examples(ab, H, K):
    assert automata.is_universal(nil_closure_product([H, K]))
    assert compare(nil_closure_product([H]), nil_closure_subgroup(H).language) == "equal"
    a, b = subgroup(ab, "a"), subgroup(ab, "b")
    assert compare(nil_closure_product([a, b]), product_automaton([a, b])) == "equal"
    with pytest.raises(PreconditionError):
        nil_closure_product([])


def test_simplify_product(ab, H, F):
    a, aa = subgroup(ab, "a"), subgroup(ab, "aa")
    assert simplify_product([trivial(ab), H, trivial(ab)]) == (H,)
    assert simplify_product([aa, a, aa]) == (a,)
    assert simplify_product([H, F]) is None
    assert simplify_product([]) == ()


def test_pro_g_closure_examples(ab):
    e = star(Lit(ab.reduced("ab")))
    nf = pro_g_closure(e)
    assert nf.terms == (Term(ab.identity(), (subgroup(ab, "ab"),)),)
    s = nf.terms[0].factors[0]
    assert member(s, ab.reduced("")) and member(s, ab.reduced("ab")) and member(s, ab.reduced("BA"))
    assert pro_g_closure(Lit(ab.reduced("a"))).terms == (Term(ab.reduced("a")),)
    nf = pro_g_closure(union(star(Lit(ab.reduced("a"))), Lit(ab.reduced("b"))))
    assert set(nf.terms) == {Term(ab.identity(), (subgroup(ab, "a"),)), Term(ab.reduced("b"))}


def test_pro_g_closure_concat_conjugates(ab):
    # a* b  has closure <a> b = b <BAb>
    nf = pro_g_closure(concat(star(Lit(ab.reduced("a"))), Lit(ab.reduced("b"))))
    (t,) = nf.terms
    assert t.g == ab.reduced("b") and t.factors == (subgroup(ab, "Bab"),)


def test_nf_json_round_trip(ab):
    nf = pro_g_closure(parse_expression("b(a|bAB)*b*|a", ab))
    assert ClosureNormalForm.from_json(nf.to_json()) == nf


def test_nf_to_automaton_examples(ab):
    assert automata.is_empty(nf_to_automaton(ClosureNormalForm(ab)))
    a = subgroup(ab, "a")
    lang = nf_to_automaton(ClosureNormalForm(ab, (Term(ab.identity(), (a,)),)))
    assert compare(lang, a.language) == "equal"
    shifted = nf_to_automaton(ClosureNormalForm(ab, (Term(ab.reduced("b"), (a,)),)))
    for w in reduced_words(ab, 5):
        expected = len(w) >= 1 and w[0] == 2 and all(c >> 1 == 0 for c in w[1:])
        assert accepts(shifted, w) == expected


def test_nil_closure_rational_examples(ab, H, K):
    c = nil_closure_rational(subgroup_union_expression(H, K), ab)
    union_lang = automata.minimal(automata.union_automata([H.language, K.language], ab))
    assert compare(c, union_lang) == "equal"
    assert not accepts(c, ab.parse("ab"))
    pos = concat(Lit(A1.reduced("a")), star(Lit(A1.reduced("a"))))
    c = nil_closure_rational(pos)
    assert automata.is_universal(c) and accepts(c, ())
    assert automata.is_empty(nil_closure_rational(automata.EMPTY, ab))


def test_nil_closure_rational_accepts_automaton(ab, H):
    c = nil_closure_rational(H.language)
    assert compare(c, H.language) == "equal"


def test_union_p_dense_examples(ab, H, K, F):
    for p in (2, 3, 5, 7):
        assert union_p_dense([H, K], p)
    assert not union_p_dense([H], 2)
    assert union_p_dense([F], 3)


def test_finite_set_closure_is_itself(ab):
    e = union(Lit(ab.reduced("ab")), Lit(ab.reduced("Ba")))
    c = nil_closure_rational(e)
    assert {w for w in reduced_words(ab, 4) if accepts(c, w)} == {(0, 2), (3, 0)}


def test_closure_of_a_star_b_star_is_product(ab):
    c = nil_closure_rational(parse_expression("a*b*", ab))
    assert compare(c, product_automaton([subgroup(ab, "a"), subgroup(ab, "b")])) == "equal"
