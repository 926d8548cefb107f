import pytest

from nilclose.errors import AlphabetMismatch
from nilclose.freegroup import (Alphabet, ReducedWord, all_words, group_op, invert, multiply,
                                reduce, reduced_words)


def test_reduce_examples(ab):
    assert str(reduce(ab.parse("aAb"))) == "b"
    assert str(reduce(ab.parse(""))) == ""
    assert str(reduce(ab.parse("abBa"))) == "aa"


def test_reduce_unknown_letter(ab):
    with pytest.raises(AlphabetMismatch):
        ab.parse("ac")


def test_group_op_examples(ab):
    assert str(group_op("multiply", ab.reduced("a"), ab.reduced("A"))) == ""
    assert str(group_op("invert", ab.reduced("aB"))) == "bA"
    assert str(group_op("multiply", ab.reduced("ab"), ab.reduced("Ba"))) == "aa"


def test_group_op_argument_checks(ab):
    with pytest.raises(ValueError):
        group_op("multiply", ab.reduced("a"))
    with pytest.raises(ValueError):
        group_op("invert", ab.reduced("a"), ab.reduced("b"))


def test_alphabet_mismatch_on_multiply(ab):
    other = Alphabet.of("abc")
    with pytest.raises(AlphabetMismatch):
        multiply(ab.reduced("a"), other.reduced("a"))


def test_reduced_word_rejects_cancelling_pair(ab):
    with pytest.raises(ValueError):
        ReducedWord(ab, (0, 1))


def test_multi_character_tokens():
    x = Alphabet.of(["x1", "x2", "y"])
    w = x.parse("x1 X2 x2 y")
    assert str(reduce(w)) == "x1y"
    assert x.format(x.tokens("X1y")) == "X1y"


def test_invalid_alphabets():
    with pytest.raises(ValueError):
        Alphabet.of("")
    with pytest.raises(ValueError):
        Alphabet.of("aa")


def test_reduce_properties(ab):
    for codes in all_words(ab, 5):
        w = ab.parse(ab.format(codes))
        r = reduce(w)
        assert reduce(r) == r
        assert len(r) <= len(w)
        assert (len(w) - len(r)) % 2 == 0


def test_reduce_preserves_finite_images(ab):
    # S3 on three points: a = (01), b = (012)
    a, b = (1, 0, 2), (1, 2, 0)
    images = {0: a, 1: a, 2: b, 3: (2, 0, 1)}

    def evaluate(codes):
        p = (0, 1, 2)
        for c in codes:
            p = tuple(images[c][i] for i in p)
        return p

    for codes in all_words(ab, 5):
        assert evaluate(codes) == evaluate(reduce(ab.parse(ab.format(codes))).letters)


def test_multiply_by_inverse_is_identity(ab):
    for codes in reduced_words(ab, 5):
        u = ReducedWord(ab, codes)
        assert multiply(u, invert(u)).letters == ()
        assert multiply(invert(u), u).letters == ()


def test_reduced_words_count(ab):
    # 1 + 4 + 4*3 + 4*9 reduced words of length <= 3
    assert sum(1 for _ in reduced_words(ab, 3)) == 1 + 4 + 12 + 36
    assert sum(1 for _ in all_words(ab, 2)) == 1 + 4 + 16
