"""Words over A ∪ A⁻¹ and their free reduction.

A signed letter is stored as a small integer code: generator ``i`` is ``2*i``
and its formal inverse is ``2*i + 1``, so inversion is ``code ^ 1``.

Text syntax: a generator is a lowercase letter optionally followed by digits
(``a``, ``x12``); the same token with its first character uppercased is the
inverse (``A`` is a⁻¹).  Whitespace is ignored.  The empty string is the
identity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import AlphabetMismatch

_TOKEN = re.compile(r"([A-Za-z])([0-9]*)")
_NAME = re.compile(r"[a-z][0-9]*\Z")


@dataclass(frozen=True)
class Alphabet:
    letters: tuple[str, ...]

    def __post_init__(self):
        letters = tuple(self.letters)
        object.__setattr__(self, "letters", letters)
        if not letters:
            raise ValueError("alphabet must be nonempty")
        if len(set(letters)) != len(letters):
            raise ValueError(f"duplicate letters in alphabet {letters}")
        for name in letters:
            if not _NAME.match(name):
                raise ValueError(f"invalid generator name {name!r}")
        object.__setattr__(self, "_index", {name: i for i, name in enumerate(letters)})

    @classmethod
    def of(cls, spec: str | Iterable[str]) -> "Alphabet":
        """``Alphabet.of("ab")`` or ``Alphabet.of(["x1", "x2"])``."""
        if isinstance(spec, str):
            spec = spec.replace(",", " ").split() if (" " in spec or "," in spec) else list(spec)
        return cls(tuple(spec))

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return "".join(self.letters) if all(len(x) == 1 for x in self.letters) else ",".join(self.letters)

    @property
    def rank(self) -> int:
        return len(self.letters)

    @property
    def signed_size(self) -> int:
        return 2 * len(self.letters)

    def code(self, token: str) -> int:
        name = token[0].lower() + token[1:]
        try:
            i = self._index[name]
        except KeyError:
            raise AlphabetMismatch(f"letter {token!r} not in alphabet {self}") from None
        return 2 * i + (1 if token[0].isupper() else 0)

    def token(self, code: int) -> str:
        name = self.letters[code >> 1]
        return name[0].upper() + name[1:] if code & 1 else name

    def tokens(self, text: str) -> list[int]:
        text = "".join(text.split())
        if text in ("", "1", "ε"):
            return []
        codes = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                raise AlphabetMismatch(f"cannot parse {text!r} at position {pos}")
            codes.append(self.code(m.group(0)))
            pos = m.end()
        return codes

    def format(self, codes: Sequence[int]) -> str:
        return "".join(self.token(c) for c in codes)

    def parse(self, text: str) -> "Word":
        return Word(self, tuple(self.tokens(text)))

    def reduced(self, text: str) -> "ReducedWord":
        return reduce(self.parse(text))

    def generators(self) -> list["ReducedWord"]:
        return [ReducedWord(self, (2 * i,)) for i in range(len(self.letters))]

    def identity(self) -> "ReducedWord":
        return ReducedWord(self, ())


def inv(code: int) -> int:
    return code ^ 1


def reduce_codes(codes: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for c in codes:
        if out and out[-1] == c ^ 1:
            out.pop()
        else:
            out.append(c)
    return tuple(out)


def is_reduced_codes(codes: Sequence[int]) -> bool:
    return all(codes[i] != codes[i + 1] ^ 1 for i in range(len(codes) - 1))


def invert_codes(codes: Sequence[int]) -> tuple[int, ...]:
    return tuple(c ^ 1 for c in reversed(codes))


@dataclass(frozen=True)
class Word:
    alphabet: Alphabet
    letters: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        n = self.alphabet.signed_size
        for c in self.letters:
            if not 0 <= c < n:
                raise AlphabetMismatch(f"letter code {c} outside alphabet {self.alphabet}")

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return self.alphabet.format(self.letters)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({str(self)!r})"

    def is_reduced(self) -> bool:
        return is_reduced_codes(self.letters)


class ReducedWord(Word):
    """A freely reduced word; the empty word is the identity of F(A)."""

    def __post_init__(self):
        super().__post_init__()
        if not is_reduced_codes(self.letters):
            raise ValueError(f"word {self.alphabet.format(self.letters)!r} is not reduced")

    def __mul__(self, other: "ReducedWord") -> "ReducedWord":
        return multiply(self, other)

    def inverse(self) -> "ReducedWord":
        return invert(self)


def _check(u: Word, v: Word) -> None:
    if u.alphabet != v.alphabet:
        raise AlphabetMismatch(f"alphabets differ: {u.alphabet} vs {v.alphabet}")


def reduce(w: Word) -> ReducedWord:
    if isinstance(w, ReducedWord):
        return w
    return ReducedWord(w.alphabet, reduce_codes(w.letters))


def multiply(u: Word, v: Word) -> ReducedWord:
    _check(u, v)
    return ReducedWord(u.alphabet, reduce_codes(u.letters + v.letters))


def invert(u: Word) -> ReducedWord:
    return ReducedWord(u.alphabet, invert_codes(reduce_codes(u.letters)))


def group_op(mode: str, u: Word, v: Word | None = None) -> ReducedWord:
    if mode == "multiply":
        if v is None:
            raise ValueError("multiply needs two operands")
        return multiply(u, v)
    if mode == "invert":
        if v is not None:
            raise ValueError("invert takes one operand")
        return invert(u)
    raise ValueError(f"unknown mode {mode!r}")


def reduced_words(alphabet: Alphabet, max_length: int) -> Iterable[tuple[int, ...]]:
    """All reduced code tuples of length ≤ ``max_length``, shortest first."""
    layer: list[tuple[int, ...]] = [()]
    yield ()
    n = alphabet.signed_size
    for _ in range(max_length):
        nxt = []
        for w in layer:
            for c in range(n):
                if w and w[-1] == c ^ 1:
                    continue
                nxt.append(w + (c,))
        yield from nxt
        layer = nxt


def all_words(alphabet: Alphabet, max_length: int) -> Iterable[tuple[int, ...]]:
    """All code tuples (reduced or not) of length ≤ ``max_length``."""
    layer: list[tuple[int, ...]] = [()]
    yield ()
    n = alphabet.signed_size
    for _ in range(max_length):
        layer = [w + (c,) for w in layer for c in range(n)]
        yield from layer
