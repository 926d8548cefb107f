"""Profinite and pro-nilpotent closures of rational subsets of F(A)."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .. import automata
from ..automata import Concat, Empty, Lit, Star, Union, WordAutomaton
from ..errors import AlphabetMismatch
from ..freegroup import Alphabet, ReducedWord, invert_codes, reduce_codes
from ..stallings import Subgroup, conjugate, contains, fold, member
from .subgroups import nil_closure_product, simplify_product


@dataclass(frozen=True)
class Term:
    """The subset g·H₁⋯Hₙ."""

    g: ReducedWord
    factors: tuple[Subgroup, ...] = ()

    def __str__(self):
        g = str(self.g) or "1"
        return g + "".join(repr(h) for h in self.factors)


def _normal_term(g: ReducedWord, factors: Sequence[Subgroup]) -> Term:
    simple = simplify_product(factors)
    if simple is None:
        # the product is all of F
        simple = (fold(g.alphabet.generators(), g.alphabet),)
    if simple and g.letters and member(simple[0], g):
        g = g.alphabet.identity()
    return Term(g, simple)


def _term_within(t: Term, u: Term) -> bool:
    """Cheap sufficient test for t ⊆ u."""
    if t == u:
        return True
    if not u.factors:
        return False
    offset = reduce_codes(invert_codes(u.g.letters) + t.g.letters)
    if not member(u.factors[0], offset):
        return False
    if not t.factors:
        return True
    return len(t.factors) == len(u.factors) and all(
        contains(b, a) for a, b in zip(t.factors, u.factors))


@dataclass(frozen=True)
class ClosureNormalForm:
    """Finite union of translated products g·H₁⋯Hₙ; no terms means ∅."""

    alphabet: Alphabet
    terms: tuple[Term, ...] = ()

    @classmethod
    def build(cls, alphabet: Alphabet, terms) -> "ClosureNormalForm":
        uniq: list[Term] = []
        for t in terms:
            t = _normal_term(t.g, t.factors)
            if t not in uniq:
                uniq.append(t)
        kept = [t for i, t in enumerate(uniq)
                if not any(j != i and _term_within(t, u) and not (_term_within(u, t) and j > i)
                           for j, u in enumerate(uniq))]
        return cls(alphabet, tuple(kept))

    def __str__(self):
        return " ∪ ".join(str(t) for t in self.terms) or "∅"

    def to_json(self) -> dict:
        return {
            "alphabet": list(self.alphabet.letters),
            "terms": [{"g": str(t.g), "factors": [[str(b) for b in h.basis] for h in t.factors]}
                      for t in self.terms],
        }

    @classmethod
    def from_json(cls, data: dict | str, alphabet: Alphabet | None = None) -> "ClosureNormalForm":
        if isinstance(data, str):
            data = json.loads(data)
        if alphabet is None:
            alphabet = Alphabet(tuple(data["alphabet"]))
        terms = []
        for t in data["terms"]:
            g = alphabet.reduced(t["g"])
            factors = tuple(fold([alphabet.parse(w) for w in f], alphabet) for f in t["factors"])
            terms.append(Term(g, factors))
        return cls(alphabet, tuple(terms))


def _product(alphabet, left: ClosureNormalForm, right: ClosureNormalForm) -> ClosureNormalForm:
    terms = []
    for t in left.terms:
        for u in right.terms:
            moved = tuple(conjugate(h, u.g) for h in t.factors)
            terms.append(Term(t.g * u.g, moved + u.factors))
    return ClosureNormalForm.build(alphabet, terms)


def pro_g_closure(e, alphabet: Alphabet | None = None) -> ClosureNormalForm:
    """Closure in the profinite topology, as a finite union of g·H₁⋯Hₙ.

    Uses Cl(X ∪ Y) = Cl(X) ∪ Cl(Y), Cl(XY) = Cl(X)·Cl(Y) and
    Cl(X*) = ⟨X⟩, the subgroup generated by X.
    """
    alphabet = alphabet or automata.expression_alphabet(e)
    if alphabet is None:
        raise AlphabetMismatch("cannot infer the alphabet of an expression without literals")
    one = alphabet.identity()

    def go(node) -> ClosureNormalForm:
        if isinstance(node, Empty):
            return ClosureNormalForm(alphabet)
        if isinstance(node, Lit):
            if node.word.alphabet != alphabet:
                raise AlphabetMismatch(f"literal over {node.word.alphabet}, expected {alphabet}")
            return ClosureNormalForm(alphabet, (Term(node.word),))
        if isinstance(node, Union):
            terms = [t for item in node.items for t in go(item).terms]
            return ClosureNormalForm.build(alphabet, terms)
        if isinstance(node, Concat):
            acc = ClosureNormalForm(alphabet, (Term(one),))
            for item in node.items:
                acc = _product(alphabet, acc, go(item))
                if not acc.terms:
                    break
            return acc
        if isinstance(node, Star):
            inner = go(node.item)
            gens = []
            for t in inner.terms:
                gl = t.g.letters
                gi = invert_codes(gl)
                gens.append(gl)
                for h in t.factors:
                    gens.extend(reduce_codes(gl + b.letters + gi) for b in h.basis)
            s = fold(gens, alphabet)
            return ClosureNormalForm.build(alphabet, [Term(one, (s,))])
        raise TypeError(f"not a rational expression: {node!r}")

    return go(e)


def term_automaton(t: Term, alphabet: Alphabet) -> WordAutomaton:
    parts = [automata.word_automaton(t.g)] + [h.language for h in t.factors]
    if len(parts) == 1:
        return parts[0]
    return automata.benois_reduce(automata.concat_automata(parts, alphabet))


def nf_to_automaton(nf: ClosureNormalForm) -> WordAutomaton:
    """Reduced-word automaton of the union of the normal-form terms."""
    if not nf.terms:
        return automata.empty_automaton(nf.alphabet)
    parts = [term_automaton(t, nf.alphabet) for t in nf.terms]
    return automata.minimal(automata.union_automata(parts, nf.alphabet))


def nil_closure_rational(source, alphabet: Alphabet | None = None) -> WordAutomaton:
    """Reduced words of the nil-closure of a rational subset.

    ``source`` is a rational expression or a WordAutomaton.  The profinite
    closure is computed first; each term g·H₁⋯Hₙ then contributes
    g·Cl_nil(H₁⋯Hₙ).
    """
    if isinstance(source, WordAutomaton):
        alphabet = alphabet or source.alphabet
        source = automata.extract_expression(source)
    nf = pro_g_closure(source, alphabet)
    alphabet = nf.alphabet
    parts = []
    for t in nf.terms:
        if not t.factors:
            parts.append(automata.word_automaton(t.g))
        else:
            parts.append(automata.translate(t.g, nil_closure_product(t.factors)))
    if not parts:
        return automata.empty_automaton(alphabet)
    return automata.minimal(automata.union_automata(parts, alphabet))
