"""p-closures and nil-closures of finitely generated subgroups and their products."""

from __future__ import annotations

import logging
from functools import lru_cache
from typing import Sequence

from .. import automata
from ..automata import WordAutomaton
from ..errors import InternalError, PreconditionError
from ..stallings import Subgroup, contains, intersect, overgroups
from .primes import ALL_PRIMES, NO_PRIMES, PrimeSet, dense_primes, is_prime

log = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def _overgroups(k: Subgroup) -> tuple[Subgroup, ...]:
    return tuple(overgroups(k))


@lru_cache(maxsize=None)
def primes_closed(k: Subgroup) -> PrimeSet:
    """ℙ(K): the primes p for which K is p-closed.

    K is p-closed iff no proper overgroup contains it p-densely.
    """
    dense_somewhere = NO_PRIMES
    for l in _overgroups(k)[1:]:
        dense_somewhere = dense_somewhere | dense_primes(k, l)
        if dense_somewhere.is_all():
            break
    return ~dense_somewhere


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")


@lru_cache(maxsize=None)
def p_closure(k: Subgroup, p: int) -> Subgroup:
    """Closure of K in the pro-p topology: the largest overgroup containing K p-densely."""
    _check_prime(p)
    cands = [l for l in _overgroups(k) if p in dense_primes(k, l)]
    for c in sorted(cands, key=lambda s: s.graph.vertices):
        if all(contains(c, other) for other in cands):
            return c
    raise InternalError(f"p-dense overgroups of {k} for p={p} have no maximum")


def p_closure_product(hs: Sequence[Subgroup], p: int) -> WordAutomaton:
    """Reduced words of Cl_p(H₁)⋯Cl_p(Hₙ), the p-closure of the product."""
    if not hs:
        raise PreconditionError("empty factor list")
    closed = [p_closure(h, p) for h in hs]
    return product_automaton(closed)


def nil_closure_subgroup(h: Subgroup) -> Subgroup:
    """Nil-closure of H: intersection of the overgroups that are p-closed for some p."""
    kept = [s for s in _overgroups(h) if not primes_closed(s).is_empty()]
    if not kept:
        raise InternalError(f"no overgroup of {h} is closed for any prime")
    result = kept[0]
    for s in kept[1:]:
        result = intersect(result, s)
    return result


def simplify_product(factors: Sequence[Subgroup]) -> tuple[Subgroup, ...] | None:
    """Shorter factor tuple with the same product set; None if the product is all of F.

    Drops trivial factors and merges adjacent factors comparable under inclusion.
    """
    out: list[Subgroup] = []
    for f in factors:
        if f.is_whole():
            return None
        if f.is_trivial():
            continue
        while out:
            last = out[-1]
            if contains(last, f):
                f = last
                out.pop()
            elif contains(f, last):
                out.pop()
            else:
                break
        out.append(f)
    return tuple(out)


def product_automaton(factors: Sequence[Subgroup]) -> WordAutomaton:
    """Reduced-word automaton of the product set H₁⋯Hₙ."""
    simple = simplify_product(factors)
    alphabet = factors[0].alphabet
    if simple is None:
        return automata.universal_automaton(alphabet)
    if not simple:
        return automata.epsilon_automaton(alphabet)
    if len(simple) == 1:
        return simple[0].language
    cat = automata.concat_automata([s.language for s in simple], alphabet)
    return automata.benois_reduce(cat)


def _dominates(a: tuple[Subgroup, ...], b: tuple[Subgroup, ...]) -> bool:
    """Factorwise containment a_i ⊇ b_i, which implies a's product ⊇ b's product."""
    return len(a) == len(b) and all(contains(x, y) for x, y in zip(a, b))


@lru_cache(maxsize=None)
def _nil_closure_product(hs: tuple[Subgroup, ...]) -> WordAutomaton:
    alphabet = hs[0].alphabet
    spectra = [[(s, primes_closed(s)) for s in _overgroups(h)] for h in hs]

    members: set[tuple[Subgroup, ...]] = set()

    def walk(i: int, chosen: list[Subgroup], running: PrimeSet):
        if running.is_empty():
            return
        if i == len(hs):
            simple = simplify_product(chosen)
            if simple is not None:
                members.add(simple)
            return
        for s, ps in spectra[i]:
            chosen.append(s)
            walk(i + 1, chosen, running & ps)
            chosen.pop()

    walk(0, [], ALL_PRIMES)
    # a product that factorwise contains another member adds nothing to the intersection
    ordered = sorted(members, key=lambda m: (len(m), [f.graph.vertices for f in m]))
    minimal_members = [m for m in ordered
                       if not any(o != m and _dominates(m, o) for o in ordered)]
    log.debug("nil-closure product %s: %d members, %d after pruning",
              hs, len(members), len(minimal_members))
    result = automata.universal_automaton(alphabet)
    for m in minimal_members:
        lang = automata.minimal(product_automaton(m)) if m else automata.epsilon_automaton(alphabet)
        result = automata.minimal(automata.intersect_reduced(result, lang))
    return result


def nil_closure_product(hs: Sequence[Subgroup]) -> WordAutomaton:
    """Reduced words of the nil-closure of H₁⋯Hₙ.

    Intersection over the products S₁⋯Sₙ of overgroups with a common prime in
    ℙ(S₁) ∩ ⋯ ∩ ℙ(Sₙ).
    """
    if not hs:
        raise PreconditionError("nil_closure_product needs at least one factor")
    alphabet = hs[0].alphabet
    if any(h.alphabet != alphabet for h in hs):
        from ..errors import AlphabetMismatch
        raise AlphabetMismatch("factors over different alphabets")
    return _nil_closure_product(tuple(hs))


def union_p_dense(hs: Sequence[Subgroup], p: int) -> bool:
    """True iff H₁ ∪ ⋯ ∪ Hₙ is p-dense in F."""
    _check_prime(p)
    if not hs:
        raise PreconditionError("empty subgroup list")
    closures = [p_closure(h, p) for h in hs]
    if any(c.is_whole() for c in closures):
        return True
    u = automata.union_automata([c.language for c in closures], hs[0].alphabet)
    return automata.is_universal(u)
