"""Brute-force checks against finite nilpotent groups.

If w lies in the pro-nilpotent closure of X, then φ(w) ∈ φ(X) for every
homomorphism φ onto a finite nilpotent group.  Enumerating all maps into
a small catalog of such groups therefore gives an upper approximation of
the closure, good for falsifying closure outputs.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .automata import WordAutomaton
from .errors import PreconditionError, ResourceCapError, limits
from .freegroup import Alphabet
from .monoids import FiniteMonoid, inverse_table, nilpotency_class


@dataclass(eq=False)
class FiniteGroupTable:
    """A finite group given by its multiplication table."""

    monoid: FiniteMonoid
    nilpotency_class: int | None = None
    name: str = ""

    def __post_init__(self):
        if inverse_table(self.monoid) is None:
            raise PreconditionError(f"{self.name or 'table'} is not a group")

    @property
    def order(self) -> int:
        return self.monoid.size

    @property
    def identity(self) -> int:
        return self.monoid.identity

    @cached_property
    def inverse(self) -> tuple[int, ...]:
        return tuple(inverse_table(self.monoid))

    def mul(self, x: int, y: int) -> int:
        return self.monoid.table[x][y]

    def check_nilpotent(self) -> bool:
        """Recompute the nilpotency class and compare with the stored one."""
        c = nilpotency_class(self.monoid)
        return c is not None and (self.nilpotency_class is None or c == self.nilpotency_class)

    def __repr__(self):
        return f"FiniteGroupTable({self.name or self.order})"

    def to_json(self) -> dict:
        data = self.monoid.to_json()
        data["name"] = self.name
        data["nilpotency_class"] = self.nilpotency_class
        return data

    @classmethod
    def from_json(cls, data: dict) -> "FiniteGroupTable":
        m = FiniteMonoid(data["table"], data.get("identity", 0), data.get("generators"),
                         data.get("names"))
        return cls(m, data.get("nilpotency_class"), data.get("name", ""))


@dataclass(frozen=True)
class Homomorphism:
    """The homomorphism F(A) → G sending letter i to ``assignment[i]``."""

    alphabet: Alphabet
    assignment: tuple[int, ...]
    target: FiniteGroupTable = field(compare=False)

    @cached_property
    def code_images(self) -> tuple[int, ...]:
        inv = self.target.inverse
        out = []
        for x in self.assignment:
            out += [x, inv[x]]
        return tuple(out)

    def apply(self, letters: Sequence[int]) -> int:
        t = self.target.monoid.table
        imgs = self.code_images
        x = self.target.identity
        for c in letters:
            x = t[x][imgs[c]]
        return x

    def image_size(self) -> int:
        return len(self.target.monoid.generated_by(self.assignment))

    def describe(self) -> dict:
        m = self.target.monoid
        return {"group": self.target.name,
                "assignment": {a: m.name(x) for a, x in zip(self.alphabet.letters, self.assignment)}}


Catalog = list


def _cyclic(n: int) -> FiniteGroupTable:
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    m = FiniteMonoid(table, 0, None, [str(i) for i in range(n)], check=False)
    return FiniteGroupTable(m, 0 if n == 1 else 1, f"Z/{n}")


def cyclic(n: int) -> FiniteGroupTable:
    if n < 1:
        raise PreconditionError("cyclic group order must be positive")
    return _cyclic(n)


def dihedral(n: int) -> FiniteGroupTable:
    """Symmetries of the n-gon: element (k, f) is r^k s^f, with index 2k + f."""
    elems = [(k, f) for k in range(n) for f in (0, 1)]
    idx = {e: i for i, e in enumerate(elems)}

    def mul(x, y):
        k1, f1 = x
        k2, f2 = y
        return ((k1 + (-k2 if f1 else k2)) % n, f1 ^ f2)

    table = [[idx[mul(x, y)] for y in elems] for x in elems]
    names = [("r" * (k > 0) + (str(k) if k > 1 else "")) + ("s" if f else "") or "e"
             for k, f in elems]
    m = FiniteMonoid(table, 0, None, names, check=False)
    return FiniteGroupTable(m, nilpotency_class(m), f"D{n}")


def quaternion() -> FiniteGroupTable:
    """Q₈ = {±1, ±i, ±j, ±k}."""
    units = "1ijk"
    # unit products as (sign, unit)
    prod = {
        ("1", u): (1, u) for u in units
    }
    prod.update({(u, "1"): (1, u) for u in units})
    prod.update({("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
                 ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
                 ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j")})
    elems = [(s, u) for u in units for s in (1, -1)]
    idx = {e: i for i, e in enumerate(elems)}
    table = []
    for s1, u1 in elems:
        row = []
        for s2, u2 in elems:
            s, u = prod[(u1, u2)]
            row.append(idx[(s * s1 * s2, u)])
        table.append(row)
    names = [("-" if s < 0 else "") + u for s, u in elems]
    m = FiniteMonoid(table, 0, None, names, check=False)
    return FiniteGroupTable(m, 2, "Q8")


def group_product(g: FiniteGroupTable, h: FiniteGroupTable) -> FiniteGroupTable:
    hs = h.order
    table = [[g.mul(x1, x2) * hs + h.mul(y1, y2) for x2 in range(g.order) for y2 in range(hs)]
             for x1 in range(g.order) for y1 in range(hs)]
    names = [f"({g.monoid.name(x)},{h.monoid.name(y)})" for x in range(g.order) for y in range(hs)]
    m = FiniteMonoid(table, g.identity * hs + h.identity, None, names, check=False)
    cls = None
    if g.nilpotency_class is not None and h.nilpotency_class is not None:
        cls = max(g.nilpotency_class, h.nilpotency_class)
    return FiniteGroupTable(m, cls, f"{g.name}x{h.name}")


def nilpotent_catalog(max_order: int) -> Catalog:
    """Cyclic groups, Q₈ and D₄, and their direct products, up to ``max_order``.

    Not every nilpotent group of each order is present; duplicates up to
    isomorphism are allowed.
    """
    if max_order < 1:
        raise PreconditionError("max_order must be at least 1")
    atoms = [cyclic(n) for n in range(1, max_order + 1)]
    if max_order >= 8:
        atoms += [quaternion(), dihedral(4)]
    catalog = list(atoms)
    factors = {g.name: (g.name,) for g in atoms}
    seen = {(g.name,) for g in atoms}
    frontier = [g for g in atoms if g.order > 1]
    while frontier:
        nxt = []
        for g in frontier:
            for a in atoms:
                if a.order < 2 or g.order * a.order > max_order:
                    continue
                key = tuple(sorted(factors[g.name] + (a.name,)))
                if key in seen:
                    continue
                seen.add(key)
                p = group_product(g, a)
                factors[p.name] = key
                catalog.append(p)
                nxt.append(p)
        frontier = nxt
    return catalog


def catalog_to_json(catalog: Catalog) -> list:
    return [g.to_json() for g in catalog]


def load_catalog(source=None) -> Catalog:
    """Catalog from a JSON file or list; by default the shipped order-16 catalog."""
    if source is None:
        text = resources.files("nilclose.data").joinpath("catalog16.json").read_text("utf-8")
        source = json.loads(text)
    elif isinstance(source, (str, Path)):
        source = json.loads(Path(source).read_text(encoding="utf-8"))
    return [FiniteGroupTable.from_json(d) for d in source]


def enum_homs(alphabet: Alphabet, g: FiniteGroupTable) -> list[Homomorphism]:
    """Every assignment of group elements to the letters of ``alphabet``."""
    count = g.order ** alphabet.rank
    if count > limits().max_homs:
        raise ResourceCapError(f"{count} homomorphisms into {g.name} exceed {limits().max_homs}")
    return [Homomorphism(alphabet, tuple(a), g)
            for a in itertools.product(range(g.order), repeat=alphabet.rank)]


def image_of_language(a: WordAutomaton, phi: Homomorphism) -> frozenset[int]:
    """φ(L(a)), by a fixpoint over (state, group element) pairs."""
    t = phi.target.monoid.table
    imgs = phi.code_images
    e = phi.target.identity
    seen = {(q, e) for q in a.initials}
    todo = list(seen)
    out = a.out
    while todo:
        q, x = todo.pop()
        for label, targets in out[q].items():
            y = t[x][imgs[label]]
            for r in targets:
                if (r, y) not in seen:
                    seen.add((r, y))
                    todo.append((r, y))
    return frozenset(x for q, x in seen if q in a.finals)


class ClosureOracle:
    """Images of a fixed language under every catalog homomorphism, for repeated checks."""

    def __init__(self, a: WordAutomaton, catalog: Catalog):
        if not catalog:
            raise PreconditionError("empty catalog")
        self.alphabet = a.alphabet
        self.images = [(phi, image_of_language(a, phi))
                       for g in catalog for phi in enum_homs(a.alphabet, g)]

    def counterexample(self, letters: Sequence[int]) -> Homomorphism | None:
        for phi, img in self.images:
            if phi.apply(letters) not in img:
                return phi
        return None

    def check(self, letters: Sequence[int]) -> bool:
        return self.counterexample(letters) is None

    def refuted(self, words: Iterable[Sequence[int]]) -> dict[tuple[int, ...], Homomorphism]:
        """Words ruled out by some homomorphism, each with one refuting map.

        Images are computed along the prefix tree of ``words``, so each map
        costs one multiplication per tree node.
        """
        targets = {tuple(w) for w in words}
        nodes = sorted({w[:i] for w in targets for i in range(len(w) + 1)}, key=len)
        out: dict[tuple[int, ...], Homomorphism] = {}
        for phi, img in self.images:
            t = phi.target.monoid.table
            imgs = phi.code_images
            value = {(): phi.target.identity}
            for w in nodes[1:]:
                value[w] = t[value[w[:-1]]][imgs[w[-1]]]
            for w in targets:
                if w not in out and value[w] not in img:
                    out[w] = phi
        return out


def approx_closure_check(a: WordAutomaton, w, catalog: Catalog) -> bool:
    """True iff φ(w) ∈ φ(L(a)) for every catalog homomorphism φ.

    Holds for every w in the nil-closure of L(a), so a False result refutes
    membership; a True result proves nothing.
    """
    letters = w.letters if hasattr(w, "letters") else tuple(w)
    return ClosureOracle(a, catalog).check(letters)


# ---------------------------------------------------------------------------
# Group-theoretic cross-checks


def normal_closure(m: FiniteMonoid, elements: Iterable[int]) -> frozenset[int]:
    inv = inverse_table(m)
    t = m.table
    conj = {t[t[inv[g]][x]][g] for x in elements for g in range(m.size)}
    return m.generated_by(conj)


def normal_subgroups(m: FiniteMonoid) -> list[frozenset[int]]:
    """All normal subgroups of a finite group, as joins of normal closures of elements."""
    t = m.table
    found = {normal_closure(m, [x]) for x in range(m.size)}
    todo = list(found)
    while todo:
        n = todo.pop()
        for k in list(found):
            j = frozenset(t[x][y] for x in n for y in k)
            if j not in found:
                found.add(j)
                todo.append(j)
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def quotient(m: FiniteMonoid, n: frozenset[int]) -> FiniteMonoid:
    t = m.table
    cosets = []
    index = {}
    for x in range(m.size):
        if x in index:
            continue
        c = frozenset(t[x][y] for y in n)
        for y in c:
            index[y] = len(cosets)
        cosets.append(min(c))
    table = [[index[t[x][y]] for y in cosets] for x in cosets]
    return FiniteMonoid(table, index[m.identity], None, None, check=False)


def nilpotent_residual(m: FiniteMonoid) -> frozenset[int]:
    """Smallest normal subgroup with nilpotent quotient."""
    if inverse_table(m) is None:
        raise PreconditionError("nilpotent residual needs a group")
    result = frozenset(range(m.size))
    for n in normal_subgroups(m):
        if nilpotency_class(quotient(m, n)) is not None:
            result &= n
    return result
