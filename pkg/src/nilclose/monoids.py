"""Finite monoids and their G_nil-kernel, used to decide membership in
J ⓜ G_nil and J ∗ G_nil.

Elements are indices ``0..size-1``; ``table[x][y]`` is the product xy.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Mapping, Sequence

from . import automata
from .automata import WordAutomaton
from .errors import MonoidError, PreconditionError, ResourceCapError, limits
from .freegroup import Alphabet


def _letters(n: int) -> list[str]:
    if n <= 26:
        return list(string.ascii_lowercase[:n])
    return [f"x{i}" for i in range(1, n + 1)]


class FiniteMonoid:
    """Multiplication table with an identity and a generating map from an alphabet."""

    def __init__(self, table: Sequence[Sequence[int]], identity: int,
                 generators: Mapping[str, int] | None = None,
                 names: Sequence[str] | None = None, check: bool = True):
        self.table = tuple(tuple(int(v) for v in row) for row in table)
        self.size = len(self.table)
        self.identity = int(identity)
        if generators is None:
            generators = dict(zip(_letters(self.size), range(self.size)))
        self.generators = dict(generators)
        self.alphabet = Alphabet(tuple(self.generators))
        self.names = tuple(names) if names is not None else None
        if check:
            self._validate()

    def _validate(self):
        n = self.size
        t = self.table
        if n == 0:
            raise MonoidError("empty monoid")
        if any(len(row) != n for row in t):
            raise MonoidError("table is not square")
        if any(not 0 <= v < n for row in t for v in row):
            raise MonoidError("table entry out of range")
        if not 0 <= self.identity < n:
            raise MonoidError("identity out of range")
        e = self.identity
        for x in range(n):
            if t[e][x] != x or t[x][e] != x:
                raise MonoidError(f"identity law fails at element {self.name(x)}")
        for x in range(n):
            tx = t[x]
            for y in range(n):
                txy = t[tx[y]]
                ty = t[y]
                for z in range(n):
                    if txy[z] != tx[ty[z]]:
                        raise MonoidError(
                            f"not associative: ({self.name(x)}{self.name(y)}){self.name(z)} "
                            f"!= {self.name(x)}({self.name(y)}{self.name(z)})")
        if self.names is not None and len(self.names) != n:
            raise MonoidError("names list has the wrong length")
        for a, v in self.generators.items():
            if not 0 <= v < n:
                raise MonoidError(f"generator {a} maps outside the monoid")
        if len(self.generated_by(self.generators.values())) != n:
            raise MonoidError("generators do not generate the monoid")

    def _key(self):
        return (self.table, self.identity, tuple(self.generators.items()))

    def __eq__(self, other):
        return isinstance(other, FiniteMonoid) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"FiniteMonoid(size={self.size}, generators={self.generators})"

    def name(self, x: int) -> str:
        return self.names[x] if self.names else str(x)

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def evaluate(self, letters: Sequence[int]) -> int:
        """Value [u]_M of a positive word given as letter codes."""
        gens = self.gen_values
        x = self.identity
        for c in letters:
            if c & 1:
                raise PreconditionError("monoid words use positive letters only")
            x = self.table[x][gens[c >> 1]]
        return x

    @cached_property
    def gen_values(self) -> tuple[int, ...]:
        return tuple(self.generators[a] for a in self.alphabet.letters)

    def generated_by(self, elements) -> frozenset[int]:
        elements = list(elements)
        seen = {self.identity}
        todo = [self.identity]
        while todo:
            x = todo.pop()
            for g in elements:
                y = self.table[x][g]
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return frozenset(seen)

    def submonoid(self, elements) -> "FiniteMonoid":
        """The submonoid on ``elements`` (must be closed and contain the identity)."""
        elems = sorted(set(elements))
        idx = {x: i for i, x in enumerate(elems)}
        if self.identity not in idx:
            raise PreconditionError("submonoid must contain the identity")
        try:
            table = [[idx[self.table[x][y]] for y in elems] for x in elems]
        except KeyError:
            raise PreconditionError("element set is not closed under multiplication") from None
        names = [self.name(x) for x in elems]
        return FiniteMonoid(table, idx[self.identity], None, names, check=False)

    def to_json(self) -> dict:
        data = {"size": self.size, "identity": self.identity,
                "table": [list(r) for r in self.table], "generators": dict(self.generators)}
        if self.names:
            data["names"] = list(self.names)
        return data


def load_monoid(spec) -> FiniteMonoid:
    """Monoid from a JSON dict, JSON text, or a path to a JSON file."""
    if isinstance(spec, Path) or (isinstance(spec, str) and not spec.lstrip().startswith("{")):
        spec = Path(spec).read_text(encoding="utf-8")
    if isinstance(spec, str):
        spec = json.loads(spec)
    table = spec["table"]
    if "size" in spec and spec["size"] != len(table):
        raise MonoidError(f"size {spec['size']} does not match the table")
    return FiniteMonoid(table, spec.get("identity", 0), spec.get("generators"), spec.get("names"))


# ---------------------------------------------------------------------------
# Structure


@dataclass
class StructureReport:
    j_classes: list[frozenset[int]]
    is_j_trivial: bool
    regulars: frozenset[int]
    inverse_map: dict[int, int]
    is_block_group: bool
    is_group: bool
    is_nilpotent_group: bool
    generalized_inverses: dict[int, frozenset[int]] = field(repr=False, default_factory=dict)


def generalized_inverses(m: FiniteMonoid) -> dict[int, frozenset[int]]:
    t = m.table
    out = {}
    for a in range(m.size):
        out[a] = frozenset(b for b in range(m.size) if t[t[a][b]][a] == a and t[t[b][a]][b] == b)
    return out


def j_classes(m: FiniteMonoid) -> list[frozenset[int]]:
    t = m.table
    ideals = {}
    for x in range(m.size):
        left = {t[y][x] for y in range(m.size)}
        ideals[x] = frozenset(t[z][y] for z in left for y in range(m.size))
    groups: dict[frozenset, list[int]] = {}
    for x, ideal in ideals.items():
        groups.setdefault(ideal, []).append(x)
    return sorted((frozenset(v) for v in groups.values()), key=min)


def inverse_table(m: FiniteMonoid) -> list[int] | None:
    """Group inverses, or None if some element is not invertible."""
    t = m.table
    e = m.identity
    inv = []
    for x in range(m.size):
        y = next((y for y in range(m.size) if t[x][y] == e and t[y][x] == e), None)
        if y is None:
            return None
        inv.append(y)
    return inv


def subgroup_closure(m: FiniteMonoid, elements) -> frozenset[int]:
    """Subgroup generated by ``elements`` in a finite group (submonoid suffices)."""
    return m.generated_by(elements)


def lower_central_series(m: FiniteMonoid) -> list[frozenset[int]]:
    inv = inverse_table(m)
    if inv is None:
        raise PreconditionError("lower central series needs a group")
    t = m.table
    series = [frozenset(range(m.size))]
    while True:
        cur = series[-1]
        comms = {t[t[inv[x]][inv[g]]][t[x][g]] for x in cur for g in range(m.size)}
        nxt = subgroup_closure(m, comms)
        if nxt == cur:
            return series
        series.append(nxt)


def nilpotency_class(m: FiniteMonoid) -> int | None:
    """Nilpotency class of a group, or None if it is not nilpotent."""
    series = lower_central_series(m)
    if series[-1] != frozenset([m.identity]):
        return None
    return len(series) - 1


def analyze_structure(m: FiniteMonoid) -> StructureReport:
    ginv = generalized_inverses(m)
    regulars = frozenset(a for a, s in ginv.items() if s)
    inverse_map = {a: next(iter(s)) for a, s in ginv.items() if len(s) == 1}
    classes = j_classes(m)
    is_group = inverse_table(m) is not None
    return StructureReport(
        j_classes=classes,
        is_j_trivial=all(len(c) == 1 for c in classes),
        regulars=regulars,
        inverse_map=inverse_map,
        is_block_group=all(len(s) <= 1 for s in ginv.values()),
        is_group=is_group,
        is_nilpotent_group=is_group and nilpotency_class(m) is not None,
        generalized_inverses=ginv,
    )


# ---------------------------------------------------------------------------
# Languages and closures


def cayley_language(m: FiniteMonoid, element: int) -> WordAutomaton:
    """Automaton over the positive letters accepting L_m = {u : [u]_M = m}."""
    if not 0 <= element < m.size:
        raise PreconditionError(f"no element {element}")
    edges = [(x, 2 * i, m.table[x][g]) for x in range(m.size) for i, g in enumerate(m.gen_values)]
    raw = WordAutomaton(m.alphabet, m.size, edges, [m.identity], [element], reduced=True)
    return automata.trim(raw)


def liftable(m: FiniteMonoid, elements: Sequence[int]) -> bool:
    """Whether (m₁,…,m_k) is a G_nil-liftable tuple: 1 ∈ Cl_nil(L_{m₁}⋯L_{m_k})."""
    if not elements:
        raise PreconditionError("liftable needs a nonempty tuple")
    return _liftable(m, tuple(elements))


@lru_cache(maxsize=4096)
def _liftable(m: FiniteMonoid, elements: tuple[int, ...]) -> bool:
    from .closures.rational import nil_closure_rational

    exprs = [automata.extract_expression(cayley_language(m, x)) for x in elements]
    expr = automata.concat(*exprs)
    closure = nil_closure_rational(expr, m.alphabet)
    return automata.accepts(closure, ())


def gnil_kernel(m: FiniteMonoid) -> frozenset[int]:
    """K_{G_nil}(M): the elements m for which (m) is G_nil-liftable."""
    return frozenset(x for x in range(m.size) if liftable(m, [x]))


def _unique_inverse(m: FiniteMonoid, x: int, ginv=None) -> int:
    ginv = ginv or generalized_inverses(m)
    s = ginv[x]
    if len(s) != 1:
        what = "not regular" if not s else "has several generalized inverses"
        raise PreconditionError(f"element {m.name(x)} {what}")
    return next(iter(s))


def pointlike_pair(m: FiniteMonoid, alpha: int, beta: int) -> bool:
    """Whether {α, β} is G_nil-pointlike: (α, β′) is a liftable 2-tuple."""
    ginv = generalized_inverses(m)
    _unique_inverse(m, alpha, ginv)
    beta_inv = _unique_inverse(m, beta, ginv)
    return liftable(m, [alpha, beta_inv])


@dataclass
class Decision:
    member: bool
    certificate: dict

    def __bool__(self):
        return self.member


def in_J_star_Gnil(m: FiniteMonoid) -> Decision:
    """Membership in J ∗ G_nil.

    Non-block-groups are rejected outright.  For block groups, every
    G_nil-pointlike pair of regular elements must satisfy αα′ββ′ = αβ′.
    """
    report = analyze_structure(m)
    if not report.is_block_group:
        bad = next(a for a, s in report.generalized_inverses.items() if len(s) > 1)
        return Decision(False, {"reason": "not in BG", "element": bad,
                                "inverses": sorted(report.generalized_inverses[bad])})
    t = m.table
    inv = report.inverse_map
    regs = sorted(report.regulars)
    checked = {}
    for b in regs:
        for a in regs:
            lhs = t[t[t[a][inv[a]]][b]][inv[b]]
            rhs = t[a][inv[b]]
            if lhs == rhs:
                continue
            pair = (min(a, b), max(a, b))
            if pair not in checked:
                checked[pair] = pointlike_pair(m, a, b)
            if checked[pair]:
                return Decision(False, {"reason": "pointlike pair violates the identity",
                                        "pair": [a, b], "lhs": lhs, "rhs": rhs})
    return Decision(True, {"reason": "all pointlike regular pairs satisfy the identity",
                           "pairs_tested": len(checked)})


def is_j_trivial(m: FiniteMonoid) -> bool:
    return all(len(c) == 1 for c in j_classes(m))


def in_J_malcev_Gnil(m: FiniteMonoid) -> bool:
    """Membership in J ⓜ G_nil: the G_nil-kernel is J-trivial."""
    kernel = gnil_kernel(m)
    return is_j_trivial(m.submonoid(kernel))


def direct_product(m: FiniteMonoid, n: FiniteMonoid) -> FiniteMonoid:
    """Componentwise product; element (x, y) has index x·|N| + y."""
    size = m.size * n.size
    if size > limits().max_monoid:
        raise ResourceCapError(f"direct product of size {size} exceeds {limits().max_monoid}")
    ns = n.size
    table = [[m.table[x1][x2] * ns + n.table[y1][y2] for x2 in range(m.size) for y2 in range(ns)]
             for x1 in range(m.size) for y1 in range(ns)]
    identity = m.identity * ns + n.identity
    gens = [g * ns + n.identity for g in m.gen_values] + [m.identity * ns + g for g in n.gen_values]
    gmap = dict(zip(_letters(len(gens)), gens))
    names = [f"({m.name(x)},{n.name(y)})" for x in range(m.size) for y in range(ns)]
    return FiniteMonoid(table, identity, gmap, names, check=False)


# ---------------------------------------------------------------------------
# Small named monoids


def _perm_group(perms: list[tuple[int, ...]], names: list[str], gens: dict[str, int]) -> FiniteMonoid:
    idx = {p: i for i, p in enumerate(perms)}
    # (xy)(i) = y(x(i)): apply x first
    table = [[idx[tuple(y[x[i]] for i in range(len(x)))] for y in perms] for x in perms]
    return FiniteMonoid(table, 0, gens, names)


def cyclic_monoid(n: int, generator: int = 1) -> FiniteMonoid:
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteMonoid(table, 0, {"a": generator % n}, [str(i) for i in range(n)])


def builtin_monoids() -> dict[str, FiniteMonoid]:
    """Small monoids used in examples and tests."""
    s3_perms = [(0, 1, 2), (1, 0, 2), (2, 1, 0), (0, 2, 1), (1, 2, 0), (2, 0, 1)]
    s3 = _perm_group(s3_perms, ["e", "(12)", "(13)", "(23)", "(123)", "(132)"], {"a": 1, "b": 4})
    # 1 r1 r2 with xy = y for x, y ≠ 1
    right_zero = FiniteMonoid([[0, 1, 2], [1, 1, 2], [2, 1, 2]], 0, {"a": 1, "b": 2},
                              ["1", "r1", "r2"])
    # Brandt B2 with identity: 1, e11, e12, e21, e22, 0; eij·ekl = eil if j == k
    units = [(1, 1), (1, 2), (2, 1), (2, 2)]
    b_names = ["1", "e11", "e12", "e21", "e22", "0"]

    def b_mul(x, y):
        if x == 0:
            return y
        if y == 0:
            return x
        if x == 5 or y == 5:
            return 5
        (i, j), (k, l) = units[x - 1], units[y - 1]
        return 1 + units.index((i, l)) if j == k else 5

    brandt = FiniteMonoid([[b_mul(x, y) for y in range(6)] for x in range(6)], 0,
                          {"a": 2, "b": 3}, b_names)
    return {
        "U1": FiniteMonoid([[0, 1], [1, 1]], 0, {"a": 1}, ["1", "0"]),
        "Z2": cyclic_monoid(2),
        "Z4": cyclic_monoid(4),
        "Z6": cyclic_monoid(6),
        "S3": s3,
        "RZ2": right_zero,
        "B2": brandt,
    }
