"""Stallings subgroup graphs of finitely generated subgroups of F(A).

Every graph is kept folded and cored, with a canonical numbering: the base is
vertex 0 and the remaining vertices are numbered in breadth-first order,
exploring signed letters in code order.  For deterministic inverse automata
this numbering is a complete isomorphism invariant, so two subgroups are equal
exactly when their row tables are equal.
"""

from __future__ import annotations

import json
import math
import random
from collections import deque
from functools import cached_property
from typing import Iterable, Sequence

from . import automata
from .errors import AlphabetMismatch, ResourceCapError, limits
from .freegroup import Alphabet, ReducedWord, Word, invert_codes, reduce_codes

NONE = -1


class StallingsGraph:
    """Folded, cored, canonically numbered inverse automaton with base 0.

    ``rows[v][x]`` is the target of the edge leaving ``v`` with signed letter
    ``x`` or ``-1``.
    """

    __slots__ = ("alphabet", "rows", "_key")

    def __init__(self, alphabet: Alphabet, rows: Sequence[Sequence[int]]):
        self.alphabet = alphabet
        self.rows = tuple(tuple(r) for r in rows)
        self._key = (alphabet.letters, self.rows)

    @property
    def key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, StallingsGraph) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"StallingsGraph(vertices={self.vertices}, edges={len(self.positive_edges())})"

    @property
    def vertices(self) -> int:
        return len(self.rows)

    base = 0

    def positive_edges(self) -> list[tuple[int, int, int]]:
        return [(p, x, q) for p, row in enumerate(self.rows) for x, q in enumerate(row)
                if q >= 0 and not x & 1]

    def degree(self, v: int) -> int:
        return sum(1 for q in self.rows[v] if q >= 0)

    def is_complete(self) -> bool:
        return all(q >= 0 for row in self.rows for q in row)

    def read(self, letters: Sequence[int], start: int = 0) -> int:
        """End vertex of the path labelled ``letters`` from ``start``, or -1."""
        v = start
        for x in letters:
            v = self.rows[v][x]
            if v < 0:
                return NONE
        return v

    def to_json(self) -> dict:
        a = self.alphabet
        return {
            "alphabet": list(a.letters),
            "base": 0,
            "edges": [[p, a.token(x), q] for p, x, q in self.positive_edges()],
        }

    @classmethod
    def from_json(cls, data: dict | str, alphabet: Alphabet | None = None) -> "StallingsGraph":
        if isinstance(data, str):
            data = json.loads(data)
        if alphabet is None:
            alphabet = Alphabet(tuple(data["alphabet"]))
        edges = [(p, alphabet.code(lbl), q) for p, lbl, q in data["edges"]]
        n = 1 + max([data.get("base", 0)] + [max(p, q) for p, _, q in edges])
        return _fold(alphabet, n, edges, data.get("base", 0))

    def to_dot(self, name: str = "G") -> str:
        lines = [f"digraph {name} {{", "  0 [shape=doublecircle];"]
        for v in range(1, self.vertices):
            lines.append(f"  {v} [shape=circle];")
        for p, x, q in self.positive_edges():
            lines.append(f'  {p} -> {q} [label="{self.alphabet.token(x)}"];')
        lines.append("}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# Folding


def _fold(alphabet: Alphabet, n: int, edges: Iterable[tuple[int, int, int]], base: int = 0,
          identify: Iterable[tuple[int, int]] = (), rng: random.Random | None = None) -> StallingsGraph:
    """Fold a labelled graph (plus forced vertex identifications), core it, canonicalize."""
    parent = list(range(n))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    out: list[dict[int, int]] = [dict() for _ in range(n)]
    pending = list(edges)
    merges = list(identify)
    if rng is not None:
        rng.shuffle(pending)
        rng.shuffle(merges)

    def take(lst):
        if rng is None:
            return lst.pop()
        i = rng.randrange(len(lst))
        lst[i], lst[-1] = lst[-1], lst[i]
        return lst.pop()

    while pending or merges:
        if merges and (not pending or rng is None or rng.random() < 0.5):
            u, v = take(merges)
            u, v = find(u), find(v)
            if u == v:
                continue
            if len(out[u]) < len(out[v]):
                u, v = v, u
            parent[v] = u
            pending.extend((u, x, w) for x, w in out[v].items())
            out[v] = {}
            continue
        p, x, q = take(pending)
        p, q = find(p), find(q)
        t = out[p].get(x)
        if t is None:
            out[p][x] = q
        else:
            t = find(t)
            if t != q:
                merges.append((t, q))
            continue
        t2 = out[q].get(x ^ 1)
        if t2 is None:
            out[q][x ^ 1] = p
        else:
            t2 = find(t2)
            if t2 != p:
                merges.append((t2, p))

    adj = {}
    for v in range(n):
        if find(v) == v:
            adj[v] = {x: find(w) for x, w in out[v].items()}
    return _core_and_canonicalize(alphabet, adj, find(base))


def _core_and_canonicalize(alphabet: Alphabet, adj: dict[int, dict[int, int]], base: int) -> StallingsGraph:
    # iterated removal of degree ≤ 1 vertices other than the base
    stack = [v for v, d in adj.items() if v != base and len(d) <= 1]
    while stack:
        v = stack.pop()
        if v not in adj or v == base or len(adj[v]) > 1:
            continue
        for x, w in adj.pop(v).items():
            if w in adj and w != v:
                adj[w].pop(x ^ 1, None)
                if w != base and len(adj[w]) <= 1:
                    stack.append(w)
    k = alphabet.signed_size
    number = {base: 0}
    order = [base]
    i = 0
    rows = []
    while i < len(order):
        v = order[i]
        row = [NONE] * k
        for x in range(k):
            w = adj[v].get(x)
            if w is None:
                continue
            if w not in number:
                number[w] = len(order)
                order.append(w)
            row[x] = number[w]
        rows.append(row)
        i += 1
    return StallingsGraph(alphabet, rows)


def _bouquet_edges(words: Iterable[Sequence[int]]) -> tuple[int, list[tuple[int, int, int]]]:
    n = 1
    edges = []
    for w in words:
        w = reduce_codes(w)
        if not w:
            continue
        cur = 0
        for i, x in enumerate(w):
            if i == len(w) - 1:
                nxt = 0
            else:
                nxt = n
                n += 1
            edges.append((cur, x, nxt))
            cur = nxt
    return n, edges


# ---------------------------------------------------------------------------
# Subgroups


class Subgroup:
    """A finitely generated subgroup of F(A), represented by its Stallings graph."""

    def __init__(self, graph: StallingsGraph):
        self.graph = graph
        self.alphabet = graph.alphabet

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.graph == other.graph

    def __hash__(self):
        return hash(self.graph)

    def __repr__(self):
        gens = ",".join(str(w) for w in self.basis) or "1"
        return f"<{gens}>"

    @property
    def key(self):
        return self.graph.key

    @cached_property
    def _tree(self):
        """BFS spanning tree: path words from the base and the non-tree positive edges."""
        g = self.graph
        path: dict[int, tuple[int, ...]] = {0: ()}
        tree = set()
        todo = deque([0])
        while todo:
            v = todo.popleft()
            for x, w in enumerate(g.rows[v]):
                if w >= 0 and w not in path:
                    path[w] = path[v] + (x,)
                    tree.add((v, x))
                    tree.add((w, x ^ 1))
                    todo.append(w)
        extra = [(p, x, q) for p, x, q in g.positive_edges() if (p, x) not in tree]
        return path, extra

    @cached_property
    def basis(self) -> list[ReducedWord]:
        path, extra = self._tree
        return [ReducedWord(self.alphabet, reduce_codes(path[p] + (x,) + invert_codes(path[q])))
                for p, x, q in extra]

    @property
    def rank(self) -> int:
        return len(self._tree[1])

    @property
    def index(self) -> int | float:
        return self.graph.vertices if self.graph.is_complete() else math.inf

    def is_trivial(self) -> bool:
        return self.graph.vertices == 1 and self.rank == 0

    def is_whole(self) -> bool:
        return self.graph.vertices == 1 and self.graph.is_complete()

    def coordinates(self, w: Word | Sequence[int]) -> list[int] | None:
        """Exponent vector of ``w`` in :attr:`basis`, or None if ``w`` is not in the subgroup."""
        letters = w.letters if isinstance(w, Word) else tuple(w)
        _, extra = self._tree
        col = {}
        for i, (p, x, q) in enumerate(extra):
            col[(p, x)] = (i, 1)
            col[(q, x ^ 1)] = (i, -1)
        vec = [0] * len(extra)
        v = 0
        rows = self.graph.rows
        for x in letters:
            hit = col.get((v, x))
            if hit:
                vec[hit[0]] += hit[1]
            v = rows[v][x]
            if v < 0:
                return None
        return vec if v == 0 else None

    @cached_property
    def language(self) -> automata.WordAutomaton:
        """Automaton accepting exactly the reduced words of the subgroup."""
        g = self.graph
        edges = [(p, x, q) for p, row in enumerate(g.rows) for x, q in enumerate(row) if q >= 0]
        raw = automata.WordAutomaton(self.alphabet, g.vertices, edges, [0], [0])
        # inverse automata are closed under cancellation, so the reduced-word
        # filter alone yields the Benois normal form
        return automata.intersect_with_filter(raw)

    def contains_word(self, w: Word) -> bool:
        return member(self, w)


def _check(h: Subgroup | Word, k: Subgroup | Word) -> None:
    if h.alphabet != k.alphabet:
        raise AlphabetMismatch(f"alphabets differ: {h.alphabet} vs {k.alphabet}")


def fold(generators: Iterable[Word | Sequence[int]], alphabet: Alphabet | None = None,
         rng: random.Random | None = None) -> Subgroup:
    """Stallings graph of the subgroup generated by ``generators``.

    ``rng`` randomizes the folding order (the result does not depend on it).
    """
    words = []
    for g in generators:
        if isinstance(g, Word):
            if alphabet is None:
                alphabet = g.alphabet
            elif g.alphabet != alphabet:
                raise AlphabetMismatch(f"generator over {g.alphabet}, expected {alphabet}")
            words.append(g.letters)
        else:
            words.append(tuple(g))
    if alphabet is None:
        raise AlphabetMismatch("an empty generator list needs an explicit alphabet")
    n, edges = _bouquet_edges(words)
    return Subgroup(_fold(alphabet, n, edges, 0, rng=rng))


def subgroup(alphabet: Alphabet, text: str) -> Subgroup:
    """``subgroup(A, "aa,b")`` is ⟨a², b⟩."""
    gens = [alphabet.parse(t) for t in text.split(",") if t.strip()]
    return fold(gens, alphabet)


def trivial(alphabet: Alphabet) -> Subgroup:
    return fold([], alphabet)


def whole(alphabet: Alphabet) -> Subgroup:
    return fold(alphabet.generators(), alphabet)


def member(h: Subgroup, w: Word | Sequence[int]) -> bool:
    if isinstance(w, Word):
        _check(h, w)
        letters = reduce_codes(w.letters)
    else:
        letters = reduce_codes(w)
    return h.graph.read(letters) == 0


def subgroup_report(h: Subgroup) -> dict:
    return {"basis": h.basis, "rank": h.rank, "index": h.index, "language": h.language}


def intersect(h: Subgroup, k: Subgroup) -> Subgroup:
    _check(h, k)
    g1, g2 = h.graph, k.graph
    kk = h.alphabet.signed_size
    idx = {(0, 0): 0}
    order = [(0, 0)]
    adj: dict[int, dict[int, int]] = {}
    i = 0
    while i < len(order):
        p, q = order[i]
        row = {}
        for x in range(kk):
            p2, q2 = g1.rows[p][x], g2.rows[q][x]
            if p2 >= 0 and q2 >= 0:
                j = idx.get((p2, q2))
                if j is None:
                    j = idx[(p2, q2)] = len(order)
                    order.append((p2, q2))
                row[x] = j
        adj[i] = row
        i += 1
    return Subgroup(_core_and_canonicalize(h.alphabet, adj, 0))


def conjugate(h: Subgroup, g: Word) -> Subgroup:
    """g⁻¹·H·g."""
    _check(h, g)
    gl = reduce_codes(g.letters)
    if not gl:
        return h
    gi = invert_codes(gl)
    return fold([reduce_codes(gi + b.letters + gl) for b in h.basis], h.alphabet)


def join(parts: Sequence[Subgroup | Word]) -> Subgroup:
    """Subgroup generated by the given subgroups and words."""
    if not parts:
        raise ValueError("join needs a nonempty list")
    alphabet = parts[0].alphabet
    words = []
    for part in parts:
        if part.alphabet != alphabet:
            raise AlphabetMismatch(f"alphabets differ: {part.alphabet} vs {alphabet}")
        if isinstance(part, Subgroup):
            words.extend(b.letters for b in part.basis)
        else:
            words.append(part.letters)
    return fold(words, alphabet)


def contains(h: Subgroup, k: Subgroup) -> bool:
    """True iff K ⊆ H."""
    _check(h, k)
    return all(member(h, b) for b in k.basis)


def overgroups(h: Subgroup) -> list[Subgroup]:
    """All subgroups whose Stallings graph is a quotient of 𝒜(H), H first.

    Explored breadth first by merging one vertex pair at a time and refolding.
    """
    cap = limits().max_overgroups
    alphabet = h.alphabet
    seen = {h.graph}
    order = [h.graph]
    i = 0
    while i < len(order):
        g = order[i]
        i += 1
        edges = g.positive_edges()
        for u in range(g.vertices):
            for v in range(u + 1, g.vertices):
                q = _fold(alphabet, g.vertices, edges, 0, identify=[(u, v)])
                if q not in seen:
                    seen.add(q)
                    order.append(q)
                    if len(order) > cap:
                        raise ResourceCapError(f"more than {cap} overgroups")
    return [Subgroup(g) for g in order]


__all__ = [
    "StallingsGraph", "Subgroup", "fold", "subgroup", "trivial", "whole", "member",
    "subgroup_report", "intersect", "conjugate", "join", "contains", "overgroups",
]
