"""Finite automata over Ã = A ∪ A⁻¹ and rational expressions.

Automata are immutable.  Labels are signed-letter codes (see
:mod:`nilclose.freegroup`).  An automaton may carry ``reduced=True``, meaning
every accepted word is freely reduced; the boolean operations
(``intersect_reduced`` and friends) live inside the universe of reduced words
and insist on that flag.

Language equality and containment go through minimal DFAs, which double as
canonical forms.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, Union as _U

from .errors import AlphabetMismatch, ReducedFlagError, ResourceCapError, limits
from .freegroup import Alphabet, ReducedWord, Word, reduce_codes

# ---------------------------------------------------------------------------
# Rational expressions


@dataclass(frozen=True)
class Empty:
    def __str__(self):
        return "0"


@dataclass(frozen=True)
class Lit:
    word: ReducedWord

    def __str__(self):
        return str(self.word) or "1"


@dataclass(frozen=True)
class Union:
    items: tuple

    def __str__(self):
        return "(" + "|".join(str(x) for x in self.items) + ")"


@dataclass(frozen=True)
class Concat:
    items: tuple

    def __str__(self):
        return "".join(_paren(x) for x in self.items)


@dataclass(frozen=True)
class Star:
    item: object

    def __str__(self):
        return _paren(self.item, star=True) + "*"


RationalExpression = _U[Empty, Lit, Union, Concat, Star]
EMPTY = Empty()


def _paren(x, star=False):
    s = str(x)
    if isinstance(x, (Union, Empty)):
        return s
    if isinstance(x, Star) and not star:
        return s
    if isinstance(x, Lit) and (len(x.word) <= 1 or not star):
        return s
    return "(" + s + ")"


def lit(word: ReducedWord) -> Lit:
    return Lit(word)


def union(*items) -> RationalExpression:
    flat = []
    for x in items:
        if isinstance(x, Empty):
            continue
        for y in (x.items if isinstance(x, Union) else (x,)):
            if y not in flat:
                flat.append(y)
    if not flat:
        return EMPTY
    if len(flat) == 1:
        return flat[0]
    return Union(tuple(flat))


def concat(*items) -> RationalExpression:
    if not items:
        raise ValueError("concat needs at least one item")
    flat: list = []
    eps = None
    for x in items:
        if isinstance(x, Empty):
            return EMPTY
        for y in (x.items if isinstance(x, Concat) else (x,)):
            if isinstance(y, Lit):
                if not y.word.letters:
                    eps = y
                    continue
                if flat and isinstance(flat[-1], Lit):
                    merged = flat[-1].word * y.word
                    if merged.letters:
                        flat[-1] = Lit(merged)
                    else:
                        eps = Lit(merged)
                        flat.pop()
                    continue
            flat.append(y)
    if not flat:
        return eps
    if len(flat) == 1:
        return flat[0]
    return Concat(tuple(flat))


def star(item) -> RationalExpression:
    """Kleene star; ``star(EMPTY)`` is kept symbolic since it has no alphabet."""
    if isinstance(item, Star):
        return item
    if isinstance(item, Lit) and not item.word.letters:
        return item
    return Star(item)


def _concat_or_eps(alphabet: Alphabet, *items):
    return concat(*items)


def _star_or_eps(alphabet: Alphabet, item):
    if isinstance(item, Empty):
        return Lit(alphabet.identity())
    return star(item)


def expression_alphabet(e) -> Alphabet | None:
    if isinstance(e, Lit):
        return e.word.alphabet
    if isinstance(e, (Union, Concat)):
        for x in e.items:
            a = expression_alphabet(x)
            if a is not None:
                return a
    if isinstance(e, Star):
        return expression_alphabet(e.item)
    return None


def parse_expression(text: str, alphabet: Alphabet) -> RationalExpression:
    """Parse the small grammar: tokens, juxtaposition, ``|``, ``*``, parens, ``1``, ``0``."""
    src = "".join(text.split())
    pos = 0

    def peek():
        return src[pos] if pos < len(src) else ""

    def parse_union():
        nonlocal pos
        parts = [parse_concat()]
        while peek() == "|":
            pos += 1
            parts.append(parse_concat())
        return union(*parts) if len(parts) > 1 else parts[0]

    def parse_concat():
        parts = []
        while peek() and peek() not in "|)":
            parts.append(parse_star())
        if not parts:
            return Lit(alphabet.identity())
        return _concat_or_eps(alphabet, *parts)

    def parse_star():
        nonlocal pos
        base = parse_atom()
        while peek() == "*":
            pos += 1
            base = _star_or_eps(alphabet, base)
        return base

    def parse_atom():
        nonlocal pos
        c = peek()
        if c == "(":
            pos += 1
            inner = parse_union()
            if peek() != ")":
                raise ValueError(f"expected ')' at position {pos} in {text!r}")
            pos += 1
            return inner
        if c == "0":
            pos += 1
            return EMPTY
        if c == "1":
            pos += 1
            return Lit(alphabet.identity())
        if c.isalpha():
            end = pos + 1
            while end < len(src) and src[end].isdigit():
                end += 1
            code = alphabet.code(src[pos:end])
            pos = end
            return Lit(ReducedWord(alphabet, (code,)))
        raise ValueError(f"unexpected {c!r} at position {pos} in {text!r}")

    result = parse_union()
    if pos != len(src):
        raise ValueError(f"trailing input at position {pos} in {text!r}")
    return result


# ---------------------------------------------------------------------------
# Automata


class WordAutomaton:
    """Finite automaton over the signed alphabet of ``alphabet``."""

    def __init__(self, alphabet: Alphabet, states: int, edges: Iterable[tuple[int, int, int]],
                 initials: Iterable[int], finals: Iterable[int], reduced: bool = False):
        self.alphabet = alphabet
        self.states = int(states)
        self.edges = tuple(sorted(set((int(p), int(x), int(q)) for p, x, q in edges)))
        self.initials = frozenset(initials)
        self.finals = frozenset(finals)
        self.reduced = bool(reduced)
        k = alphabet.signed_size
        for p, x, q in self.edges:
            if not (0 <= p < self.states and 0 <= q < self.states):
                raise ValueError(f"edge {(p, x, q)} references a missing state")
            if not 0 <= x < k:
                raise AlphabetMismatch(f"edge label {x} outside alphabet {alphabet}")
        for s in self.initials | self.finals:
            if not 0 <= s < self.states:
                raise ValueError(f"state {s} out of range")

    def __repr__(self):
        return (f"WordAutomaton(states={self.states}, edges={len(self.edges)}, "
                f"reduced={self.reduced})")

    @cached_property
    def out(self) -> list[dict[int, tuple[int, ...]]]:
        adj: list[dict[int, list[int]]] = [dict() for _ in range(self.states)]
        for p, x, q in self.edges:
            adj[p].setdefault(x, []).append(q)
        return [{x: tuple(v) for x, v in d.items()} for d in adj]

    @cached_property
    def dfa(self) -> "DFA":
        """Minimal DFA of the literal language, in canonical numbering."""
        return minimize(determinize(self))

    def to_json(self) -> dict:
        a = self.alphabet
        return {
            "alphabet": list(a.letters),
            "states": self.states,
            "initials": sorted(self.initials),
            "finals": sorted(self.finals),
            "edges": [[p, a.token(x), q] for p, x, q in self.edges],
            "reduced": self.reduced,
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "WordAutomaton":
        if isinstance(data, str):
            data = json.loads(data)
        a = Alphabet(tuple(data["alphabet"]))
        edges = [(p, a.code(lbl), q) for p, lbl, q in data["edges"]]
        return cls(a, data["states"], edges, data["initials"], data["finals"], data.get("reduced", False))

    def to_dot(self, name: str = "A") -> str:
        lines = [f"digraph {name} {{", "  rankdir=LR;"]
        for s in range(self.states):
            shape = "doublecircle" if s in self.finals else "circle"
            lines.append(f'  {s} [shape={shape}];')
        for i, s in enumerate(sorted(self.initials)):
            lines.append(f'  init{i} [shape=point]; init{i} -> {s};')
        for p, x, q in self.edges:
            lines.append(f'  {p} -> {q} [label="{self.alphabet.token(x)}"];')
        lines.append("}")
        return "\n".join(lines)

    def check_reduced(self) -> bool:
        """True iff no accepted word contains a cancelling pair."""
        return not _product_with_cancellation(self)


def _product_with_cancellation(a: WordAutomaton) -> bool:
    # detector state: last letter seen (or -1) and whether a cancellation occurred
    t = trim(a)
    if not t.initials or not t.finals:
        return False
    seen = set()
    todo = deque()
    for s in t.initials:
        todo.append((s, -1))
        seen.add((s, -1))
    out = t.out
    while todo:
        p, last = todo.popleft()
        for x, qs in out[p].items():
            if last >= 0 and x == last ^ 1:
                return True  # t is trimmed, so this prefix extends to an accepted word
            for q in qs:
                if (q, x) not in seen:
                    seen.add((q, x))
                    todo.append((q, x))
    return False


# ---------------------------------------------------------------------------
# Builders with silent transitions


class _Builder:
    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet
        self.n = 0
        self.edges: list[tuple[int, int, int]] = []
        self.eps: list[tuple[int, int]] = []

    def state(self) -> int:
        self.n += 1
        return self.n - 1

    def copy_in(self, a: WordAutomaton) -> int:
        off = self.n
        self.n += a.states
        self.edges.extend((p + off, x, q + off) for p, x, q in a.edges)
        return off

    def build(self, initials, finals, reduced=False) -> WordAutomaton:
        return eliminate_silent(self.alphabet, self.n, self.edges, self.eps, initials, finals, reduced)


def _closures(n: int, eps: Iterable[tuple[int, int]]) -> list[int]:
    direct = [0] * n
    for p, q in eps:
        direct[p] |= 1 << q
    reach = [(1 << p) | direct[p] for p in range(n)]
    changed = True
    while changed:
        changed = False
        for p in range(n):
            m = reach[p]
            acc = m
            rest = m & ~(1 << p)
            while rest:
                low = rest & -rest
                acc |= reach[low.bit_length() - 1]
                rest ^= low
            if acc != m:
                reach[p] = acc
                changed = True
    return reach


def _bits(m: int):
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


def eliminate_silent(alphabet: Alphabet, n: int, edges, eps, initials, finals, reduced=False) -> WordAutomaton:
    reach = _closures(n, eps)
    fmask = 0
    for f in finals:
        fmask |= 1 << f
    by_src: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for p, x, q in edges:
        by_src[p].append((x, q))
    new_edges = set()
    for p in range(n):
        for r in _bits(reach[p]):
            for x, q in by_src[r]:
                new_edges.add((p, x, q))
    new_finals = [p for p in range(n) if reach[p] & fmask]
    return trim(WordAutomaton(alphabet, n, new_edges, initials, new_finals, reduced))


def trim(a: WordAutomaton) -> WordAutomaton:
    """Restrict to states that are both accessible and co-accessible; renumber."""
    out = a.out
    acc = set(a.initials)
    todo = list(a.initials)
    while todo:
        p = todo.pop()
        for qs in out[p].values():
            for q in qs:
                if q not in acc:
                    acc.add(q)
                    todo.append(q)
    back: list[list[int]] = [[] for _ in range(a.states)]
    for p, x, q in a.edges:
        back[q].append(p)
    co = set(a.finals)
    todo = list(a.finals)
    while todo:
        q = todo.pop()
        for p in back[q]:
            if p not in co:
                co.add(p)
                todo.append(p)
    keep = sorted(acc & co)
    if len(keep) == a.states:
        return a
    idx = {s: i for i, s in enumerate(keep)}
    edges = [(idx[p], x, idx[q]) for p, x, q in a.edges if p in idx and q in idx]
    return WordAutomaton(a.alphabet, len(keep), edges,
                         [idx[s] for s in a.initials if s in idx],
                         [idx[s] for s in a.finals if s in idx], a.reduced)


# ---------------------------------------------------------------------------
# Basic automata


def empty_automaton(alphabet: Alphabet) -> WordAutomaton:
    return WordAutomaton(alphabet, 0, [], [], [], reduced=True)


def epsilon_automaton(alphabet: Alphabet) -> WordAutomaton:
    return WordAutomaton(alphabet, 1, [], [0], [0], reduced=True)


def word_automaton(w: Word) -> WordAutomaton:
    n = len(w.letters)
    edges = [(i, x, i + 1) for i, x in enumerate(w.letters)]
    return WordAutomaton(w.alphabet, n + 1, edges, [0], [n], reduced=w.is_reduced())


def reduced_filter(alphabet: Alphabet) -> WordAutomaton:
    """All reduced words: state 0 is the start, state 1+x remembers last letter x."""
    k = alphabet.signed_size
    edges = []
    for f in range(k + 1):
        for x in range(k):
            if f > 0 and (f - 1) == x ^ 1:
                continue
            edges.append((f, x, 1 + x))
    return WordAutomaton(alphabet, k + 1, edges, [0], range(k + 1), reduced=True)


universal_automaton = reduced_filter


def compile_expression(e, alphabet: Alphabet | None = None) -> WordAutomaton:
    """Automaton whose literal language projects onto the subset denoted by ``e``."""
    alphabet = alphabet or expression_alphabet(e)
    if alphabet is None:
        raise AlphabetMismatch("cannot infer the alphabet of an expression without literals")
    b = _Builder(alphabet)

    def go(node) -> tuple[int, int]:
        s, t = b.state(), b.state()
        if isinstance(node, Empty):
            pass
        elif isinstance(node, Lit):
            if node.word.alphabet != alphabet:
                raise AlphabetMismatch(f"literal over {node.word.alphabet}, expected {alphabet}")
            cur = s
            for x in node.word.letters:
                nxt = b.state()
                b.edges.append((cur, x, nxt))
                cur = nxt
            b.eps.append((cur, t))
        elif isinstance(node, Union):
            for item in node.items:
                i, j = go(item)
                b.eps.append((s, i))
                b.eps.append((j, t))
        elif isinstance(node, Concat):
            cur = s
            for item in node.items:
                i, j = go(item)
                b.eps.append((cur, i))
                cur = j
            b.eps.append((cur, t))
        elif isinstance(node, Star):
            i, j = go(node.item)
            b.eps.extend([(s, t), (s, i), (j, s)])
        else:
            raise TypeError(f"not a rational expression: {node!r}")
        return s, t

    s, t = go(e)
    return b.build([s], [t])


def accepts(a: WordAutomaton, w: Word | Sequence[int]) -> bool:
    """Literal membership, no free reduction applied."""
    if isinstance(w, Word):
        if w.alphabet != a.alphabet:
            raise AlphabetMismatch(f"word over {w.alphabet}, automaton over {a.alphabet}")
        letters = w.letters
    else:
        letters = tuple(w)
    cur = set(a.initials)
    out = a.out
    for x in letters:
        nxt = set()
        for p in cur:
            nxt.update(out[p].get(x, ()))
        if not nxt:
            return False
        cur = nxt
    return bool(cur & a.finals)


# ---------------------------------------------------------------------------
# Benois reduction


class Saturation:
    """Silent-transition saturation of an automaton.

    ``reach[p]`` is a bitmask of the states reachable from ``p`` by words that
    freely reduce to the empty word.  With ``witnesses=True`` the object also
    keeps, for each such pair, one concrete cancelling word
    (``witness[(p, q)]``) and ``cancel_bound``, the longest of them.
    """

    def __init__(self, a: WordAutomaton, witnesses: bool = False):
        self.automaton = a
        n = a.states
        out = a.out
        direct: dict[tuple[int, int], tuple[int, ...]] = {}
        wit: dict[tuple[int, int], tuple[int, ...]] = {(p, p): () for p in range(n)} if witnesses else {}
        reach = [1 << p for p in range(n)]
        rounds = 0
        while True:
            added = False
            for p, x, r in a.edges:
                for s in _bits(reach[r]):
                    for q in out[s].get(x ^ 1, ()):
                        if reach[p] >> q & 1 or (p, q) in direct:
                            continue
                        direct[(p, q)] = (x,) + wit[(r, s)] + (x ^ 1,) if witnesses else ()
                        added = True
            rounds += 1
            if not added:
                break
            if witnesses:
                reach, wit = self._close_with_witnesses(n, direct)
            else:
                reach = _closures(n, direct)
        self.reach = reach
        self.witness = wit
        self.rounds = rounds
        self.cancel_bound = max((len(v) for v in wit.values()), default=0)

    @staticmethod
    def _close_with_witnesses(n, direct):
        succ: list[list[int]] = [[] for _ in range(n)]
        for (p, q) in direct:
            succ[p].append(q)
        reach = [0] * n
        wit: dict[tuple[int, int], tuple[int, ...]] = {}
        for p in range(n):
            wit[(p, p)] = ()
            m = 1 << p
            todo = deque([p])
            while todo:
                u = todo.popleft()
                for v in succ[u]:
                    if not m >> v & 1:
                        m |= 1 << v
                        wit[(p, v)] = wit[(p, u)] + direct[(u, v)]
                        todo.append(v)
            reach[p] = m
        return reach, wit

    @cached_property
    def silent_successors(self) -> list[list[int]]:
        return [[q for q in _bits(m) if q != p] for p, m in enumerate(self.reach)]

    def silent_free(self) -> WordAutomaton:
        a = self.automaton
        eps = [(p, q) for p in range(a.states) for q in _bits(self.reach[p]) if p != q]
        return eliminate_silent(a.alphabet, a.states, a.edges, eps, a.initials, a.finals)

    def preimage(self, u: Sequence[int]) -> tuple[int, ...] | None:
        """A word v in L(a) with reduce(v) == u, found through the saturated automaton.

        Needs ``witnesses=True``.
        """
        if not self.witness:
            raise ValueError("preimage needs a saturation built with witnesses=True")
        a = self.automaton
        out = a.out
        silent = self.silent_successors
        # states: (automaton state, position in u); moves: letter or silent jump
        start = [(s, 0) for s in a.initials]
        prev: dict[tuple[int, int], tuple] = {st: None for st in start}
        todo = deque(start)
        goal = None
        while todo:
            st = todo.popleft()
            p, i = st
            if i == len(u) and p in a.finals:
                goal = st
                break
            for q in silent[p]:
                nxt = (q, i)
                if nxt not in prev:
                    prev[nxt] = (st, self.witness[(p, q)])
                    todo.append(nxt)
            if i < len(u):
                for q in out[p].get(u[i], ()):
                    nxt = (q, i + 1)
                    if nxt not in prev:
                        prev[nxt] = (st, (u[i],))
                        todo.append(nxt)
        if goal is None:
            return None
        parts = []
        st = goal
        while prev[st] is not None:
            st, piece = prev[st]
            parts.append(piece)
        return tuple(c for piece in reversed(parts) for c in piece)


def intersect_with_filter(a: WordAutomaton) -> WordAutomaton:
    """Product with the reduced-word filter; the result is flagged reduced."""
    out = a.out
    idx: dict[tuple[int, int], int] = {}
    edges = []
    todo = deque()
    for s in a.initials:
        idx[(s, -1)] = len(idx)
        todo.append((s, -1))
    cap = limits().max_states
    while todo:
        p, last = todo.popleft()
        i = idx[(p, last)]
        for x, qs in out[p].items():
            if last >= 0 and x == last ^ 1:
                continue
            for q in qs:
                key = (q, x)
                j = idx.get(key)
                if j is None:
                    j = idx[key] = len(idx)
                    if j >= cap:
                        raise ResourceCapError(f"reduced-word product exceeded {cap} states")
                    todo.append(key)
                edges.append((i, x, j))
    finals = [i for (p, _), i in idx.items() if p in a.finals]
    return trim(WordAutomaton(a.alphabet, len(idx), edges, range(len(a.initials)), finals, reduced=True))


def benois_reduce(a: WordAutomaton) -> WordAutomaton:
    """Automaton accepting exactly the reduced forms of the words accepted by ``a``."""
    if a.reduced:
        return a
    a = trim(a)
    return intersect_with_filter(Saturation(a).silent_free())


# ---------------------------------------------------------------------------
# Rational and boolean combinations


def _same_alphabet(a: WordAutomaton, b: WordAutomaton) -> None:
    if a.alphabet != b.alphabet:
        raise AlphabetMismatch(f"alphabets differ: {a.alphabet} vs {b.alphabet}")


def _need_reduced(*automata: WordAutomaton) -> None:
    for a in automata:
        if not a.reduced:
            raise ReducedFlagError("reduced-word operation needs automata flagged reduced")


def union_automata(automata: Sequence[WordAutomaton], alphabet: Alphabet) -> WordAutomaton:
    b = _Builder(alphabet)
    initials, finals = [], []
    for a in automata:
        if a.alphabet != alphabet:
            raise AlphabetMismatch(f"alphabets differ: {a.alphabet} vs {alphabet}")
        off = b.copy_in(a)
        initials.extend(s + off for s in a.initials)
        finals.extend(s + off for s in a.finals)
    reduced = all(a.reduced for a in automata)
    return trim(WordAutomaton(alphabet, b.n, b.edges, initials, finals, reduced))


def concat_automata(automata: Sequence[WordAutomaton], alphabet: Alphabet) -> WordAutomaton:
    if not automata:
        return epsilon_automaton(alphabet)
    b = _Builder(alphabet)
    prev_finals = None
    initials = []
    for a in automata:
        if a.alphabet != alphabet:
            raise AlphabetMismatch(f"alphabets differ: {a.alphabet} vs {alphabet}")
        off = b.copy_in(a)
        ins = [s + off for s in a.initials]
        if prev_finals is None:
            initials = ins
        else:
            b.eps.extend((f, s) for f in prev_finals for s in ins)
        prev_finals = [s + off for s in a.finals]
    return b.build(initials, prev_finals)


def star_automaton(a: WordAutomaton) -> WordAutomaton:
    b = _Builder(a.alphabet)
    hub = b.state()
    off = b.copy_in(a)
    b.eps.extend((hub, s + off) for s in a.initials)
    b.eps.extend((f + off, hub) for f in a.finals)
    return b.build([hub], [hub])


def intersect_reduced(a: WordAutomaton, b: WordAutomaton) -> WordAutomaton:
    _same_alphabet(a, b)
    _need_reduced(a, b)
    ao, bo = a.out, b.out
    idx: dict[tuple[int, int], int] = {}
    todo = deque()
    for p in a.initials:
        for q in b.initials:
            idx[(p, q)] = len(idx)
            todo.append((p, q))
    edges = []
    cap = limits().max_states
    while todo:
        p, q = todo.popleft()
        i = idx[(p, q)]
        for x, ps in ao[p].items():
            qs = bo[q].get(x)
            if not qs:
                continue
            for p2 in ps:
                for q2 in qs:
                    j = idx.get((p2, q2))
                    if j is None:
                        j = idx[(p2, q2)] = len(idx)
                        if j >= cap:
                            raise ResourceCapError(f"intersection exceeded {cap} states")
                        todo.append((p2, q2))
                    edges.append((i, x, j))
    finals = [i for (p, q), i in idx.items() if p in a.finals and q in b.finals]
    n_init = len(a.initials) * len(b.initials)
    return trim(WordAutomaton(a.alphabet, len(idx), edges, range(n_init), finals, reduced=True))


def complement_reduced(a: WordAutomaton) -> WordAutomaton:
    _need_reduced(a)
    d = determinize(a)
    k = a.alphabet.signed_size
    # complete the DFA with a sink, flip finals, then cut back to reduced words
    sink = d.n
    trans = [row[:] for row in d.trans] + [[sink] * k]
    for row in trans:
        for x in range(k):
            if row[x] < 0:
                row[x] = sink
    n = d.n + 1
    start = d.start if d.start >= 0 else sink
    finals = [s for s in range(n) if s not in d.finals]
    edges = [(p, x, trans[p][x]) for p in range(n) for x in range(k)]
    full = WordAutomaton(a.alphabet, n, edges, [start], finals)
    return intersect_with_filter(full)


def combine(op: str, a: WordAutomaton, b: WordAutomaton | None = None) -> WordAutomaton:
    binary = {"union", "concat", "intersect_reduced", "difference_reduced"}
    if op in binary:
        if b is None:
            raise ValueError(f"{op} needs two automata")
        _same_alphabet(a, b)
    elif b is not None:
        raise ValueError(f"{op} takes one automaton")
    if op == "union":
        return union_automata([a, b], a.alphabet)
    if op == "concat":
        return concat_automata([a, b], a.alphabet)
    if op == "star":
        return star_automaton(a)
    if op == "intersect_reduced":
        return intersect_reduced(a, b)
    if op == "complement_reduced":
        return complement_reduced(a)
    if op == "difference_reduced":
        _need_reduced(a, b)
        return intersect_reduced(a, complement_reduced(b))
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# Deterministic automata


class DFA:
    """Partial DFA; ``trans[s][x] == -1`` means no transition.  ``start == -1``
    encodes the empty language (then ``n == 0``)."""

    def __init__(self, k: int, trans: list[list[int]], start: int, finals: Iterable[int]):
        self.k = k
        self.trans = trans
        self.n = len(trans)
        self.start = start
        self.finals = frozenset(finals)

    @cached_property
    def key(self) -> tuple:
        return (self.k, self.start, tuple(tuple(r) for r in self.trans), tuple(sorted(self.finals)))

    def accepts(self, letters: Sequence[int]) -> bool:
        s = self.start
        for x in letters:
            if s < 0:
                return False
            s = self.trans[s][x]
        return s >= 0 and s in self.finals

    def to_automaton(self, alphabet: Alphabet, reduced: bool) -> WordAutomaton:
        edges = [(p, x, q) for p, row in enumerate(self.trans) for x, q in enumerate(row) if q >= 0]
        initials = [self.start] if self.start >= 0 else []
        return WordAutomaton(alphabet, self.n, edges, initials, self.finals, reduced)


def determinize(a: WordAutomaton) -> DFA:
    k = a.alphabet.signed_size
    masks = [[0] * k for _ in range(a.states)]
    for p, x, q in a.edges:
        masks[p][x] |= 1 << q
    fmask = 0
    for f in a.finals:
        fmask |= 1 << f
    init = 0
    for s in a.initials:
        init |= 1 << s
    if not init:
        return DFA(k, [], -1, [])
    idx = {init: 0}
    order = [init]
    trans: list[list[int]] = []
    cap = limits().max_states
    i = 0
    while i < len(order):
        m = order[i]
        row = [-1] * k
        for x in range(k):
            t = 0
            for s in _bits(m):
                t |= masks[s][x]
            if t:
                j = idx.get(t)
                if j is None:
                    j = idx[t] = len(order)
                    if j >= cap:
                        raise ResourceCapError(f"determinization exceeded {cap} states")
                    order.append(t)
                row[x] = j
        trans.append(row)
        i += 1
    finals = [j for j, m in enumerate(order) if m & fmask]
    return DFA(k, trans, 0, finals)


def minimize(d: DFA) -> DFA:
    """Minimal trimmed DFA, renumbered canonically by BFS in letter order."""
    k = d.k
    if d.start < 0:
        return d
    # co-accessible states
    back: list[list[int]] = [[] for _ in range(d.n)]
    for p, row in enumerate(d.trans):
        for q in row:
            if q >= 0:
                back[q].append(p)
    live = set(d.finals)
    todo = list(d.finals)
    while todo:
        q = todo.pop()
        for p in back[q]:
            if p not in live:
                live.add(p)
                todo.append(p)
    if d.start not in live:
        return DFA(k, [], -1, [])
    trans = [[(q if q in live else -1) for q in row] for row in d.trans]
    states = sorted(live)
    cls = {s: (1 if s in d.finals else 0) for s in states}
    n_cls = len(set(cls.values()))
    while True:
        sigs = {}
        new = {}
        for s in states:
            sig = (cls[s],) + tuple(cls[q] if q >= 0 else -1 for q in trans[s])
            new[s] = sigs.setdefault(sig, len(sigs))
        cls = new
        if len(sigs) == n_cls:
            break
        n_cls = len(sigs)
    # canonical BFS numbering of classes
    rep = {}
    for s in states:
        rep.setdefault(cls[s], s)
    numbering = {cls[d.start]: 0}
    order = [cls[d.start]]
    rows = []
    i = 0
    while i < len(order):
        c = order[i]
        s = rep[c]
        row = [-1] * k
        for x in range(k):
            q = trans[s][x]
            if q >= 0:
                cq = cls[q]
                if cq not in numbering:
                    numbering[cq] = len(order)
                    order.append(cq)
                row[x] = numbering[cq]
        rows.append(row)
        i += 1
    finals = [numbering[cls[s]] for s in states if s in d.finals and cls[s] in numbering]
    return DFA(k, rows, 0, set(finals))


def _dfa_subset(a: DFA, b: DFA) -> bool:
    """L(a) ⊆ L(b)."""
    if a.start < 0:
        return True
    seen = {(a.start, b.start)}
    todo = [(a.start, b.start)]
    while todo:
        p, q = todo.pop()
        if p in a.finals and (q < 0 or q not in b.finals):
            return False
        for x in range(a.k):
            p2 = a.trans[p][x]
            if p2 < 0:
                continue
            q2 = b.trans[q][x] if q >= 0 else -1
            if (p2, q2) not in seen:
                seen.add((p2, q2))
                todo.append((p2, q2))
    return True


def compare(a: WordAutomaton, b: WordAutomaton) -> str:
    """One of ``equal``, ``strict_subset``, ``strict_superset``, ``incomparable``."""
    _same_alphabet(a, b)
    _need_reduced(a, b)
    da, db = a.dfa, b.dfa
    if da.key == db.key:
        return "equal"
    sub = _dfa_subset(da, db)
    sup = _dfa_subset(db, da)
    if sub and sup:
        return "equal"
    if sub:
        return "strict_subset"
    if sup:
        return "strict_superset"
    return "incomparable"


def is_subset(a: WordAutomaton, b: WordAutomaton) -> bool:
    return compare(a, b) in ("equal", "strict_subset")


def is_empty(a: WordAutomaton) -> bool:
    return trim(a).states == 0 or not trim(a).finals


def is_universal(a: WordAutomaton) -> bool:
    return compare(a, reduced_filter(a.alphabet)) == "equal"


def minimal(a: WordAutomaton) -> WordAutomaton:
    """The canonical minimal DFA as a WordAutomaton, keeping the reduced flag."""
    return a.dfa.to_automaton(a.alphabet, a.reduced)


# ---------------------------------------------------------------------------
# State elimination


def extract_expression(a: WordAutomaton) -> RationalExpression:
    """Rational expression with the same projected subset, by state elimination."""
    alphabet = a.alphabet
    a = trim(a)
    if not a.initials or not a.finals:
        return EMPTY
    n = a.states
    s, t = n, n + 1
    lab: dict[tuple[int, int], object] = {}

    def add(p, q, e):
        lab[(p, q)] = union(lab[(p, q)], e) if (p, q) in lab else e

    for p, x, q in a.edges:
        add(p, q, Lit(ReducedWord(alphabet, (x,))))
    eps = Lit(alphabet.identity())
    for i in a.initials:
        add(s, i, eps)
    for f in a.finals:
        add(f, t, eps)
    remaining = set(range(n))
    while remaining:
        def degree(r):
            return sum(1 for (p, q) in lab if (p == r) != (q == r))
        r = min(remaining, key=lambda v: (degree(v), v))
        remaining.discard(r)
        loop = lab.pop((r, r), None)
        ins = [(p, e) for (p, q), e in lab.items() if q == r]
        outs = [(q, e) for (p, q), e in lab.items() if p == r]
        for p, _ in ins:
            del lab[(p, r)]
        for q, _ in outs:
            del lab[(r, q)]
        mid = _star_or_eps(alphabet, loop) if loop is not None else None
        for p, e1 in ins:
            for q, e2 in outs:
                parts = [e1, e2] if mid is None else [e1, mid, e2]
                add(p, q, _concat_or_eps(alphabet, *parts))
    return lab.get((s, t), EMPTY)


# ---------------------------------------------------------------------------
# Convenience


def language_words(a: WordAutomaton, max_length: int) -> set[tuple[int, ...]]:
    """All accepted words of length ≤ ``max_length`` (literal, no reduction)."""
    found = set()
    out = a.out
    stack = [((), frozenset(a.initials))]
    while stack:
        w, states = stack.pop()
        if states & a.finals:
            found.add(w)
        if len(w) == max_length:
            continue
        step: dict[int, set[int]] = {}
        for p in states:
            for x, qs in out[p].items():
                step.setdefault(x, set()).update(qs)
        for x, qs in step.items():
            stack.append((w + (x,), frozenset(qs)))
    return found


def translate(g: ReducedWord, a: WordAutomaton) -> WordAutomaton:
    """Reduced-word automaton of g·π(L(a))."""
    if not g.letters:
        return benois_reduce(a)
    return benois_reduce(concat_automata([word_automaton(g), a], a.alphabet))


__all__ = [
    "Empty", "Lit", "Union", "Concat", "Star", "EMPTY", "RationalExpression",
    "lit", "union", "concat", "star", "parse_expression", "expression_alphabet",
    "WordAutomaton", "DFA", "compile_expression", "benois_reduce", "Saturation",
    "combine", "accepts", "compare", "is_subset", "is_empty", "is_universal",
    "extract_expression", "reduced_filter", "universal_automaton", "empty_automaton",
    "epsilon_automaton", "word_automaton", "union_automata", "concat_automata",
    "star_automaton", "intersect_reduced", "complement_reduced", "determinize",
    "minimize", "minimal", "trim", "language_words", "translate", "reduce_codes",
]
