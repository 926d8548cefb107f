"""Prime sets and the p-density of one subgroup inside another."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from ..errors import ContainmentError
from ..stallings import Subgroup, contains


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    n = abs(n)
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class PrimeSet:
    """A finite or cofinite set of primes.

    ``listed`` holds the members when finite and the excluded primes when
    cofinite.
    """

    cofinite: bool
    listed: frozenset = frozenset()

    def __post_init__(self):
        listed = frozenset(int(p) for p in self.listed)
        bad = [p for p in listed if not is_prime(p)]
        if bad:
            raise ValueError(f"not prime: {sorted(bad)}")
        object.__setattr__(self, "listed", listed)

    @classmethod
    def finite(cls, primes: Iterable[int] = ()) -> "PrimeSet":
        return cls(False, frozenset(primes))

    @classmethod
    def all_except(cls, primes: Iterable[int] = ()) -> "PrimeSet":
        return cls(True, frozenset(primes))

    @property
    def kind(self) -> str:
        return "cofinite" if self.cofinite else "finite"

    def __contains__(self, p: int) -> bool:
        if not is_prime(p):
            return False
        return (p not in self.listed) if self.cofinite else (p in self.listed)

    def is_empty(self) -> bool:
        return not self.cofinite and not self.listed

    def is_all(self) -> bool:
        return self.cofinite and not self.listed

    def __and__(self, other: "PrimeSet") -> "PrimeSet":
        if self.cofinite and other.cofinite:
            return PrimeSet(True, self.listed | other.listed)
        if self.cofinite:
            return PrimeSet(False, other.listed - self.listed)
        if other.cofinite:
            return PrimeSet(False, self.listed - other.listed)
        return PrimeSet(False, self.listed & other.listed)

    def __or__(self, other: "PrimeSet") -> "PrimeSet":
        return ~(~self & ~other)

    def __invert__(self) -> "PrimeSet":
        return PrimeSet(not self.cofinite, self.listed)

    def __str__(self) -> str:
        body = "{" + ", ".join(str(p) for p in sorted(self.listed)) + "}"
        if not self.cofinite:
            return body
        return "all primes" if not self.listed else f"all primes except {body}"

    def to_json(self) -> dict:
        return {"kind": self.kind, "listed": sorted(self.listed)}

    @classmethod
    def from_json(cls, data: dict) -> "PrimeSet":
        return cls(data["kind"] == "cofinite", frozenset(data["listed"]))


ALL_PRIMES = PrimeSet(True)
NO_PRIMES = PrimeSet(False)


@dataclass(frozen=True)
class ElementaryDivisors:
    divisors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.divisors)


def smith_normal_form(m: Sequence[Sequence[int]]) -> ElementaryDivisors:
    """Nonzero diagonal entries d₁ | d₂ | … of the Smith normal form of ``m``."""
    a = [[int(x) for x in row] for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    if any(len(r) != cols for r in a):
        raise ValueError("ragged matrix")
    divs = []
    for t in range(min(rows, cols)):
        pivot = _min_entry(a, t, range(t, rows), range(t, cols))
        if pivot is None:
            break
        _move_to(a, t, *pivot)
        while True:
            p = a[t][t]
            clean = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // p
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // p
                    for i in range(t, rows):
                        a[i][j] -= q * a[i][t]
                    clean = clean and a[t][j] == 0
            if not clean:
                cands = [(i, t) for i in range(t + 1, rows) if a[i][t]] + \
                        [(t, j) for j in range(t + 1, cols) if a[t][j]]
                i, j = min(cands, key=lambda ij: abs(a[ij[0]][ij[1]]))
                _move_to(a, t, i, j)
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if a[i][j] % p), None)
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
        divs.append(abs(a[t][t]))
    return ElementaryDivisors(tuple(divs))


def _min_entry(a, t, rows, cols):
    best = None
    for i in rows:
        for j in cols:
            if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                best = (i, j)
    return best


def _move_to(a, t, i, j):
    a[t], a[i] = a[i], a[t]
    for row in a:
        row[t], row[j] = row[j], row[t]


def inclusion_matrix(k: Subgroup, l: Subgroup) -> list[list[int]]:
    """Rows: coordinates of K's basis elements in L's basis."""
    rows = []
    for b in k.basis:
        v = l.coordinates(b)
        if v is None:
            raise ContainmentError(f"{k} is not contained in {l}")
        rows.append(v)
    return rows


def dense_primes(k: Subgroup, l: Subgroup) -> PrimeSet:
    """Primes p such that K is p-dense in L (K must be a subgroup of L).

    K is p-dense in L exactly when it maps onto the elementary abelian
    quotient L/[L,L]Lᵖ, i.e. the inclusion matrix has full column rank mod p.
    """
    if not contains(l, k):
        raise ContainmentError(f"{k} is not contained in {l}")
    if l.rank == 0:
        return ALL_PRIMES
    ed = smith_normal_form(inclusion_matrix(k, l))
    if ed.rank < l.rank:
        return NO_PRIMES
    return PrimeSet(True, frozenset(prime_factors(ed.divisors[-1])))
