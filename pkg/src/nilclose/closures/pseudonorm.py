"""Catalog-bounded pro-nilpotent pseudonorm |g| = 2^(−r(g)) and distance."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import PreconditionError
from ..freegroup import ReducedWord, multiply, invert


@dataclass(frozen=True)
class DyadicNorm:
    """2^(−r) for a positive integer r, or 0 when ``r`` is None."""

    r: int | None

    def __post_init__(self):
        if self.r is not None and self.r < 1:
            raise ValueError("exponent must be positive")

    @property
    def value(self) -> Fraction:
        return Fraction(0) if self.r is None else Fraction(1, 2 ** self.r)

    def __str__(self):
        return "0" if self.r is None else f"2^-{self.r}"


@dataclass(frozen=True)
class PseudonormResult:
    norm: DyadicNorm
    witness: object = None

    def to_json(self) -> dict:
        return {"norm": str(self.norm), "r": self.norm.r, "value": str(self.norm.value),
                "witness": self.witness.describe() if self.witness else None}


def pseudonorm(g: ReducedWord, catalog) -> PseudonormResult:
    """Smallest image size r over catalog homomorphisms φ with φ(g) ≠ 1, as 2^(−r).

    Image sizes stand in for the index [F:ker φ]; the two agree for onto maps.
    Restricting to a catalog can only make r larger, so the result is a lower
    bound for the true pseudonorm.
    """
    from ..oracle import enum_homs

    if not catalog:
        raise PreconditionError("empty catalog")
    best = None
    for group in catalog:
        if best is not None and group.order >= best[0]:
            continue
        for phi in enum_homs(g.alphabet, group):
            if phi.apply(g.letters) == group.identity:
                continue
            size = phi.image_size()
            if best is None or size < best[0]:
                best = (size, phi)
    if best is None:
        return PseudonormResult(DyadicNorm(None))
    return PseudonormResult(DyadicNorm(best[0]), best[1])


def distance(g1: ReducedWord, g2: ReducedWord, catalog) -> PseudonormResult:
    """d(g₁, g₂) = |g₁ g₂⁻¹|."""
    return pseudonorm(multiply(g1, invert(g2)), catalog)
