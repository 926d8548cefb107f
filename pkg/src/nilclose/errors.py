"""Exception hierarchy and configurable resource caps."""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass, replace


class NilcloseError(Exception):
    """Base class for all library errors."""


class AlphabetMismatch(NilcloseError):
    """Objects over different free groups were combined, or a letter is unknown."""


class ReducedFlagError(NilcloseError):
    """A reduced-word operation received an automaton not flagged as reduced."""


class ResourceCapError(NilcloseError):
    """A configured size budget was exceeded."""


class ContainmentError(NilcloseError):
    """A subgroup containment precondition does not hold."""


class MonoidError(NilcloseError):
    """A monoid table is malformed (associativity, identity, generation)."""


class PreconditionError(NilcloseError):
    """An argument violates a documented precondition."""


class InternalError(NilcloseError):
    """A runtime self-check failed; indicates a bug rather than bad input."""


@dataclass(frozen=True)
class Limits:
    max_states: int = 200_000
    max_overgroups: int = 20_000
    max_monoid: int = 4096
    max_homs: int = 1_000_000


_limits: contextvars.ContextVar[Limits] = contextvars.ContextVar("limits", default=Limits())


def limits() -> Limits:
    return _limits.get()


@contextlib.contextmanager
def caps(**overrides):
    """Temporarily override resource caps, e.g. ``with caps(max_states=10_000):``."""
    token = _limits.set(replace(_limits.get(), **overrides))
    try:
        yield _limits.get()
    finally:
        _limits.reset(token)
