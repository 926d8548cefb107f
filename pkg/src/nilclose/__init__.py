"""Closures of rational subsets of free groups in profinite-type topologies,
with the finite-monoid decision procedures built on them."""

__version__ = "0.1.0"
