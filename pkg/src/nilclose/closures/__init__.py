"""Closures of subgroups and rational subsets of a free group.

The pro-p and pro-nilpotent closures rest on the profinite closure of a
rational subset, a finite union of translated subgroup products.
"""

from .primes import (ALL_PRIMES, NO_PRIMES, ElementaryDivisors, PrimeSet, dense_primes,
                     inclusion_matrix, is_prime, prime_factors, smith_normal_form)
from .rational import ClosureNormalForm, Term, nf_to_automaton, nil_closure_rational, pro_g_closure
from .pseudonorm import DyadicNorm, PseudonormResult, distance, pseudonorm
from .subgroups import (nil_closure_product, nil_closure_subgroup, p_closure, p_closure_product,
                        primes_closed, product_automaton, simplify_product, union_p_dense)

__all__ = [
    "ALL_PRIMES", "ClosureNormalForm", "dense_primes", "distance", "DyadicNorm",
    "ElementaryDivisors", "inclusion_matrix", "is_prime", "nf_to_automaton",
    "nil_closure_product", "nil_closure_rational", "nil_closure_subgroup", "NO_PRIMES",
    "p_closure", "p_closure_product", "prime_factors", "primes_closed", "PrimeSet",
    "pro_g_closure", "product_automaton", "pseudonorm", "PseudonormResult",
    "simplify_product", "smith_normal_form", "Term", "union_p_dense",
]
