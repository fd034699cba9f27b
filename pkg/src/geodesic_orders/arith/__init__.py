"""Integer, polynomial and certified numeric arithmetic."""

from .intpoly import IntPoly, count_real_roots, poly_discriminant, resultant, sturm_count
from .modp import factor_mod_p
from .primes import factorint, is_prime, is_square, primes_up_to, squarefree_part
from .roots import CertifiedBall, complex_roots

__all__ = [
    "CertifiedBall",
    "IntPoly",
    "complex_roots",
    "count_real_roots",
    "factor_mod_p",
    "factorint",
    "is_prime",
    "is_square",
    "poly_discriminant",
    "primes_up_to",
    "resultant",
    "squarefree_part",
    "sturm_count",
]
