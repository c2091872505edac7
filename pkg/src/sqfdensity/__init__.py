"""Natural densities of square-free numbers with prescribed prime divisors."""
from .counting import (
    CountQuery,
    CountReport,
    count_naive,
    count_sieve,
    count_squarefree_mobius,
    empirical_density,
)
from .density import (
    SIX_OVER_PI2,
    ConstraintError,
    DensityValue,
    PrimeConstraint,
    ResidueClassDensityError,
    density,
    density_factor,
    divisor_sum_check,
)
from .primes import PrimeList, ResidueClass, primes_in_class, primes_up_to
from .products import ProductTrace, partial_product, truncation_for_epsilon

__version__ = "0.1.0"

__all__ = [
    "SIX_OVER_PI2",
    "ConstraintError",
    "CountQuery",
    "CountReport",
    "DensityValue",
    "PrimeConstraint",
    "PrimeList",
    "ProductTrace",
    "ResidueClass",
    "ResidueClassDensityError",
    "count_naive",
    "count_sieve",
    "count_squarefree_mobius",
    "density",
    "density_factor",
    "divisor_sum_check",
    "empirical_density",
    "partial_product",
    "primes_in_class",
    "primes_up_to",
    "truncation_for_epsilon",
]
