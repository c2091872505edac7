"""
Partial products and epsilon cutoffs
====================================

Exact partial products of p/(1+p) over a class of primes, the telescoping
identity behind the complement count, and the least cutoff M that pushes
6/pi^2 times the partial product below a target.
"""
from sqfdensity.primes import ResidueClass
from sqfdensity.products import partial_product, telescoping_check, truncation_for_epsilon

cls = ResidueClass(4, 3)

trace = partial_product(cls, 60)
for e in trace.entries:
    print(f"p={e.prime:>3}  partial={str(e.partial):>28}  log={e.log_partial:.6f}")

###############################################################################
# sum_k 1/(1+p_k) prod_{i<k} p_i/(1+p_i) = 1 - prod_{i<=L} p_i/(1+p_i)
lhs, rhs = telescoping_check(cls, 100)
print("telescoping over 100 primes equal:", lhs == rhs)

###############################################################################
# Smaller targets need much larger cutoffs: the decay is only a power of log M.
for eps in (0.3, 0.2, 0.15):
    M, bound = truncation_for_epsilon(cls, eps)
    print(f"eps={eps}: M={M:>8}  bound={bound:.6f}")
