"""
Exact counting identities
=========================

Multiplying by s = prod S maps A(T, S u P) up to x one-to-one onto
A(T u S, P) up to x*s.  Splitting the square-free numbers by which primes
of T divide them partitions A[x].  Both identities hold exactly at every x.
"""
from sqfdensity.counting import bijection_identity, induction_identity, partition_identity
from sqfdensity.density import divisor_sum_check

###############################################################################
# Bijection: odd square-free numbers up to 50 vs even ones up to 100.
print("bijection  x=50  T={} S={2}:", bijection_identity(50, [], [2]))
print("bijection  x=1e5 T={3} S={2,7} P={5}:", bijection_identity(10**5, [3], [2, 7], [5]))

###############################################################################
# Partition of A[x] over the subsets of T.
total, parts = partition_identity(10**4, [2, 3, 5])
print(f"A[1e4] = {total} = {' + '.join(map(str, parts))}")

###############################################################################
# A(T, {})[x/p] = E(x/p) + E(x) with E counting A(T u {p}, {}).
print("induction  x=1e6 p=2:", induction_identity(10**6, [], 2))

###############################################################################
# The subset sums of prod S equal prod (1 + p); this fixes the density
# of A(T, {}) once the density of all square-free numbers is known.
print("divisor sums T={2,3,5,7}:", divisor_sum_check([2, 3, 5, 7]))
