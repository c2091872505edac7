"""
Densities of square-free numbers
================================

Count square-free numbers up to x with a segmented sieve and compare the
ratio with the exact density 6/pi^2 * prod_T 1/(1+p) * prod_P p/(1+p).
"""
from sqfdensity import CountQuery, PrimeConstraint, density, empirical_density

###############################################################################
# The exact density is a rational multiple of 6/pi^2.  The rational part is
# also the share of square-free numbers that land in A(T, P).
cases = {
    "all square-free": PrimeConstraint(),
    "odd": PrimeConstraint(P={2}),
    "even": PrimeConstraint(T={2}),
    "multiple of 30, not of 7": PrimeConstraint(T={2, 3, 5}, P={7}),
}
for name, c in cases.items():
    d = density(c)
    print(f"{name:>26}: factor {str(d.factor):>6}   density {d.value:.6f}")

###############################################################################
# Finite-x ratios approach those values; the error shrinks roughly like
# 1/sqrt(x).
for x in (10**4, 10**5, 10**6, 10**7):
    rep = empirical_density(CountQuery(x, cases["multiple of 30, not of 7"]))
    print(f"x={x:>9}  count={rep.count:>7}  ratio={rep.ratio:.7f}  deviation={rep.deviation:+.2e}")
