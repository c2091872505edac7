"""
Forbidding a residue class of primes
====================================

Square-free numbers with no prime factor = r mod m (gcd(r, m) = 1) have
density 0.  At finite x this shows up as a ratio that keeps falling, and
stays under 6/pi^2 times the partial product of p/(1+p) over the class.
"""
from sqfdensity.experiments import emit_report, run_bertram
from sqfdensity.primes import ResidueClass
from sqfdensity.products import ap_reciprocal_sum, log_product_bound

###############################################################################
# Decade sweep for the primes 1 mod 4 (sums of two squares).
res = run_bertram(4, 1, [10**4, 10**5, 10**6, 10**7])
emit_report([res], "csv")
print("verdict:", "pass" if res.verdict else "fail")

###############################################################################
# Why the product goes to 0: -log(p/(1+p)) > 1/(2p), and the reciprocal sum
# over the class grows like log log M / phi(m).
cls = ResidueClass(4, 1)
for M in (10**3, 10**5, 10**7):
    neg_log, half = log_product_bound(cls, M)
    s, ref, dev = ap_reciprocal_sum(cls, M)
    print(f"M={M:>8}  -log prod={neg_log:.4f} > sum/2={half:.4f}   sum 1/p={s:.4f}  loglogM/2={ref:.4f}  dev={dev:+.4f}")
