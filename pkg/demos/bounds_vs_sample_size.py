"""How the three uniform concentration bounds behave as n grows.

We track the scenario where the effective rank grows as r(n) = n / log n
(unit spectral norm, Gaussian design constant K = sqrt(2), radius R = 1)
and the failure probability shrinks as delta = 1/n^2.  The four-term
bound keeps shrinking; the classical Rademacher/McDiarmid bound and its
subgaussian extension pick up an extra log n and stall.

Run:  python demos/bounds_vs_sample_size.py
"""
import math

from ulln import BoundParams, bound_classical, bound_extended, bound_theorem, ulln_ratio_table

print(f"{'n':>12} {'r(n)':>12} {'r/n':>8} {'theorem':>9} {'classical':>10} {'extended':>9}")
for exponent in range(3, 13):
    n = 10**exponent
    params = BoundParams(
        n=n,
        R=1.0,
        delta=1.0 / n**2,
        trace_sigma=n / math.log(n),
        norm_sigma=1.0,
        K=math.sqrt(2.0),
    )
    print(
        f"{n:>12.0e} {params.trace_sigma:>12.4g} {params.trace_sigma / n:>8.4f} "
        f"{bound_theorem(params).total:>9.4f} {bound_classical(params).total:>10.4f} "
        f"{bound_extended(params).total:>9.4f}"
    )

print()
print("Sufficiency diagnostics for the uniform law (want columns to vanish):")
table = ulln_ratio_table([(10**k, 10**k / math.log(10**k), 1.0) for k in range(2, 7)])
print(f"{'n':>10} {'r':>12} {'r/n':>10} {'r log n/n':>10}")
for n, r, ratio, log_ratio in table.rows:
    print(f"{n:>10.0f} {r:>12.2f} {ratio:>10.5f} {log_ratio:>10.5f}")
print(f"r/n strictly decreasing:        {table.r_over_n_decreasing}")
print(f"r log n / n strictly decreasing: {table.r_log_n_over_n_decreasing}")
