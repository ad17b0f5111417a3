"""Estimate the uniform deviation sup |R_n - R| over the ball and hold it
against the explicit bounds.

At p = 1 the search can be validated against an exhaustive grid with a
deterministic quadrature population risk; at p = 5 the multistart ascent
provides a lower-bound estimate.  Both sit far below the four-term bound
at these sample sizes, which is the expected direction: the bound's
constants are loose by design.

Run:  python demos/deviation_vs_bounds.py
"""
import math

from ulln import BoundParams, GenerativeConfig, bound_theorem, generate_dataset, make_covariance
from ulln.datagen import derive_seed, sample_theta_star
from ulln.deviation import sup_deviation_grid, sup_deviation_search

print("p = 1: multistart ascent against the exhaustive grid oracle")
cov1 = make_covariance("identity", 1)
for seed in (1, 2, 3):
    theta_star = sample_theta_star(1, derive_seed(seed, 0))
    gen = GenerativeConfig(p=1, n=25, cov=cov1, beta=2.0, theta_star=theta_star, seed=derive_seed(seed, 1))
    data, _ = generate_dataset(gen)
    grid = sup_deviation_grid(data, gen, 1.0, 20_000)
    search = sup_deviation_search(data, gen, 1.0, starts=8, budget=100, seed=seed)
    print(f"  seed {seed}: grid={grid.sup_value:.6f}  search={search.sup_value:.6f} "
          f"(gap {abs(grid.sup_value - search.sup_value):.2e})")

print()
print("p = 5, reciprocal spectrum: deviation estimates vs the bound as n grows")
cov5 = make_covariance("reciprocal", 5)
for n in (125, 500, 2000):
    theta_star = sample_theta_star(5, derive_seed(100 + n, 0))
    gen = GenerativeConfig(p=5, n=n, cov=cov5, beta=1e3, theta_star=theta_star, seed=derive_seed(100 + n, 1))
    data, _ = generate_dataset(gen)
    est = sup_deviation_search(data, gen, 1.0, starts=6, budget=4000, seed=n)
    params = BoundParams(n=n, R=1.0, delta=0.05, trace_sigma=cov5.trace,
                         norm_sigma=cov5.spectral_norm, K=math.sqrt(2.0))
    total = bound_theorem(params).total
    print(f"  n={n:>5}: sup estimate {est.sup_value:.4f}  (pop-risk stderr {est.pop_risk_stderr:.1e})"
          f"  four-term bound {total:.3f}")
