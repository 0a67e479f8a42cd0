"""Fractional moments of a skewed stable law, checked against brute-force oracles."""

from stablemoments import MomentQuery, StableParams1, abs_moment, moment, signed_moment
from stablemoments.oracle import moment_by_density_quadrature, moment_by_monte_carlo

law = StableParams1(alpha=1.5, beta=0.5, gamma=2.0, delta=0.3)
print(f"law: {law}")

for p in (0.3, 0.7, 1.2):
    q = MomentQuery(p, "plus")
    fast = moment(law, q).value
    slow = moment_by_density_quadrature(law, q)
    print(f"E X_+^{p}: analytic {fast:.12f}  density quadrature {slow:.12f}")

p = 0.7
print(f"E|X|^{p} = {abs_moment(law, p):.10f}")
print(f"E X^<{p}> = {signed_moment(law, p):.10f}")

mc = moment_by_monte_carlo(law, MomentQuery(p, "abs"), n=1_000_000, seed=1)
print(f"Monte Carlo E|X|^{p} = {mc.estimate:.6f} +- {mc.stderr:.6f}")

# negative orders go through the conjecture and come back flagged
neg = moment(law, MomentQuery(-0.4, "abs"))
print(f"E|X|^-0.4 = {neg.value:.10f} (experimental: {neg.experimental})")
