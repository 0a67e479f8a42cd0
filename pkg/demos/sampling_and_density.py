"""Random variates against the density and distribution function."""

import numpy as np

from stablemoments import StableParams1, cdf, pdf, prob_positive, sample

law = StableParams1(alpha=1.2, beta=-0.6)
draws = sample(law, 200_000, seed=7).values
print(f"P(X > 0): analytic {prob_positive(law):.5f}  empirical {np.mean(draws > 0):.5f}")

for x in (-3.0, -1.0, 0.0, 1.0, 3.0):
    print(f"x={x:+.1f}  pdf {float(pdf(x, law)):.6f}  cdf {float(cdf(x, law)):.6f}"
          f"  empirical cdf {np.mean(draws <= x):.6f}")
