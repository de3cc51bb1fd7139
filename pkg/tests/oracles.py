"""Reference computations that share no code with the package."""
import math

import numpy as np
from scipy import optimize, special


def Q(x):
    return special.ndtr(-np.asarray(x, dtype=float))


def u1_max_over_r(A, P, variant="as-printed"):
    """max over r > 1/(sqrt(1+P)-1) of the single-letter bound, by grid + bounded Brent."""
    s = math.sqrt(1.0 + P)
    r0 = 1.0 / (s - 1.0)

    def g(u):
        r = r0 + np.exp(u)
        if variant == "pinsker-consistent":
            d = np.maximum(Q(r * A) - 2.0 * Q((r * s - 1.0) * A), 0.0)
            return 2.0 * d * d
        d = Q(r * A) - Q((r * s - 1.0) * A)
        return 8.0 * d * d

    u = np.linspace(-25.0, math.log(60.0 / A + 10.0 * r0), 800)
    k = int(np.argmax(g(u)))
    lo, hi = u[max(k - 1, 0)], u[min(k + 1, len(u) - 1)]
    res = optimize.minimize_scalar(lambda t: -g(t), bounds=(lo, hi), method="bounded",
                                   options={"xatol": 1e-13})
    return max(float(-res.fun), float(g(u[k]))), r0 + math.exp(res.x)


def rhs_budget(n, P, eps, log_M, variant="as-printed"):
    rhs = 0.5 * math.log1p(P) - log_M / n + math.log(2.0 / (1.0 - eps)) / n
    if variant != "no-sqrt-term":
        rhs += math.sqrt(6.0 * (3.0 + 4.0 * P) / n)
    return rhs


def min_peak_oracle(n, P, eps, log_M, variant="as-printed"):
    """Coarse log-grid scan for the sign change, then plain bisection."""
    rhs = rhs_budget(n, P, eps, log_M, variant)
    f = lambda a: u1_max_over_r(a, P, variant)[0] - rhs
    grid = np.logspace(-7, 4, 111)
    vals = [f(a) for a in grid]
    if vals[0] <= 0:
        return 0.0
    k = next(i for i, v in enumerate(vals) if v < 0)
    lo, hi = grid[k - 1], grid[k]
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        lo, hi = (mid, hi) if f(mid) >= 0 else (lo, mid)
    return 0.5 * (lo + hi)
