"""Capacity of the AWGN channel under joint peak and average power limits.

Two kinds of result live here:

* closed-form bounds on the backoff ``(1/2) ln(1+P) - C(A, P)`` from the
  Gaussian capacity (`gap_converse`, `gap_achievability`), plus the
  truncated-Gaussian moments used by the achievability side;
* a numerical solver for ``C(A, P)`` restricted to a uniform input grid
  (`capacity_amplitude_constrained`), certified by the usual
  capacity-iteration upper/lower sandwich.

Unit noise variance and nats throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .errors import DomainError, SolverError
from .scalar_math import binary_entropy, normal_pdf, q_function

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_HALF_LOG_2PIE = 0.5 * math.log(2.0 * math.pi * math.e)


@dataclass(frozen=True)
class AmplitudeConstraint:
    A: float

    def __post_init__(self):
        if not self.A > 0:
            raise DomainError(f"peak amplitude must be positive, got {self.A}")


@dataclass(frozen=True)
class TruncatedGaussianStats:
    theta: float
    inner_power: float
    outer_power: float


@dataclass
class SmithCapacityResult:
    """Numerical optimum on a grid.

    ``value_nats`` is the mutual information of the returned input (a
    certified lower bound on the grid capacity); ``upper_nats`` is the dual
    upper bound, so the grid capacity lies in ``[value_nats, upper_nats]``.
    """

    value_nats: float
    support: np.ndarray
    probs: np.ndarray
    power_used: float
    iterations: int
    gap_to_gaussian: float
    upper_nats: float = math.nan
    A: float = math.nan
    P: float = math.nan
    grid_size: int = 0
    tol: float = math.nan
    multiplier: float = 0.0
    method: str = ""
    extras: dict = field(default_factory=dict)

    @property
    def sandwich_gap(self) -> float:
        return self.upper_nats - self.value_nats

    def as_dict(self) -> dict:
        return {
            "A": self.A,
            "P": self.P,
            "grid_size": self.grid_size,
            "tol": self.tol,
            "value_nats": self.value_nats,
            "upper_nats": self.upper_nats,
            "sandwich_gap": self.sandwich_gap,
            "gap_to_gaussian": self.gap_to_gaussian,
            "power_used": self.power_used,
            "multiplier": self.multiplier,
            "iterations": self.iterations,
            "method": self.method,
            "support": [float(v) for v in self.support],
            "probs": [float(v) for v in self.probs],
        }


def _check_ap(A, P):
    if not A > 0:
        raise DomainError(f"peak amplitude must be positive, got {A}")
    if not P > 0:
        raise DomainError(f"SNR must be positive, got {P}")


# ---------------------------------------------------------------------------
# closed-form bounds
# ---------------------------------------------------------------------------

def log_gap_converse(A: float, P: float) -> float:
    """Natural log of `gap_converse`; finite even where the gap underflows."""
    _check_ap(A, P)
    s = math.sqrt(1.0 + P)
    a1 = math.sqrt(A * A + P * math.log1p(P))
    width = (s - 1.0) * math.log1p(P) / (A + a1)
    b = s * a1 / P + A / P
    # 8 * width^2 * phi(b)^2
    return math.log(8.0) + 2.0 * math.log(width) - b * b - 2.0 * _LOG_SQRT_2PI


def gap_converse(A: float, P: float) -> float:
    """Lower bound on (1/2) ln(1+P) - C(A, P).

        8 ((sqrt(1+P) - 1) ln(1+P) / (A + A1))^2  phi(sqrt(1+P) A1/P + A/P)^2

    with A1 = sqrt(A^2 + P ln(1+P)).
    """
    return math.exp(log_gap_converse(A, P))


def gap_achievability(A: float, P: float) -> float:
    """Upper bound on (1/2) ln(1+P) - C(A, P) from a truncated Gaussian input.

        [Q(t) ln(1 + A sqrt(P)/(1+P) * phi(t)/Q(t)) + h(2Q(t))] / (1 - 2Q(t)),
        t = A / sqrt(P)
    """
    _check_ap(A, P)
    theta = A / math.sqrt(P)
    tail = q_function(theta)
    if tail == 0.0:
        return 0.0
    hazard = normal_pdf(theta) / tail
    body = tail * math.log1p(A * math.sqrt(P) / (1.0 + P) * hazard)
    return (body + binary_entropy(2.0 * tail)) / (1.0 - 2.0 * tail)


def log_gap_achievability(A: float, P: float) -> float:
    """Natural log of `gap_achievability`, computed from log Q in the far tail."""
    _check_ap(A, P)
    theta = A / math.sqrt(P)
    log_tail = float(special.log_ndtr(-theta))
    tail = math.exp(log_tail)
    log_hazard = -0.5 * theta * theta - _LOG_SQRT_2PI - log_tail
    # h(2q)/q = -2 ln(2q) - (1-2q) ln(1-2q)/q, the last ratio by series when q is tiny
    two_q = 2.0 * tail
    log_two_q = math.log(2.0) + log_tail
    if tail > 1e-5:
        ratio = math.log1p(-two_q) / tail
    else:
        ratio = -2.0 - 2.0 * tail - (8.0 / 3.0) * tail * tail
    ent_over_q = -2.0 * log_two_q - (1.0 - two_q) * ratio
    body = math.log1p(A * math.sqrt(P) / (1.0 + P) * math.exp(log_hazard))
    bracket = body + ent_over_q
    return log_tail + math.log(bracket) - math.log1p(-two_q)


def truncated_gaussian_stats(A: float, P: float) -> TruncatedGaussianStats:
    """Second moments of N(0, P) conditioned on |X| <= A and on |X| > A."""
    _check_ap(A, P)
    theta = A / math.sqrt(P)
    tail = q_function(theta)
    phi = normal_pdf(theta)
    inner = P - 2.0 * theta * P * phi / (1.0 - 2.0 * tail)
    outer = P + theta * P * phi / tail if tail > 0 else math.inf
    return TruncatedGaussianStats(theta=theta, inner_power=inner, outer_power=outer)


# ---------------------------------------------------------------------------
# mutual information of a discrete input
# ---------------------------------------------------------------------------

def _mixture_density(y, support, probs):
    d = np.subtract.outer(np.atleast_1d(y), support)
    return np.exp(-0.5 * d * d) @ probs / math.sqrt(2.0 * math.pi)


def mutual_info_discrete_awgn(support, probs, span: float = 10.0, epsabs: float = 1e-13) -> float:
    """I(X; X+Z) in nats for a finitely supported X and Z ~ N(0, 1).

    The output entropy is integrated piecewise with adaptive Gauss-Kronrod
    over unit-width panels on [min(x) - span, max(x) + span].
    """
    x = np.asarray(support, dtype=float).ravel()
    p = np.asarray(probs, dtype=float).ravel()
    if x.shape != p.shape or x.size == 0:
        raise DomainError("support and probs must be non-empty and of equal length")
    if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-9:
        raise DomainError("probs must be a probability vector")
    keep = p > 0
    x, p = x[keep], p[keep]
    if np.ptp(x) == 0.0:
        return 0.0

    def integrand(y):
        f = _mixture_density(y, x, p)[0]
        return -f * math.log(f) if f > 0 else 0.0

    lo, hi = x.min() - span, x.max() + span
    edges = np.linspace(lo, hi, int(math.ceil(hi - lo)) + 1)
    h_out = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        val, _ = integrate.quad(integrand, a, b, epsabs=epsabs / len(edges), epsrel=1e-13, limit=200)
        h_out += val
    return h_out - _HALF_LOG_2PIE


# ---------------------------------------------------------------------------
# numerical capacity on a grid
# ---------------------------------------------------------------------------

@dataclass
class _Discretization:
    """Input grid ``x``, output quadrature grid and channel matrix ``W``.

    ``W[i, j] = phi(y_j - x_i) * h`` so each row is the trapezoid weight of
    the conditional output density; ``c[i] = sum_j W ln W`` approximates
    -h(Z) (the ln h offsets cancel in every mutual information).
    """

    x: np.ndarray
    W: np.ndarray
    c: np.ndarray

    @classmethod
    def build(cls, A, grid_size, step, span):
        x = A * np.linspace(-1.0, 1.0, grid_size)
        x = 0.5 * (x - x[::-1])
        m = int(math.ceil((A + span) / step))
        y = step * np.arange(-m, m + 1)
        d = y[None, :] - x[:, None]
        logw = -0.5 * d * d - _LOG_SQRT_2PI + math.log(step)
        W = np.exp(logw)
        c = np.sum(W * logw, axis=1)
        return cls(x, W, c)

    def evaluate(self, p):
        """Return (I(p), D) where D[i] = D(W_i || pW)."""
        q = np.maximum(p @ self.W, 1e-300)
        D = self.c - self.W @ np.log(q)
        return float(p @ D), D


def _dual_upper(D, x2, P, power_active):
    """min over lam >= 0 of max_i (D_i - lam x_i^2) + lam P.

    Valid upper bound on the grid capacity for any output law used to form
    D.  Convex piecewise-linear in lam; the minimiser is found by ternary
    search on a bracket.
    """
    if not power_active:
        return float(D.max()), 0.0

    def f(lam):
        return float(np.max(D - lam * x2) + lam * P)

    hi = 1.0
    while f(2.0 * hi) < f(hi) and hi < 1e12:
        hi *= 2.0
    lo, hi = 0.0, 2.0 * hi
    for _ in range(200):
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if f(m1) <= f(m2):
            hi = m2
        else:
            lo = m1
    lam = 0.5 * (lo + hi)
    best = min((f(0.0), 0.0), (f(lam), lam))
    return best


def _power_projection(logp, x2, P):
    """Exponentially tilt ``exp(logp)`` so that E[x^2] <= P; returns (logp, lam)."""

    def power(lam):
        z = logp - lam * x2
        z = z - z.max()
        w = np.exp(z)
        return float(w @ x2 / w.sum())

    lam = 0.0
    if power(0.0) > P:
        hi = 1.0
        while power(hi) > P:
            hi *= 2.0
        lo = 0.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if power(mid) > P:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-15 * hi:
                break
        lam = hi
    z = logp - lam * x2
    z = z - special.logsumexp(z)
    return 0.5 * (z + z[::-1]), lam


def _capacity_iteration(disc, P, p, iters, tol, power_active):
    """Capacity iteration with the power multiplier re-solved every step.

    Each iterate meets the power constraint, so its mutual information is a
    valid lower bound.
    """
    x2 = disc.x * disc.x
    logp = np.log(np.maximum(p, 1e-300))
    I, D = disc.evaluate(p)
    up, lam = _dual_upper(D, x2, P, power_active)
    k = 0
    for k in range(1, iters + 1):
        if up - I <= tol:
            break
        logp, _ = _power_projection(logp + D, x2, P)
        p = np.exp(logp)
        I, D = disc.evaluate(p)
        up, lam = _dual_upper(D, x2, P, power_active)
    return p, I, up, lam, k


def _barrier_restricted(disc, S, p, P, power_eq, mu0, mu_end, max_newton=60):
    """Maximise I(p) + mu sum ln p over the simplex on index set S.

    Newton steps on the barrier problem for a decreasing sequence of mu;
    the equality constraints are sum p = 1 and, when ``power_eq``,
    sum p x^2 = P.  Returns the full-length p, the KKT multipliers
    (nu, lam) and the Newton iteration count.
    """
    WS = disc.W[S]
    cS = disc.c[S]
    x2S = disc.x[S] ** 2
    if power_eq:
        C = np.vstack([np.ones(len(S)), x2S])
        b = np.array([1.0, P])
    else:
        C = np.ones((1, len(S)))
        b = np.array([1.0])
    pS = p[S].copy()
    pS = np.maximum(pS, 1e-16 * pS.max())

    def objective(ps):
        q = np.maximum(ps @ WS, 1e-300)
        return float(cS @ ps - np.sum(q * np.log(q))), q

    mu = mu0
    nit = 0
    nu = np.zeros(C.shape[0])
    while True:
        for _ in range(max_newton):
            nit += 1
            f, q = objective(pS)
            grad = cS - WS @ (np.log(q) + 1.0) + mu / pS
            R = WS / np.sqrt(q)
            M = R @ R.T
            M[np.diag_indices_from(M)] += mu / (pS * pS)
            try:
                cf = cho_factor(M)
            except LinAlgError:
                M[np.diag_indices_from(M)] += 1e-14 * np.trace(M) / len(S)
                cf = cho_factor(M)
            resid = b - C @ pS
            MiG = cho_solve(cf, grad)
            MiC = cho_solve(cf, C.T)
            nu = np.linalg.solve(C @ MiC, resid - C @ MiG)
            d = MiG + MiC @ nu
            dec = float(d @ (M @ d))
            neg = d < 0
            amax = float(np.min(-pS[neg] / d[neg])) if neg.any() else math.inf
            a = min(1.0, 0.99 * amax)
            feasible = np.max(np.abs(resid)) < 1e-13
            if feasible:
                phi0 = f + mu * np.sum(np.log(pS))
                while a > 1e-12:
                    trial = pS + a * d
                    ft, _ = objective(trial)
                    if ft + mu * np.sum(np.log(trial)) >= phi0 - 1e-14:
                        break
                    a *= 0.5
            pS = pS + a * d
            if feasible and dec < max(1e-14 * mu, 1e-18):
                break
        if mu <= mu_end:
            break
        mu = max(0.1 * mu, mu_end)
    out = np.zeros_like(p)
    out[S] = pS
    return out, -nu, nit


def capacity_amplitude_constrained(
    A: float,
    P: float,
    grid_size: int = 501,
    tol: float = 1e-6,
    *,
    output_step: float = 0.1,
    span: float = 10.0,
    warm_iters: int = 300,
    max_rounds: int = 200,
) -> SmithCapacityResult:
    """Maximise I(X; X+Z) over inputs on a uniform grid of ``grid_size`` points in [-A, A].

    Subject to E[X^2] <= P.  Stage one is the capacity iteration with the
    power multiplier re-solved at each step (enough on its own when the
    optimum is close to a sampled Gaussian).  If that has not closed the
    sandwich after ``warm_iters`` steps, stage two runs column generation:
    the problem restricted to a small support is solved by a barrier Newton
    method, and grid points whose divergence exceeds the KKT level are
    added until the sandwich gap is at most ``tol``.

    The returned value is certified to lie within ``tol`` of the grid
    capacity; the grid itself contributes a further discretisation error.
    """
    _check_ap(A, P)
    if int(grid_size) != grid_size or grid_size < 3:
        raise DomainError("grid_size must be an integer >= 3")
    if not tol > 0:
        raise DomainError("tol must be positive")
    grid_size = int(grid_size)

    disc = _Discretization.build(A, grid_size, output_step, span)
    x = disc.x
    x2 = x * x
    n = grid_size
    power_active = A * A > P

    logp0, _ = _power_projection(np.zeros(n), x2, P)
    p, I, up, lam, iters = _capacity_iteration(disc, P, np.exp(logp0), warm_iters, tol, power_active)
    method = "capacity-iteration"
    rounds = 0

    if up - I > tol:
        method = "column-generation"
        peaks = np.nonzero((p >= np.roll(p, 1)) & (p >= np.roll(p, -1)))[0]
        stride = max(1, int(round(1.0 / (x[1] - x[0]))))
        coarse = np.arange(0, n, stride)
        S = np.unique(np.concatenate([peaks, coarse, [0]]))
        S = np.union1d(S, n - 1 - S)
        pp = np.zeros(n)
        pp[S] = np.maximum(p[S], 1e-300)
        logp, _ = _power_projection(np.where(pp > 0, np.log(np.maximum(pp, 1e-300)), -np.inf), x2, P)
        p = np.exp(logp)
        power_eq = power_active
        mu0 = 1e-4
        for rounds in range(1, max_rounds + 1):
            mu_end = 1e-3 * tol / len(S)
            p, mult, nit = _barrier_restricted(disc, S, p, P, power_eq, mu0, mu_end)
            iters += nit
            if power_eq and mult[1] < 0:
                # power constraint not binding at this support
                power_eq = False
                continue
            p = 0.5 * (p + p[::-1])
            if not power_eq and p @ x2 > P:
                power_eq = True
                continue
            I, D = disc.evaluate(p)
            up, lam = _dual_upper(D, x2, P, power_active)
            if up - I <= tol:
                break
            level = mult[0] + (mult[1] * x2 if power_eq else 0.0)
            viol = D - 1.0 - level
            cand = np.nonzero((viol > 0) & (viol >= np.roll(viol, 1)) & (viol >= np.roll(viol, -1)))[0]
            if cand.size == 0:
                cand = np.array([int(np.argmax(viol))])
            cand = np.union1d(cand, n - 1 - cand)
            new = np.setdiff1d(cand, S)
            S = np.union1d(S[p[S] > 1e-12], new)
            S = np.union1d(S, n - 1 - S)
            p[new] = 1e-8
            p /= p.sum()
            mu0 = 1e-7
        else:
            raise SolverError(
                "amplitude-constrained capacity did not reach the requested sandwich gap",
                {"gap": up - I, "tol": tol, "rounds": rounds, "support": len(S)},
            )

    keep = p > 0
    gauss = 0.5 * math.log1p(P)
    return SmithCapacityResult(
        value_nats=I,
        support=x[keep],
        probs=p[keep],
        power_used=float(p @ x2),
        iterations=int(iters),
        gap_to_gaussian=gauss - I,
        upper_nats=up,
        A=A,
        P=P,
        grid_size=grid_size,
        tol=tol,
        multiplier=float(lam),
        method=method,
        extras={"rounds": rounds},
    )
