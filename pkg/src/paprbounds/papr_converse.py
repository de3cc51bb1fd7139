"""Lower bounds on the peak amplitude of good AWGN codes.

The single-letter I-projection bound

    u1(A) >= 8 (Q(rA) - Q((r sqrt(1+P) - 1) A))^2      [nats]

is maximised over the radius ``r`` in closed form by `r_star`.  Setting
``u1(A)`` equal to the per-symbol divergence budget of a code and solving for
``A`` gives the smallest peak amplitude the code can possibly have
(`min_peak_amplitude`).

Three variants of the root equation are supported:

``as-printed``
    Equation exactly as stated with the full budget, including the
    ``sqrt(6(3+4P)/n)`` term.
``pinsker-consistent``
    Uses ``2 (Q(rA) - 2 Q(.))^2`` on the left, i.e. Pinsker applied to the
    total-variation bound with the factor 2 inside.  Its maximising radius
    differs from `r_star`; the analogous closed form is used.
``no-sqrt-term``
    As printed, but with the ``sqrt(6(3+4P)/n)`` term dropped from the budget.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .awgn_limits import CodeParams, capacity
from .errors import DomainError, SolverError
from .scalar_math import NATS, LogBase, q_function

VARIANTS = ("as-printed", "pinsker-consistent", "no-sqrt-term")


@dataclass(frozen=True)
class RegimeParams:
    """Codes with log M >= nC(P) - gamma n^alpha."""

    alpha: float
    gamma: float
    delta: float = 0.0

    def __post_init__(self):
        if not 0.5 <= self.alpha < 1.0:
            raise DomainError(f"alpha must lie in [1/2, 1), got {self.alpha}")
        if not self.gamma > 0:
            raise DomainError(f"gamma must be positive, got {self.gamma}")
        if not self.delta >= 0:
            raise DomainError(f"delta must be non-negative, got {self.delta}")

    def validate_for(self, P: float) -> "RegimeParams":
        limit = delta_alpha_p(self.alpha, P)
        if not self.delta < limit:
            raise DomainError(f"delta={self.delta} must be below delta_alpha_P={limit}")
        return self


@dataclass(frozen=True)
class PeakBoundResult:
    A: float
    r_star: float
    rhs_nats: float
    papr_db: float
    trivial_flag: bool
    P: float = math.nan
    variant: str = "as-printed"
    lhs_at_zero: float = math.nan
    residual: float = 0.0
    iterations: int = 0
    extras: dict = field(default_factory=dict, compare=False)

    def as_dict(self) -> dict:
        return {
            "A": self.A,
            "r_star": self.r_star,
            "rhs_nats": self.rhs_nats,
            "papr_db": self.papr_db,
            "trivial_flag": self.trivial_flag,
            "P": self.P,
            "variant": self.variant,
            "lhs_at_zero": self.lhs_at_zero,
            "residual": self.residual,
            "iterations": self.iterations,
        }


def _check_variant(variant):
    if variant not in VARIANTS:
        raise DomainError(f"unknown variant {variant!r}; expected one of {VARIANTS}")


def delta_alpha_p(alpha: float, P: float) -> float:
    """Peak exponent (1 - alpha)(sqrt(1+P) - 1)^2."""
    if not 0.5 <= alpha < 1.0:
        raise DomainError(f"alpha must lie in [1/2, 1), got {alpha}")
    if not P > 0:
        raise DomainError(f"SNR must be positive, got {P}")
    return (1.0 - alpha) * (math.sqrt(1.0 + P) - 1.0) ** 2


def asymptotic_peak_threshold(n: int, delta: float) -> float:
    """sqrt(2 delta ln n): the peak level at least half the codewords exceed."""
    if n < 2:
        raise DomainError("asymptotic threshold needs n >= 2")
    if delta < 0:
        raise DomainError("delta must be non-negative")
    return math.sqrt(2.0 * delta * math.log(n))


def papr_lower_bound_asymptotic(alpha: float, P: float, n: int) -> float:
    """Linear PAPR floor (2 delta_{alpha,P} / P) ln n."""
    if n < 1:
        raise DomainError("blocklength must be positive")
    return 2.0 * delta_alpha_p(alpha, P) / P * math.log(n)


def _radius_constant(P, variant, log_base):
    # stationarity of the Q-difference in r reduces to (rs-1)^2 - r^2 = c/A^2
    if variant == "pinsker-consistent":
        return math.log(4.0 * (1.0 + P))
    return math.log1p(P) / LogBase.parse(log_base).nats_per_unit


def r_star(A: float, P: float, log_base: LogBase | float | str = NATS) -> float:
    """Radius maximising the single-letter bound at amplitude ``A``.

        r* = (sqrt(A^2 + P log(1+P)) + A sqrt(1+P)) / (A P)

    ``log_base`` only exists for sensitivity checks; the maximiser is the
    natural-log form.
    """
    if not A > 0:
        raise DomainError(f"amplitude must be positive, got {A}")
    if not P > 0:
        raise DomainError(f"SNR must be positive, got {P}")
    c = math.log1p(P) / LogBase.parse(log_base).nats_per_unit
    r = (math.sqrt(A * A + P * c) + A * math.sqrt(1.0 + P)) / (A * P)
    if not r * (math.sqrt(1.0 + P) - 1.0) > 1.0:
        raise DomainError("r_star fell outside r > 1/(sqrt(1+P)-1)")
    return r


def _maximising_radius(A, P, variant="as-printed", log_base=NATS):
    if variant != "pinsker-consistent":
        return r_star(A, P, log_base)
    c = _radius_constant(P, variant, log_base)
    return (math.sqrt(A * A + P * c) + A * math.sqrt(1.0 + P)) / (A * P)


def u1_lower_bound(A: float, P: float, r: float, variant: str = "as-printed") -> float:
    """Lower bound (nats) on the single-letter I-projection u1(A) at radius r."""
    _check_variant(variant)
    if not A > 0:
        raise DomainError(f"amplitude must be positive, got {A}")
    if not P > 0:
        raise DomainError(f"SNR must be positive, got {P}")
    s = math.sqrt(1.0 + P)
    if not r * (s - 1.0) > 1.0:
        raise DomainError(f"radius r={r} violates r > 1/(sqrt(1+P)-1) = {1.0 / (s - 1.0)}")
    inner = q_function(r * A)
    outer = q_function((r * s - 1.0) * A)
    if variant == "pinsker-consistent":
        d = max(inner - 2.0 * outer, 0.0)
        return 2.0 * d * d
    d = inner - outer
    return 8.0 * d * d


def peak_lhs(A: float, P: float, variant: str = "as-printed", log_base=NATS) -> float:
    """u1 bound evaluated at its maximising radius."""
    return u1_lower_bound(A, P, _maximising_radius(A, P, variant, log_base), variant)


def peak_lhs_at_zero(P: float, variant: str = "as-printed", log_base=NATS) -> float:
    """Limit of `peak_lhs` as A -> 0+ (finite and positive)."""
    s = math.sqrt(1.0 + P)
    c = _radius_constant(P, variant, log_base)
    base = math.sqrt(c / P)
    inner = q_function(base)
    outer = q_function(s * base)
    if variant == "pinsker-consistent":
        d = max(inner - 2.0 * outer, 0.0)
        return 2.0 * d * d
    return 8.0 * (inner - outer) ** 2


def u_n_lower_bound(n: int, A: float, P: float, variant: str = "as-printed") -> float:
    """n-letter bound; the I-projection tensorises, u_n = n u_1."""
    return n * peak_lhs(A, P, variant)


def divergence_rhs(code: CodeParams, P: float, variant: str = "as-printed") -> float:
    """Per-symbol divergence budget (nats) of a maximal-error code.

    C - log M / n + sqrt(6(3+4P)/n) + (1/n) ln(2/(1-eps)).
    """
    _check_variant(variant)
    n = code.n
    rhs = capacity(P) - code.log_M / n + math.log(2.0 / (1.0 - code.epsilon)) / n
    if variant != "no-sqrt-term":
        rhs += math.sqrt(6.0 * (3.0 + 4.0 * P) / n)
    return rhs


def divergence_budget(code: CodeParams, P: float, regime: RegimeParams, a: float | None = None) -> float:
    """(gamma n^alpha + a sqrt(n)) / n  in nats per symbol.

    ``a`` defaults to sqrt(6(3+4P)) + ln(2/(1-eps))/sqrt(n), the explicit
    constants of the non-asymptotic converse.
    """
    n = code.n
    if a is None:
        a = math.sqrt(6.0 * (3.0 + 4.0 * P)) + math.log(2.0 / (1.0 - code.epsilon)) / math.sqrt(n)
    total = regime.gamma * n ** regime.alpha + a * math.sqrt(n)
    return total / n


def reduce_to_maximal_error(gamma: float, alpha: float, epsilon: float, n: int, eps_prime: float | None = None):
    """Adjusted (gamma', eps') after passing to a maximal-error subcode.

    Expurgating to maximal error eps' > 2 eps keeps a fraction
    c = 1 - eps/eps' > 1/2 of the codewords; removing the half that satisfy
    the peak bound then costs ln(1/(c - 1/2)) in log M.
    """
    if not 0.0 < epsilon < 0.5:
        raise DomainError("reduction needs epsilon < 1/2")
    if eps_prime is None:
        eps_prime = 0.5 * (2.0 * epsilon + 1.0)
    if not 2.0 * epsilon < eps_prime < 1.0:
        raise DomainError(f"eps' must lie in (2 eps, 1), got {eps_prime}")
    c = 1.0 - epsilon / eps_prime
    gamma_prime = gamma - math.log(c - 0.5) / n**alpha
    return gamma_prime, eps_prime


def papr_db(A: float, P: float) -> float:
    if A <= 0:
        return -math.inf
    return 10.0 * math.log10(A * A / P)


def min_peak_amplitude(
    code: CodeParams,
    P: float,
    variant: str = "as-printed",
    log_base: LogBase | float | str = NATS,
    atol: float = 1e-12,
    max_iter: int = 400,
    a_max: float = 1e6,
) -> PeakBoundResult:
    """Smallest peak amplitude compatible with the code's divergence budget.

    Brackets the root by doubling from machine epsilon, then bisects down to
    ``atol`` in A.  The left side is strictly decreasing in A; any observed
    increase aborts with `SolverError`.
    """
    _check_variant(variant)
    if not P > 0:
        raise DomainError(f"SNR must be positive, got {P}")
    rhs = divergence_rhs(code, P, variant)
    if not rhs > 0:
        raise DomainError(
            f"infeasible: log M/n = {code.log_M / code.n:.6g} nats exceeds the "
            f"capacity plus slack terms (budget {rhs:.6g} nats <= 0)"
        )
    lhs0 = peak_lhs_at_zero(P, variant, log_base)
    f = lambda a: peak_lhs(a, P, variant, log_base)

    if rhs >= lhs0:
        return PeakBoundResult(
            A=0.0, r_star=math.inf, rhs_nats=rhs, papr_db=-math.inf, trivial_flag=True,
            P=P, variant=variant, lhs_at_zero=lhs0, residual=0.0, iterations=0,
        )

    lo = np.finfo(float).eps
    f_lo = f(lo)
    hi, f_hi = 1.0, f(1.0)
    it = 0
    while f_hi >= rhs:
        if f_hi > f_lo * (1 + 1e-12):
            raise SolverError("left side not decreasing while bracketing",
                              {"lo": lo, "hi": hi, "f_lo": f_lo, "f_hi": f_hi})
        lo, f_lo = hi, f_hi
        hi *= 2.0
        f_hi = f(hi)
        it += 1
        if hi > a_max:
            raise SolverError("no sign change below a_max", {"lo": lo, "hi": hi, "rhs": rhs})

    while hi - lo > atol:
        if it >= max_iter:
            raise SolverError("bisection did not converge",
                              {"lo": lo, "hi": hi, "f_lo": f_lo, "f_hi": f_hi, "rhs": rhs, "iterations": it})
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = f(mid)
        slack = 1e-12 * max(f_lo, 1e-300)
        if f_mid > f_lo + slack or f_mid < f_hi - slack:
            raise SolverError("monotonicity violated during bisection",
                              {"lo": lo, "mid": mid, "hi": hi, "f_lo": f_lo, "f_mid": f_mid, "f_hi": f_hi})
        if f_mid >= rhs:
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
        it += 1

    A = 0.5 * (lo + hi)
    resid = f(A) - rhs
    db = papr_db(A, P)
    return PeakBoundResult(
        A=A, r_star=_maximising_radius(A, P, variant, log_base), rhs_nats=rhs, papr_db=db,
        trivial_flag=db < 0.0, P=P, variant=variant, lhs_at_zero=lhs0, residual=resid,
        iterations=it,
    )
