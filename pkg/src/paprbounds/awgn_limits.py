"""Capacity, dispersion and the normal approximation for the real AWGN channel.

Noise has unit variance, so the SNR ``P`` equals the input power.  All
functions return natural units unless a ``base`` is passed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .scalar_math import NATS, LogBase, q_inverse


@dataclass(frozen=True)
class ChannelParams:
    P: float

    def __post_init__(self):
        if not self.P > 0:
            raise DomainError(f"SNR P must be positive, got {self.P}")

    @classmethod
    def from_db(cls, snr_db: float) -> "ChannelParams":
        return cls(10.0 ** (snr_db / 10.0))


@dataclass(frozen=True)
class CodeParams:
    """An (n, M, epsilon) code; ``log_M`` is stored in nats."""

    n: int
    log_M: float
    epsilon: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"blocklength must be a positive integer, got {self.n}")
        if not self.log_M >= 0:
            raise DomainError(f"log M must be non-negative, got {self.log_M}")
        if not 0.0 < self.epsilon < 1.0:
            raise DomainError(f"epsilon must lie in (0, 1), got {self.epsilon}")

    @classmethod
    def from_rate_fraction(cls, n: int, P: float, fraction: float, epsilon: float) -> "CodeParams":
        return cls(n, rate_fraction_to_log_M(n, P, fraction), epsilon)

    def rate(self) -> float:
        return self.log_M / self.n


def _check_snr(P):
    if not P >= 0:
        raise DomainError(f"SNR must be non-negative, got {P}")


def capacity(P: float, base: LogBase | float | str = NATS) -> float:
    """C(P) = (1/2) log(1 + P)."""
    _check_snr(P)
    return LogBase.parse(base).from_nats(0.5 * math.log1p(P))


def dispersion(P: float, base: LogBase | float | str = NATS) -> float:
    """V(P) = (log e)^2/2 * P(P+2)/(P+1)^2, in squared units of ``base``."""
    _check_snr(P)
    v_nats = 0.5 * P * (P + 2.0) / (P + 1.0) ** 2
    scale = LogBase.parse(base).nats_per_unit
    return v_nats / (scale * scale)


def normal_approx_log_M(
    n: int,
    epsilon: float,
    P: float,
    base: LogBase | float | str = NATS,
    log_n_term: float = 0.0,
) -> float:
    """nC(P) - sqrt(nV(P)) Q^{-1}(eps) + log_n_term.

    The O(log n) remainder is not known in closed form; it is zero unless the
    caller supplies ``log_n_term`` (in the units of ``base``).
    """
    if int(n) != n or n < 1:
        raise DomainError(f"blocklength must be a positive integer, got {n}")
    if not P > 0:
        raise DomainError(f"SNR must be positive, got {P}")
    lb = LogBase.parse(base)
    return (
        n * capacity(P, lb)
        - math.sqrt(n * dispersion(P, lb)) * q_inverse(epsilon)
        + log_n_term
    )


def rate_fraction_to_log_M(n: int, P: float, fraction: float, base: LogBase | float | str = NATS) -> float:
    """log M of a code running at ``fraction`` of capacity."""
    if not 0.0 < fraction <= 1.0:
        raise DomainError(f"rate fraction must lie in (0, 1], got {fraction}")
    return fraction * n * capacity(P, base)
