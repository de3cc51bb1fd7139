"""Peak statistics of codewords and of their OFDM baseband envelope.

The envelope of x in C^n is

    s_b(t) = n^{-1/2} sum_k x_k exp(2 pi i k t / n),   0 <= t < n,

so at integer t it is the unitary inverse-sign DFT of x.  PMEPR is the peak
of |s_b|^2 over mean symbol power; on a grid of spacing 1/L it is a lower
approximation that tightens as L grows.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import hadamard
from scipy.optimize import minimize_scalar

from .errors import DomainError

__all__ = [
    "RealCodeword",
    "ComplexCodeword",
    "OrthogonalRotation",
    "papr",
    "baseband_envelope",
    "oversampled_envelope",
    "pmepr",
    "pmepr_batch",
    "dft_peak_lower_bound",
    "rotated_peak",
    "hadamard_rotation",
]


def _check_samples(a, dtype):
    a = np.asarray(a, dtype=dtype)
    if a.ndim != 1 or a.size < 1:
        raise DomainError("codeword must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(a)):
        raise DomainError("codeword entries must be finite")
    return a


@dataclass(frozen=True)
class RealCodeword:
    samples: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "samples", _check_samples(self.samples, float))

    @property
    def n(self) -> int:
        return self.samples.size


@dataclass(frozen=True)
class ComplexCodeword:
    samples: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "samples", _check_samples(self.samples, complex))

    @property
    def n(self) -> int:
        return self.samples.size


@dataclass(frozen=True)
class OrthogonalRotation:
    matrix: np.ndarray

    def __post_init__(self):
        U = np.asarray(self.matrix)
        if U.ndim != 2 or U.shape[0] != U.shape[1]:
            raise DomainError("rotation must be a square matrix")
        if not np.allclose(U.conj().T @ U, np.eye(U.shape[0]), rtol=0.0, atol=1e-10):
            raise DomainError("rotation columns are not orthonormal to 1e-10")
        object.__setattr__(self, "matrix", U)


def hadamard_rotation(n: int) -> OrthogonalRotation:
    """Normalised Sylvester-Hadamard matrix; n must be a power of two."""
    if n < 1 or n & (n - 1):
        raise DomainError("Hadamard rotation needs n a power of two")
    return OrthogonalRotation(hadamard(n) / math.sqrt(n))


def _samples(x, dtype=complex):
    if isinstance(x, (RealCodeword, ComplexCodeword)):
        return x.samples
    return _check_samples(x, dtype)


def _mean_power(x):
    pw = float(np.mean(np.abs(x) ** 2))
    if pw == 0.0:
        raise DomainError("all-zero codeword has no defined peak ratio")
    return pw


def papr(x) -> float:
    """max |x_j|^2 over (1/n) sum |x_j|^2 (linear)."""
    x = _samples(x, complex if np.iscomplexobj(getattr(x, "samples", x)) else float)
    return float(np.max(np.abs(x) ** 2)) / _mean_power(x)


def baseband_envelope(x, t):
    """s_b(t) evaluated by direct summation; t scalar or array in [0, n)."""
    x = _samples(x)
    n = x.size
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0) or np.any(t_arr >= n):
        raise DomainError(f"t must lie in [0, {n})")
    k = np.arange(n)
    # reduce k*t mod n before forming the phase to keep it accurate for large n
    ph = np.mod(np.multiply.outer(t_arr, k), n) / n
    out = np.exp(2j * np.pi * ph) @ x / math.sqrt(n)
    return complex(out) if out.ndim == 0 else out


def oversampled_envelope(x, L: int = 16) -> np.ndarray:
    """s_b(j/L) for j = 0..nL-1 via a zero-padded length-nL inverse FFT."""
    x = _samples(x)
    if int(L) != L or L < 1:
        raise DomainError("oversampling factor L must be an integer >= 1")
    n = x.size
    N = n * int(L)
    return np.fft.ifft(x, N) * (N / math.sqrt(n))


def pmepr(x, L: int = 16, refine: bool = False) -> float:
    """Peak-to-mean envelope power ratio on the 1/L grid.

    With ``refine`` each grid local maximum that could still hold the
    global peak (within the oversampling factor cos^2(pi/2L) of the grid
    maximum) is polished by a bounded golden-section search on the
    continuous envelope; the result never falls below the grid value.
    """
    x = _samples(x)
    pw = _mean_power(x)
    env = np.abs(oversampled_envelope(x, L)) ** 2
    peak = float(env.max())
    if refine and x.size > 1:
        n = x.size
        floor = peak * math.cos(math.pi / (2 * L)) ** 2
        local = (env >= np.roll(env, 1)) & (env >= np.roll(env, -1)) & (env >= floor)

        def neg(t):
            t = t % n
            # (-tiny) % n rounds to n itself
            return -abs(baseband_envelope(x, 0.0 if t >= n else t)) ** 2

        for j in np.nonzero(local)[0]:
            t0 = j / L
            res = minimize_scalar(neg, bounds=(t0 - 1.0 / L, t0 + 1.0 / L), method="bounded",
                                  options={"xatol": 1e-12})
            peak = max(peak, -float(res.fun))
    return peak / pw


def dft_peak_lower_bound(x) -> float:
    """||F x||_inf^2 / ((1/n)||x||^2), F the unitary DFT with kernel exp(+2 pi i k l / n)."""
    x = _samples(x)
    pw = _mean_power(x)
    Fx = np.fft.ifft(x) * math.sqrt(x.size)
    return float(np.max(np.abs(Fx) ** 2)) / pw


def rotated_peak(x, U) -> float:
    """||U x||_inf."""
    x = _samples(x, float if not np.iscomplexobj(getattr(x, "samples", x)) else complex)
    M = U.matrix if isinstance(U, OrthogonalRotation) else np.asarray(U)
    if M.ndim != 2 or M.shape[1] != x.size:
        raise DomainError(f"rotation of shape {M.shape} does not act on length-{x.size} codewords")
    return float(np.max(np.abs(M @ x)))


def pmepr_batch(X, L: int = 16) -> np.ndarray:
    """Row-wise `pmepr` for a (trials, n) array without refinement."""
    X = np.atleast_2d(np.asarray(X, dtype=complex))
    n = X.shape[1]
    pw = np.mean(np.abs(X) ** 2, axis=1)
    if np.any(pw == 0):
        raise DomainError("all-zero codeword has no defined peak ratio")
    N = n * int(L)
    peak = np.empty(X.shape[0])
    rows = max(1, (1 << 21) // N)  # bound the padded block to ~32 MB
    for s in range(0, X.shape[0], rows):
        env = np.abs(np.fft.ifft(X[s:s + rows], N, axis=1)) ** 2
        peak[s:s + rows] = env.max(axis=1) * (N * N / n)
    return peak / pw
