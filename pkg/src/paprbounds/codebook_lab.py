"""Random codebook ensembles and Monte-Carlo checks of peak behaviour.

Reproducibility: trial ``t`` of a run with seed ``s`` draws from its own
Philox-4x64 stream, ``Generator(Philox(key=s, counter=[0, 0, 0, t]))``.
The trial index sits in the top counter word, so streams never overlap
and any subset of trials can be replayed independently of the others.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .ofdm_pmepr import pmepr_batch
from .scalar_math import q_function

KINDS = (
    "real-gaussian",
    "complex-gaussian",
    "uniform-sphere-real",
    "uniform-sphere-complex",
    "qam",
    "psk",
)
_COMPLEX_KINDS = {"complex-gaussian", "uniform-sphere-complex", "qam", "psk"}


@dataclass(frozen=True)
class EnsembleSpec:
    kind: str
    n: int
    P: float = 1.0
    M: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown ensemble kind {self.kind!r}; expected one of {KINDS}")
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"blocklength must be a positive integer, got {self.n}")
        if not self.P > 0:
            raise DomainError(f"power must be positive, got {self.P}")
        if self.kind in ("qam", "psk"):
            if self.M is None or int(self.M) != self.M or self.M < 2:
                raise DomainError(f"{self.kind} needs a constellation size M >= 2")
            if self.kind == "qam":
                r = math.isqrt(int(self.M))
                if r * r != self.M:
                    raise DomainError(f"QAM size must be a perfect square, got M={self.M}")
        elif self.M is not None:
            raise DomainError(f"constellation size is meaningless for {self.kind}")

    @classmethod
    def parse(cls, text: str, n: int, P: float = 1.0) -> "EnsembleSpec":
        """Accept ``kind`` or ``qam(16)`` / ``psk(8)`` forms."""
        m = re.fullmatch(r"\s*([a-z-]+)\s*(?:\(\s*(\d+)\s*\))?\s*", text)
        if not m:
            raise DomainError(f"cannot parse ensemble {text!r}")
        M = int(m.group(2)) if m.group(2) else None
        return cls(m.group(1), n, P, M)

    @property
    def is_complex(self) -> bool:
        return self.kind in _COMPLEX_KINDS

    @property
    def label(self) -> str:
        return f"{self.kind}({self.M})" if self.M else self.kind


@dataclass(frozen=True)
class SeededRun:
    seed: int
    trials: int

    def __post_init__(self):
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise DomainError("seed must be an integer in [0, 2^64)")
        if int(self.trials) != self.trials or self.trials < 1:
            raise DomainError("trials must be a positive integer")


def trial_generator(seed: int, trial: int) -> np.random.Generator:
    """Independent stream for one trial (see module docstring)."""
    return np.random.Generator(np.random.Philox(key=int(seed), counter=[0, 0, 0, int(trial)]))


def _qam_points(M):
    m = math.isqrt(M)
    lv = 2.0 * np.arange(m) - (m - 1)
    pts = (lv[:, None] + 1j * lv[None, :]).ravel()
    return pts / math.sqrt(2.0 * (M - 1) / 3.0)


def sample_codeword(spec: EnsembleSpec, rng: np.random.Generator) -> np.ndarray:
    """One codeword of length n; complex dtype for complex ensembles."""
    n, s = spec.n, math.sqrt(spec.P)
    k = spec.kind
    if k == "real-gaussian":
        return s * rng.standard_normal(n)
    if k == "complex-gaussian":
        z = rng.standard_normal((n, 2))
        return s * math.sqrt(0.5) * (z[:, 0] + 1j * z[:, 1])
    if k == "uniform-sphere-real":
        g = rng.standard_normal(n)
        return g * (math.sqrt(n * spec.P) / np.linalg.norm(g))
    if k == "uniform-sphere-complex":
        z = rng.standard_normal((n, 2))
        g = z[:, 0] + 1j * z[:, 1]
        return g * (math.sqrt(n * spec.P) / np.linalg.norm(g))
    idx = rng.integers(0, spec.M, size=n)
    if k == "qam":
        return s * _qam_points(spec.M)[idx]
    return s * np.exp(2j * np.pi * idx / spec.M)


def sample_codebook(spec: EnsembleSpec, run: SeededRun) -> np.ndarray:
    """(trials, n) array, row t drawn from the stream of trial t."""
    dtype = complex if spec.is_complex else float
    out = np.empty((run.trials, spec.n), dtype=dtype)
    for t in range(run.trials):
        out[t] = sample_codeword(spec, trial_generator(run.seed, t))
    return out


def expurgation_survival(n: int, A: float, P: float) -> float:
    """(1 - 2Q(A/sqrt(P)))^n: chance an i.i.d. N(0,P) codeword has peak <= A."""
    if n < 1 or not A > 0 or not P > 0:
        raise DomainError("need n >= 1, A > 0, P > 0")
    return math.exp(n * math.log1p(-2.0 * q_function(A / math.sqrt(P))))


def empirical_survival(spec: EnsembleSpec, run: SeededRun, A: float) -> tuple[float, float]:
    """Fraction of sampled codewords with ||x||_inf <= A and its binomial standard error."""
    peaks = np.abs(sample_codebook(spec, run)).max(axis=1)
    p = float(np.count_nonzero(peaks <= A)) / run.trials
    return p, math.sqrt(p * (1.0 - p) / run.trials)


def pmepr_tail_approx(n: int, A: float) -> float:
    """exp(-sqrt(pi/3) n A exp(-A^2)); heuristic P[PMEPR <= A^2] for CN(0, I) codewords."""
    if n < 1 or not A > 0:
        raise DomainError("need n >= 1 and A > 0")
    return math.exp(-math.sqrt(math.pi / 3.0) * n * A * math.exp(-A * A))


@dataclass
class PmeprCdf:
    thresholds: np.ndarray
    cdf: np.ndarray
    reference: np.ndarray
    values: np.ndarray = field(repr=False)
    spec: EnsembleSpec | None = None
    run: SeededRun | None = None
    L: int = 16

    @property
    def median(self) -> float:
        return float(np.median(self.values))


def empirical_pmepr_cdf(spec: EnsembleSpec, run: SeededRun, L: int = 16, thresholds=None) -> PmeprCdf:
    """Empirical P[PMEPR <= tau] on the given thresholds, plus the heuristic tail curve.

    The reference column evaluates `pmepr_tail_approx` at A = sqrt(tau)
    (zero for tau <= 0).
    """
    vals = np.sort(pmepr_batch(sample_codebook(spec, run), L))
    if thresholds is None:
        thresholds = np.linspace(0.0, 3.0 * math.log(max(spec.n, 2)), 31)
    tau = np.asarray(thresholds, dtype=float)
    cdf = np.searchsorted(vals, tau, side="right") / run.trials
    ref = np.array([pmepr_tail_approx(spec.n, math.sqrt(t)) if t > 0 else 0.0 for t in tau])
    return PmeprCdf(tau, cdf, ref, vals, spec, run, L)


@dataclass(frozen=True)
class PeakSummary:
    mean: float
    median: float
    quantiles: dict
    trials: int


def peak_amplitude_statistics(spec: EnsembleSpec, run: SeededRun,
                              probs=(0.05, 0.25, 0.75, 0.95)) -> PeakSummary:
    """Order statistics of ||X||_inf across trials."""
    peaks = np.sort(np.abs(sample_codebook(spec, run)).max(axis=1))
    q = np.quantile(peaks, probs)
    return PeakSummary(
        mean=float(np.mean(peaks)),
        median=float(np.median(peaks)),
        quantiles={float(p): float(v) for p, v in zip(probs, q)},
        trials=run.trials,
    )
