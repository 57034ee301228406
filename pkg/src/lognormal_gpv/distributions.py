"""Log-scale summaries, the normal CDF, and seeded random streams.

Random draws go through :class:`RngStream`, a thin owner of a numpy
``Generator`` backed by the counter-based Philox bit generator.  A stream is
fully determined by ``(seed, stream_id)`` so parallel workers can each build
their own stream without sharing state.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import special

from .errors import InvalidDf, NonPositiveValue, OutOfRange, SampleTooSmall

_UINT64_MASK = (1 << 64) - 1
_TINY = np.finfo(float).tiny


@dataclass(frozen=True)
class LogSummary:
    """Sufficient statistics of a log-transformed sample.

    ``s2`` uses divisor ``n`` (the maximum-likelihood variance).
    """

    n: int
    ybar: float
    s2: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise SampleTooSmall(f"need n >= 2, got n={self.n}")
        if not (math.isfinite(self.ybar) and math.isfinite(self.s2)):
            raise OutOfRange(f"non-finite summary ({self.ybar}, {self.s2})")
        if self.s2 < 0:
            raise OutOfRange(f"variance must be nonnegative, got {self.s2}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "ybar", float(self.ybar))
        object.__setattr__(self, "s2", float(self.s2))

    @property
    def unbiased_var(self) -> float:
        """Variance with divisor ``n - 1``."""
        return self.n * self.s2 / (self.n - 1)


def summarize_log(sample: Sequence[float]) -> LogSummary:
    """Mean and divisor-n variance of ``ln(sample)``."""
    x = np.asarray(sample, dtype=float)
    if x.ndim != 1:
        raise ValueError("sample must be one-dimensional")
    if x.size < 2:
        raise SampleTooSmall(f"need at least 2 observations, got {x.size}")
    if not np.all(x > 0):
        bad = x[~(x > 0)][0]
        raise NonPositiveValue(f"log undefined for value {bad!r}")
    y = np.log(x)
    ybar = y.mean()
    s2 = np.mean((y - ybar) ** 2)
    return LogSummary(n=int(x.size), ybar=float(ybar), s2=float(s2))


def lognormal_mean(mu: float, sigma_sq: float) -> float:
    """Mean of a log-normal variable, ``exp(mu + sigma_sq / 2)``."""
    if sigma_sq < 0:
        raise OutOfRange(f"sigma_sq must be >= 0, got {sigma_sq}")
    try:
        return math.exp(mu + 0.5 * sigma_sq)
    except OverflowError:
        raise OutOfRange(f"exp({mu} + {sigma_sq}/2) overflows") from None


def std_normal_cdf(x):
    """Standard normal CDF for a scalar or array.

    Evaluated as Phi(x) = erfc(-x / sqrt(2)) / 2 (cephes ``ndtr``), which keeps
    full relative precision in the lower tail; absolute error is at the level
    of double rounding.
    """
    out = special.ndtr(x)
    if np.ndim(out) == 0:
        return float(out)
    return out


def derive_stream_id(*parts) -> int:
    """Hash arbitrary ints/strings into a 64-bit stream id (stable across runs)."""
    h = hashlib.blake2b(digest_size=8)
    for p in parts:
        h.update(repr(p).encode())
        h.update(b"\x1f")
    return int.from_bytes(h.digest(), "little")


class RngStream:
    """Deterministic random stream keyed by ``(seed, stream_id)``.

    Streams with different ``stream_id`` under one seed are spawned children of
    the same ``SeedSequence`` and are statistically independent.
    """

    __slots__ = ("seed", "stream_id", "generator")

    def __init__(self, seed: int, stream_id: int = 0):
        if not (0 <= seed <= _UINT64_MASK and 0 <= stream_id <= _UINT64_MASK):
            raise OutOfRange("seed and stream_id must be 64-bit unsigned integers")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        self.generator = np.random.Generator(np.random.Philox(ss))

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"


def chi_square_sample(df: int, stream: RngStream, size=None):
    """Chi-square draw(s) with ``df`` degrees of freedom (numpy gamma sampler)."""
    if int(df) != df or df < 1:
        raise InvalidDf(f"degrees of freedom must be a positive integer, got {df}")
    draws = stream.generator.chisquare(df, size)
    # a gamma draw can underflow to exactly 0 for df=1; keep the support open
    if size is None:
        return max(float(draws), _TINY)
    return np.maximum(draws, _TINY)


def std_normal_sample(stream: RngStream, size=None):
    draws = stream.generator.standard_normal(size)
    return float(draws) if size is None else draws
