"""Tests for H0: M1 <= M2 against M1 > M2 (or M1 != M2) for log-normal means.

Three methods are provided:

* ``gpv_a`` -- generalized p-value, E[Phi(arg(U1, U2))] estimated by Monte Carlo
  over independent chi-square pivots.
* ``km_b`` -- generalized pivotal-quantity p-value with separate normal pivots
  per group, with both normal pivots integrated out analytically.
* ``zscore_c`` -- large-sample Z test on ybar + s^2/2 with unbiased variances.

``gp_value_quadrature`` computes the same expectation as ``gpv_a`` by
tensor-product Gauss-Legendre quadrature and is used as an oracle.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .distributions import (
    LogSummary,
    RngStream,
    chi_square_sample,
    derive_stream_id,
    std_normal_cdf,
)
from .errors import DegenerateVariance, InvalidSettings, OutOfRange


class Alternative(str, enum.Enum):
    GREATER = "greater"
    TWO_SIDED = "two_sided"


class Method(str, enum.Enum):
    GPV_A = "gpv_a"
    KM_B = "km_b"
    ZSCORE_C = "zscore_c"


@dataclass(frozen=True)
class TestRequest:
    __test__ = False  # keep pytest from collecting this

    group1: LogSummary
    group2: LogSummary
    alternative: Alternative = Alternative.GREATER

    def __post_init__(self):
        object.__setattr__(self, "alternative", Alternative(self.alternative))
        for label, g in (("group1", self.group1), ("group2", self.group2)):
            if g.s2 <= 0:
                raise DegenerateVariance(f"{label} has zero log-variance")

    def swapped(self) -> "TestRequest":
        return TestRequest(self.group2, self.group1, self.alternative)


@dataclass(frozen=True)
class McSettings:
    m: int = 100_000
    seed: int = 0

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise InvalidSettings(f"m must be a positive integer, got {self.m}")


@dataclass(frozen=True)
class PValueResult:
    estimate: float
    mc_se: float
    m: int
    method: Method
    alternative: Alternative = Alternative.GREATER


def _check_variances(group1: LogSummary, group2: LogSummary):
    if group1.s2 <= 0 or group2.s2 <= 0:
        raise DegenerateVariance("log-variance must be positive in both groups")


def phi_argument(group1: LogSummary, group2: LogSummary, u1, u2):
    """Argument of Phi in the generalized p-value integrand.

    ``(ybar2 - ybar1 + n2 s2^2/(2 u2) - n1 s1^2/(2 u1)) / sqrt(s1^2/u1 + s2^2/u2)``.
    ``u1``/``u2`` may be arrays (broadcast together).
    """
    _check_variances(group1, group2)
    u1 = np.asarray(u1, dtype=float)
    u2 = np.asarray(u2, dtype=float)
    num = (group2.ybar - group1.ybar
           + group2.n * group2.s2 / (2.0 * u2)
           - group1.n * group1.s2 / (2.0 * u1))
    den = np.sqrt(group1.s2 / u1 + group2.s2 / u2)
    out = num / den
    return float(out) if out.ndim == 0 else out


def generalized_variable(group1: LogSummary, group2: LogSummary, theta: float,
                         z, u1, u2):
    """The generalized test variable T at pivot values ``(z, u1, u2)``.

    T = ybar1 - ybar2 + z*sqrt(s1^2/u1 + s2^2/u2) + n1 s1^2/(2 u1)
        - n2 s2^2/(2 u2) - theta
    """
    _check_variances(group1, group2)
    z = np.asarray(z, dtype=float)
    u1 = np.asarray(u1, dtype=float)
    u2 = np.asarray(u2, dtype=float)
    t = (group1.ybar - group2.ybar
         + z * np.sqrt(group1.s2 / u1 + group2.s2 / u2)
         + group1.n * group1.s2 / (2.0 * u1)
         - group2.n * group2.s2 / (2.0 * u2)
         - theta)
    return float(t) if t.ndim == 0 else t


def km_conditional_prob(group1: LogSummary, group2: LogSummary, u1, u2):
    """P(G <= 0 | U1, U2) for the per-group pivotal difference G.

    G = [ybar1 - Z1 sqrt(s1^2/U1) + n1 s1^2/(2U1)]
        - [ybar2 - Z2 sqrt(s2^2/U2) + n2 s2^2/(2U2)]
    Given the U's, G is normal with the mean and variance below.
    """
    _check_variances(group1, group2)
    u1 = np.asarray(u1, dtype=float)
    u2 = np.asarray(u2, dtype=float)
    pivot1 = group1.ybar + group1.n * group1.s2 / (2.0 * u1)
    pivot2 = group2.ybar + group2.n * group2.s2 / (2.0 * u2)
    mean = pivot1 - pivot2
    var = group1.s2 / u1 + group2.s2 / u2
    return std_normal_cdf(-mean / np.sqrt(var))


def two_sided_adjust(p: float) -> float:
    """``2 * min(p, 1 - p)``."""
    if not 0.0 <= p <= 1.0:
        raise OutOfRange(f"p must lie in [0, 1], got {p}")
    return min(1.0, 2.0 * min(p, 1.0 - p))


def _finish(terms: np.ndarray, method: Method, alternative: Alternative) -> PValueResult:
    m = terms.size
    p = float(np.clip(terms.mean(), 0.0, 1.0))
    se = float(terms.std(ddof=1) / math.sqrt(m)) if m > 1 else 0.0
    if alternative is Alternative.TWO_SIDED:
        p, se = two_sided_adjust(p), 2.0 * se
    return PValueResult(p, se, m, method, alternative)


def draw_pivots(request: TestRequest, m: int, stream: RngStream):
    """``m`` independent draws of (U1, U2) ~ (chi2(n1-1), chi2(n2-1))."""
    u1 = chi_square_sample(request.group1.n - 1, stream, m)
    u2 = chi_square_sample(request.group2.n - 1, stream, m)
    return u1, u2


def gpv_from_draws(request: TestRequest, u1, u2) -> PValueResult:
    """Generalized p-value averaged over caller-supplied chi-square draws."""
    terms = std_normal_cdf(phi_argument(request.group1, request.group2,
                                        np.atleast_1d(u1), np.atleast_1d(u2)))
    return _finish(terms, Method.GPV_A, request.alternative)


def km_from_draws(request: TestRequest, u1, u2) -> PValueResult:
    terms = km_conditional_prob(request.group1, request.group2,
                                np.atleast_1d(u1), np.atleast_1d(u2))
    return _finish(terms, Method.KM_B, request.alternative)


def _method_stream(settings: McSettings, method: Method) -> RngStream:
    return RngStream(settings.seed, derive_stream_id(method.value))


def gp_value(request: TestRequest, settings: McSettings,
             stream: RngStream | None = None) -> PValueResult:
    """Monte Carlo generalized p-value (method a).

    The estimate depends only on the two summaries, ``m`` and the seed.
    ``stream`` overrides the stream otherwise derived from ``settings.seed``.
    """
    if stream is None:
        stream = _method_stream(settings, Method.GPV_A)
    u1, u2 = draw_pivots(request, settings.m, stream)
    return gpv_from_draws(request, u1, u2)


def km_gp_value(request: TestRequest, settings: McSettings,
                stream: RngStream | None = None) -> PValueResult:
    """Per-group pivotal generalized p-value (method b), Rao-Blackwellized."""
    if stream is None:
        stream = _method_stream(settings, Method.KM_B)
    u1, u2 = draw_pivots(request, settings.m, stream)
    return km_from_draws(request, u1, u2)


def zhou_z_statistic(request: TestRequest) -> float:
    g1, g2 = request.group1, request.group2
    v1, v2 = g1.unbiased_var, g2.unbiased_var
    num = g1.ybar - g2.ybar + 0.5 * (v1 - v2)
    var = (v1 / g1.n + v2 / g2.n
           + v1 ** 2 / (2.0 * (g1.n - 1)) + v2 ** 2 / (2.0 * (g2.n - 1)))
    return num / math.sqrt(var)


def zhou_z_value(request: TestRequest) -> PValueResult:
    """Deterministic Z-score test (method c); ``m`` is reported as 0."""
    z = zhou_z_statistic(request)
    p = std_normal_cdf(-z)
    if request.alternative is Alternative.TWO_SIDED:
        p = two_sided_adjust(p)
    return PValueResult(p, 0.0, 0, Method.ZSCORE_C, request.alternative)


def run_method(method, request: TestRequest, settings: McSettings) -> PValueResult:
    method = Method(method)
    if method is Method.GPV_A:
        return gp_value(request, settings)
    if method is Method.KM_B:
        return km_gp_value(request, settings)
    return zhou_z_value(request)


# --- quadrature oracle -------------------------------------------------------

_QUAD_EPS = 1e-12
_QUAD_TOL = 1e-4
_QUAD_MAX_GRID = 4096


def _chi2_nodes(df: int, grid_size: int):
    """Nodes and normalized weights for E[f(U)], U ~ chi2(df).

    Integrates over t = sqrt(u) on [sqrt(eps), sqrt(df + 40 sqrt(2 df))] so the
    density becomes smooth at the origin for small df.
    """
    upper = df + 40.0 * math.sqrt(2.0 * df)
    a, b = math.sqrt(_QUAD_EPS), math.sqrt(upper)
    x, w = np.polynomial.legendre.leggauss(grid_size)
    t = 0.5 * (b - a) * x + 0.5 * (b + a)
    w = 0.5 * (b - a) * w
    u = t * t
    k = 0.5 * df
    log_pdf = (k - 1.0) * np.log(u) - 0.5 * u - k * math.log(2.0) - special.gammaln(k)
    w = w * np.exp(log_pdf) * 2.0 * t
    return u, w / w.sum()


def _quadrature_once(request: TestRequest, grid_size: int) -> float:
    u1, w1 = _chi2_nodes(request.group1.n - 1, grid_size)
    u2, w2 = _chi2_nodes(request.group2.n - 1, grid_size)
    total = 0.0
    chunk = max(1, 2_000_000 // grid_size)
    for start in range(0, grid_size, chunk):
        sl = slice(start, start + chunk)
        vals = std_normal_cdf(phi_argument(request.group1, request.group2,
                                           u1[sl, None], u2[None, :]))
        total += float(w1[sl] @ vals @ w2)
    return total


def gp_value_quadrature(request: TestRequest, grid_size: int = 512) -> float:
    """One-sided generalized p-value by numerical integration.

    Doubles ``grid_size`` until two successive values differ by less than 1e-4
    and returns the finer one.
    """
    if int(grid_size) != grid_size or grid_size < 64:
        raise InvalidSettings(f"grid_size must be an integer >= 64, got {grid_size}")
    _check_variances(request.group1, request.group2)
    prev = _quadrature_once(request, grid_size)
    while grid_size < _QUAD_MAX_GRID:
        grid_size *= 2
        cur = _quadrature_once(request, grid_size)
        if abs(cur - prev) < _QUAD_TOL:
            return cur
        prev = cur
    raise RuntimeError(f"quadrature did not converge by grid_size={grid_size}")
