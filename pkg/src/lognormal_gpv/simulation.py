"""Empirical size and power of the three tests.

Every replicate owns an independent random stream derived from
``(seed, scenario_index, replicate)``; inner Monte Carlo draws for each method
use a further stream keyed by the method name.  Rejection counts are summed
over blocks of replicates, so results do not depend on how the blocks are
scheduled across worker processes.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .distributions import LogSummary, RngStream, derive_stream_id, lognormal_mean
from .errors import DegenerateVariance, InvalidSettings, LognormalGPVError, SampleTooSmall
from .pvalues import (
    Method,
    McSettings,
    TestRequest,
    gp_value,
    km_gp_value,
    zhou_z_value,
)

ALL_METHODS = (Method.GPV_A, Method.KM_B, Method.ZSCORE_C)
_BLOCK = 250


@dataclass(frozen=True)
class Scenario:
    n1: int
    n2: int
    mu1: float
    mu2: float
    sigma1_sq: float
    sigma2_sq: float

    def __post_init__(self):
        if self.n1 < 2 or self.n2 < 2:
            raise SampleTooSmall(f"sample sizes must be >= 2, got ({self.n1}, {self.n2})")
        if not (self.sigma1_sq > 0 and self.sigma2_sq > 0):
            raise InvalidSettings("population variances must be positive")

    @property
    def mean1(self) -> float:
        return lognormal_mean(self.mu1, self.sigma1_sq)

    @property
    def mean2(self) -> float:
        return lognormal_mean(self.mu2, self.sigma2_sq)

    @property
    def is_size(self) -> bool:
        """True when the two log-normal means coincide (null holds)."""
        a = self.mu1 + 0.5 * self.sigma1_sq
        b = self.mu2 + 0.5 * self.sigma2_sq
        return math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-12)


@dataclass(frozen=True)
class ExperimentConfig:
    reps: int = 10_000
    inner_m: int = 2000
    alpha: float = 0.05
    seed: int = 0
    methods: tuple = ALL_METHODS
    workers: int = 1

    def __post_init__(self):
        if self.reps < 1 or self.inner_m < 1:
            raise InvalidSettings("reps and inner_m must be >= 1")
        if not 0.0 < self.alpha < 1.0:
            raise InvalidSettings(f"alpha must lie in (0, 1), got {self.alpha}")
        methods = tuple(Method(m) for m in self.methods)
        if not methods:
            raise InvalidSettings("at least one method is required")
        object.__setattr__(self, "methods", methods)


@dataclass(frozen=True)
class MethodOutcome:
    rejections: int
    reps: int

    @property
    def rate(self) -> float:
        return self.rejections / self.reps

    @property
    def binom_se(self) -> float:
        r = self.rate
        return math.sqrt(r * (1.0 - r) / self.reps)


@dataclass(frozen=True)
class ExperimentResult:
    scenario: Scenario
    reps: int
    alpha: float
    outcomes: dict = field(default_factory=dict)

    def rate(self, method) -> float:
        return self.outcomes[Method(method)].rate


def _replicate_pvalues(scenario: Scenario, config: ExperimentConfig,
                       scenario_index: int, rep: int) -> list[float]:
    data_stream = RngStream(config.seed, derive_stream_id(scenario_index, rep, "data"))
    g = data_stream.generator
    y1 = g.normal(scenario.mu1, math.sqrt(scenario.sigma1_sq), scenario.n1)
    y2 = g.normal(scenario.mu2, math.sqrt(scenario.sigma2_sq), scenario.n2)
    s1 = LogSummary(scenario.n1, y1.mean(), np.mean((y1 - y1.mean()) ** 2))
    s2 = LogSummary(scenario.n2, y2.mean(), np.mean((y2 - y2.mean()) ** 2))
    if s1.s2 <= 0 or s2.s2 <= 0:
        raise DegenerateVariance(
            f"scenario {scenario_index}, replicate {rep}: zero sample log-variance")
    request = TestRequest(s1, s2)
    settings = McSettings(config.inner_m, config.seed)
    pvals = []
    for method in config.methods:
        if method is Method.ZSCORE_C:
            pvals.append(zhou_z_value(request).estimate)
            continue
        stream = RngStream(config.seed, derive_stream_id(scenario_index, rep, method.value))
        fn = gp_value if method is Method.GPV_A else km_gp_value
        pvals.append(fn(request, settings, stream=stream).estimate)
    return pvals


def _run_block(args) -> tuple[int, list[int]]:
    scenario, config, scenario_index, start, stop = args
    counts = [0] * len(config.methods)
    for rep in range(start, stop):
        for j, p in enumerate(_replicate_pvalues(scenario, config, scenario_index, rep)):
            if p <= config.alpha:
                counts[j] += 1
    return scenario_index, counts


def _run_indexed(indexed, config: ExperimentConfig) -> list[ExperimentResult]:
    totals = {i: [0] * len(config.methods) for i, _ in indexed}
    tasks = [(s, config, i, start, min(start + _BLOCK, config.reps))
             for i, s in indexed
             for start in range(0, config.reps, _BLOCK)]
    try:
        if config.workers <= 1 or len(tasks) <= 1:
            done = map(_run_block, tasks)
            for idx, counts in done:
                totals[idx] = [a + b for a, b in zip(totals[idx], counts)]
        else:
            with ProcessPoolExecutor(max_workers=config.workers) as pool:
                for idx, counts in pool.map(_run_block, tasks, chunksize=4):
                    totals[idx] = [a + b for a, b in zip(totals[idx], counts)]
    except LognormalGPVError as exc:
        raise type(exc)(f"simulation aborted: {exc}") from exc
    return [
        ExperimentResult(s, config.reps, config.alpha,
                         {m: MethodOutcome(c, config.reps)
                          for m, c in zip(config.methods, totals[i])})
        for i, s in indexed
    ]


def run_scenario(scenario: Scenario, config: ExperimentConfig,
                 scenario_index: int = 0) -> ExperimentResult:
    """Size or power of each method in ``config.methods`` for one scenario.

    Methods are run one-sided (H1: M1 > M2) on common generated samples and a
    replicate rejects when ``p <= alpha``.  ``scenario_index`` selects the
    stream family, so ``run_grid(ss, c)[i] == run_scenario(ss[i], c, i)``.
    """
    return _run_indexed([(scenario_index, scenario)], config)[0]


def run_grid(scenarios, config: ExperimentConfig) -> list[ExperimentResult]:
    """Run every scenario; results come back in input order.

    ``config.workers > 1`` spreads replicate blocks over a process pool and
    gives the same counts as a serial run.
    """
    return _run_indexed(list(enumerate(scenarios)), config)


def default_workers() -> int:
    return os.cpu_count() or 1
