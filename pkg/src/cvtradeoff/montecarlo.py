"""Monte Carlo simulation of the encode -> couple -> measure -> infer chain.

Trials are split into chunks of ``chunk_size``; chunk ``i`` draws from a
Philox generator keyed by ``(seed, i)``.  The estimate therefore depends only
on ``(seed, trials, chunk_size)``, and chunks can be computed in any order
or in parallel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from cvtradeoff.channel import MeasurementSpec, conditional_overlap, outcome_density
from cvtradeoff.gaussian_core import DomainError, ProbeSpec, SignalEnsemble


@dataclass(frozen=True)
class McConfig:
    trials: int = 100_000
    seed: int = 0
    chunk_size: int = 16_384

    def __post_init__(self):
        if self.trials < 1 or self.chunk_size < 1:
            raise DomainError("trials and chunk_size must be positive")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be an unsigned 64-bit integer")

    def chunks(self):
        """Yield ``(index, size)`` for every chunk."""
        n_full, rest = divmod(self.trials, self.chunk_size)
        for i in range(n_full):
            yield i, self.chunk_size
        if rest:
            yield n_full, rest


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    trials: int


def chunk_rng(seed: int, index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(index,))
    return np.random.Generator(np.random.Philox(ss))


def _estimate(chunk_fn, cfg: McConfig) -> McEstimate:
    # Per-chunk sums are combined in chunk order.
    total, total_sq = 0.0, 0.0
    for index, size in cfg.chunks():
        scores = chunk_fn(chunk_rng(cfg.seed, index), size)
        total += math.fsum(scores)
        total_sq += math.fsum(scores * scores)
    n = cfg.trials
    mean = total / n
    if n == 1:
        return McEstimate(mean, 0.0, 1)
    var = max(total_sq - n * mean * mean, 0.0) / (n - 1)
    return McEstimate(mean, math.sqrt(var / n), n)


def _sample_outcomes(rng, a, ens, p, m):
    """Outcomes for the amplitudes ``a``; every mixture component is centred at kappa*a."""
    mix = outcome_density(0.0, ens, p, m)
    w = mix.weights / mix.weights.sum()
    idx = rng.choice(len(w), size=len(a), p=w)
    return m.kappa * a + np.sqrt(mix.variances[idx]) * rng.standard_normal(len(a))


def simulate_G(ens: SignalEnsemble, p: ProbeSpec, m: MeasurementSpec, cfg: McConfig) -> McEstimate:
    """Empirical estimation fidelity: prior draw, outcome draw, overlap of the inferred signal."""

    def chunk(rng, size):
        a = ens.delta * rng.standard_normal(size)
        b = _sample_outcomes(rng, a, ens, p, m)
        return np.exp(-((a - b) ** 2) / (4.0 * ens.tau**2))

    return _estimate(chunk, cfg)


def simulate_F(p: ProbeSpec, tau: float, m: MeasurementSpec, cfg: McConfig) -> McEstimate:
    """Empirical transmission fidelity at amplitude 0."""
    ens = SignalEnsemble(tau, 0.0)

    def chunk(rng, size):
        b = _sample_outcomes(rng, np.zeros(size), ens, p, m)
        return np.asarray(conditional_overlap(b, 0.0, 0.0, ens, p, m))

    return _estimate(chunk, cfg)
