"""C-sum coupling, gained position measurement and conditional signal states.

After the C-sum gate the probe position is ``x + y`` (``y`` the signal
position).  Reading the probe at ``b / kappa`` leaves the signal in

    phi_b(y) = kappa^(-1/2) g_{a,tau}(y) [cos(theta) g_{b/kappa,sigma}(y)
                                          + gamma sin(theta) g_{b/kappa,1/(2 sigma)}(y)]

which is a sum of two square-root Gaussians.  The outcome density is the
squared norm of this vector; integrating the three terms of the square in
closed form gives a three-component Gaussian mixture in ``b`` whose
components all share the mean ``kappa a``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from cvtradeoff.gaussian_core import (
    DomainError,
    ProbeSpec,
    SignalEnsemble,
    sqrt_gaussian_inner,
    sqrt_gaussian_product,
)


@dataclass(frozen=True)
class MeasurementSpec:
    kappa: float

    def __post_init__(self):
        if not self.kappa > 0 or not math.isfinite(self.kappa):
            raise DomainError(f"kappa must be positive, got {self.kappa!r}")


@dataclass(frozen=True)
class GaussianMixture1D:
    """Finite mixture of normal densities; ``components`` holds (weight, mean, variance)."""

    components: tuple[tuple[float, float, float], ...]

    def __post_init__(self):
        for w, _, v in self.components:
            if not v > 0:
                raise DomainError(f"component variance must be positive, got {v!r}")
            if w < 0:
                raise DomainError(f"component weight must be non-negative, got {w!r}")

    @property
    def weights(self) -> np.ndarray:
        return np.array([c[0] for c in self.components])

    @property
    def means(self) -> np.ndarray:
        return np.array([c[1] for c in self.components])

    @property
    def variances(self) -> np.ndarray:
        return np.array([c[2] for c in self.components])

    @property
    def total_mass(self) -> float:
        return math.fsum(c[0] for c in self.components)

    def pdf(self, b):
        b = np.asarray(b, dtype=float)
        out = np.zeros_like(b)
        for w, m, v in self.components:
            out = out + w * np.exp(-0.5 * (b - m) ** 2 / v) / math.sqrt(2.0 * math.pi * v)
        return out

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Draw ``size`` outcomes: pick a component by weight, then one normal variate."""
        w = self.weights / self.weights.sum()
        idx = rng.choice(len(w), size=size, p=w)
        z = rng.standard_normal(size)
        return self.means[idx] + np.sqrt(self.variances[idx]) * z


def outcome_density(a: float, ens: SignalEnsemble, p: ProbeSpec, m: MeasurementSpec) -> GaussianMixture1D:
    """Exact density of the measurement outcome ``b`` given the sent amplitude ``a``."""
    c, s = p.cos_coef, p.sin_coef
    k2 = m.kappa**2
    t2 = ens.tau**2
    # Each squared-bracket term integrated against |g_{a,tau}|^2 is a normal
    # density in b/kappa with mean a; the cross term carries the overlap 1/beta
    # and the variance of the product of the two probe branches, 1/(2 beta^2).
    candidates = [
        (c * c, k2 * (t2 + p.sigma**2)),
        (s * s, k2 * (t2 + p.dual_width**2)),
        (2.0 * c * s / p.beta, k2 * (t2 + 0.5 / p.beta**2)),
    ]
    mean = m.kappa * a
    return GaussianMixture1D(tuple((w, mean, v) for w, v in candidates if w > 0.0))


@dataclass(frozen=True)
class ConditionalState:
    """Unnormalized conditional signal state as a sum of square-root Gaussians.

    ``terms`` holds ``(coefficient, mean, width)`` triples.
    """

    outcome: float
    terms: tuple[tuple[float, float, float], ...]

    @property
    def norm(self) -> float:
        """Squared norm; equals the outcome density at ``outcome``."""
        total = 0.0
        for ci, mi, wi in self.terms:
            for cj, mj, wj in self.terms:
                total += ci * cj * float(sqrt_gaussian_inner(mi, wi, mj, wj))
        return total

    def normalized(self) -> "ConditionalState":
        scale = 1.0 / math.sqrt(self.norm)
        return ConditionalState(self.outcome, tuple((c * scale, mu, w) for c, mu, w in self.terms))

    def amplitude(self, y):
        y = np.asarray(y, dtype=float)
        w2 = [w * w for _, _, w in self.terms]
        return sum(
            c * (2.0 * math.pi * v) ** -0.25 * np.exp(-((y - mu) ** 2) / (4.0 * v))
            for (c, mu, _), v in zip(self.terms, w2)
        )

    def inner(self, mean: float, width: float) -> float:
        """Inner product with the wavepacket ``g_{mean,width}``."""
        return sum(c * float(sqrt_gaussian_inner(mu, w, mean, width)) for c, mu, w in self.terms)


def _branches(p: ProbeSpec):
    return ((p.cos_coef, p.sigma), (p.sin_coef, p.dual_width))


def conditional_state(b: float, a: float, ens: SignalEnsemble, p: ProbeSpec, m: MeasurementSpec) -> ConditionalState:
    """Signal state left after observing outcome ``b`` (unnormalized)."""
    u = b / m.kappa
    pref = 1.0 / math.sqrt(m.kappa)
    terms = []
    for coef, width in _branches(p):
        if coef == 0.0:
            continue
        scale, mean, w = sqrt_gaussian_product(a, ens.tau, u, width)
        terms.append((pref * coef * float(scale), float(mean), float(w)))
    return ConditionalState(float(b), tuple(terms))


def conditional_amplitude_overlap(b, a, target_amp, ens: SignalEnsemble, p: ProbeSpec, m: MeasurementSpec):
    """``<phi~_b | psi_{target,tau}>`` for the unnormalized conditional state.

    Vectorised over ``b``.
    """
    b = np.asarray(b, dtype=float)
    u = b / m.kappa
    tau = ens.tau
    total = np.zeros_like(b)
    for coef, width in _branches(p):
        if coef == 0.0:
            continue
        scale, mean, w = sqrt_gaussian_product(a, tau, u, width)
        total = total + coef * scale * sqrt_gaussian_inner(mean, w, target_amp, tau)
    return total / math.sqrt(m.kappa)


def conditional_norm(b, a, ens: SignalEnsemble, p: ProbeSpec, m: MeasurementSpec):
    """Squared norm of the unnormalized conditional state; vectorised over ``b``."""
    b = np.asarray(b, dtype=float)
    u = b / m.kappa
    parts = []
    for coef, width in _branches(p):
        if coef == 0.0:
            continue
        scale, mean, w = sqrt_gaussian_product(a, ens.tau, u, width)
        parts.append((coef * scale, mean, w))
    total = np.zeros_like(b)
    for ci, mi, wi in parts:
        for cj, mj, wj in parts:
            total = total + ci * cj * sqrt_gaussian_inner(mi, wi, mj, wj)
    return total / m.kappa


def conditional_overlap(b, a, target_amp, ens: SignalEnsemble, p: ProbeSpec, m: MeasurementSpec):
    """``|<phi_b|psi_{target,tau}>|^2`` with ``phi_b`` normalized.

    Scalar in, float out; arrays of ``b`` are also accepted.
    """
    amp = conditional_amplitude_overlap(b, a, target_amp, ens, p, m)
    norm = conditional_norm(b, a, ens, p, m)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = amp * amp / norm
    out = np.where(norm > 0, out, 0.0)
    return float(out) if out.ndim == 0 else out
