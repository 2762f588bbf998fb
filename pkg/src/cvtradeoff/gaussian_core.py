"""Gaussian wavepacket calculus.

Widths are standard deviations of the *squared* amplitude, so a wavepacket
of width ``w`` centred at ``m`` has amplitude

    (2 pi w^2)^(-1/4) exp(-(x - m)^2 / (4 w^2))

and ``|amplitude|^2`` is the normal density N(m, w^2).  Every quantity in
this module is obtained from closed-form Gaussian integrals; nothing is
discretised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class DomainError(ValueError):
    """Raised when a parameter lies outside the domain of an operation."""


def _check_width(name: str, value: float) -> None:
    if not value > 0 or not math.isfinite(value):
        raise DomainError(f"{name} must be a positive finite number, got {value!r}")


@dataclass(frozen=True)
class SqrtGaussian:
    """Real square-root Gaussian amplitude with unit L2 norm."""

    mean: float
    width: float

    def __post_init__(self):
        _check_width("width", self.width)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        w2 = self.width**2
        return (2.0 * math.pi * w2) ** -0.25 * np.exp(-((x - self.mean) ** 2) / (4.0 * w2))

    def inner(self, other: "SqrtGaussian"):
        """Return the (real) inner product with ``other``."""
        return sqrt_gaussian_inner(self.mean, self.width, other.mean, other.width)

    def product(self, other: "SqrtGaussian") -> tuple[float, "SqrtGaussian"]:
        """Pointwise product written as ``scale * SqrtGaussian``."""
        scale, mean, width = sqrt_gaussian_product(self.mean, self.width, other.mean, other.width)
        return float(scale), SqrtGaussian(float(mean), float(width))


def sqrt_gaussian_inner(m1, w1, m2, w2):
    """Integral over the real line of the product of two square-root Gaussians.

    Broadcasts over numpy arrays.
    """
    s = w1 * w1 + w2 * w2
    return np.sqrt(2.0 * w1 * w2 / s) * np.exp(-((m1 - m2) ** 2) / (4.0 * s))


def sqrt_gaussian_product(m1, w1, m2, w2):
    """Return ``(scale, mean, width)`` with ``g1(x) g2(x) = scale * g(x)``.

    ``g`` is again a unit-norm square-root Gaussian.  Broadcasts.
    """
    s = w1 * w1 + w2 * w2
    mean = (m1 * w2 * w2 + m2 * w1 * w1) / s
    width = w1 * w2 / np.sqrt(s)
    scale = (2.0 * math.pi * s) ** -0.25 * np.exp(-((m1 - m2) ** 2) / (4.0 * s))
    return scale, mean, width


@dataclass(frozen=True)
class SignalEnsemble:
    """Gaussian code: signals of width ``tau`` with amplitudes drawn from N(0, delta^2)."""

    tau: float
    delta: float

    def __post_init__(self):
        _check_width("tau", self.tau)
        if not self.delta >= 0 or not math.isfinite(self.delta):
            raise DomainError(f"delta must be non-negative, got {self.delta!r}")

    def signal(self, a: float) -> SqrtGaussian:
        return SqrtGaussian(a, self.tau)

    def prior_pdf(self, a):
        a = np.asarray(a, dtype=float)
        return np.exp(-0.5 * (a / self.delta) ** 2) / (math.sqrt(2.0 * math.pi) * self.delta)


def _beta(sigma: float) -> float:
    return math.sqrt(sigma * sigma + 0.25 / (sigma * sigma))


def _gamma(theta: float, beta: float) -> float:
    # (sqrt(1 + b^2 t^2) - 1) / (b t) rationalised, written with sin/cos so that
    # both endpoints theta = 0 and theta = pi/2 are exact.
    c, s = math.cos(theta), math.sin(theta)
    if theta == math.pi / 2:
        c = 0.0
    return beta * s / (math.hypot(c, beta * s) + c)


@dataclass(frozen=True)
class ProbeSpec:
    """Probe prepared as ``cos(theta) g_{0,sigma} + gamma sin(theta) g_{0,1/(2 sigma)}``."""

    theta: float
    sigma: float
    beta: float = field(init=False)
    gamma: float = field(init=False)

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi / 2:
            raise DomainError(f"theta must lie in [0, pi/2], got {self.theta!r}")
        _check_width("sigma", self.sigma)
        beta = _beta(self.sigma)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "gamma", _gamma(self.theta, beta))

    @property
    def cos_coef(self) -> float:
        """Coefficient of the localized component."""
        return 0.0 if self.theta == math.pi / 2 else math.cos(self.theta)

    @property
    def sin_coef(self) -> float:
        """Coefficient (gamma sin theta) of the delocalized component."""
        return self.gamma * math.sin(self.theta)

    @property
    def dual_width(self) -> float:
        return 0.5 / self.sigma

    def components(self) -> list[tuple[float, SqrtGaussian]]:
        return [
            (self.cos_coef, SqrtGaussian(0.0, self.sigma)),
            (self.sin_coef, SqrtGaussian(0.0, self.dual_width)),
        ]

    def norm_identity(self) -> float:
        """``cos^2 + gamma^2 sin^2 + 2 gamma sin cos / beta``; equals 1 for a valid probe."""
        c, s = self.cos_coef, self.sin_coef
        return c * c + s * s + 2.0 * c * s / self.beta

    def amplitude(self, x):
        return sum(coef * g(x) for coef, g in self.components())


def make_probe(theta: float, sigma: float) -> ProbeSpec:
    return ProbeSpec(float(theta), float(sigma))


@dataclass(frozen=True)
class EnergyReport:
    signal_mean_energy: float
    probe_energy: float


def signal_overlap(a: float, tau: float, b: float, tau2: float) -> float:
    """Squared overlap ``|<psi_{b,tau2}|psi_{a,tau}>|^2`` of two signal wavepackets."""
    _check_width("tau", tau)
    _check_width("tau2", tau2)
    return float(sqrt_gaussian_inner(a, tau, b, tau2) ** 2)


def signal_energy(a: float, tau: float) -> float:
    """Mean of ``(X^2 + P^2)/2`` in the signal state centred at ``a``."""
    _check_width("tau", tau)
    return 0.5 * (a * a + tau * tau + 0.25 / (tau * tau))


def mean_signal_energy(ens: SignalEnsemble) -> float:
    """Prior-averaged signal energy per channel use."""
    tau = ens.tau
    return 0.5 * (ens.delta**2 + tau * tau + 0.25 / (tau * tau))


def probe_energy(p: ProbeSpec) -> float:
    r"""Mean energy of the probe state.

    Uses the first closed form,
    ``(beta^2 (cos^2 + gamma^2 sin^2) + gamma sin(2 theta) / beta^3) / 2``.
    """
    c, s = p.cos_coef, math.sin(p.theta)
    b = p.beta
    return 0.5 * (b * b * (c * c + (p.gamma * s) ** 2) + p.gamma * 2.0 * s * c / b**3)


def energy_report(ens: SignalEnsemble, p: ProbeSpec) -> EnergyReport:
    return EnergyReport(mean_signal_energy(ens), probe_energy(p))


def min_energy_theta(sigma: float) -> float:
    """Angle minimising the probe energy at fixed ``sigma``."""
    _check_width("sigma", sigma)
    b = _beta(sigma)
    t2 = 1.0 + 2.0 * (b - math.sqrt(2.0 * b * (1.0 + b))) / (2.0 + b)
    return 2.0 * math.atan(math.sqrt(max(t2, 0.0)))


def min_probe_energy(sigma: float) -> float:
    _check_width("sigma", sigma)
    b = _beta(sigma)
    return (1.0 + b * (b - 1.0) * (b * b + 1.0)) / (2.0 * b * b)


def squeezing_for_width(tau: float) -> float:
    """Squeezing parameter ``r`` with ``sinh^2 r = (tau^2 + 1/(4 tau^2)) / 2``.

    The relation is used exactly as printed.  Note that it gives ``r != 0``
    at ``tau^2 = 1/2``, where the wavepacket is the coherent state and one
    would expect ``r = 0``.
    """
    _check_width("tau", tau)
    return math.asinh(math.sqrt(0.5 * (tau * tau + 0.25 / (tau * tau))))
