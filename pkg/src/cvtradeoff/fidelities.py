"""Closed-form averaged transmission (F) and estimation (G) fidelities.

Both expressions contain the combination ``sqrt(1 + 4 s^4 - (1 - 2 s^2)^2 cos^2 t) - 2 s cos t``,
which vanishes at ``t = 0`` and loses all significant digits there when
evaluated naively.  It is rewritten as

    (1 + 4 s^4) sin^2 t / (sqrt(...) + 2 s cos t)

and the estimation fidelity's ``tan^2`` terms are multiplied through by
``cos^2`` so that ``t = pi/2`` needs no special casing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from cvtradeoff.channel import MeasurementSpec
from cvtradeoff.gaussian_core import DomainError, ProbeSpec, SignalEnsemble


@dataclass(frozen=True)
class FidelityPoint:
    F: float
    G: float

    def clamped(self) -> "FidelityPoint":
        return FidelityPoint(clamp_unit(self.F), clamp_unit(self.G))


def clamp_unit(x: float) -> float:
    return min(1.0, max(0.0, x))


def _cos_sin(theta: float) -> tuple[float, float]:
    if theta == math.pi / 2:
        return 0.0, 1.0
    return math.cos(theta), math.sin(theta)


def _root_and_gap(sigma: float, theta: float) -> tuple[float, float, float]:
    """Return ``(cos t, R, R - 2 s cos t)`` with the difference computed stably."""
    c, s = _cos_sin(theta)
    q = 1.0 + 4.0 * sigma**4
    root = math.sqrt(4.0 * sigma * sigma * c * c + q * s * s)
    gap = q * s * s / (root + 2.0 * sigma * c)
    return c, root, gap


def transmission_fidelity(p: ProbeSpec, tau: float) -> float:
    """Average overlap between the conditional and the transmitted signal.

    Independent of the amplitude, the alphabet size and the measurement gain.
    """
    if not tau > 0:
        raise DomainError(f"tau must be positive, got {tau!r}")
    sig = p.sigma
    s2, t2 = sig * sig, tau * tau
    q = 1.0 + 4.0 * s2 * s2
    c, _, gap = _root_and_gap(sig, p.theta)
    first = math.sqrt(2.0) * sig * c * c / math.sqrt(2.0 * s2 + t2)
    second = 4.0 * sig * c * gap / math.sqrt(q * (q + 4.0 * s2 * t2))
    third = gap * gap / (q * math.sqrt(1.0 + 2.0 * s2 * t2))
    return first + second + third


def estimation_fidelity(p: ProbeSpec, ens: SignalEnsemble, m: MeasurementSpec) -> float:
    """Prior-averaged overlap between the inferred and the transmitted signal."""
    sig, tau, delta, k = p.sigma, ens.tau, ens.delta, m.kappa
    s2, t2, d2 = sig * sig, tau * tau, delta * delta
    q = 1.0 + 4.0 * s2 * s2
    c, _, gap = _root_and_gap(sig, p.theta)
    lead = math.sqrt(2.0) * tau
    bias = d2 * (k - 1.0) ** 2

    first = lead * c * c / math.sqrt(bias + 2.0 * t2 + k * k * (s2 + t2))
    # cos^2 (8 s^2 - 4 s sqrt(4 s^2 + q tan^2)) = -4 s cos * gap
    second = lead * 4.0 * sig * c * gap / math.sqrt(
        q * (bias * q + 2.0 * q * t2 + k * k * (2.0 * s2 + t2 + 4.0 * s2 * s2 * t2))
    )
    # cos^2 (16 s^3 + 2 (s + 4 s^5) tan^2 - 8 s^2 sqrt(...)) = 2 s gap^2
    third = lead * 2.0 * sig * gap * gap / (
        q
        * math.sqrt(
            4.0 * s2 * (d2 + 2.0 * t2) + k * k * (1.0 + 4.0 * d2 * s2 + 4.0 * s2 * t2) - 8.0 * k * d2 * s2
        )
    )
    return first + second + third


def fidelity_point(p: ProbeSpec, ens: SignalEnsemble, m: MeasurementSpec) -> FidelityPoint:
    return FidelityPoint(transmission_fidelity(p, ens.tau), estimation_fidelity(p, ens, m))
