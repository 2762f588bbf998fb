"""Optimised gain, closed-form fidelities and trade-off curves per probe configuration.

Configurations:

* ``A`` -- ideal probe, ``sigma -> 0`` (localized/delocalized superposition, swept by theta);
* ``B`` -- undisplaced probe, ``theta = 0`` (swept by sigma);
* ``C`` -- minimum-energy probe, ``sigma^2 = 1/2`` (swept by the signal width tau).

Two printed expressions for configuration C are wrong and are corrected
here: the denominator of G must read ``2 tau^2 (1 + 3 delta^2)`` and the
denominator of the trade-off curve must read ``2 - 4 delta^2 + G^2 (5 delta^2 - 2)``.
The printed variants stay reachable with ``verbatim=True``.

A zero alphabet size makes the optimal gain vanish; by convention the
receiver then always infers amplitude 0 and G = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from cvtradeoff.fidelities import FidelityPoint
from cvtradeoff.gaussian_core import DomainError, SignalEnsemble

SQRT_2_3 = math.sqrt(2.0 / 3.0)
CONFIGS = ("A", "B", "C", "CV_BOUND", "QUDIT")
DEFAULT_POINTS = 201
_EPS = 1e-12


@dataclass(frozen=True)
class WidthRatios:
    """``y = delta^2 / tau^2`` and ``z = sigma^2 / tau^2``."""

    y: float
    z: float = 1.0

    def __post_init__(self):
        if not self.y >= 0:
            raise DomainError(f"y must be non-negative, got {self.y!r}")
        if not self.z > 0:
            raise DomainError(f"z must be positive, got {self.z!r}")

    @classmethod
    def from_widths(cls, tau: float, delta: float, sigma: float | None = None) -> "WidthRatios":
        if not tau > 0:
            raise DomainError(f"tau must be positive, got {tau!r}")
        z = 1.0 if sigma is None else (sigma / tau) ** 2
        return cls((delta / tau) ** 2, z)


@dataclass(frozen=True)
class TradeoffCurve:
    config: str
    param: float
    sweep: str
    samples: tuple[tuple[float, float, float], ...] = field(default=())  # (sweep value, G, F)

    @property
    def G(self) -> np.ndarray:
        return np.array([s[1] for s in self.samples])

    @property
    def F(self) -> np.ndarray:
        return np.array([s[2] for s in self.samples])


def kappa_opt(config: str, ens: SignalEnsemble, sigma: float | None = None) -> float:
    """Gain maximising the estimation fidelity in the given configuration."""
    d2, t2 = ens.delta**2, ens.tau**2
    if config == "A":
        return d2 / (d2 + t2)
    if config == "B":
        if sigma is None:
            raise DomainError("configuration B needs the probe width sigma")
        return d2 / (d2 + t2 + sigma * sigma)
    if config == "C":
        return 2.0 * d2 / (1.0 + 2.0 * d2 + 2.0 * t2)
    raise DomainError(f"unknown configuration {config!r}")


def _check_G(G: float, lo: float, hi: float, what: str) -> float:
    if not (lo - _EPS <= G <= hi + _EPS):
        raise DomainError(f"G={G!r} outside the {what} domain [{lo:.9g}, {hi:.9g}]")
    return min(max(G, lo), hi)


# -- configuration A ----------------------------------------------------------

def _intercept_A(y: float) -> float:
    return math.sqrt((1.0 + y) / (1.0 + 1.5 * y))


def config_A(theta: float, ratios: WidthRatios) -> FidelityPoint:
    if not 0.0 <= theta <= math.pi / 2:
        raise DomainError(f"theta must lie in [0, pi/2], got {theta!r}")
    F = math.sin(theta) ** 2
    if ratios.y == 0.0:
        return FidelityPoint(F, 1.0)
    c = 0.0 if theta == math.pi / 2 else math.cos(theta)
    return FidelityPoint(F, c * c * _intercept_A(ratios.y))


def curve_A(G: float, y: float) -> float:
    """Linear trade-off ``1 - G / intercept``."""
    hi = _intercept_A(y)
    G = _check_G(G, 0.0, hi, "configuration A")
    return 1.0 - G / hi


# -- configuration B ----------------------------------------------------------

def config_B(ratios: WidthRatios) -> FidelityPoint:
    y, z = ratios.y, ratios.z
    F = math.sqrt(2.0 * z / (1.0 + 2.0 * z))
    G = math.sqrt((1.0 + z + y) / (1.0 + z + 0.5 * y * (3.0 + z)))
    return FidelityPoint(F, G)


def domain_B(y: float) -> tuple[float, float]:
    """G range of the configuration-B curve: ``z -> infinity`` to ``z -> 0``."""
    return math.sqrt(2.0 / (2.0 + y)), _intercept_A(y)


def curve_B(G: float, y: float) -> float:
    lo, hi = domain_B(y)
    G = _check_G(G, lo, hi, "configuration B")
    g2 = G * G
    num = g2 * (4.0 + 6.0 * y) - 4.0 * (1.0 + y)
    den = g2 * (2.0 + 5.0 * y) - 4.0 * (0.5 + y)
    if num == 0.0:
        return 0.0
    return math.sqrt(max(num / den, 0.0))


# -- configuration C ----------------------------------------------------------

def config_C(tau: float, delta: float, *, verbatim: bool = False) -> FidelityPoint:
    if not tau > 0 or not delta >= 0:
        raise DomainError("tau must be positive and delta non-negative")
    t2, d2 = tau * tau, delta * delta
    F = math.sqrt(1.0 / (1.0 + t2))
    cross = t2 if verbatim else 2.0 * t2
    G = tau * math.sqrt(2.0 * (1.0 + 2.0 * d2 + 2.0 * t2) / (4.0 * t2 * t2 + d2 + cross * (1.0 + 3.0 * d2)))
    return FidelityPoint(F, G)


def _width_for_G_C(G: float, delta: float) -> float:
    """Squared signal width at which configuration C reaches estimation fidelity ``G``."""
    g2, d2 = G * G, delta * delta
    a2 = 4.0 * (g2 - 1.0)
    a1 = 2.0 * g2 * (1.0 + 3.0 * d2) - 2.0 * (1.0 + 2.0 * d2)
    a0 = g2 * d2
    root = math.sqrt(a1 * a1 - 4.0 * a2 * a0)
    if a1 <= 0:
        return 2.0 * a0 / (root - a1)
    return (a1 + root) / (-2.0 * a2)


def curve_C(G: float, delta: float, *, verbatim: bool = False, strict: bool = True) -> float:
    """Trade-off of the minimum-energy probe for alphabet size ``delta``.

    With ``strict=False`` out-of-domain or non-real results come back as NaN
    instead of raising (used when auditing the printed variant).
    """
    try:
        G = _check_G(G, 0.0, 1.0, "configuration C")
    except DomainError:
        if strict:
            raise
        return math.nan
    g2, d2 = G * G, delta * delta
    disc = (1.0 + 2.0 * d2) ** 2 - 2.0 * g2 * (1.0 + 3.0 * d2 + 6.0 * d2 * d2) + g2 * g2 * (1.0 + 2.0 * d2 + 9.0 * d2 * d2)
    num = 3.0 - 2.0 * d2 + 3.0 * g2 * (d2 - 1.0) - math.sqrt(max(disc, 0.0))
    sign = -1.0 if verbatim else 1.0
    den = 2.0 - 4.0 * d2 + sign * g2 * (5.0 * d2 - 2.0)
    if verbatim:
        ratio = num / den if den != 0.0 else math.nan
        if not ratio >= 0:
            if strict:
                raise DomainError(f"printed curve is not real at G={G!r}, delta={delta!r}")
            return math.nan
        return math.sqrt(ratio)
    if G == 1.0:
        return 0.0
    if delta == 0.0:
        return 1.0
    # num/den is 0/0 where the denominator changes sign and at G -> 0 when
    # delta^2 = 1/2; fall back to inverting G(tau) directly there.
    if abs(den) < 1e-6 or G < 1e-6:
        return 1.0 / math.sqrt(1.0 + _width_for_G_C(G, delta))
    return math.sqrt(max(num / den, 0.0))


def curve_C_parametric(delta: float, taus) -> list[tuple[float, float, float]]:
    """``(tau, G, F)`` traced by sweeping the signal width."""
    out = []
    for t in taus:
        pt = config_C(float(t), delta)
        out.append((float(t), pt.G, pt.F))
    return out


# -- bounds -------------------------------------------------------------------

def cv_bound(G: float) -> float:
    """Large-alphabet limit of the configuration-C curve."""
    G = _check_G(G, 0.0, SQRT_2_3, "CV bound")
    g2 = G * G
    return math.sqrt(max(4.0 - 6.0 * g2, 0.0) / (4.0 - 5.0 * g2))


def qudit_bound(G: float, d: int) -> float:
    """Optimal fidelity balance for uniformly random pure states of dimension ``d``."""
    if int(d) != d or d < 2:
        raise DomainError(f"d must be an integer >= 2, got {d!r}")
    lo, hi = 1.0 / (d + 1), 2.0 / (d + 1)
    G = _check_G(G, lo, hi, "qudit bound")
    return lo + (math.sqrt(max(G - lo, 0.0)) + math.sqrt(max((d - 1) * (hi - G), 0.0))) ** 2


# -- comparison and curve generation ------------------------------------------

def compare_B_C(delta: float, G_grid=None, points: int = DEFAULT_POINTS) -> list[tuple[float, float, float]]:
    """``(G, F_B(G, 2 delta^2), F_C(G, delta))`` over the common G range at ``tau^2 = 1/2``.

    Without ``G_grid`` the whole configuration-B range is sampled uniformly
    (it is always contained in the configuration-C range).
    """
    y = 2.0 * delta * delta
    lo, hi = domain_B(y)
    if G_grid is None:
        G_grid = np.linspace(lo, hi, points)
    rows = []
    for G in G_grid:
        G = float(G)
        if lo - _EPS <= G <= hi + _EPS:
            rows.append((G, curve_B(G, y), curve_C(G, delta)))
    return rows


def generate_curve(config: str, param: float, points: int = DEFAULT_POINTS) -> TradeoffCurve:
    """Sample a trade-off curve with endpoints on its analytic intercepts.

    ``param`` is ``y`` for A and B, ``delta`` for C, ``d`` for QUDIT and is
    ignored for CV_BOUND.  Configuration A is swept by theta, all others by G.
    """
    if points < 2:
        raise DomainError("points must be at least 2")
    if config == "A":
        ratios = WidthRatios(param)
        samples = []
        for th in np.linspace(0.0, math.pi / 2, points):
            pt = config_A(float(th), ratios)
            samples.append((float(th), pt.G, pt.F))
        return TradeoffCurve("A", param, "theta", tuple(samples))
    if config == "B":
        lo, hi = domain_B(param)
        fn = lambda G: curve_B(G, param)
    elif config == "C":
        lo, hi = 0.0, 1.0
        fn = lambda G: curve_C(G, param)
    elif config == "CV_BOUND":
        lo, hi = 0.0, SQRT_2_3
        fn = cv_bound
    elif config == "QUDIT":
        d = int(param)
        lo, hi = 1.0 / (d + 1), 2.0 / (d + 1)
        fn = lambda G: qudit_bound(G, d)
    else:
        raise DomainError(f"unknown configuration {config!r}")
    samples = tuple((float(G), float(G), fn(float(G))) for G in np.linspace(lo, hi, points))
    return TradeoffCurve(config, param, "G", samples)
