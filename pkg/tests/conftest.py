"""Brute-force references built directly from the wavefunctions with scipy.integrate.quad.

These never touch the package's closed forms or its Gauss-Legendre oracle.
"""

import math

import pytest
from scipy.integrate import quad


def packet(x, mean, width):
    return (2 * math.pi * width * width) ** -0.25 * math.exp(-((x - mean) ** 2) / (4 * width * width))


def probe_parts(theta, sigma):
    beta = math.sqrt(sigma * sigma + 0.25 / sigma**2)
    if theta == 0:
        gamma = 0.0
    else:
        t = math.tan(theta)
        gamma = (math.sqrt(1 + beta * beta * t * t) - 1) / (beta * t)
    return math.cos(theta), gamma * math.sin(theta), 0.5 / sigma


def brute_density(b, a, tau, theta, sigma, kappa):
    """Outcome density by direct quadrature of |g_a|^2 [probe branch sum]^2."""
    c, s, dw = probe_parts(theta, sigma)
    u = b / kappa

    def f(y):
        return packet(y, a, tau) ** 2 * (c * packet(y, u, sigma) + s * packet(y, u, dw)) ** 2

    return quad(f, a - 40, a + 40, points=sorted({a, u}) if abs(u - a) < 40 else [a], limit=400, epsabs=1e-15)[0] / kappa


def brute_amp_overlap(b, a, target, tau, theta, sigma, kappa):
    """<phi~_b | psi_target> by direct quadrature of the amplitude product."""
    c, s, dw = probe_parts(theta, sigma)
    u = b / kappa

    def f(y):
        return packet(y, a, tau) * (c * packet(y, u, sigma) + s * packet(y, u, dw)) * packet(y, target, tau)

    return quad(f, a - 40, a + 40, points=sorted({a, u, target}), limit=400, epsabs=1e-15)[0] / math.sqrt(kappa)


def brute_norm(b, a, tau, theta, sigma, kappa):
    c, s, dw = probe_parts(theta, sigma)
    u = b / kappa

    def f(y):
        return (packet(y, a, tau) * (c * packet(y, u, sigma) + s * packet(y, u, dw))) ** 2

    return quad(f, a - 40, a + 40, points=sorted({a, u}), limit=400, epsabs=1e-15)[0] / kappa


@pytest.fixture
def brute():
    class B:
        density = staticmethod(brute_density)
        amp_overlap = staticmethod(brute_amp_overlap)
        norm = staticmethod(brute_norm)
        packet = staticmethod(packet)

    return B


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
