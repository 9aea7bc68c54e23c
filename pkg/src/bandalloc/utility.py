"""Closed-form device utility math.

A device receiving bandwidth ``x`` gets net utility

    omega * ln(c * x + 1) - price * x**2

where ``c`` converts bandwidth to achievable rate for the shared channel
quality. The derivative of this function is strictly decreasing on its
domain, so it has a global inverse; the inverse is the larger root of a
quadratic and is computed here in a cancellation-free form. Both the
distributed engine and the centralized oracle are built on these four
functions.
"""

from __future__ import annotations

import math

__all__ = [
    "capacity_coefficient",
    "evaluate",
    "derivative",
    "invert_derivative",
]


def capacity_coefficient(snr: float) -> float:
    """Rate per unit bandwidth, ``log2(1 + snr)``, for signal-to-noise ratio ``snr``."""
    if not (snr > 0.0 and math.isfinite(snr)):
        raise ValueError(f"snr must be a positive finite number, got {snr}")
    return math.log2(1.0 + snr)


def _check_log_domain(c: float, x: float) -> float:
    arg = c * x + 1.0
    if arg <= 0.0:
        raise ValueError(
            f"bandwidth {x} is outside the utility domain (requires x > {-1.0 / c})"
        )
    return arg


def evaluate(omega: float, c: float, price: float, x: float) -> float:
    """Net utility ``omega * ln(c*x + 1) - price * x**2`` at bandwidth ``x``.

    Parameters
    ----------
    omega : float
        Device priority weight, > 0.
    c : float
        Capacity coefficient from :func:`capacity_coefficient`.
    price : float
        Quadratic usage price, > 0.
    x : float
        Bandwidth share; must satisfy ``c*x + 1 > 0``.
    """
    arg = _check_log_domain(c, x)
    return omega * math.log(arg) - price * x * x


def derivative(omega: float, c: float, price: float, x: float) -> float:
    """Marginal utility ``omega*c/(c*x + 1) - 2*price*x``, strictly decreasing in ``x``."""
    arg = _check_log_domain(c, x)
    return omega * c / arg - 2.0 * price * x


def invert_derivative(omega: float, c: float, price: float, v: float) -> float:
    """Unique bandwidth ``x`` with ``derivative(omega, c, price, x) == v``.

    Rearranging ``omega*c/(c*x+1) - 2*price*x = v`` gives the quadratic

        2*price*c * x**2 + (2*price + v*c) * x + (v - omega*c) = 0

    whose discriminant simplifies to ``(2*price - v*c)**2 + 8*omega*price*c**2``.
    That form is positive for every real ``v`` and free of cancellation, so the
    inverse is total and accurate across the whole real line. The larger root
    is the one inside the utility domain ``x > -1/c``.
    """
    if not (price > 0.0 and math.isfinite(price)):
        raise ValueError(f"price must be a positive finite number, got {price}")
    if not (c > 0.0 and math.isfinite(c)):
        raise ValueError(f"capacity coefficient must be positive, got {c}")
    a = 2.0 * price * c
    b = 2.0 * price + v * c
    const = v - omega * c
    disc = (2.0 * price - v * c) ** 2 + 8.0 * omega * price * c * c
    root = math.sqrt(disc)
    # pair b with the same-signed root so neither quotient cancels
    q = -0.5 * (b + math.copysign(root, b)) if b != 0.0 else -0.5 * root
    return max(q / a, const / q)
