"""Centralized ground-truth solver.

At the welfare optimum under the total-allocation constraint, every
device's marginal utility equals one common value. The map from that
common value to the implied allocation total is strictly decreasing, so
the optimum is found by bisecting on it until the total matches the
confirmed demand total.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .admission import ConfirmedDemands
from .scenario import Scenario
from .utility import capacity_coefficient, derivative, evaluate, invert_derivative

__all__ = ["OracleSolution", "objective", "solve"]

_MAX_BISECTIONS = 200
_MAX_WIDENINGS = 200


@dataclass(frozen=True)
class OracleSolution:
    """Optimal allocations, the common marginal value, and the welfare value.

    ``lam`` is None for the degenerate all-zero-demand instance, where no
    marginal value is pinned down.
    """

    allocations: tuple[float, ...]
    lam: float | None
    objective: float


def objective(scenario: Scenario, allocations: tuple[float, ...]) -> float:
    """Total welfare: sum of device utilities at the given allocations."""
    if len(allocations) != scenario.n:
        raise ValueError(
            f"allocation count {len(allocations)} does not match device count {scenario.n}"
        )
    g = scenario.globals
    c = capacity_coefficient(g.snr)
    terms = []
    for i, x in enumerate(allocations):
        try:
            terms.append(evaluate(scenario.devices[i].omega, c, g.price, x))
        except ValueError as exc:
            raise ValueError(f"allocations[{i}]: {exc}") from None
    return math.fsum(terms)


def solve(scenario: Scenario, confirmed: ConfirmedDemands) -> OracleSolution:
    """Equal-marginal allocation whose total equals the confirmed total.

    Bisects on the common marginal value v, using the closed-form inverse
    derivative per device, until the bracket width falls below
    ``1e-12 * max(1, |v|)`` or 200 halvings. The initial bracket spans
    [min derivative at bandwidth*n, max omega*c] and is widened first if
    it does not straddle the target.
    """
    n = scenario.n
    if len(confirmed.values) != n:
        raise ValueError(
            f"confirmed demand count {len(confirmed.values)} does not match "
            f"device count {n}"
        )
    g = scenario.globals
    c = capacity_coefficient(g.snr)
    omegas = scenario.omegas
    target = confirmed.total

    if target == 0.0:
        zeros = tuple(0.0 for _ in range(n))
        return OracleSolution(allocations=zeros, lam=None, objective=objective(scenario, zeros))

    def alloc_sum(v: float) -> float:
        return math.fsum(invert_derivative(w, c, g.price, v) for w in omegas)

    lo = min(derivative(w, c, g.price, g.bandwidth * n) for w in omegas)
    hi = max(w * c for w in omegas)
    for _ in range(_MAX_WIDENINGS):
        if alloc_sum(lo) >= target:
            break
        lo -= abs(lo) + 1.0
    else:
        raise ArithmeticError("bisection bracket failure: no lower bound found")
    for _ in range(_MAX_WIDENINGS):
        if alloc_sum(hi) <= target:
            break
        hi += abs(hi) + 1.0
    else:
        raise ArithmeticError("bisection bracket failure: no upper bound found")

    for _ in range(_MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        if hi - lo <= 1e-12 * max(1.0, abs(mid)):
            break
        if alloc_sum(mid) > target:
            lo = mid
        else:
            hi = mid

    lam = 0.5 * (lo + hi)
    allocations = tuple(invert_derivative(w, c, g.price, lam) for w in omegas)
    return OracleSolution(
        allocations=allocations, lam=lam, objective=objective(scenario, allocations)
    )
