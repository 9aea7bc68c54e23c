"""Distributed allocation engine: synchronous rounds of derivative gossip.

Each device holds a bandwidth iterate ``x``, its marginal utility
``u_prime`` (the value exchanged with neighbors), and an integral
correction ``zeta``. One round, computed for every device from round-k
values only:

    q     = eta * sum(u_prime[j] - u_prime[i] for j in neighbors(i))
    u_new = u_prime + q - zeta + mu * (x - d_star)
    zeta  = zeta - mu * q
    x     = invert_derivative(u_new)

The gossip term drives all marginal utilities to a common value; the
correction term's conserved zero sum pins the allocation total to the
confirmed demand total, so the two together land on the equal-marginal
(KKT) point of the capacity-constrained welfare problem.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .admission import ConfirmedDemands, admit
from .scenario import Scenario
from .topology import Topology, build as build_topology
from .utility import capacity_coefficient, derivative, invert_derivative

__all__ = [
    "NumericalError",
    "DeviceState",
    "EngineState",
    "TraceRow",
    "Diagnostics",
    "RunResult",
    "init",
    "step",
    "consensus_residual",
    "constraint_residual",
    "run",
]

# consecutive residual-growth rounds before a run is declared divergent
_DIVERGENCE_STREAK = 100


class NumericalError(RuntimeError):
    """Non-finite arithmetic during iteration; carries iteration and device."""

    def __init__(self, iteration: int, device: int, detail: str = "non-finite value"):
        super().__init__(f"{detail} at iteration {iteration}, device {device}")
        self.iteration = iteration
        self.device = device


@dataclass(frozen=True)
class DeviceState:
    """Round-boundary snapshot of one device.

    ``u_prime`` is the marginal utility the device quotes to neighbors and
    ``x`` is always ``invert_derivative(u_prime)``. ``q`` is the gossip
    innovation applied in the round that produced this state (zero at
    initialization).
    """

    x: float
    u_prime: float
    zeta: float
    q: float


@dataclass(frozen=True)
class EngineState:
    devices: tuple[DeviceState, ...]
    iteration: int
    confirmed: ConfirmedDemands


@dataclass(frozen=True)
class TraceRow:
    iteration: int
    device: int
    x: float
    u_prime: float
    zeta: float
    q: float


@dataclass(frozen=True)
class Diagnostics:
    consensus_residual: float
    constraint_residual: float
    diverged: bool = False
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class RunResult:
    allocations: tuple[float, ...]
    consensus_value: float
    iterations_used: int
    converged: bool
    trace: tuple[TraceRow, ...]
    diagnostics: Diagnostics


def init(scenario: Scenario, confirmed: ConfirmedDemands) -> EngineState:
    """Initial state: zeta at zero and x per the scenario's init mode.

    Modes: ``demand`` starts from the confirmed targets, ``uniform``
    splits the budget evenly, ``seeded-random`` draws each x uniformly
    from [0, bandwidth] using the scenario seed (0 when unset). The zero
    zeta start is required for the conserved-sum constraint mechanism.
    """
    n = scenario.n
    if len(confirmed.values) != n:
        raise ValueError(
            f"confirmed demand count {len(confirmed.values)} does not match "
            f"device count {n}"
        )
    g = scenario.globals
    mode = scenario.options.init_mode
    if mode == "demand":
        xs = list(confirmed.values)
    elif mode == "uniform":
        xs = [g.bandwidth / n] * n
    else:
        rng = random.Random(scenario.options.seed if scenario.options.seed is not None else 0)
        xs = [rng.uniform(0.0, g.bandwidth) for _ in range(n)]
    c = capacity_coefficient(g.snr)
    devices = tuple(
        DeviceState(
            x=x,
            u_prime=derivative(scenario.devices[i].omega, c, g.price, x),
            zeta=0.0,
            q=0.0,
        )
        for i, x in enumerate(xs)
    )
    return EngineState(devices=devices, iteration=0, confirmed=confirmed)


def step(state: EngineState, scenario: Scenario, topo: Topology | None = None) -> EngineState:
    """Advance one synchronous round; reads only round-k values.

    Raises :class:`NumericalError` when any update produces a non-finite
    value or overflows the inverse-derivative arithmetic.
    """
    n = scenario.n
    if len(state.devices) != n:
        raise ValueError(
            f"state holds {len(state.devices)} devices, scenario has {n}"
        )
    if topo is None:
        topo = build_topology(n, scenario.edges)
    g = scenario.globals
    c = capacity_coefficient(g.snr)
    eta, mu, price = g.eta, g.mu, g.price
    devs = state.devices
    dstar = state.confirmed.values
    k = state.iteration + 1
    out = []
    for i, dev in enumerate(devs):
        q = eta * math.fsum(devs[j].u_prime - dev.u_prime for j in topo.neighbors(i))
        # grouped so a stationary state reproduces u_prime bit for bit
        u_new = dev.u_prime + (q - dev.zeta + mu * (dev.x - dstar[i]))
        zeta = dev.zeta - mu * q
        if not (math.isfinite(u_new) and math.isfinite(zeta)):
            raise NumericalError(k, i)
        try:
            x = invert_derivative(scenario.devices[i].omega, c, price, u_new)
        except OverflowError:
            raise NumericalError(k, i, "arithmetic overflow") from None
        if not math.isfinite(x):
            raise NumericalError(k, i)
        out.append(DeviceState(x=x, u_prime=u_new, zeta=zeta, q=q))
    return EngineState(devices=tuple(out), iteration=k, confirmed=state.confirmed)


def consensus_residual(state: EngineState) -> float:
    """Spread of the marginal utilities: max u_prime - min u_prime."""
    values = [dev.u_prime for dev in state.devices]
    return max(values) - min(values)


def constraint_residual(state: EngineState) -> float:
    """|sum of allocations - confirmed total|."""
    return abs(math.fsum(dev.x for dev in state.devices) - state.confirmed.total)


def _trace_rows(state: EngineState) -> list[TraceRow]:
    return [
        TraceRow(
            iteration=state.iteration,
            device=i,
            x=dev.x,
            u_prime=dev.u_prime,
            zeta=dev.zeta,
            q=dev.q,
        )
        for i, dev in enumerate(state.devices)
    ]


def run(scenario: Scenario, trace_stride: int = 1) -> RunResult:
    """Admit demands once, initialize, and iterate to the stated tolerances.

    Stops as soon as both the consensus residual and the constraint
    residual are inside their tolerances, or at the iteration cap, or
    when the combined residual has grown for 100 consecutive rounds
    (divergence). A zero confirmed total short-circuits to the all-zero
    allocation. Trace rows are recorded for every ``trace_stride``-th
    iteration plus the final one.

    Raises :class:`NumericalError` on non-finite arithmetic and
    ``ValueError`` for a non-positive stride.
    """
    if trace_stride < 1:
        raise ValueError(f"trace_stride must be >= 1, got {trace_stride}")
    opts = scenario.options
    confirmed = admit(scenario.demands, scenario.globals.bandwidth)

    if confirmed.total == 0.0:
        c = capacity_coefficient(scenario.globals.snr)
        zero_devices = tuple(
            DeviceState(
                x=0.0,
                u_prime=derivative(d.omega, c, scenario.globals.price, 0.0),
                zeta=0.0,
                q=0.0,
            )
            for d in scenario.devices
        )
        state = EngineState(devices=zero_devices, iteration=0, confirmed=confirmed)
        return RunResult(
            allocations=tuple(0.0 for _ in scenario.devices),
            consensus_value=math.nan,
            iterations_used=0,
            converged=True,
            trace=tuple(_trace_rows(state)),
            diagnostics=Diagnostics(
                consensus_residual=0.0,
                constraint_residual=0.0,
                warnings=("all demands are zero; allocation is trivially zero",),
            ),
        )

    topo = build_topology(scenario.n, scenario.edges)
    state = init(scenario, confirmed)
    trace: list[TraceRow] = list(_trace_rows(state))
    last_recorded = 0

    cons = consensus_residual(state)
    constr = constraint_residual(state)
    converged = cons <= opts.tol_consensus and constr <= opts.tol_constraint
    diverged = False
    warnings: list[str] = []
    growth_streak = 0
    prev_combined: float | None = None

    while not converged and not diverged and state.iteration < opts.max_iters:
        state = step(state, scenario, topo)
        if state.iteration % trace_stride == 0:
            trace.extend(_trace_rows(state))
            last_recorded = state.iteration
        cons = consensus_residual(state)
        constr = constraint_residual(state)
        if cons <= opts.tol_consensus and constr <= opts.tol_constraint:
            converged = True
            continue
        combined = cons + constr
        if prev_combined is not None and combined > prev_combined:
            growth_streak += 1
        else:
            growth_streak = 0
        prev_combined = combined
        if growth_streak >= _DIVERGENCE_STREAK:
            diverged = True
            warnings.append(
                f"residuals grew for {_DIVERGENCE_STREAK} consecutive iterations; "
                "the gains are too aggressive, reduce eta and mu"
            )

    if last_recorded != state.iteration:
        trace.extend(_trace_rows(state))

    negatives = [i for i, dev in enumerate(state.devices) if dev.x < 0.0]
    if negatives:
        warnings.append(
            "final allocation is negative for device(s) "
            + ", ".join(str(i) for i in negatives)
        )

    return RunResult(
        allocations=tuple(dev.x for dev in state.devices),
        consensus_value=math.fsum(dev.u_prime for dev in state.devices) / scenario.n,
        iterations_used=state.iteration,
        converged=converged,
        trace=tuple(trace),
        diagnostics=Diagnostics(
            consensus_residual=cons,
            constraint_residual=constr,
            diverged=diverged,
            warnings=tuple(warnings),
        ),
    )
