"""Problem-instance data model, JSON parsing, and scenario generation.

A scenario bundles the shared channel and pricing constants, the
per-device weights and demands, the undirected communication edges, and
solver options. Instances are immutable values; every constructor path
validates the full set of invariants and reports the offending field by
name.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import topology

__all__ = [
    "ScenarioError",
    "Globals",
    "DeviceParams",
    "SolverOptions",
    "Scenario",
    "INIT_MODES",
    "parse_scenario",
    "scenario_from_dict",
    "scenario_to_dict",
    "serialize_scenario",
    "load_scenario",
    "generate_random_scenario",
]

INIT_MODES = ("demand", "uniform", "seeded-random")


class ScenarioError(ValueError):
    """A scenario document or field violates its contract."""


def _require_positive(name: str, value: float) -> None:
    if not (isinstance(value, (int, float)) and not isinstance(value, bool)):
        raise ScenarioError(f"{name} must be a number, got {value!r}")
    if not (math.isfinite(value) and value > 0):
        raise ScenarioError(f"{name} must be a positive finite number, got {value}")


@dataclass(frozen=True)
class Globals:
    """Shared constants: total bandwidth, channel SNR, price, and gains."""

    bandwidth: float
    snr: float
    price: float
    mu: float
    eta: float

    def __post_init__(self) -> None:
        for name in ("bandwidth", "snr", "price", "mu", "eta"):
            _require_positive(name, getattr(self, name))


@dataclass(frozen=True)
class DeviceParams:
    """One device: priority weight and desired bandwidth."""

    omega: float
    demand: float

    def __post_init__(self) -> None:
        _require_positive("omega", self.omega)
        d = self.demand
        if not (isinstance(d, (int, float)) and not isinstance(d, bool)):
            raise ScenarioError(f"demand must be a number, got {d!r}")
        if not (math.isfinite(d) and d >= 0):
            raise ScenarioError(f"demand must be a finite number >= 0, got {d}")


@dataclass(frozen=True)
class SolverOptions:
    """Stopping rule, initialization mode, and optional RNG seed."""

    max_iters: int = 10000
    tol_consensus: float = 1e-6
    tol_constraint: float = 1e-6
    init_mode: str = "demand"
    seed: int | None = None

    def __post_init__(self) -> None:
        if not (isinstance(self.max_iters, int) and not isinstance(self.max_iters, bool)):
            raise ScenarioError(f"max_iters must be an integer, got {self.max_iters!r}")
        if self.max_iters < 1:
            raise ScenarioError(f"max_iters must be >= 1, got {self.max_iters}")
        _require_positive("tol_consensus", self.tol_consensus)
        _require_positive("tol_constraint", self.tol_constraint)
        if self.init_mode not in INIT_MODES:
            raise ScenarioError(
                f"init_mode must be one of {', '.join(INIT_MODES)}, got {self.init_mode!r}"
            )
        if self.seed is not None and (
            not isinstance(self.seed, int) or isinstance(self.seed, bool)
        ):
            raise ScenarioError(f"seed must be an integer, got {self.seed!r}")


@dataclass(frozen=True)
class Scenario:
    """A complete, validated problem instance."""

    globals: Globals
    devices: tuple[DeviceParams, ...]
    edges: tuple[tuple[int, int], ...]
    options: SolverOptions = field(default_factory=SolverOptions)

    def __post_init__(self) -> None:
        object.__setattr__(self, "devices", tuple(self.devices))
        object.__setattr__(
            self, "edges", tuple((int(i), int(j)) for i, j in self.edges)
        )
        n = len(self.devices)
        if n == 0:
            raise ScenarioError("devices must contain at least one entry")
        seen: set[tuple[int, int]] = set()
        for k, (i, j) in enumerate(self.edges):
            if not (0 <= i < n and 0 <= j < n):
                raise ScenarioError(
                    f"edges[{k}]: endpoint out of range [0, {n}) in ({i}, {j})"
                )
            if i == j:
                raise ScenarioError(f"edges[{k}]: self-loop ({i}, {j})")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ScenarioError(f"edges[{k}]: duplicate edge ({i}, {j})")
            seen.add(key)
        if n > 1 and not topology.build(n, self.edges).is_connected():
            raise ScenarioError("edges: communication graph is not connected")

    @property
    def n(self) -> int:
        return len(self.devices)

    @property
    def omegas(self) -> tuple[float, ...]:
        return tuple(d.omega for d in self.devices)

    @property
    def demands(self) -> tuple[float, ...]:
        return tuple(d.demand for d in self.devices)


_TOP_KEYS = {"bandwidth", "snr", "price", "mu", "eta", "devices", "edges", "options"}
_REQUIRED_TOP_KEYS = _TOP_KEYS - {"options"}
_DEVICE_KEYS = {"omega", "demand"}
_OPTION_KEYS = {"max_iters", "tol_consensus", "tol_constraint", "init_mode", "seed"}


def _reject_unknown(doc: dict, allowed: set[str], where: str) -> None:
    unknown = sorted(set(doc) - allowed)
    if unknown:
        raise ScenarioError(f"{where}: unknown key(s): {', '.join(unknown)}")


def _number(doc: dict, key: str, where: str) -> float:
    value = doc[key]
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ScenarioError(f"{where}{key}: must be a number, got {value!r}")
    return float(value)


def _integer(doc: dict, key: str, where: str) -> int:
    value = doc[key]
    if not isinstance(value, int) or isinstance(value, bool):
        raise ScenarioError(f"{where}{key}: must be an integer, got {value!r}")
    return value


def scenario_from_dict(doc: Any) -> Scenario:
    """Validate a decoded JSON document and build a :class:`Scenario`."""
    if not isinstance(doc, dict):
        raise ScenarioError("top level must be a JSON object")
    _reject_unknown(doc, _TOP_KEYS, "top level")
    missing = sorted(_REQUIRED_TOP_KEYS - set(doc))
    if missing:
        raise ScenarioError(f"missing required key(s): {', '.join(missing)}")

    glob = Globals(
        bandwidth=_number(doc, "bandwidth", ""),
        snr=_number(doc, "snr", ""),
        price=_number(doc, "price", ""),
        mu=_number(doc, "mu", ""),
        eta=_number(doc, "eta", ""),
    )

    raw_devices = doc["devices"]
    if not isinstance(raw_devices, list) or not raw_devices:
        raise ScenarioError("devices: must be a non-empty array")
    devices = []
    for k, entry in enumerate(raw_devices):
        where = f"devices[{k}]"
        if not isinstance(entry, dict):
            raise ScenarioError(f"{where}: must be an object")
        _reject_unknown(entry, _DEVICE_KEYS, where)
        missing = sorted(_DEVICE_KEYS - set(entry))
        if missing:
            raise ScenarioError(f"{where}: missing key(s): {', '.join(missing)}")
        try:
            devices.append(
                DeviceParams(
                    omega=_number(entry, "omega", f"{where}."),
                    demand=_number(entry, "demand", f"{where}."),
                )
            )
        except ScenarioError as exc:
            raise ScenarioError(f"{where}: {exc}") from None

    raw_edges = doc["edges"]
    if not isinstance(raw_edges, list):
        raise ScenarioError("edges: must be an array")
    edges = []
    for k, pair in enumerate(raw_edges):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or any(not isinstance(v, int) or isinstance(v, bool) for v in pair)
        ):
            raise ScenarioError(f"edges[{k}]: must be a pair of integer indices")
        edges.append((pair[0], pair[1]))

    options = SolverOptions()
    if "options" in doc:
        raw = doc["options"]
        if not isinstance(raw, dict):
            raise ScenarioError("options: must be an object")
        _reject_unknown(raw, _OPTION_KEYS, "options")
        kwargs: dict[str, Any] = {}
        if "max_iters" in raw:
            kwargs["max_iters"] = _integer(raw, "max_iters", "options.")
        if "tol_consensus" in raw:
            kwargs["tol_consensus"] = _number(raw, "tol_consensus", "options.")
        if "tol_constraint" in raw:
            kwargs["tol_constraint"] = _number(raw, "tol_constraint", "options.")
        if "init_mode" in raw:
            mode = raw["init_mode"]
            if not isinstance(mode, str):
                raise ScenarioError(f"options.init_mode: must be a string, got {mode!r}")
            kwargs["init_mode"] = mode
        if "seed" in raw:
            kwargs["seed"] = _integer(raw, "seed", "options.")
        try:
            options = SolverOptions(**kwargs)
        except ScenarioError as exc:
            raise ScenarioError(f"options: {exc}") from None

    return Scenario(globals=glob, devices=tuple(devices), edges=tuple(edges), options=options)


def parse_scenario(text: str) -> Scenario:
    """Parse a JSON scenario document.

    The document is an object with required keys ``bandwidth``, ``snr``,
    ``price``, ``mu``, ``eta`` (positive numbers), ``devices`` (array of
    ``{"omega": >0, "demand": >=0}``), ``edges`` (array of ``[i, j]``
    0-based index pairs forming a connected graph), and an optional
    ``options`` object (``max_iters`` default 10000, ``tol_consensus``
    default 1e-6, ``tol_constraint`` default 1e-6, ``init_mode`` default
    ``"demand"``, optional integer ``seed``). Unknown keys are rejected.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"not valid JSON: {exc}") from None
    return scenario_from_dict(doc)


def scenario_to_dict(scenario: Scenario) -> dict:
    """Plain-dict form of a scenario, inverse of :func:`scenario_from_dict`."""
    g = scenario.globals
    options: dict[str, Any] = {
        "max_iters": scenario.options.max_iters,
        "tol_consensus": scenario.options.tol_consensus,
        "tol_constraint": scenario.options.tol_constraint,
        "init_mode": scenario.options.init_mode,
    }
    if scenario.options.seed is not None:
        options["seed"] = scenario.options.seed
    return {
        "bandwidth": g.bandwidth,
        "snr": g.snr,
        "price": g.price,
        "mu": g.mu,
        "eta": g.eta,
        "devices": [{"omega": d.omega, "demand": d.demand} for d in scenario.devices],
        "edges": [[i, j] for i, j in scenario.edges],
        "options": options,
    }


def serialize_scenario(scenario: Scenario) -> str:
    """JSON text such that ``parse_scenario(serialize_scenario(s)) == s``."""
    return json.dumps(scenario_to_dict(scenario), indent=2) + "\n"


def load_scenario(path: str | Path) -> Scenario:
    """Read and parse a scenario file."""
    return parse_scenario(Path(path).read_text(encoding="utf-8"))


def generate_random_scenario(n: int, seed: int) -> Scenario:
    """Deterministic random instance with ``n`` devices.

    Draws omega in [0.5, 5], demand in [0.5, 3], and the bandwidth so the
    demand-to-budget ratio lands in [0.5, 2], covering both admission
    branches. The topology is a random spanning tree plus up to ``n``
    extra edges, so it is always connected. Channel and solver constants
    are fixed at snr 100, price 0.01, mu 0.2, eta 0.2. Identical (n, seed)
    pairs yield identical scenarios.
    """
    if n < 1:
        raise ValueError(f"device count must be >= 1, got {n}")
    rng = random.Random(seed)
    omegas = [rng.uniform(0.5, 5.0) for _ in range(n)]
    demands = [rng.uniform(0.5, 3.0) for _ in range(n)]
    ratio = rng.uniform(0.5, 2.0)
    bandwidth = math.fsum(demands) / ratio

    edges: list[tuple[int, int]] = []
    for v in range(1, n):
        edges.append((rng.randrange(v), v))
    tree = set(edges)
    candidates = [
        (i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in tree
    ]
    n_extra = rng.randint(0, min(n, len(candidates)))
    edges += rng.sample(candidates, n_extra)

    return Scenario(
        globals=Globals(bandwidth=bandwidth, snr=100.0, price=0.01, mu=0.2, eta=0.2),
        devices=tuple(DeviceParams(omega=w, demand=d) for w, d in zip(omegas, demands)),
        edges=tuple(edges),
        options=SolverOptions(seed=seed),
    )
