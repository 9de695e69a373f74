"""Composite aircraft, seat derivation from floor space, and scenario cabins."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from statistics import fmean
from typing import Any, Mapping, Sequence

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from .ingest import (
    PASSENGER_CLASSES,
    SERVICE_ZONE,
    AircraftSpecRecord,
    AirlineLayoutRecord,
    ModelConstants,
)

BASELINE = "baseline"
ALL_ECONOMY = "all_economy"

# relative slack for floor-area conservation checks
CONSERVATION_RTOL = 1e-9


class CabinError(ValueError):
    pass


@dataclass(frozen=True)
class CompositeAircraft:
    """Per-type cabin averaged over the airlines operating it.

    Floor areas are means over all airlines (a missing class counts as zero
    area); per-seat areas are means over the airlines that actually fit the class.
    An airline's per-seat area is its class floor area over its class seat count
    when the count is known, and the listed per-seat figure otherwise.
    """

    aircraft: str
    body: str
    class_floor_area: dict[str, float]
    class_area_per_seat: dict[str, float]
    service_floor_area: float
    max_cycles: float
    max_hours: float
    service_area_per_seat: float | None = None
    mean_seat_counts: dict[str, float] = field(default_factory=dict)
    exit_limit: float | None = None
    airline_count: int = 1

    @property
    def passenger_floor_area(self) -> float:
        return sum(self.class_floor_area[c] for c in PASSENGER_CLASSES)

    @property
    def total_floor_area(self) -> float:
        return self.passenger_floor_area + self.service_floor_area


@dataclass(frozen=True)
class CabinConfiguration:
    aircraft: str
    scenario: str
    seats: dict[str, float]
    class_floor_area: dict[str, float]
    service_floor_area: float

    @property
    def total_seats(self) -> float:
        return sum(self.seats[c] for c in PASSENGER_CLASSES)

    @property
    def total_floor_area(self) -> float:
        return sum(self.class_floor_area[c] for c in PASSENGER_CLASSES) + self.service_floor_area

    @property
    def seated_classes(self) -> list[str]:
        return [c for c in PASSENGER_CLASSES if self.seats[c] > 0]


@dataclass(frozen=True)
class ClassWeights:
    seat_count: float
    seat_weight: float
    pax_weight: float


@dataclass(frozen=True)
class ConfigurationWeights:
    classes: dict[str, ClassWeights]

    @property
    def seat_count(self) -> float:
        return sum(w.seat_count for w in self.classes.values())

    @property
    def seat_weight(self) -> float:
        return sum(w.seat_weight for w in self.classes.values())

    @property
    def pax_weight(self) -> float:
        return sum(w.pax_weight for w in self.classes.values())

    @property
    def total_weight(self) -> float:
        return self.seat_weight + self.pax_weight


def build_composite(layouts: Sequence[AirlineLayoutRecord], spec: AircraftSpecRecord) -> CompositeAircraft:
    """Average airline layouts of one aircraft type into a composite cabin.

    Parameters
    ----------
    layouts
        All class rows (including ``service_zone``) for ``spec.aircraft``,
        one group per airline.
    spec
        Airframe limits and body class for the aircraft.
    """
    rows = [r for r in layouts if r.aircraft == spec.aircraft]
    if not rows:
        raise CabinError(f"no layouts for aircraft {spec.aircraft!r}")

    airlines: dict[str, dict[str, AirlineLayoutRecord]] = {}
    for r in rows:
        airlines.setdefault(r.airline, {})[r.cabin_class] = r
    for airline, classes in airlines.items():
        if SERVICE_ZONE not in classes or "economy" not in classes:
            raise CabinError(f"{airline}/{spec.aircraft}: layout needs economy and service_zone rows")

    def area(classes: dict[str, AirlineLayoutRecord], c: str) -> float:
        return classes[c].floor_area if c in classes else 0.0

    groups = list(airlines.values())
    floor = {c: fmean(area(g, c) for g in groups) for c in PASSENGER_CLASSES}
    per_seat = {}
    for c in PASSENGER_CLASSES:
        fitted = [_area_per_seat(g[c]) for g in groups if c in g and g[c].floor_area > 0]
        per_seat[c] = fmean(fitted) if fitted else 0.0

    mean_seats = {}
    if all(g[c].seat_count is not None for g in groups for c in g if c != SERVICE_ZONE):
        mean_seats = {c: fmean(g[c].seat_count if c in g else 0 for g in groups) for c in PASSENGER_CLASSES}

    # service area per seat is the airline's service area over its installed seats
    service_per_seat = None
    installed = [sum(g[c].seat_count or 0 for c in PASSENGER_CLASSES if c in g) for g in groups]
    if all(n > 0 for n in installed):
        service_per_seat = fmean(g[SERVICE_ZONE].floor_area / n for g, n in zip(groups, installed))

    return CompositeAircraft(
        aircraft=spec.aircraft,
        body=spec.body,
        class_floor_area=floor,
        class_area_per_seat=per_seat,
        service_floor_area=fmean(g[SERVICE_ZONE].floor_area for g in groups),
        max_cycles=spec.max_cycles,
        max_hours=spec.max_hours,
        service_area_per_seat=service_per_seat,
        mean_seat_counts=mean_seats,
        exit_limit=spec.exit_limit,
        airline_count=len(groups),
    )


def _area_per_seat(r: AirlineLayoutRecord) -> float:
    # the listed per-seat figures are rounded; area over seats is not
    if r.seat_count:
        return r.floor_area / r.seat_count
    if r.area_per_seat:
        return r.area_per_seat
    raise CabinError(f"{r.airline}/{r.aircraft}/{r.cabin_class}: neither seat count nor per-seat area")


def derive_seat_count(floor_share: float, total_floor: float, area_per_seat: float) -> float:
    """Fractional seats that fit in ``floor_share`` of ``total_floor`` sq ft."""
    if not area_per_seat > 0:
        raise CabinError(f"area per seat must be > 0, got {area_per_seat}")
    return floor_share * total_floor / area_per_seat


def _configuration(c: CompositeAircraft, scenario: str, floor: Mapping[str, float],
                   service: float) -> CabinConfiguration:
    total = sum(floor[k] for k in PASSENGER_CLASSES) + service
    seats = {}
    for k in PASSENGER_CLASSES:
        if floor[k] == 0:
            seats[k] = 0.0
            continue
        per_seat = c.class_area_per_seat.get(k, 0.0)
        if not per_seat > 0:
            raise CabinError(f"{c.aircraft}: no per-seat area for {k}")
        seats[k] = derive_seat_count(floor[k] / total, total, per_seat)
    return CabinConfiguration(c.aircraft, scenario, seats, dict(floor), service)


def baseline_configuration(c: CompositeAircraft) -> CabinConfiguration:
    """Default three-class cabin of the composite."""
    return _configuration(c, BASELINE, c.class_floor_area, c.service_floor_area)


def all_economy_configuration(c: CompositeAircraft) -> CabinConfiguration:
    """All passenger floor handed to economy at the economy per-seat area."""
    floor = {k: 0.0 for k in PASSENGER_CLASSES}
    floor["economy"] = c.passenger_floor_area
    return _configuration(c, ALL_ECONOMY, floor, c.service_floor_area)


@dataclass(frozen=True)
class Move:
    source: str
    target: str
    fraction: float = 1.0


@dataclass(frozen=True)
class Scenario:
    """A named cabin transform.

    ``kind`` is ``baseline``, ``all_economy`` or ``custom``. Custom scenarios
    apply ``moves`` (fractions of one class's floor handed to another) to the
    composite, then any absolute ``floor_area`` overrides for that aircraft.
    """

    name: str
    kind: str = "custom"
    moves: tuple[Move, ...] = ()
    floor_area: dict[str, dict[str, float]] = field(default_factory=dict)


BUILTIN_SCENARIOS = {BASELINE: Scenario(BASELINE, BASELINE), ALL_ECONOMY: Scenario(ALL_ECONOMY, ALL_ECONOMY)}

_AREA_KEYS = PASSENGER_CLASSES + (SERVICE_ZONE,)


def scenario_from_mapping(data: Mapping[str, Any]) -> Scenario:
    name = data.get("name")
    if not name:
        raise CabinError("scenario needs a name")
    kind = data.get("kind", "custom")
    if kind in (BASELINE, ALL_ECONOMY):
        return Scenario(name, kind)
    if kind != "custom":
        raise CabinError(f"scenario {name!r}: unknown kind {kind!r}")
    moves = []
    for m in data.get("move", []):
        src, dst = m.get("from"), m.get("to")
        if src not in _AREA_KEYS or dst not in _AREA_KEYS or src == dst:
            raise CabinError(f"scenario {name!r}: bad move {m!r}")
        frac = float(m.get("fraction", 1.0))
        if not 0.0 <= frac <= 1.0:
            raise CabinError(f"scenario {name!r}: move fraction {frac} outside [0, 1]")
        moves.append(Move(src, dst, frac))
    overrides = {}
    for aircraft, areas in data.get("floor_area", {}).items():
        bad = set(areas) - set(_AREA_KEYS)
        if bad:
            raise CabinError(f"scenario {name!r}: unknown classes {sorted(bad)}")
        overrides[aircraft] = {k: float(v) for k, v in areas.items()}
    return Scenario(name, "custom", tuple(moves), overrides)


def load_scenario(path: str | Path) -> Scenario:
    with open(path, "rb") as fh:
        return scenario_from_mapping(tomllib.load(fh))


def resolve_scenario(token: str) -> Scenario:
    """A builtin scenario name or a path to a scenario TOML file."""
    if token in BUILTIN_SCENARIOS:
        return BUILTIN_SCENARIOS[token]
    path = Path(token)
    if path.exists():
        return load_scenario(path)
    raise CabinError(f"unknown scenario {token!r} (not a builtin name or an existing file)")


def custom_configuration(c: CompositeAircraft, scenario: Scenario) -> CabinConfiguration:
    """Reallocate the composite's floor per ``scenario``; total floor area must be conserved."""
    areas = {**c.class_floor_area, SERVICE_ZONE: c.service_floor_area}
    for m in scenario.moves:
        moved = areas[m.source] * m.fraction
        areas[m.source] -= moved
        areas[m.target] += moved
    areas.update(scenario.floor_area.get(c.aircraft, {}))
    if any(v < 0 for v in areas.values()):
        raise CabinError(f"scenario {scenario.name!r}: negative floor area for {c.aircraft}")
    if areas[SERVICE_ZONE] <= 0 or areas["economy"] <= 0:
        raise CabinError(f"scenario {scenario.name!r}: economy and service areas must stay positive")
    total = sum(areas.values())
    if abs(total - c.total_floor_area) > CONSERVATION_RTOL * c.total_floor_area:
        raise CabinError(
            f"scenario {scenario.name!r} does not conserve floor area for {c.aircraft}: "
            f"{total:.4f} vs {c.total_floor_area:.4f} sq ft")
    floor = {k: areas[k] for k in PASSENGER_CLASSES}
    return _configuration(c, scenario.name, floor, areas[SERVICE_ZONE])


def apply_scenario(c: CompositeAircraft, scenario: Scenario) -> CabinConfiguration:
    if scenario.kind == BASELINE:
        cfg = baseline_configuration(c)
    elif scenario.kind == ALL_ECONOMY:
        cfg = all_economy_configuration(c)
    else:
        return custom_configuration(c, scenario)
    return cfg if cfg.scenario == scenario.name else replace(cfg, scenario=scenario.name)


def configuration_weights(cfg: CabinConfiguration, k: ModelConstants) -> ConfigurationWeights:
    """Seat and passenger-plus-luggage weights at full occupancy."""
    return ConfigurationWeights({
        c: ClassWeights(cfg.seats[c], cfg.seats[c] * k.seat_weights[c], cfg.seats[c] * k.pax_weight)
        for c in PASSENGER_CLASSES
    })


def mean_weights(weights: Sequence[ConfigurationWeights]) -> ConfigurationWeights:
    """Class-by-class mean of several configurations' weights."""
    if not weights:
        raise CabinError("no configurations to average")
    return ConfigurationWeights({
        c: ClassWeights(
            fmean(w.classes[c].seat_count for w in weights),
            fmean(w.classes[c].seat_weight for w in weights),
            fmean(w.classes[c].pax_weight for w in weights),
        )
        for c in PASSENGER_CLASSES
    })


def floor_proportions(cfg: CabinConfiguration) -> dict[str, float]:
    """Share of total floor per passenger class with area, plus ``service_zone``."""
    total = cfg.total_floor_area
    out = {c: cfg.class_floor_area[c] / total for c in PASSENGER_CLASSES if cfg.class_floor_area[c] > 0}
    out[SERVICE_ZONE] = cfg.service_floor_area / total
    return out


def exceeds_exit_limit(cfg: CabinConfiguration, c: CompositeAircraft) -> bool:
    """True when the configuration seats more than the certified exit limit (if one is known)."""
    return c.exit_limit is not None and cfg.total_seats > c.exit_limit
