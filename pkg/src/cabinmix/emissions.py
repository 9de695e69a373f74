"""Emissions calibration and per-flight, per-passenger and lifetime evaluation.

The calibration fits emissions against passenger count by ordinary least
squares for each (aircraft, haul). The slope, divided by the passenger plus
luggage weight, gives the marginal kg CO2 per kg carried; the intercept minus
the baseline cabin's seat emissions gives the bare-airframe emissions.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from statistics import fmean
from typing import Sequence

from .cabin import CabinConfiguration, floor_proportions
from .ingest import (
    PASSENGER_CLASSES,
    SERVICE_ZONE,
    AircraftSpecRecord,
    EmissionsSampleRecord,
    ModelConstants,
)


class EmissionsError(ValueError):
    pass


class DegenerateDesignError(EmissionsError):
    """All abscissae equal: the slope is undetermined."""


@dataclass(frozen=True)
class RegressionFit:
    aircraft: str
    haul: str
    intercept: float
    slope: float
    residuals: tuple[float, ...]
    r_squared: float

    def predict(self, passengers: float) -> float:
        return self.intercept + self.slope * passengers


def fit_linear(samples: Sequence[EmissionsSampleRecord]) -> RegressionFit:
    """Ordinary least-squares line of emissions on passenger count.

    Uses the centred closed form ``slope = Sxy / Sxx``,
    ``intercept = ybar - slope * xbar``.

    Raises
    ------
    DegenerateDesignError
        Fewer than two distinct passenger counts.
    """
    if not samples:
        raise DegenerateDesignError("no samples")
    keys = {(s.aircraft, s.haul) for s in samples}
    if len(keys) != 1:
        raise EmissionsError(f"samples mix several (aircraft, haul) groups: {sorted(keys)}")
    (aircraft, haul), = keys

    xs = [float(s.passengers) for s in samples]
    ys = [s.emissions for s in samples]
    if len(set(xs)) < 2:
        raise DegenerateDesignError(f"{aircraft}/{haul}: need at least two distinct passenger counts")
    xbar, ybar = fmean(xs), fmean(ys)
    sxx = math.fsum((x - xbar) ** 2 for x in xs)
    sxy = math.fsum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = ybar - slope * xbar

    residuals = tuple(y - (intercept + slope * x) for x, y in zip(xs, ys))
    syy = math.fsum((y - ybar) ** 2 for y in ys)
    sse = math.fsum(r * r for r in residuals)
    r_squared = 1.0 - sse / syy if syy > 0 else 1.0
    return RegressionFit(aircraft, haul, intercept, slope, residuals, r_squared)


@dataclass(frozen=True)
class EmissionsModel:
    aircraft: str
    haul: str
    emissions_factor: float  # kg CO2 per kg carried
    empty_aircraft_emissions: float  # kg CO2 per flight
    source_fit: RegressionFit
    reference_config: CabinConfiguration


def seating_emissions(cfg: CabinConfiguration, m: EmissionsModel, k: ModelConstants) -> dict[str, float]:
    """kg CO2 per flight from carrying each class's seats."""
    return {c: cfg.seats[c] * k.seat_weights[c] * m.emissions_factor for c in PASSENGER_CLASSES}


def derive_emissions_model(fit: RegressionFit, baseline: CabinConfiguration, k: ModelConstants) -> EmissionsModel:
    if fit.aircraft != baseline.aircraft:
        raise EmissionsError(f"fit is for {fit.aircraft}, cabin is for {baseline.aircraft}")
    factor = fit.slope / k.pax_weight
    if not factor > 0:
        raise EmissionsError(f"{fit.aircraft}/{fit.haul}: non-positive emissions factor {factor}")
    partial = EmissionsModel(fit.aircraft, fit.haul, factor, 0.0, fit, baseline)
    empty = fit.intercept - sum(seating_emissions(baseline, partial, k).values())
    if not empty > 0:
        raise EmissionsError(f"{fit.aircraft}/{fit.haul}: seat emissions exceed the intercept")
    return EmissionsModel(fit.aircraft, fit.haul, factor, empty, fit, baseline)


def _check_load_factor(load_factor: float) -> None:
    if not 0.0 <= load_factor <= 1.0:
        raise EmissionsError(f"load factor must lie in [0, 1], got {load_factor}")


def pax_emissions(cfg: CabinConfiguration, m: EmissionsModel, k: ModelConstants,
                  load_factor: float = 1.0) -> dict[str, float]:
    """kg CO2 per flight from passengers and luggage; load factor scales occupancy only."""
    _check_load_factor(load_factor)
    return {c: cfg.seats[c] * load_factor * k.pax_weight * m.emissions_factor for c in PASSENGER_CLASSES}


@dataclass(frozen=True)
class EmissionsBreakdown:
    empty: float
    seating: dict[str, float]
    pax: dict[str, float]
    total: float
    variable: float
    load_factor: float


def emissions_per_flight(cfg: CabinConfiguration, m: EmissionsModel, k: ModelConstants,
                         load_factor: float = 1.0) -> EmissionsBreakdown:
    if cfg.aircraft != m.aircraft:
        raise EmissionsError(f"cabin is for {cfg.aircraft}, model is for {m.aircraft}")
    seating = seating_emissions(cfg, m, k)
    pax = pax_emissions(cfg, m, k, load_factor)
    total = m.empty_aircraft_emissions + sum(seating.values()) + sum(pax.values())
    return EmissionsBreakdown(m.empty_aircraft_emissions, seating, pax, total,
                              total - m.empty_aircraft_emissions, load_factor)


class AllocationStrategy(str, enum.Enum):
    """How service-zone emissions are shared among passengers.

    ``as-written`` spreads the service share over every passenger on board;
    ``service-to-class-seats`` divides it by the class's own passengers.
    """

    AS_WRITTEN = "as-written"
    SERVICE_TO_CLASS_SEATS = "service-to-class-seats"


@dataclass(frozen=True)
class PerPassengerEmissions:
    per_class: dict[str, float]
    allocation_strategy: AllocationStrategy


def emissions_per_passenger(cfg: CabinConfiguration, breakdown: EmissionsBreakdown,
                            strategy: AllocationStrategy | str = AllocationStrategy.AS_WRITTEN
                            ) -> PerPassengerEmissions:
    """Split per-flight emissions across passengers by floor share.

    Each class carries the flight total times its floor proportion, divided by
    its passengers, plus a share of the service-zone proportion. Passengers are
    seats times the breakdown's load factor.
    """
    strategy = AllocationStrategy(strategy)
    lf = breakdown.load_factor
    if lf <= 0:
        raise EmissionsError("per-passenger emissions are undefined with no passengers")
    classes = [c for c in PASSENGER_CLASSES if cfg.class_floor_area[c] > 0]
    for c in classes:
        if not cfg.seats[c] > 0:
            raise EmissionsError(f"{cfg.aircraft}/{cfg.scenario}: class {c} has floor area but no seats")
    total = breakdown.total
    pax = {c: cfg.seats[c] * lf for c in classes}

    if len(classes) == 1:
        # one class owns all passenger floor; with the service zone it partitions the cabin
        (only,) = classes
        return PerPassengerEmissions({only: total / pax[only]}, strategy)

    share = floor_proportions(cfg)
    all_pax = sum(pax.values())
    out = {}
    for c in classes:
        service_pax = all_pax if strategy is AllocationStrategy.AS_WRITTEN else pax[c]
        out[c] = total * share[c] / pax[c] + total * share[SERVICE_ZONE] / service_pax
    return PerPassengerEmissions(out, strategy)


def max_flights(spec: AircraftSpecRecord, haul: str, k: ModelConstants) -> float:
    """Lifetime flights allowed by the cycle and hour limits (fractional)."""
    block = k.block_hours[haul]
    if not block > 0:
        raise EmissionsError(f"block hours for {haul} must be > 0")
    return min(spec.max_cycles, spec.max_hours / block)


def lifetime_emissions(breakdown: EmissionsBreakdown, flights: float, *, variable: bool = False) -> float:
    """Per-flight total (or variable) emissions times lifetime flights."""
    if flights < 0:
        raise EmissionsError(f"flight count must be >= 0, got {flights}")
    return (breakdown.variable if variable else breakdown.total) * flights


def composite_emissions_factor(variable_emissions: Sequence[float], weights: Sequence[float]) -> float:
    """Fleet-level kg CO2 per kg: mean variable emissions over mean carried weight."""
    return fmean(variable_emissions) / fmean(weights)
