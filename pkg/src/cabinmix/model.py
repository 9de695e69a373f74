"""End-to-end evaluation of every (aircraft, haul, scenario) cell of a dataset."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .cabin import (
    BASELINE,
    BUILTIN_SCENARIOS,
    CabinConfiguration,
    CompositeAircraft,
    ConfigurationWeights,
    Scenario,
    apply_scenario,
    baseline_configuration,
    build_composite,
    configuration_weights,
    exceeds_exit_limit,
)
from .emissions import (
    AllocationStrategy,
    EmissionsBreakdown,
    EmissionsModel,
    PerPassengerEmissions,
    RegressionFit,
    derive_emissions_model,
    emissions_per_flight,
    emissions_per_passenger,
    fit_linear,
    lifetime_emissions,
    max_flights,
)
from .finance import (
    FareSummary,
    RepriceResult,
    RevenueBreakdown,
    revenue_neutral_price,
    revenue_per_flight,
    summarize_fares,
)
from .ingest import HAULS, PASSENGER_CLASSES, Dataset

DEFAULT_SCENARIOS = ("baseline", "all_economy")


@dataclass(frozen=True)
class CellResult:
    aircraft: str
    body: str
    haul: str
    scenario: str
    config: CabinConfiguration
    weights: ConfigurationWeights
    breakdown: EmissionsBreakdown
    per_passenger: PerPassengerEmissions
    flights: float
    lifetime: float
    lifetime_variable: float
    revenue: RevenueBreakdown | None = None
    retained_premium_revenue: float = 0.0
    reprice: RepriceResult | None = None


@dataclass
class ModelRun:
    dataset: Dataset
    scenarios: tuple[Scenario, ...]
    load_factor: float
    strategy: AllocationStrategy
    composites: dict[str, CompositeAircraft] = field(default_factory=dict)
    fits: dict[tuple[str, str], RegressionFit] = field(default_factory=dict)
    models: dict[tuple[str, str], EmissionsModel] = field(default_factory=dict)
    configs: dict[tuple[str, str], CabinConfiguration] = field(default_factory=dict)
    cells: dict[tuple[str, str, str], CellResult] = field(default_factory=dict)
    fares: dict[str, FareSummary] = field(default_factory=dict)
    exit_limit_flags: list[tuple[str, str]] = field(default_factory=list)

    @property
    def aircraft(self) -> list[str]:
        return list(self.composites)

    @property
    def scenario_names(self) -> list[str]:
        return [s.name for s in self.scenarios]

    def body_map(self) -> dict[str, str]:
        return {a: c.body for a, c in self.composites.items()}


def fit_all(d: Dataset, aircraft: Iterable[str] | None = None) -> dict[tuple[str, str], RegressionFit]:
    """One regression per (aircraft, haul) that has samples."""
    wanted = list(aircraft) if aircraft is not None else d.aircraft
    fits = {}
    for a in wanted:
        for h in HAULS:
            samples = d.samples_for(a, h)
            if samples:
                fits[(a, h)] = fit_linear(samples)
    return fits


def _scenarios(scenarios: Sequence[Scenario | str]) -> tuple[Scenario, ...]:
    out = [BUILTIN_SCENARIOS[s] if isinstance(s, str) else s for s in scenarios]
    if not any(s.name == BASELINE for s in out):
        out.insert(0, BUILTIN_SCENARIOS[BASELINE])
    names = [s.name for s in out]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate scenario names: {names}")
    return tuple(out)


def run_model(d: Dataset, scenarios: Sequence[Scenario | str] = DEFAULT_SCENARIOS,
              load_factor: float = 1.0,
              strategy: AllocationStrategy | str = AllocationStrategy.AS_WRITTEN,
              aircraft: Iterable[str] | None = None) -> ModelRun:
    """Calibrate and evaluate every requested scenario.

    The baseline scenario is always evaluated: it anchors the emissions
    calibration and the revenue-neutral repricing.
    """
    k = d.constants
    run = ModelRun(d, _scenarios(scenarios), load_factor, AllocationStrategy(strategy))
    run.fares = summarize_fares(d.fares) if d.fares else {}
    wanted = list(aircraft) if aircraft is not None else d.aircraft

    for a in wanted:
        spec = d.spec(a)
        composite = build_composite(d.layouts_for(a), spec)
        run.composites[a] = composite
        base = baseline_configuration(composite)
        for s in run.scenarios:
            cfg = base if s.name == BASELINE else apply_scenario(composite, s)
            run.configs[(a, s.name)] = cfg
            if exceeds_exit_limit(cfg, composite):
                run.exit_limit_flags.append((a, s.name))

        for h in HAULS:
            samples = d.samples_for(a, h)
            if not samples:
                continue
            fit = fit_linear(samples)
            model = derive_emissions_model(fit, base, k)
            run.fits[(a, h)] = fit
            run.models[(a, h)] = model
            flights = max_flights(spec, h, k)
            fares = run.fares.get(h)
            base_revenue = None
            for s in run.scenarios:
                cfg = run.configs[(a, s.name)]
                br = emissions_per_flight(cfg, model, k, load_factor)
                if load_factor > 0:
                    ppe = emissions_per_passenger(cfg, br, run.strategy)
                else:
                    ppe = PerPassengerEmissions({}, run.strategy)
                revenue = retained = reprice = None
                if fares is not None:
                    revenue = revenue_per_flight(cfg, fares, flights)
                    if s.name == BASELINE:
                        base_revenue = revenue.total
                    retained = sum(revenue.per_class[c] for c in PASSENGER_CLASSES if c != "economy")
                run.cells[(a, h, s.name)] = CellResult(
                    aircraft=a, body=composite.body, haul=h, scenario=s.name, config=cfg,
                    weights=configuration_weights(cfg, k), breakdown=br, per_passenger=ppe,
                    flights=flights, lifetime=lifetime_emissions(br, flights),
                    lifetime_variable=lifetime_emissions(br, flights, variable=True),
                    revenue=revenue, retained_premium_revenue=retained or 0.0, reprice=reprice,
                )
            if fares is not None:
                for s in run.scenarios:
                    if s.name == BASELINE:
                        continue
                    cell = run.cells[(a, h, s.name)]
                    rp = revenue_neutral_price(base_revenue - cell.retained_premium_revenue,
                                               cell.config.seats["economy"], fares.prices["economy"])
                    run.cells[(a, h, s.name)] = replace(cell, reprice=rp)
    return run

