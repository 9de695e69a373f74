"""Fare summaries, flight revenue, revenue-neutral repricing and demand response."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from decimal import Decimal
from typing import Iterable, Mapping

from .cabin import CabinConfiguration
from .ingest import HAULS, PASSENGER_CLASSES, FareRecord


class FinanceError(ValueError):
    pass


@dataclass(frozen=True)
class FareSummary:
    haul: str
    prices: dict[str, float]  # USD per ticket, by passenger class
    sample_count: int

    def scaled(self, factor: float) -> FareSummary:
        return FareSummary(self.haul, {c: p * factor for c, p in self.prices.items()}, self.sample_count)


def summarize_fares(fares: Iterable[FareRecord]) -> dict[str, FareSummary]:
    """Unweighted mean fare per (haul, class) over all airlines, routes and windows.

    Every haul that appears must have records for all three passenger classes.
    """
    groups: dict[tuple[str, str], list[Decimal]] = defaultdict(list)
    for f in fares:
        groups[(f.haul, f.cabin_class)].append(f.price)
    out = {}
    for haul in HAULS:
        present = [c for c in PASSENGER_CLASSES if groups.get((haul, c))]
        if not present:
            continue
        missing = [c for c in PASSENGER_CLASSES if c not in present]
        if missing:
            raise FinanceError(f"no {haul}-haul fares for {', '.join(missing)}")
        # mean taken on exact decimals, then handed to float arithmetic
        prices = {c: float(sum(groups[(haul, c)]) / len(groups[(haul, c)])) for c in PASSENGER_CLASSES}
        out[haul] = FareSummary(haul, prices, sum(len(groups[(haul, c)]) for c in PASSENGER_CLASSES))
    return out


@dataclass(frozen=True)
class RevenueBreakdown:
    per_class: dict[str, float]
    total: float
    lifetime: float | None = None


def revenue_per_flight(cfg: CabinConfiguration, fares: FareSummary, flights: float | None = None) -> RevenueBreakdown:
    """Seats times fare summed over classes, at full occupancy and static fares."""
    per_class = {}
    for c in PASSENGER_CLASSES:
        if cfg.seats[c] > 0 and c not in fares.prices:
            raise FinanceError(f"no {fares.haul}-haul fare for {c}")
        per_class[c] = cfg.seats[c] * fares.prices.get(c, 0.0)
    total = sum(per_class.values())
    lifetime = None if flights is None else lifetime_revenue(total, flights)
    return RevenueBreakdown(per_class, total, lifetime)


def lifetime_revenue(rev: RevenueBreakdown | float, flights: float) -> float:
    if flights < 0:
        raise FinanceError(f"flight count must be >= 0, got {flights}")
    total = rev.total if isinstance(rev, RevenueBreakdown) else rev
    return total * flights


@dataclass(frozen=True)
class RepriceResult:
    new_price: float
    delta_abs: float
    delta_rel: float


def revenue_neutral_price(baseline_revenue: float, revised_seats: float, economy_fare: float) -> RepriceResult:
    """Economy fare that earns ``baseline_revenue`` from ``revised_seats`` seats.

    Deltas are measured against ``economy_fare``, the current economy price.
    """
    if not revised_seats > 0:
        raise FinanceError(f"revised seat count must be > 0, got {revised_seats}")
    new_price = baseline_revenue / revised_seats
    delta = new_price - economy_fare
    return RepriceResult(new_price, delta, delta / economy_fare)


def elasticity_response(elasticity: float, price_change: float) -> float:
    """Fractional demand change from a fractional price change (point elasticity)."""
    return elasticity * price_change


def budget_share(delta_price: float, trip_budget: float) -> float:
    if not trip_budget > 0:
        raise FinanceError(f"trip budget must be > 0, got {trip_budget}")
    return delta_price / trip_budget


def class_price_multiples(fares: FareSummary) -> dict[str, float]:
    economy = fares.prices["economy"]
    if not economy > 0:
        raise FinanceError("economy fare must be > 0")
    return {c: p / economy for c, p in fares.prices.items()}


def equivalent_economy_seats(revenue: float, fares: FareSummary) -> float:
    """How many economy tickets at the current fare earn ``revenue``."""
    return revenue / fares.prices["economy"]


def demand_responses(elasticities: Mapping[str, float], price_change: float) -> dict[str, float]:
    return {label: elasticity_response(e, price_change) for label, e in elasticities.items()}
