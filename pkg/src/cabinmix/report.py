"""Body-class tables, scenario deltas, reconciliation against published tables, exports."""

from __future__ import annotations

import csv
import fnmatch
import json
import sys
from dataclasses import asdict, dataclass
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from statistics import fmean
from typing import Callable, Iterable, Mapping, Sequence

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from .cabin import (
    ALL_ECONOMY,
    BASELINE,
    ConfigurationWeights,
    configuration_weights,
    floor_proportions,
    mean_weights,
)
from .emissions import AllocationStrategy, EmissionsBreakdown, composite_emissions_factor, emissions_per_passenger
from .finance import (
    budget_share,
    class_price_multiples,
    elasticity_response,
    revenue_neutral_price,
)
from .ingest import BODIES, HAULS, PASSENGER_CLASSES, SERVICE_ZONE
from .model import ModelRun

PUBLISHED_DIR = Path(__file__).parent / "data" / "published"
REFERENCE_TABLES = PUBLISHED_DIR / "tables.csv"
ERRATA_FILE = PUBLISHED_DIR / "errata.toml"

TRIP_BUDGET_USD = 2743.0
ELASTICITIES = {"asia": -1.420, "america": -1.277, "africa": -0.783}

STATUSES = ("match", "mismatch", "known_erratum", "non_reproducible")


class ReportError(ValueError):
    pass


# --------------------------------------------------------------------------- tables


@dataclass(frozen=True)
class MetricTable:
    metric: str
    units: str
    rows: dict[tuple[str, str, str], float]  # (body, haul, scenario) -> value

    def value(self, body: str, haul: str, scenario: str) -> float:
        return self.rows[(body, haul, scenario)]


@dataclass(frozen=True)
class DeltaTable:
    """Scenario change from baseline; ``relative`` is a fraction of the baseline."""

    metric: str
    units: str
    scenario: str
    absolute: dict[tuple[str, str], float]
    relative: dict[tuple[str, str], float]


METRIC_UNITS = {
    "emissions_per_pax": "kg_co2_per_pax",
    "emissions_per_flight": "kg_co2",
    "variable_emissions": "kg_co2",
    "lifetime_emissions": "kg_co2",
    "lifetime_variable_emissions": "kg_co2",
    "revenue_per_flight": "usd",
    "lifetime_revenue": "usd",
    "ticket_price": "usd",
    "emissions_factor": "kg_co2_per_kg",
}


def aggregate_body_class(per_aircraft: Mapping[tuple[str, str, str], float], body_map: Mapping[str, str],
                         metric: str, units: str | None = None) -> MetricTable:
    """Unweighted mean of per-aircraft results within each body class.

    ``per_aircraft`` maps (aircraft, haul, scenario) to a computed value. Every
    aircraft of a body class must have a value for each (haul, scenario) that
    any aircraft of that class has.
    """
    by_body: dict[str, list[str]] = {}
    for aircraft, body in body_map.items():
        by_body.setdefault(body, []).append(aircraft)
    rows: dict[tuple[str, str, str], float] = {}
    for body in sorted(by_body, key=_body_key):
        members = by_body[body]
        keys = sorted({(h, s) for (a, h, s) in per_aircraft if a in members},
                      key=lambda hs: (_haul_key(hs[0]), hs[1] != BASELINE, hs[1]))
        for h, s in keys:
            missing = [a for a in members if (a, h, s) not in per_aircraft]
            if missing:
                raise ReportError(f"{metric}: no result for {', '.join(missing)} ({h}, {s})")
            rows[(body, h, s)] = fmean(per_aircraft[(a, h, s)] for a in members)
    return MetricTable(metric, units or METRIC_UNITS.get(metric, ""), rows)


def delta_table(t: MetricTable, scenario: str = ALL_ECONOMY, baseline: str = BASELINE) -> DeltaTable:
    absolute, relative = {}, {}
    for (body, haul, s), value in t.rows.items():
        if s != scenario:
            continue
        if (body, haul, baseline) not in t.rows:
            raise ReportError(f"{t.metric}: no {baseline} row for ({body}, {haul})")
        base = t.rows[(body, haul, baseline)]
        if base == 0:
            raise ReportError(f"{t.metric}: zero baseline for ({body}, {haul})")
        absolute[(body, haul)] = value - base
        relative[(body, haul)] = (value - base) / base
    return DeltaTable(t.metric, t.units, scenario, absolute, relative)


def _body_key(body: str) -> tuple[int, str]:
    return (BODIES.index(body) if body in BODIES else len(BODIES), body)


def _haul_key(haul: str) -> int:
    return HAULS.index(haul)


def _cell_values(run: ModelRun, get: Callable) -> dict[tuple[str, str, str], float]:
    return {key: get(cell) for key, cell in run.cells.items()}


def _economy_per_pax(cell) -> float:
    return cell.per_passenger.per_class["economy"]


def metric_tables(run: ModelRun) -> dict[str, MetricTable]:
    """Body-class tables for every metric the run supports."""
    bm = run.body_map()
    getters: dict[str, Callable] = {
        "emissions_per_flight": lambda c: c.breakdown.total,
        "variable_emissions": lambda c: c.breakdown.variable,
        "lifetime_emissions": lambda c: c.lifetime,
        "lifetime_variable_emissions": lambda c: c.lifetime_variable,
    }
    if run.load_factor > 0:
        getters["emissions_per_pax"] = _economy_per_pax
    if run.fares:
        getters["revenue_per_flight"] = lambda c: c.revenue.total
        getters["lifetime_revenue"] = lambda c: c.revenue.lifetime
    tables = {m: aggregate_body_class(_cell_values(run, g), bm, m) for m, g in getters.items()}
    if run.fares:
        tables["ticket_price"] = body_ticket_prices(run)
    tables["emissions_factor"] = composite_factor_table(run)
    return tables


def body_ticket_prices(run: ModelRun) -> MetricTable:
    """Economy fare per body class: current fare at baseline, revenue-neutral fare otherwise.

    The body-class revenue-neutral fare divides the body-class mean baseline
    revenue (less any premium revenue the scenario keeps) by the body-class mean
    economy seat count.
    """
    bm = run.body_map()
    base_rev = aggregate_body_class(_cell_values(run, lambda c: c.revenue.total), bm, "revenue_per_flight")
    retained = aggregate_body_class(_cell_values(run, lambda c: c.retained_premium_revenue), bm, "retained")
    econ_seats = aggregate_body_class(_cell_values(run, lambda c: c.config.seats["economy"]), bm, "economy_seats")
    rows = {}
    for (body, haul, s) in base_rev.rows:
        fare = run.fares[haul].prices["economy"]
        if s == BASELINE:
            rows[(body, haul, s)] = fare
        else:
            neutral = base_rev.rows[(body, haul, BASELINE)] - retained.rows[(body, haul, s)]
            rows[(body, haul, s)] = revenue_neutral_price(neutral, econ_seats.rows[(body, haul, s)], fare).new_price
    return MetricTable("ticket_price", "usd", rows)


def body_weights(run: ModelRun) -> dict[tuple[str, str], ConfigurationWeights]:
    """Class-by-class mean configuration weights per (body, scenario)."""
    bm = run.body_map()
    k = run.dataset.constants
    out = {}
    for body in sorted(set(bm.values()), key=_body_key):
        members = [a for a, b in bm.items() if b == body]
        for s in run.scenario_names:
            out[(body, s)] = mean_weights([configuration_weights(run.configs[(a, s)], k) for a in members])
    return out


def composite_factor_table(run: ModelRun) -> MetricTable:
    """Fleet-level kg CO2 per kg carried: mean variable emissions over mean carried weight."""
    bm = run.body_map()
    rows = {}
    for body in sorted(set(bm.values()), key=_body_key):
        members = [a for a, b in bm.items() if b == body]
        for h in HAULS:
            for s in run.scenario_names:
                cells = [run.cells.get((a, h, s)) for a in members]
                if any(c is None for c in cells):
                    continue
                rows[(body, h, s)] = composite_emissions_factor(
                    [c.breakdown.variable for c in cells],
                    [c.weights.seat_weight + c.weights.pax_weight * run.load_factor for c in cells])
    return MetricTable("emissions_factor", "kg_co2_per_kg", rows)


FIGURES = {
    "fig2a": "emissions_per_pax",
    "fig2b": "emissions_per_flight",
    "fig2c": "lifetime_emissions",
    "fig3a": "variable_emissions",
    "fig3b": "lifetime_variable_emissions",
    "fig4a": "ticket_price",
    "fig4b": "revenue_per_flight",
    "fig4c": "lifetime_revenue",
}


def figure_data(tables: Mapping[str, MetricTable], scenario: str = ALL_ECONOMY) -> dict[str, DeltaTable]:
    """Absolute changes from baseline behind each change figure."""
    return {fig: delta_table(tables[m], scenario) for fig, m in FIGURES.items() if m in tables}


# --------------------------------------------------------------------------- reference data


@dataclass(frozen=True)
class ReferenceCell:
    table_id: str
    cell: str
    value: float
    decimals: int


def load_reference(path: str | Path = REFERENCE_TABLES) -> list[ReferenceCell]:
    with open(path, newline="", encoding="utf-8") as fh:
        return [ReferenceCell(r["table_id"], r["cell"], float(r["value"]), int(r["decimals"]))
                for r in csv.DictReader(fh)]


@dataclass(frozen=True)
class ErratumEntry:
    id: str
    status: str
    cells: tuple[str, ...]  # "TABLE:cell-glob"
    description: str
    evidence: str

    def covers(self, table_id: str, cell: str) -> bool:
        for pattern in self.cells:
            table, _, glob = pattern.partition(":")
            if table == table_id and fnmatch.fnmatchcase(cell, glob):
                return True
        return False


@dataclass(frozen=True)
class ErrataLedger:
    entries: tuple[ErratumEntry, ...]

    def lookup(self, table_id: str, cell: str) -> ErratumEntry | None:
        for e in self.entries:
            if e.covers(table_id, cell):
                return e
        return None


def load_errata(path: str | Path = ERRATA_FILE) -> ErrataLedger:
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    entries = []
    for e in data.get("entry", []):
        if e["status"] not in ("known_erratum", "non_reproducible"):
            raise ReportError(f"erratum {e['id']}: bad status {e['status']!r}")
        entries.append(ErratumEntry(e["id"], e["status"], tuple(e["cells"]), e["description"], e["evidence"]))
    return ErrataLedger(tuple(entries))


# --------------------------------------------------------------------------- computed cells


def _pct(x: float) -> float:
    return 100.0 * x


def computed_cells(run: ModelRun) -> dict[tuple[str, str], float]:
    """Every published cell this run can reproduce, keyed by (table_id, cell)."""
    out: dict[tuple[str, str], float] = {}
    d = run.dataset

    for a, comp in run.composites.items():
        base = run.configs[(a, BASELINE)]
        shares = floor_proportions(base)
        for c in PASSENGER_CLASSES:
            out[("S1b", f"{a}/floor_area/{c}")] = comp.class_floor_area[c]
            out[("S1b", f"{a}/area_per_seat/{c}")] = comp.class_area_per_seat[c]
            out[("S1b", f"{a}/allocation_pct/{c}")] = _pct(shares.get(c, 0.0))
            if comp.mean_seat_counts:
                out[("S1b", f"{a}/mean_seats/{c}")] = comp.mean_seat_counts[c]
        out[("S1b", f"{a}/floor_area/{SERVICE_ZONE}")] = comp.service_floor_area
        out[("S1b", f"{a}/allocation_pct/{SERVICE_ZONE}")] = _pct(shares[SERVICE_ZONE])
        if comp.service_area_per_seat is not None:
            out[("S1b", f"{a}/area_per_seat/{SERVICE_ZONE}")] = comp.service_area_per_seat
        for s in run.scenario_names:
            for c in PASSENGER_CLASSES:
                out[("2", f"{a}/{s}/{c}")] = run.configs[(a, s)].seats[c]

    for (body, s), w in body_weights(run).items():
        for c in PASSENGER_CLASSES:
            cw = w.classes[c]
            out[("3", f"{body}/{s}/{c}/seat_count")] = cw.seat_count
            out[("3", f"{body}/{s}/{c}/seat_weight")] = cw.seat_weight
            out[("3", f"{body}/{s}/{c}/pax_weight")] = cw.pax_weight
        out[("3", f"{body}/{s}/total/seat_count")] = w.seat_count
        out[("3", f"{body}/{s}/total/seat_weight")] = w.seat_weight
        out[("3", f"{body}/{s}/total/pax_weight")] = w.pax_weight

    tables = metric_tables(run)
    for (body, h, s), v in tables["emissions_factor"].rows.items():
        out[("4", f"{body}/{h}/{s}")] = v

    for r in d.samples:
        out[("S2d", f"{r.aircraft}/{r.haul}/{r.passengers}")] = r.emissions
    for (a, h), fit in run.fits.items():
        out[("S2e", f"{a}/{h}/intercept")] = fit.intercept
        out[("S2e", f"{a}/{h}/slope")] = fit.slope
    for (a, h), m in run.models.items():
        out[("S2f", f"{a}/{h}/empty")] = m.empty_aircraft_emissions
        out[("S2f", f"{a}/{h}/factor")] = m.emissions_factor
    for h, fs in run.fares.items():
        for c, p in fs.prices.items():
            out[("S3c", f"{h}/{c}")] = p
        for c, mult in class_price_multiples(fs).items():
            if c != "economy":
                out[("results", f"multiple/{h}/{c}")] = mult
    for (a, h, s), cell in run.cells.items():
        if s == BASELINE and cell.revenue is not None:
            out[("1", f"{a}/{h}/flight_revenue")] = cell.revenue.total

    def body_metric(level: str, change: tuple[str, str] | None, metric: str) -> None:
        if metric not in tables:
            return
        t = tables[metric]
        if level:
            for (body, h, s), v in t.rows.items():
                out[(level, f"{body}/{h}/{s}")] = v
        if change and any(s == ALL_ECONOMY for (_, _, s) in t.rows):
            dt = delta_table(t)
            rel_id, abs_id = change
            for (body, h), v in dt.relative.items():
                out[(rel_id, f"{body}/{h}")] = _pct(v)
            for (body, h), v in dt.absolute.items():
                out[(abs_id, f"{body}/{h}")] = v

    body_metric("S4ai", ("S4aii", "S4aiii"), "emissions_per_pax")
    body_metric("S4bi", ("S4bii", "S4biii"), "emissions_per_flight")
    body_metric("S4ci", ("S4cii", "S4ciii"), "lifetime_emissions")
    body_metric("", ("S4ei", "S4eii"), "variable_emissions")
    body_metric("", ("S4fi", "S4fii"), "lifetime_variable_emissions")
    body_metric("", ("S5ai", "S5aai"), "ticket_price")
    body_metric("S5bi", ("S5bii", "S5biii"), "revenue_per_flight")
    body_metric("", ("S5ci", "S5cii"), "lifetime_revenue")

    if run.load_factor > 0 and ALL_ECONOMY in run.scenario_names:
        var_pp = {}
        for key, cell in run.cells.items():
            as_variable = EmissionsBreakdown(0.0, {}, {}, cell.breakdown.variable, cell.breakdown.variable,
                                             cell.breakdown.load_factor)
            var_pp[key] = emissions_per_passenger(cell.config, as_variable, run.strategy).per_class["economy"]
        dt = delta_table(aggregate_body_class(var_pp, run.body_map(), "variable_emissions_per_pax"))
        for (body, h), v in dt.relative.items():
            out[("S4di", f"{body}/{h}")] = _pct(v)
        for (body, h), v in dt.absolute.items():
            out[("S4dii", f"{body}/{h}")] = v

    if "ticket_price" in tables and ALL_ECONOMY in run.scenario_names:
        dt = delta_table(tables["ticket_price"])
        if ("narrow", "short") in dt.relative:
            rise = dt.relative[("narrow", "short")]
            for e in (-1.420, -1.277):
                out[("results", f"elasticity/{e:.3f}")] = _pct(elasticity_response(e, rise))
            out[("results", "budget_share/narrow/short")] = _pct(
                budget_share(dt.absolute[("narrow", "short")], TRIP_BUDGET_USD))
        if ("wide", "long") in dt.absolute:
            out[("results", "budget_share/wide/long")] = _pct(budget_share(dt.absolute[("wide", "long")], TRIP_BUDGET_USD))
    return out


# --------------------------------------------------------------------------- reconciliation


@dataclass(frozen=True)
class Tolerance:
    """A cell matches when within ``rel`` (relative) or within ``abs`` (absolute units)."""

    rel: float | None = None
    abs: float | None = None


DEFAULT_TOLERANCE = Tolerance(rel=0.005)

TOLERANCES: dict[str, Tolerance] = {
    "S1b": Tolerance(abs=0.05),
    "2": Tolerance(abs=0.05),
    "3": Tolerance(abs=0.5),
    "1": Tolerance(rel=0.002),
    "S4ai": Tolerance(rel=0.002),
    "S4aii": Tolerance(abs=0.1),
    "S4bi": Tolerance(rel=0.002),
    "S4bii": Tolerance(abs=0.1),
    "S4biii": Tolerance(rel=0.005, abs=2.0),
    "S4ci": Tolerance(rel=0.002),
    "S4cii": Tolerance(abs=0.05),
    "S4di": Tolerance(abs=0.1),
    "S4ei": Tolerance(abs=0.1),
    "S4eii": Tolerance(rel=0.005, abs=2.0),
    "S4fi": Tolerance(abs=0.1),
    "S5bi": Tolerance(rel=0.002),
    "S5bii": Tolerance(abs=0.1),
    "S5biii": Tolerance(rel=0.002),
    "S5ci": Tolerance(abs=0.1),
    "S5cii": Tolerance(rel=0.002),
}


@dataclass(frozen=True)
class ReconciliationEntry:
    """One published cell against its computed counterpart.

    Errors are measured from the nearest value that rounds to the printed
    figure, so printed rounding alone never causes a mismatch.
    """

    table_id: str
    cell: str
    published_value: float
    computed_value: float | None
    rel_error: float | None
    abs_error: float | None
    tolerance_rel: float | None
    tolerance_abs: float | None
    status: str
    note: str = ""


def _tolerance(table_id: str, rel_override: float | None) -> Tolerance:
    tol = TOLERANCES.get(table_id, DEFAULT_TOLERANCE)
    if rel_override is not None and tol.rel is not None:
        tol = Tolerance(rel=rel_override, abs=tol.abs)
    return tol


def compare(computed: float, printed: float, decimals: int, tol: Tolerance) -> tuple[float, float, bool]:
    """Return (relative error, absolute error, within tolerance)."""
    half_unit = 0.5 * 10.0 ** -decimals
    abs_err = max(0.0, abs(computed - printed) - half_unit)
    rel_err = abs_err / abs(printed) if printed != 0 else abs_err
    ok = (tol.rel is not None and rel_err <= tol.rel) or (tol.abs is not None and abs_err <= tol.abs)
    return rel_err, abs_err, ok


def reconcile(run: ModelRun, reference: Sequence[ReferenceCell] | None = None,
              ledger: ErrataLedger | None = None, tolerance: float | None = None) -> list[ReconciliationEntry]:
    """Compare every reference cell with the run; ledgered cells take the ledger's status.

    ``tolerance`` replaces the relative tolerance of every table that has one.
    """
    reference = load_reference() if reference is None else reference
    ledger = load_errata() if ledger is None else ledger
    values = computed_cells(run)
    alternate = _alternate_per_pax(run)
    entries = []
    for ref in reference:
        computed = values.get((ref.table_id, ref.cell))
        tol = _tolerance(ref.table_id, tolerance)
        erratum = ledger.lookup(ref.table_id, ref.cell)
        rel_err = abs_err = None
        ok = False
        if computed is not None:
            rel_err, abs_err, ok = compare(computed, ref.value, ref.decimals, tol)
        if erratum is not None:
            status = erratum.status
            note = f"errata:{erratum.id}"
            if (ref.table_id, ref.cell) in alternate:
                note += f"; service-to-class-seats gives {alternate[(ref.table_id, ref.cell)]:.2f}"
        elif computed is None:
            status, note = "mismatch", "not computed by this run"
        else:
            status, note = ("match" if ok else "mismatch"), ""
        entries.append(ReconciliationEntry(ref.table_id, ref.cell, ref.value, computed, rel_err, abs_err,
                                           tol.rel, tol.abs, status, note))
    return entries


def _alternate_per_pax(run: ModelRun) -> dict[tuple[str, str], float]:
    """Baseline economy per-passenger values under the strategy the run did not use."""
    if run.load_factor <= 0:
        return {}
    other = (AllocationStrategy.SERVICE_TO_CLASS_SEATS if run.strategy is AllocationStrategy.AS_WRITTEN
             else AllocationStrategy.AS_WRITTEN)
    values = {key: emissions_per_passenger(cell.config, cell.breakdown, other).per_class["economy"]
              for key, cell in run.cells.items() if key[2] == BASELINE}
    t = aggregate_body_class(values, run.body_map(), "emissions_per_pax")
    return {("S4ai", f"{b}/{h}/{s}"): v for (b, h, s), v in t.rows.items()}


def reconciliation_exit_code(entries: Iterable[ReconciliationEntry]) -> int:
    return 1 if any(e.status == "mismatch" for e in entries) else 0


def reconciliation_summary(entries: Sequence[ReconciliationEntry], ledger: ErrataLedger | None = None) -> str:
    counts = {s: 0 for s in STATUSES}
    for e in entries:
        counts[e.status] += 1
    lines = [f"{len(entries)} reference cells: " + ", ".join(f"{counts[s]} {s}" for s in STATUSES)]
    for e in entries:
        if e.status == "match":
            continue
        comp = "n/a" if e.computed_value is None else f"{e.computed_value:.6g}"
        lines.append(f"  {e.status:<16} {e.table_id:<7} {e.cell:<40} printed {e.published_value:.6g}  computed {comp}"
                     + (f"  ({e.note})" if e.note else ""))
    if ledger is not None:
        lines.append("errata ledger:")
        for er in ledger.entries:
            lines.append(f"  {er.id} [{er.status}]: {er.description}")
    return "\n".join(lines)


# --------------------------------------------------------------------------- export


def present(x: float, places: int = 2) -> str:
    """Fixed-point text rounded half away from zero."""
    q = Decimal(repr(x)).quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_UP)
    if q == 0:
        q = abs(q)
    return f"{q:f}"


def _metric_rows(t: MetricTable) -> list[tuple[str, str, str, float]]:
    keys = sorted(t.rows, key=lambda k: (_body_key(k[0]), _haul_key(k[1]), k[2] != BASELINE, k[2]))
    return [(b, h, s, t.rows[(b, h, s)]) for b, h, s in keys]


def _delta_rows(t: DeltaTable) -> list[tuple[str, str, float, float]]:
    keys = sorted(t.absolute, key=lambda k: (_body_key(k[0]), _haul_key(k[1])))
    return [(b, h, t.absolute[(b, h)], t.relative[(b, h)]) for b, h in keys]


def table_records(t: MetricTable | DeltaTable) -> tuple[list[str], list[list[str]], list[dict]]:
    """CSV header, presented CSV rows, and JSON records (presented plus exact values)."""
    if isinstance(t, MetricTable):
        header = ["body", "haul", "scenario", t.units]
        rows, records = [], []
        for b, h, s, v in _metric_rows(t):
            places = 5 if t.metric == "emissions_factor" else 2
            rows.append([b, h, s, present(v, places)])
            records.append({"body": b, "haul": h, "scenario": s, t.units: present(v, places), "exact": v})
        return header, rows, records
    header = ["body", "haul", f"abs_change_{t.units}", "rel_change_pct"]
    rows, records = [], []
    for b, h, a, r in _delta_rows(t):
        rows.append([b, h, present(a), present(100 * r)])
        records.append({"body": b, "haul": h, header[2]: present(a), "rel_change_pct": present(100 * r),
                        "abs_exact": a, "rel_exact": r})
    return header, rows, records


def export(tables: Mapping[str, MetricTable | DeltaTable], fmt: str, destination: str | Path) -> list[Path]:
    """Write one file per table; output bytes depend only on the table contents."""
    if fmt not in ("csv", "json"):
        raise ReportError(f"unknown export format {fmt!r}")
    out = Path(destination)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name in sorted(tables):
        t = tables[name]
        header, rows, records = table_records(t)
        path = out / f"{name}.{fmt}"
        if fmt == "csv":
            with open(path, "w", newline="", encoding="utf-8") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(header)
                w.writerows(rows)
        else:
            doc = {"metric": t.metric, "units": t.units, "rows": records}
            if isinstance(t, DeltaTable):
                doc["scenario"] = t.scenario
            path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
        written.append(path)
    return written


def export_reconciliation(entries: Sequence[ReconciliationEntry], destination: str | Path,
                          ledger: ErrataLedger | None = None) -> list[Path]:
    out = Path(destination)
    out.mkdir(parents=True, exist_ok=True)
    doc = {
        "entries": [asdict(e) for e in entries],
        "errata": [asdict(e) for e in ledger.entries] if ledger is not None else [],
    }
    jpath = out / "reconciliation.json"
    jpath.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    tpath = out / "reconciliation.txt"
    tpath.write_text(reconciliation_summary(entries, ledger) + "\n", encoding="utf-8")
    return [jpath, tpath]
