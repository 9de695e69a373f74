from __future__ import annotations

import csv
import json
from dataclasses import replace

import pytest

from cabinmix.cabin import ALL_ECONOMY, BASELINE
from cabinmix.ingest import ModelConstants
from cabinmix.model import run_model
from cabinmix.report import (
    DeltaTable,
    ErrataLedger,
    ErratumEntry,
    MetricTable,
    ReferenceCell,
    ReportError,
    Tolerance,
    aggregate_body_class,
    compare,
    computed_cells,
    delta_table,
    export,
    figure_data,
    load_errata,
    load_reference,
    metric_tables,
    present,
    reconcile,
    reconciliation_exit_code,
)

BODY = {"A320-200": "narrow", "737-800": "narrow", "A330-200": "wide", "777-200LR": "wide"}


def test_body_class_is_plain_mean():
    values = {(a, "short", BASELINE): float(i) for i, a in enumerate(BODY)}
    t = aggregate_body_class(values, BODY, "m", "u")
    assert t.rows == {("narrow", "short", BASELINE): 0.5, ("wide", "short", BASELINE): 2.5}


def test_body_class_missing_member():
    values = {("A320-200", "short", BASELINE): 1.0, ("A330-200", "short", BASELINE): 1.0,
              ("777-200LR", "short", BASELINE): 1.0}
    with pytest.raises(ReportError, match="737-800"):
        aggregate_body_class(values, BODY, "m")


def test_delta_table():
    t = MetricTable("m", "u", {("narrow", "short", BASELINE): 200.0, ("narrow", "short", ALL_ECONOMY): 150.0})
    d = delta_table(t)
    assert d.absolute == {("narrow", "short"): -50.0}
    assert d.relative == {("narrow", "short"): -0.25}


def test_delta_zero_baseline():
    t = MetricTable("m", "u", {("wide", "long", BASELINE): 0.0, ("wide", "long", ALL_ECONOMY): 1.0})
    with pytest.raises(ReportError, match="zero baseline"):
        delta_table(t)


def test_body_tables_average_aircraft(run):
    t = metric_tables(run)["emissions_per_flight"]
    for h in ("short", "long"):
        expected = (run.cells[("A330-200", h, ALL_ECONOMY)].breakdown.total
                    + run.cells[("777-200LR", h, ALL_ECONOMY)].breakdown.total) / 2
        assert t.value("wide", h, ALL_ECONOMY) == pytest.approx(expected, rel=1e-15)


def test_body_ticket_price_is_ratio_of_means(run):
    t = metric_tables(run)["ticket_price"]
    rev = [run.cells[(a, "long", BASELINE)].revenue.total for a in ("A320-200", "737-800")]
    seats = [run.configs[(a, ALL_ECONOMY)].seats["economy"] for a in ("A320-200", "737-800")]
    assert t.value("narrow", "long", ALL_ECONOMY) == pytest.approx(sum(rev) / sum(seats), rel=1e-12)
    assert t.value("narrow", "long", BASELINE) == run.fares["long"].prices["economy"]


@pytest.mark.parametrize("x,text", [
    (2.345, "2.35"), (-2.345, "-2.35"), (0.125, "0.13"), (-0.004, "0.00"), (1e6 / 3, "333333.33"), (7.0, "7.00"),
])
def test_present_rounds_half_away_from_zero(x, text):
    assert present(x) == text


def test_compare_allows_printed_rounding():
    # 10.004 prints as 10.00, so it sits inside the printed interval
    rel, err, ok = compare(10.004, 10.00, 2, Tolerance(rel=1e-9))
    assert err == 0.0 and ok
    rel, err, ok = compare(10.02, 10.00, 2, Tolerance(abs=0.01))
    assert err == pytest.approx(0.015) and not ok
    _, _, ok = compare(1002.0, 1000.0, 0, Tolerance(rel=0.0001, abs=2.0))
    assert ok


def test_errata_globs():
    ledger = ErrataLedger((ErratumEntry("e", "known_erratum", ("S4ai:*/baseline",), "", ""),))
    assert ledger.lookup("S4ai", "wide/long/baseline").id == "e"
    assert ledger.lookup("S4ai", "wide/long/all_economy") is None
    assert ledger.lookup("S4bi", "wide/long/baseline") is None


def test_shipped_errata_load():
    ids = {e.id for e in load_errata().entries}
    assert {"S2d-transposition", "table4-transposition", "S4ai-baseline", "S4d-variable-per-pax",
            "elasticity-demand"} <= ids


def test_every_reference_cell_is_computed(run):
    values = computed_cells(run)
    missing = [(r.table_id, r.cell) for r in load_reference() if (r.table_id, r.cell) not in values]
    assert missing == []


def test_reconcile_statuses(run):
    entries = reconcile(run)
    assert {e.status for e in entries} == {"match", "known_erratum", "non_reproducible"}
    assert reconciliation_exit_code(entries) == 0
    s4ai = [e for e in entries if e.table_id == "S4ai" and e.cell.endswith("/baseline")]
    assert len(s4ai) == 4 and all("service-to-class-seats gives" in e.note for e in s4ai)


def test_uncomputed_cell_is_a_mismatch(run):
    ref = [ReferenceCell("S4bi", "narrow/medium/baseline", 1.0, 2)]
    (e,) = reconcile(run, reference=ref, ledger=ErrataLedger(()))
    assert e.status == "mismatch" and e.computed_value is None


def test_tolerance_override_tightens(run):
    loose = reconcile(run)
    tight = reconcile(run, tolerance=1e-6)
    count = lambda es: sum(e.status == "mismatch" for e in es)
    assert count(tight) > count(loose) == 0
    # absolute-only tables are unaffected by the override
    assert all(e.status != "mismatch" for e in tight if e.table_id in ("S1b", "2", "3"))


def test_heavier_business_seats_break_reconciliation(dataset):
    k = ModelConstants.from_mapping({"seat_weights": {"business": 160}}, dataset.constants)
    entries = reconcile(run_model(replace(dataset, constants=k)))
    assert reconciliation_exit_code(entries) == 1
    assert any(e.table_id == "3" and e.status == "mismatch" for e in entries)


def test_export_csv_layout(run, tmp_path):
    tables = metric_tables(run)
    export({"emissions_per_flight": tables["emissions_per_flight"]}, "csv", tmp_path)
    with open(tmp_path / "emissions_per_flight.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["body", "haul", "scenario", "kg_co2"]
    assert [r[:3] for r in rows[1:3]] == [["narrow", "short", BASELINE], ["narrow", "short", ALL_ECONOMY]]
    assert rows[1][3] == present(tables["emissions_per_flight"].value("narrow", "short", BASELINE))


def test_export_json_keeps_exact_values(run, tmp_path):
    t = metric_tables(run)["lifetime_revenue"]
    export({"lifetime_revenue": t}, "json", tmp_path)
    doc = json.loads((tmp_path / "lifetime_revenue.json").read_text())
    first = doc["rows"][0]
    assert first["exact"] == t.value(first["body"], first["haul"], first["scenario"])


def test_export_is_byte_identical(run, tmp_path):
    def everything(r):
        tables = metric_tables(r)
        return {**tables, **figure_data(tables)}

    for fmt in ("csv", "json"):
        a = export(everything(run), fmt, tmp_path / f"a_{fmt}")
        b = export(everything(run_model(run.dataset)), fmt, tmp_path / f"b_{fmt}")
        assert [p.read_bytes() for p in a] == [p.read_bytes() for p in b]


def test_figure_data_are_deltas(run):
    figs = figure_data(metric_tables(run))
    assert set(figs) == {"fig2a", "fig2b", "fig2c", "fig3a", "fig3b", "fig4a", "fig4b", "fig4c"}
    assert all(isinstance(f, DeltaTable) for f in figs.values())


def test_unknown_export_format(run, tmp_path):
    with pytest.raises(ReportError):
        export({}, "xlsx", tmp_path)
