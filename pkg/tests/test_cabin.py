from __future__ import annotations

import csv
from statistics import fmean

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cabinmix.cabin import (
    ALL_ECONOMY,
    BASELINE,
    CabinError,
    Move,
    Scenario,
    all_economy_configuration,
    apply_scenario,
    baseline_configuration,
    build_composite,
    configuration_weights,
    floor_proportions,
    load_scenario,
    resolve_scenario,
    scenario_from_mapping,
)
from cabinmix.ingest import PASSENGER_CLASSES, REFERENCE_DATA_DIR, AirlineLayoutRecord, AircraftSpecRecord

AIRCRAFT = ("A320-200", "737-800", "A330-200", "777-200LR")


def _oracle_composite(aircraft):
    """Straight from the CSV: class areas averaged over every airline, per-seat over those fitting the class."""
    with open(REFERENCE_DATA_DIR / "layouts.csv", newline="") as fh:
        rows = [r for r in csv.DictReader(fh) if r["aircraft"] == aircraft]
    areas = {c: fmean(float(r["floor_area_sqft"]) for r in rows if r["class"] == c)
             for c in PASSENGER_CLASSES + ("service_zone",)}
    per_seat = {c: fmean(float(r["floor_area_sqft"]) / int(r["seat_count"])
                         for r in rows if r["class"] == c and float(r["floor_area_sqft"]) > 0)
                for c in PASSENGER_CLASSES}
    return areas, per_seat


@pytest.fixture(scope="module")
def composites(dataset):
    return {a: build_composite(dataset.layouts_for(a), dataset.spec(a)) for a in AIRCRAFT}


@pytest.mark.parametrize("aircraft", AIRCRAFT)
def test_composite_matches_oracle(composites, aircraft):
    areas, per_seat = _oracle_composite(aircraft)
    c = composites[aircraft]
    for cls in PASSENGER_CLASSES:
        assert c.class_floor_area[cls] == pytest.approx(areas[cls], rel=1e-12)
        assert c.class_area_per_seat[cls] == pytest.approx(per_seat[cls], rel=1e-12)
    assert c.service_floor_area == pytest.approx(areas["service_zone"], rel=1e-12)


@pytest.mark.parametrize("aircraft", AIRCRAFT)
def test_seat_counts_match_oracle(composites, aircraft):
    areas, per_seat = _oracle_composite(aircraft)
    base = baseline_configuration(composites[aircraft])
    ae = all_economy_configuration(composites[aircraft])
    for cls in PASSENGER_CLASSES:
        assert base.seats[cls] == pytest.approx(areas[cls] / per_seat[cls], rel=1e-12)
    passenger_floor = sum(areas[c] for c in PASSENGER_CLASSES)
    assert ae.seats["economy"] == pytest.approx(passenger_floor / per_seat["economy"], rel=1e-12)
    assert ae.seats["premium_economy"] == ae.seats["business"] == 0.0


# frozen from the CSV oracle above
FROZEN_SEATS = {
    ("A320-200", BASELINE): (131.341812, 13.370730, 10.534744),
    ("777-200LR", BASELINE): (245.486387, 18.352946, 34.846315),
    ("777-200LR", ALL_ECONOMY): (388.834705, 0.0, 0.0),
    ("737-800", ALL_ECONOMY): (175.434453, 0.0, 0.0),
}


@pytest.mark.parametrize("key", FROZEN_SEATS)
def test_frozen_seat_counts(run, key):
    seats = run.configs[key].seats
    assert [seats[c] for c in PASSENGER_CLASSES] == pytest.approx(FROZEN_SEATS[key], abs=1e-5)


def test_missing_class_counts_as_zero_area_but_not_per_seat(composites):
    # two of four A320-200 operators fly no premium economy
    c = composites["A320-200"]
    areas, _ = _oracle_composite("A320-200")
    assert c.class_floor_area["premium_economy"] == pytest.approx(areas["premium_economy"])
    assert c.class_area_per_seat["premium_economy"] == pytest.approx((453.65 / 18 + 794.60 / 37) / 2)


def test_floor_is_conserved(composites):
    for c in composites.values():
        for cfg in (baseline_configuration(c), all_economy_configuration(c)):
            assert cfg.total_floor_area == pytest.approx(c.total_floor_area, rel=1e-12)
            assert sum(floor_proportions(cfg).values()) == pytest.approx(1.0, rel=1e-12)


def test_all_economy_floor_proportions_drop_empty_classes(composites):
    shares = floor_proportions(all_economy_configuration(composites["A330-200"]))
    assert set(shares) == {"economy", "service_zone"}


def test_weights(composites, dataset):
    cfg = baseline_configuration(composites["A320-200"])
    w = configuration_weights(cfg, dataset.constants)
    assert w.classes["business"].seat_weight == pytest.approx(cfg.seats["business"] * 140)
    assert w.pax_weight == pytest.approx(cfg.total_seats * 75)
    assert w.total_weight == pytest.approx(w.seat_weight + w.pax_weight)


def test_custom_scenario_moves_business_to_economy(composites):
    s = Scenario("no_business", moves=(Move("business", "economy"),))
    c = composites["777-200LR"]
    cfg = apply_scenario(c, s)
    assert cfg.scenario == "no_business"
    assert cfg.seats["business"] == 0.0
    assert cfg.seats["premium_economy"] == pytest.approx(baseline_configuration(c).seats["premium_economy"])
    assert cfg.total_floor_area == pytest.approx(c.total_floor_area, rel=1e-12)


def test_custom_scenario_must_conserve_floor(composites):
    s = Scenario("shrink", floor_area={"A320-200": {"economy": 10.0}})
    with pytest.raises(CabinError, match="conserve"):
        apply_scenario(composites["A320-200"], s)


def test_scenario_file(tmp_path, composites):
    p = tmp_path / "half.toml"
    p.write_text('name = "half_premium"\n\n[[move]]\nfrom = "premium_economy"\nto = "economy"\nfraction = 0.5\n')
    s = load_scenario(p)
    assert resolve_scenario(str(p)) == s
    base = baseline_configuration(composites["A330-200"])
    cfg = apply_scenario(composites["A330-200"], s)
    assert cfg.seats["premium_economy"] == pytest.approx(base.seats["premium_economy"] / 2)


@pytest.mark.parametrize("bad", [
    {"kind": "custom"},
    {"name": "x", "kind": "premium_only"},
    {"name": "x", "move": [{"from": "economy", "to": "economy"}]},
    {"name": "x", "move": [{"from": "business", "to": "economy", "fraction": 1.5}]},
])
def test_bad_scenarios(bad):
    with pytest.raises(CabinError):
        scenario_from_mapping(bad)


def test_unknown_scenario_name():
    with pytest.raises(CabinError, match="premium_heavy"):
        resolve_scenario("premium_heavy")


def test_composite_needs_layouts():
    spec = AircraftSpecRecord("A321neo", "narrow", 1, 1, None)
    with pytest.raises(CabinError):
        build_composite([], spec)


_area = st.floats(min_value=50, max_value=5000, allow_nan=False)
_per_seat = st.floats(min_value=10, max_value=90, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(econ=_area, biz=_area, svc=_area, econ_ps=_per_seat, extra=st.floats(min_value=0, max_value=60))
def test_all_economy_never_loses_seats(econ, biz, svc, econ_ps, extra):
    # business seats are at least as large as economy seats, so converting can only add seats
    layouts = [
        AirlineLayoutRecord("X", "T", "economy", econ, econ_ps, None),
        AirlineLayoutRecord("X", "T", "business", biz, econ_ps + extra, None),
        AirlineLayoutRecord("X", "T", "service_zone", svc, None, None),
    ]
    c = build_composite(layouts, AircraftSpecRecord("T", "narrow", 1, 1, None))
    base, ae = baseline_configuration(c), all_economy_configuration(c)
    assert ae.total_seats >= base.total_seats * (1 - 1e-12)
    assert ae.total_floor_area == pytest.approx(base.total_floor_area, rel=1e-12)
