from __future__ import annotations

import json

import pytest

from cabinmix import load_dataset, run_model
from cabinmix.cli import main


def test_validate_shipped(capsys):
    assert main(["validate"]) == 0
    out = capsys.readouterr().out
    assert "warning" in out and "suspected_transposition" in out


def test_validate_missing_file(data_copy, capsys):
    (data_copy / "emissions_samples.csv").unlink()
    assert main(["validate", "--data", str(data_copy)]) == 1
    assert "emissions_samples.csv" in capsys.readouterr().err


def test_validate_corrupt_row(data_copy, capsys):
    lines = (data_copy / "emissions_samples.csv").read_text().splitlines()
    lines[5] = lines[5].rsplit(",", 1)[0] + ",n/a"
    (data_copy / "emissions_samples.csv").write_text("\n".join(lines) + "\n")
    assert main(["validate", "--data", str(data_copy)]) == 1
    assert ":6" in capsys.readouterr().err


def test_fit_all_and_filtered(capsys):
    assert main(["fit"]) == 0
    out = capsys.readouterr().out
    assert out.count("short") == 8 and out.count("long") == 8  # two tables, four aircraft each
    assert main(["fit", "--aircraft", "A320-200"]) == 0
    out = capsys.readouterr().out
    assert "737-800" not in out and out.count("A320-200") == 4


def test_fit_single_aircraft_dataset(data_copy, capsys):
    for name in ("layouts.csv", "emissions_samples.csv", "aircraft_specs.csv"):
        p = data_copy / name
        lines = p.read_text().splitlines()
        p.write_text("\n".join([lines[0]] + [x for x in lines[1:] if ",737-800," in f",{x}"]) + "\n")
    assert main(["fit", "--data", str(data_copy)]) == 0
    out = capsys.readouterr().out
    assert "737-800" in out and "A320-200" not in out


def test_scenario_exports(tmp_path, capsys):
    assert main(["scenario", "--scenario", "baseline", "--scenario", "all_economy",
                 "--out", str(tmp_path), "--format", "json"]) == 0
    names = {p.stem for p in tmp_path.iterdir()}
    assert {"emissions_per_pax", "emissions_per_flight", "lifetime_emissions", "revenue_per_flight",
            "ticket_price", "emissions_per_flight_change_all_economy"} <= names


def test_load_factor_halves_pax_emissions(tmp_path):
    assert main(["scenario", "--load-factor", "0.5", "--out", str(tmp_path)]) == 0
    full, half = run_model(load_dataset()), run_model(load_dataset(), load_factor=0.5)
    for key, cell in full.cells.items():
        other = half.cells[key]
        assert other.config == cell.config
        assert other.breakdown.seating == cell.breakdown.seating
        assert other.breakdown.pax == {c: v * 0.5 for c, v in cell.breakdown.pax.items()}


def test_custom_scenario_file(tmp_path, capsys):
    p = tmp_path / "no_business.toml"
    p.write_text('name = "no_business"\n\n[[move]]\nfrom = "business"\nto = "economy"\n')
    assert main(["scenario", "--scenario", "baseline", "--scenario", str(p)]) == 0
    assert "no_business" in capsys.readouterr().out


def test_reconcile_shipped(tmp_path, capsys):
    assert main(["reconcile", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert " 0 mismatch" in out
    doc = json.loads((tmp_path / "reconciliation.json").read_text())
    assert doc["entries"] and doc["errata"]


def test_reconcile_with_perturbed_constants(tmp_path, capsys):
    k = tmp_path / "k.toml"
    k.write_text("[seat_weights]\neconomy = 12.0\n")
    assert main(["reconcile", "--constants", str(k)]) == 1


def test_reconcile_tolerance_flag(capsys):
    assert main(["reconcile", "--tolerance", "1e-7"]) == 1
    assert "mismatch" in capsys.readouterr().out


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.toml"
    cfg.write_text('aircraft = ["A330-200"]\nload_factor = 2.0\n')
    assert main(["fit", "--config", str(cfg)]) == 2  # config load factor out of range
    assert main(["fit", "--config", str(cfg), "--load-factor", "0.8"]) == 0
    out = capsys.readouterr().out
    assert "A330-200" in out and "777-200LR" not in out


@pytest.mark.parametrize("argv", [
    ["scenario", "--load-factor", "1.5"],
    ["scenario", "--allocation", "by-weight"],
    ["frobnicate"],
    ["export"],
    ["fit", "--aircraft", "A350-900"],
    ["scenario", "--scenario", "premium_heavy"],
])
def test_usage_errors(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:  # argparse rejects before dispatch
        code = exc.code
    assert code == 2


def test_export_twice_is_byte_identical(tmp_path):
    for sub in ("a", "b"):
        assert main(["export", "--out", str(tmp_path / sub)]) == 0
    a = sorted((tmp_path / "a").iterdir())
    b = sorted((tmp_path / "b").iterdir())
    assert [p.name for p in a] == [p.name for p in b]
    assert all(x.read_bytes() == y.read_bytes() for x, y in zip(a, b))
    assert "fig2a.csv" in {p.name for p in a}


def test_reprice_and_elasticity(capsys):
    assert main(["reprice"]) == 0
    assert "neutral_fare_usd" in capsys.readouterr().out
    assert main(["elasticity"]) == 0
    assert "demand_pct_asia" in capsys.readouterr().out


def test_composite(capsys):
    assert main(["composite", "--aircraft", "777-200LR"]) == 0
    out = capsys.readouterr().out
    assert "388.83" in out
