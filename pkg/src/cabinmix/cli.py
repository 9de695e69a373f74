"""Command-line entry point: ``cabinmix <command> [options]``.

Exit status is 0 on success, 1 when validation finds errors or reconciliation
finds a mismatch, and 2 for usage errors (bad flags, unreadable config).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from .cabin import ALL_ECONOMY, BASELINE, CabinError, resolve_scenario
from .emissions import AllocationStrategy, EmissionsError
from .finance import FinanceError, demand_responses
from .ingest import PASSENGER_CLASSES, SERVICE_ZONE, DataError, load_dataset, validate_dataset, worst_severity
from .model import fit_all, run_model
from .report import (
    ELASTICITIES,
    TRIP_BUDGET_USD,
    ReportError,
    delta_table,
    export,
    export_reconciliation,
    figure_data,
    load_errata,
    metric_tables,
    present,
    reconcile,
    reconciliation_exit_code,
    reconciliation_summary,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
COMMANDS = ("validate", "composite", "fit", "scenario", "reprice", "elasticity", "reconcile", "export")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    data: Path | None = None
    constants: Path | None = None
    scenarios: list[str] = field(default_factory=lambda: [BASELINE, ALL_ECONOMY])
    allocation: str = AllocationStrategy.AS_WRITTEN.value
    load_factor: float = 1.0
    out: Path | None = None
    format: str = "csv"
    tolerance: float | None = None
    aircraft: list[str] | None = None

    def check(self) -> None:
        if not 0.0 <= self.load_factor <= 1.0:
            raise UsageError(f"--load-factor must lie in [0, 1], got {self.load_factor}")
        if self.format not in ("csv", "json"):
            raise UsageError(f"--format must be csv or json, got {self.format!r}")
        if self.tolerance is not None and not self.tolerance > 0:
            raise UsageError(f"--tolerance must be > 0, got {self.tolerance}")
        try:
            AllocationStrategy(self.allocation)
        except ValueError:
            raise UsageError(f"unknown allocation strategy {self.allocation!r}") from None
        for p in (self.data, self.constants):
            if p is not None and not p.exists():
                raise UsageError(f"{p}: no such file or directory")


_CONFIG_KEYS = {
    "data": Path, "constants": Path, "scenario": list, "allocation": str, "load_factor": float,
    "out": Path, "format": str, "tolerance": float, "aircraft": list,
}


def build_config(args: argparse.Namespace) -> RunConfig:
    """Config file values first, then any flag given on the command line."""
    cfg = RunConfig()
    if args.config is not None:
        try:
            with open(args.config, "rb") as fh:
                data = tomllib.load(fh)
        except (OSError, tomllib.TOMLDecodeError) as exc:
            raise UsageError(f"{args.config}: {exc}") from exc
        unknown = set(data) - set(_CONFIG_KEYS)
        if unknown:
            raise UsageError(f"{args.config}: unknown keys {sorted(unknown)}")
        base = Path(args.config).parent
        for key, value in data.items():
            if _CONFIG_KEYS[key] is Path:
                value = base / value
            elif _CONFIG_KEYS[key] is list:
                value = [value] if isinstance(value, str) else list(value)
            elif _CONFIG_KEYS[key] is float:
                value = float(value)
            setattr(cfg, "scenarios" if key == "scenario" else key, value)
    for key in ("data", "constants", "allocation", "load_factor", "out", "format", "tolerance", "aircraft"):
        value = getattr(args, key, None)
        if value is not None:
            setattr(cfg, key, value)
    if getattr(args, "scenario", None):
        cfg.scenarios = list(args.scenario)
    cfg.check()
    return cfg


def _load(cfg: RunConfig):
    override = None
    if cfg.constants is not None:
        with open(cfg.constants, "rb") as fh:
            override = tomllib.load(fh)
    d = load_dataset(cfg.data, constants_override=override)
    if cfg.aircraft:
        unknown = sorted(set(cfg.aircraft) - set(d.aircraft))
        if unknown:
            raise UsageError(f"unknown aircraft: {', '.join(unknown)}")
        d = d.restrict(cfg.aircraft)
    return d


def _run(cfg: RunConfig):
    d = _load(cfg)
    try:
        scenarios = [resolve_scenario(s) for s in cfg.scenarios]
    except CabinError as exc:
        raise UsageError(str(exc)) from exc
    return run_model(d, scenarios, cfg.load_factor, cfg.allocation)


def _print_rows(header: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
    for r in (header, *rows):
        print("  ".join(str(x).ljust(w) for x, w in zip(r, widths)).rstrip())


# --------------------------------------------------------------------------- commands


def cmd_validate(cfg: RunConfig) -> int:
    d = _load(cfg)
    findings = validate_dataset(d)
    for f in findings:
        print(f"{f.severity:<7} {f.code:<24} {f.location}: {f.message}")
    worst = worst_severity(findings)
    print(f"{len(findings)} finding(s); worst severity: {worst or 'none'}")
    return EXIT_FAIL if worst == "error" else EXIT_OK


def cmd_composite(cfg: RunConfig) -> int:
    run = _run(cfg)
    rows = []
    for a, comp in run.composites.items():
        for c in PASSENGER_CLASSES + (SERVICE_ZONE,):
            area = comp.service_floor_area if c == SERVICE_ZONE else comp.class_floor_area[c]
            per_seat = comp.service_area_per_seat if c == SERVICE_ZONE else comp.class_area_per_seat[c]
            seats = [present(run.configs[(a, s)].seats[c]) if c != SERVICE_ZONE else "" for s in run.scenario_names]
            rows.append([a, c, present(area), "" if per_seat is None else present(per_seat), *seats])
    _print_rows(["aircraft", "class", "floor_sqft", "sqft_per_seat", *[f"seats_{s}" for s in run.scenario_names]], rows)
    for a, s in run.exit_limit_flags:
        print(f"warning: {a}/{s} exceeds the exit limit")
    return EXIT_OK


def cmd_fit(cfg: RunConfig) -> int:
    d = _load(cfg)
    fits = fit_all(d)
    rows = [[a, h, f"{f.intercept:.2f}", f"{f.slope:.3f}", f"{f.r_squared:.5f}"] for (a, h), f in fits.items()]
    _print_rows(["aircraft", "haul", "intercept_kg", "slope_kg_per_pax", "r_squared"], rows)
    run = run_model(d, [BASELINE], 1.0, cfg.allocation)
    print()
    rows = [[a, h, present(m.empty_aircraft_emissions), f"{m.emissions_factor:.5f}"] for (a, h), m in run.models.items()]
    _print_rows(["aircraft", "haul", "empty_kg_co2", "kg_co2_per_kg"], rows)
    return EXIT_OK


def _emit(tables: dict, cfg: RunConfig) -> None:
    for name, t in tables.items():
        print(f"\n[{name}] ({t.units})")
        if hasattr(t, "rows"):
            _print_rows(["body", "haul", "scenario", "value"],
                        [[b, h, s, present(v, 5 if t.metric == "emissions_factor" else 2)]
                         for (b, h, s), v in t.rows.items()])
        else:
            _print_rows(["body", "haul", "abs_change", "rel_change_pct"],
                        [[b, h, present(t.absolute[(b, h)]), present(100 * t.relative[(b, h)])] for b, h in t.absolute])
    if cfg.out is not None:
        for p in export(tables, cfg.format, cfg.out):
            print(f"wrote {p}")


def cmd_scenario(cfg: RunConfig) -> int:
    run = _run(cfg)
    tables = metric_tables(run)
    out: dict = dict(tables)
    for s in run.scenario_names:
        if s == BASELINE:
            continue
        for name, t in tables.items():
            out[f"{name}_change_{s}"] = delta_table(t, s)
    _emit(out, cfg)
    return EXIT_OK


def cmd_reprice(cfg: RunConfig) -> int:
    run = _run(cfg)
    if not run.fares:
        raise UsageError("dataset has no fares")
    rows = []
    for (a, h, s), cell in run.cells.items():
        if cell.reprice is not None:
            rows.append([a, h, s, present(run.fares[h].prices["economy"]), present(cell.reprice.new_price),
                         present(cell.reprice.delta_abs), present(100 * cell.reprice.delta_rel)])
    _print_rows(["aircraft", "haul", "scenario", "fare_usd", "neutral_fare_usd", "change_usd", "change_pct"], rows)
    t = metric_tables(run)["ticket_price"]
    out = {"ticket_price": t}
    for s in run.scenario_names:
        if s != BASELINE:
            out[f"ticket_price_change_{s}"] = delta_table(t, s)
    _emit(out, cfg)
    return EXIT_OK


def cmd_elasticity(cfg: RunConfig) -> int:
    run = _run(cfg)
    if not run.fares:
        raise UsageError("dataset has no fares")
    t = metric_tables(run)["ticket_price"]
    rows = []
    for s in run.scenario_names:
        if s == BASELINE:
            continue
        dt = delta_table(t, s)
        for (b, h), rise in dt.relative.items():
            responses = demand_responses(ELASTICITIES, rise)
            rows.append([b, h, s, present(100 * rise), *[present(100 * responses[k]) for k in ELASTICITIES],
                         present(100 * dt.absolute[(b, h)] / TRIP_BUDGET_USD, 3)])
    _print_rows(["body", "haul", "scenario", "price_change_pct", *[f"demand_pct_{k}" for k in ELASTICITIES],
                 "trip_budget_pct"], rows)
    return EXIT_OK


def cmd_reconcile(cfg: RunConfig) -> int:
    run = _run(cfg)
    ledger = load_errata()
    entries = reconcile(run, ledger=ledger, tolerance=cfg.tolerance)
    print(reconciliation_summary(entries, ledger))
    if cfg.out is not None:
        for p in export_reconciliation(entries, cfg.out, ledger):
            print(f"wrote {p}")
    return reconciliation_exit_code(entries)


def cmd_export(cfg: RunConfig) -> int:
    if cfg.out is None:
        raise UsageError("export needs --out")
    run = _run(cfg)
    tables = metric_tables(run)
    written = export({**tables, **figure_data(tables)}, cfg.format, cfg.out)
    for p in written:
        print(f"wrote {p}")
    return EXIT_OK


HELP = {
    "validate": "check input data and list findings",
    "composite": "composite cabins and seat counts",
    "fit": "emissions regressions and factors",
    "scenario": "metric tables for each scenario",
    "reprice": "revenue-neutral economy fares",
    "elasticity": "demand response to repricing",
    "reconcile": "compare results with the reference tables",
    "export": "write metric tables and figure data",
}

HANDLERS = {
    "validate": cmd_validate, "composite": cmd_composite, "fit": cmd_fit, "scenario": cmd_scenario,
    "reprice": cmd_reprice, "elasticity": cmd_elasticity, "reconcile": cmd_reconcile, "export": cmd_export,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="TOML file with defaults for any flag below")
    common.add_argument("--data", type=Path, help="dataset directory (default: shipped reference data)")
    common.add_argument("--constants", type=Path, help="TOML file overriding model constants")
    common.add_argument("--scenario", action="append", metavar="NAME|FILE",
                        help="scenario to evaluate; repeatable (default: baseline and all_economy)")
    common.add_argument("--allocation", choices=[s.value for s in AllocationStrategy])
    common.add_argument("--load-factor", type=float, dest="load_factor", metavar="F")
    common.add_argument("--out", type=Path, metavar="DIR")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--tolerance", type=float, metavar="F", help="relative tolerance override for reconcile")
    common.add_argument("--aircraft", action="append", metavar="TYPE", help="restrict to an aircraft; repeatable")

    p = argparse.ArgumentParser(prog="cabinmix", description="Cabin configuration emissions and revenue model.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=HELP[name])
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        return HANDLERS[args.command](cfg)
    except UsageError as exc:
        print(f"cabinmix: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"cabinmix: data error: {exc}", file=sys.stderr)
        for diag in exc.diagnostics:
            print(f"  {diag}", file=sys.stderr)
        return EXIT_FAIL
    except FileNotFoundError as exc:
        print(f"cabinmix: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (CabinError, EmissionsError, FinanceError, ReportError) as exc:
        print(f"cabinmix: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
