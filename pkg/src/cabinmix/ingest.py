"""Loading, validation and serialization of the model's input datasets.

A dataset directory holds plain CSV files plus an optional ``constants.toml``::

    layouts.csv             airline,aircraft,class,floor_area_sqft,area_per_seat_sqft,seat_count
    emissions_samples.csv   aircraft,haul,passengers,kg_co2
    fares.csv               airline,route,haul,class,price_usd,window
    aircraft_specs.csv      aircraft,body,max_cycles,max_hours[,exit_limit]
    corrections.csv         source_table,aircraft,description   (optional)

Loading is strict: malformed rows, non-positive quantities and dangling aircraft
references raise :class:`DataError` subclasses carrying one diagnostic per bad row.
Validation never raises; it returns findings.
"""

from __future__ import annotations

import copy
import csv
import sys
from collections import defaultdict
from dataclasses import dataclass, field, fields, replace
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Any, Iterable, Mapping

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - exercised on 3.10 only
    import tomli as tomllib

import tomli_w

PASSENGER_CLASSES = ("economy", "premium_economy", "business")
SERVICE_ZONE = "service_zone"
CABIN_CLASSES = PASSENGER_CLASSES + (SERVICE_ZONE,)
HAULS = ("short", "long")
BODIES = ("narrow", "wide")

LAYOUTS_FILE = "layouts.csv"
SAMPLES_FILE = "emissions_samples.csv"
FARES_FILE = "fares.csv"
SPECS_FILE = "aircraft_specs.csv"
CONSTANTS_FILE = "constants.toml"
CORRECTIONS_FILE = "corrections.csv"

LAYOUT_COLUMNS = ("airline", "aircraft", "class", "floor_area_sqft", "area_per_seat_sqft", "seat_count")
SAMPLE_COLUMNS = ("aircraft", "haul", "passengers", "kg_co2")
FARE_COLUMNS = ("airline", "route", "haul", "class", "price_usd", "window")
SPEC_COLUMNS = ("aircraft", "body", "max_cycles", "max_hours")
CORRECTION_COLUMNS = ("source_table", "aircraft", "description")

REFERENCE_DATA_DIR = Path(__file__).parent / "data" / "reference"

CENT = Decimal("0.01")


# --------------------------------------------------------------------------- errors


@dataclass(frozen=True)
class Diagnostic:
    path: str
    row: int | None
    column: str | None
    message: str

    def __str__(self) -> str:
        where = self.path
        if self.row is not None:
            where += f":{self.row}"
        if self.column:
            where += f" [{self.column}]"
        return f"{where}: {self.message}"


class DataError(ValueError):
    """Base class for dataset loading failures.

    ``diagnostics`` lists every offending row found in the file that triggered
    the error, so a single load reports all problems in that file.
    """

    def __init__(self, diagnostics: Iterable[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


class ParseError(DataError):
    """Malformed file or row: missing header, missing column, non-numeric field, bad tag."""


class UnitError(DataError):
    """A quantity violates its physical domain (negative count, zero weight, ...)."""


class ReferentialError(DataError):
    """A record references an aircraft with no spec row."""


# --------------------------------------------------------------------------- records


@dataclass(frozen=True)
class AirlineLayoutRecord:
    airline: str
    aircraft: str
    cabin_class: str
    floor_area: float
    area_per_seat: float | None = None
    seat_count: int | None = None


@dataclass(frozen=True)
class EmissionsSampleRecord:
    aircraft: str
    haul: str
    passengers: int
    emissions: float


@dataclass(frozen=True)
class FareRecord:
    airline: str
    route: str
    haul: str
    cabin_class: str
    price: Decimal
    window: str


@dataclass(frozen=True)
class AircraftSpecRecord:
    aircraft: str
    body: str
    max_cycles: float
    max_hours: float
    exit_limit: float | None = None


@dataclass(frozen=True)
class CorrectionNote:
    """Provenance note for a value stored differently from its printed source."""

    source_table: str
    aircraft: str
    description: str


def _default_seat_weights() -> dict[str, float]:
    return {"economy": 10.0, "premium_economy": 20.0, "business": 140.0}


def _default_block_hours() -> dict[str, float]:
    return {"short": 2.0, "long": 7.0}


def _default_stage_length() -> dict[str, float]:
    return {"short": 631.0, "long": 3002.67}


@dataclass(frozen=True)
class ModelConstants:
    """Weights (kg), block hours and stage lengths (nm) used throughout the model.

    ``kerosene_co2`` is carried for documentation only; emissions samples are
    already expressed in kg CO2.
    """

    pax_body_weight: float = 65.0
    luggage_weight: float = 10.0
    seat_weights: dict[str, float] = field(default_factory=_default_seat_weights)
    block_hours: dict[str, float] = field(default_factory=_default_block_hours)
    stage_length: dict[str, float] = field(default_factory=_default_stage_length)
    kerosene_co2: float = 3.15

    @property
    def pax_weight(self) -> float:
        """Passenger plus luggage weight in kg."""
        return self.pax_body_weight + self.luggage_weight

    def to_mapping(self) -> dict[str, Any]:
        return {f.name: copy.deepcopy(getattr(self, f.name)) for f in fields(self)}

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any], base: ModelConstants | None = None) -> ModelConstants:
        """Build constants from a (possibly partial) mapping layered over ``base``.

        Nested maps (``seat_weights``, ``block_hours``, ``stage_length``) are merged
        key by key, so ``{"seat_weights": {"business": 150}}`` only touches business.
        """
        merged = (base or cls()).to_mapping()
        known = set(merged)
        for key, value in data.items():
            if key not in known:
                raise ParseError([Diagnostic(CONSTANTS_FILE, None, key, "unknown constant")])
            if isinstance(merged[key], dict):
                if not isinstance(value, Mapping):
                    raise ParseError([Diagnostic(CONSTANTS_FILE, None, key, "expected a table")])
                merged[key] = {**merged[key], **{k: float(v) for k, v in value.items()}}
            else:
                merged[key] = float(value)
        constants = cls(**merged)
        constants._check()
        return constants

    def _check(self) -> None:
        bad = []
        scalars = {"pax_body_weight": self.pax_body_weight, "luggage_weight": self.luggage_weight,
                   "kerosene_co2": self.kerosene_co2}
        for name, value in scalars.items():
            if not value > 0:
                bad.append(Diagnostic(CONSTANTS_FILE, None, name, f"must be > 0, got {value}"))
        for table in ("seat_weights", "block_hours", "stage_length"):
            for key, value in getattr(self, table).items():
                if not value > 0:
                    bad.append(Diagnostic(CONSTANTS_FILE, None, f"{table}.{key}", f"must be > 0, got {value}"))
        missing = [c for c in PASSENGER_CLASSES if c not in self.seat_weights]
        missing += [h for h in HAULS if h not in self.block_hours]
        for key in missing:
            bad.append(Diagnostic(CONSTANTS_FILE, None, key, "missing required entry"))
        if bad:
            raise UnitError(bad)


@dataclass(frozen=True)
class Dataset:
    layouts: tuple[AirlineLayoutRecord, ...]
    samples: tuple[EmissionsSampleRecord, ...]
    fares: tuple[FareRecord, ...]
    specs: tuple[AircraftSpecRecord, ...]
    constants: ModelConstants = field(default_factory=ModelConstants)
    corrections: tuple[CorrectionNote, ...] = ()

    @property
    def aircraft(self) -> list[str]:
        """Aircraft in spec-file order."""
        return [s.aircraft for s in self.specs]

    def spec(self, aircraft: str) -> AircraftSpecRecord:
        for s in self.specs:
            if s.aircraft == aircraft:
                return s
        raise KeyError(aircraft)

    def layouts_for(self, aircraft: str) -> list[AirlineLayoutRecord]:
        return [r for r in self.layouts if r.aircraft == aircraft]

    def samples_for(self, aircraft: str, haul: str) -> list[EmissionsSampleRecord]:
        return [r for r in self.samples if r.aircraft == aircraft and r.haul == haul]

    def restrict(self, aircraft: Iterable[str]) -> Dataset:
        """Dataset limited to the given aircraft (fares are aircraft-agnostic and kept)."""
        keep = set(aircraft)
        return replace(
            self,
            layouts=tuple(r for r in self.layouts if r.aircraft in keep),
            samples=tuple(r for r in self.samples if r.aircraft in keep),
            specs=tuple(r for r in self.specs if r.aircraft in keep),
            corrections=tuple(r for r in self.corrections if r.aircraft in keep),
        )


@dataclass(frozen=True)
class DatasetPaths:
    layouts: Path
    samples: Path
    specs: Path
    fares: Path | None = None
    constants: Path | None = None
    corrections: Path | None = None

    @classmethod
    def from_dir(cls, directory: str | Path) -> DatasetPaths:
        d = Path(directory)

        def optional(name: str) -> Path | None:
            p = d / name
            return p if p.exists() else None

        return cls(
            layouts=d / LAYOUTS_FILE,
            samples=d / SAMPLES_FILE,
            specs=d / SPECS_FILE,
            fares=optional(FARES_FILE),
            constants=optional(CONSTANTS_FILE),
            corrections=optional(CORRECTIONS_FILE),
        )


# --------------------------------------------------------------------------- parsing


class _RowReader:
    """Collects per-row diagnostics while converting fields."""

    def __init__(self, path: Path):
        self.path = path
        self.parse_errors: list[Diagnostic] = []
        self.unit_errors: list[Diagnostic] = []

    def rows(self, required: tuple[str, ...]) -> list[tuple[int, dict[str, str]]]:
        if not self.path.exists():
            raise FileNotFoundError(f"{self.path}: no such file")
        with open(self.path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames
            if header is None:
                raise ParseError([Diagnostic(str(self.path), 1, None, "missing header row")])
            missing = [c for c in required if c not in header]
            if missing:
                raise ParseError([Diagnostic(str(self.path), 1, c, "missing column") for c in missing])
            out = []
            for row in reader:
                line = reader.line_num
                if None in row or any(v is None for v in row.values()):
                    self.parse_errors.append(Diagnostic(str(self.path), line, None, "wrong number of fields"))
                    continue
                out.append((line, {k: v.strip() for k, v in row.items()}))
            return out

    def _diag(self, line: int, column: str, message: str) -> Diagnostic:
        return Diagnostic(str(self.path), line, column, message)

    def text(self, line: int, row: dict[str, str], column: str, choices: tuple[str, ...] | None = None) -> str | None:
        value = row[column]
        if not value:
            self.parse_errors.append(self._diag(line, column, "empty field"))
            return None
        if choices is not None and value not in choices:
            self.parse_errors.append(self._diag(line, column, f"{value!r} not one of {', '.join(choices)}"))
            return None
        return value

    def number(self, line: int, row: dict[str, str], column: str, *, positive: bool = False,
               nonnegative: bool = False, optional: bool = False) -> float | None:
        raw = row.get(column, "")
        if raw == "":
            if not optional:
                self.parse_errors.append(self._diag(line, column, "empty field"))
            return None
        try:
            value = float(raw)
        except ValueError:
            self.parse_errors.append(self._diag(line, column, f"not a number: {raw!r}"))
            return None
        if value != value or value in (float("inf"), float("-inf")):
            self.parse_errors.append(self._diag(line, column, f"not a finite number: {raw!r}"))
            return None
        if positive and not value > 0:
            self.unit_errors.append(self._diag(line, column, f"must be > 0, got {raw}"))
            return None
        if nonnegative and value < 0:
            self.unit_errors.append(self._diag(line, column, f"must be >= 0, got {raw}"))
            return None
        return value

    def count(self, line: int, row: dict[str, str], column: str, *, optional: bool = False) -> int | None:
        value = self.number(line, row, column, nonnegative=True, optional=optional)
        if value is None:
            return None
        if value != int(value):
            self.parse_errors.append(self._diag(line, column, f"not a whole count: {row[column]!r}"))
            return None
        return int(value)

    def money(self, line: int, row: dict[str, str], column: str) -> Decimal | None:
        raw = row[column]
        try:
            value = Decimal(raw)
        except InvalidOperation:
            self.parse_errors.append(self._diag(line, column, f"not a number: {raw!r}"))
            return None
        if not value.is_finite():
            self.parse_errors.append(self._diag(line, column, f"not a finite number: {raw!r}"))
            return None
        if not value > 0:
            self.unit_errors.append(self._diag(line, column, f"must be > 0, got {raw}"))
            return None
        return value.quantize(CENT)

    def finish(self) -> None:
        if self.parse_errors:
            raise ParseError(self.parse_errors + self.unit_errors)
        if self.unit_errors:
            raise UnitError(self.unit_errors)


def read_layouts(path: str | Path) -> list[AirlineLayoutRecord]:
    r = _RowReader(Path(path))
    records = []
    for line, row in r.rows(LAYOUT_COLUMNS):
        airline = r.text(line, row, "airline")
        aircraft = r.text(line, row, "aircraft")
        cabin_class = r.text(line, row, "class", CABIN_CLASSES)
        area = r.number(line, row, "floor_area_sqft", nonnegative=True)
        per_seat = r.number(line, row, "area_per_seat_sqft", positive=True, optional=True)
        seats = r.count(line, row, "seat_count", optional=True)
        if cabin_class in (SERVICE_ZONE, "economy") and area == 0:
            r.unit_errors.append(r._diag(line, "floor_area_sqft", f"{cabin_class} floor area must be > 0"))
            continue
        if cabin_class in PASSENGER_CLASSES and area and per_seat is None and not seats:
            r.parse_errors.append(r._diag(line, "area_per_seat_sqft",
                                          "per-seat area or seat count required when floor area is nonzero"))
            continue
        if None in (airline, aircraft, cabin_class, area):
            continue
        records.append(AirlineLayoutRecord(airline, aircraft, cabin_class, area, per_seat, seats))
    r.finish()
    return records


def read_samples(path: str | Path) -> list[EmissionsSampleRecord]:
    r = _RowReader(Path(path))
    records = []
    for line, row in r.rows(SAMPLE_COLUMNS):
        aircraft = r.text(line, row, "aircraft")
        haul = r.text(line, row, "haul", HAULS)
        pax = r.count(line, row, "passengers")
        kg = r.number(line, row, "kg_co2", positive=True)
        if None in (aircraft, haul, pax, kg):
            continue
        records.append(EmissionsSampleRecord(aircraft, haul, pax, kg))
    r.finish()
    return records


def read_fares(path: str | Path) -> list[FareRecord]:
    r = _RowReader(Path(path))
    records = []
    for line, row in r.rows(FARE_COLUMNS):
        vals = (
            r.text(line, row, "airline"),
            r.text(line, row, "route"),
            r.text(line, row, "haul", HAULS),
            r.text(line, row, "class", PASSENGER_CLASSES),
            r.money(line, row, "price_usd"),
            r.text(line, row, "window"),
        )
        if None in vals:
            continue
        records.append(FareRecord(*vals))
    r.finish()
    return records


def read_specs(path: str | Path) -> list[AircraftSpecRecord]:
    r = _RowReader(Path(path))
    records = []
    for line, row in r.rows(SPEC_COLUMNS):
        vals = (
            r.text(line, row, "aircraft"),
            r.text(line, row, "body", BODIES),
            r.number(line, row, "max_cycles", positive=True),
            r.number(line, row, "max_hours", positive=True),
        )
        exit_limit = r.number(line, row, "exit_limit", positive=True, optional=True)
        if None in vals:
            continue
        records.append(AircraftSpecRecord(*vals, exit_limit=exit_limit))
    r.finish()
    return records


def read_corrections(path: str | Path) -> list[CorrectionNote]:
    r = _RowReader(Path(path))
    records = []
    for line, row in r.rows(CORRECTION_COLUMNS):
        vals = tuple(r.text(line, row, c) for c in CORRECTION_COLUMNS)
        if None in vals:
            continue
        records.append(CorrectionNote(*vals))
    r.finish()
    return records


def read_constants(path: str | Path, base: ModelConstants | None = None) -> ModelConstants:
    with open(path, "rb") as fh:
        try:
            data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ParseError([Diagnostic(str(path), None, None, str(exc))]) from exc
    return ModelConstants.from_mapping(data, base)


def load_dataset(paths: DatasetPaths | str | Path | None = None,
                 constants_override: Mapping[str, Any] | None = None) -> Dataset:
    """Load and type every input file.

    ``paths`` may be a :class:`DatasetPaths` or a directory; ``None`` loads the
    shipped reference dataset. Constants come from the defaults, then the
    dataset's ``constants.toml`` if any, then ``constants_override``.
    """
    if paths is None:
        paths = REFERENCE_DATA_DIR
    if not isinstance(paths, DatasetPaths):
        directory = Path(paths)
        if not directory.is_dir():
            raise FileNotFoundError(f"{directory}: not a dataset directory")
        paths = DatasetPaths.from_dir(directory)

    layouts = read_layouts(paths.layouts)
    samples = read_samples(paths.samples)
    specs = read_specs(paths.specs)
    fares = read_fares(paths.fares) if paths.fares is not None else []
    corrections = read_corrections(paths.corrections) if paths.corrections is not None else []

    constants = ModelConstants()
    if paths.constants is not None:
        constants = read_constants(paths.constants)
    if constants_override:
        constants = ModelConstants.from_mapping(constants_override, constants)

    known = {s.aircraft for s in specs}
    dangling = [Diagnostic(str(paths.samples), None, "aircraft", f"no spec for aircraft {a!r}")
                for a in sorted({s.aircraft for s in samples} - known)]
    dangling += [Diagnostic(str(paths.layouts), None, "aircraft", f"no spec for aircraft {a!r}")
                 for a in sorted({r.aircraft for r in layouts} - known)]
    if dangling:
        raise ReferentialError(dangling)

    return Dataset(tuple(layouts), tuple(samples), tuple(fares), tuple(specs), constants, tuple(corrections))


# --------------------------------------------------------------------------- serialization


def _fmt(x: float | int | None) -> str:
    return "" if x is None else repr(x)


def save_dataset(d: Dataset, directory: str | Path) -> Path:
    """Write ``d`` as a dataset directory that :func:`load_dataset` reads back identically."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)

    def write(name: str, header: tuple[str, ...], rows: Iterable[Iterable[Any]]) -> None:
        with open(out / name, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)

    write(LAYOUTS_FILE, LAYOUT_COLUMNS, (
        (r.airline, r.aircraft, r.cabin_class, _fmt(r.floor_area), _fmt(r.area_per_seat), _fmt(r.seat_count))
        for r in d.layouts))
    write(SAMPLES_FILE, SAMPLE_COLUMNS, (
        (r.aircraft, r.haul, r.passengers, _fmt(r.emissions)) for r in d.samples))
    write(FARES_FILE, FARE_COLUMNS, (
        (r.airline, r.route, r.haul, r.cabin_class, str(r.price), r.window) for r in d.fares))
    write(SPECS_FILE, SPEC_COLUMNS + ("exit_limit",), (
        (r.aircraft, r.body, _fmt(r.max_cycles), _fmt(r.max_hours), _fmt(r.exit_limit)) for r in d.specs))
    write(CORRECTIONS_FILE, CORRECTION_COLUMNS, (
        (c.source_table, c.aircraft, c.description) for c in d.corrections))
    with open(out / CONSTANTS_FILE, "wb") as fh:
        tomli_w.dump(d.constants.to_mapping(), fh)
    return out


# --------------------------------------------------------------------------- validation


@dataclass(frozen=True)
class Finding:
    severity: str  # "info" | "warning" | "error"
    code: str
    location: str
    message: str


SEVERITY_RANK = {"info": 0, "warning": 1, "error": 2}


def validate_dataset(d: Dataset) -> list[Finding]:
    """Report data-quality findings without modifying anything.

    Checks layout completeness per (airline, aircraft), sample design per
    (aircraft, haul), monotonicity of emissions in passengers, the haul
    consistency of zero-passenger emissions, and fare class ordering. Stored
    orientation corrections are listed as warnings.
    """
    findings: list[Finding] = []

    groups: dict[tuple[str, str], list[AirlineLayoutRecord]] = defaultdict(list)
    for r in d.layouts:
        groups[(r.airline, r.aircraft)].append(r)
    for (airline, aircraft), rows in groups.items():
        where = f"layouts:{airline}/{aircraft}"
        classes = [r.cabin_class for r in rows]
        if classes.count(SERVICE_ZONE) != 1:
            findings.append(Finding("error", "layout_service_zone", where,
                                    f"expected exactly one service_zone row, found {classes.count(SERVICE_ZONE)}"))
        if "economy" not in classes:
            findings.append(Finding("error", "layout_no_economy", where, "no economy row"))
        for c in PASSENGER_CLASSES:
            if classes.count(c) > 1:
                findings.append(Finding("error", "layout_duplicate_class", where, f"duplicate {c} rows"))

    by_group: dict[tuple[str, str], list[EmissionsSampleRecord]] = defaultdict(list)
    for s in d.samples:
        by_group[(s.aircraft, s.haul)].append(s)
    zero_pax: dict[tuple[str, str], float] = {}
    for (aircraft, haul), rows in by_group.items():
        where = f"emissions_samples:{aircraft}/{haul}"
        counts = {r.passengers for r in rows}
        if len(counts) < 3 or 0 not in counts:
            findings.append(Finding("error", "sample_design", where,
                                    "need at least 3 distinct passenger counts including 0"))
        ordered = sorted(rows, key=lambda r: r.passengers)
        for lo, hi in zip(ordered, ordered[1:]):
            if hi.passengers > lo.passengers and hi.emissions <= lo.emissions:
                findings.append(Finding(
                    "error", "non_monotonic", where,
                    f"emissions fall from {lo.emissions} to {hi.emissions} as passengers rise "
                    f"from {lo.passengers} to {hi.passengers}"))
        zeros = [r.emissions for r in rows if r.passengers == 0]
        if zeros:
            zero_pax[(aircraft, haul)] = sum(zeros) / len(zeros)

    for aircraft in sorted({a for a, _ in zero_pax}):
        short, long = zero_pax.get((aircraft, "short")), zero_pax.get((aircraft, "long"))
        if short is not None and long is not None and not long > short:
            findings.append(Finding(
                "warning", "suspected_transposition", f"emissions_samples:{aircraft}",
                f"zero-passenger long-haul emissions ({long}) do not exceed short-haul ({short}); "
                "short/long columns look swapped"))

    for c in d.corrections:
        findings.append(Finding(
            "warning", "suspected_transposition", f"corrections:{c.source_table}/{c.aircraft}",
            f"stored orientation differs from printed source: {c.description}"))

    sums: dict[tuple[str, str], list[Decimal]] = defaultdict(list)
    for f in d.fares:
        sums[(f.haul, f.cabin_class)].append(f.price)
    for haul in HAULS:
        means = {c: sum(sums[(haul, c)]) / len(sums[(haul, c)]) for c in PASSENGER_CLASSES if sums.get((haul, c))}
        if len(means) == 3 and not means["business"] >= means["premium_economy"] >= means["economy"]:
            findings.append(Finding("warning", "fare_order", f"fares:{haul}",
                                    "mean fares are not ordered business >= premium_economy >= economy"))

    known = set(d.aircraft)
    for aircraft in sorted({r.aircraft for r in d.layouts} | {s.aircraft for s in d.samples}):
        if aircraft not in known:
            findings.append(Finding("error", "unknown_aircraft", aircraft, "no aircraft spec"))
    return findings


def worst_severity(findings: Iterable[Finding]) -> str | None:
    worst = None
    for f in findings:
        if worst is None or SEVERITY_RANK[f.severity] > SEVERITY_RANK[worst]:
            worst = f.severity
    return worst
