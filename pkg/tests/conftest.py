from __future__ import annotations

import csv
from pathlib import Path

import pytest

from cabinmix.ingest import REFERENCE_DATA_DIR, load_dataset
from cabinmix.model import run_model
from cabinmix.report import REFERENCE_TABLES

# filled by tests/test_acceptance.py, printed once at the end of the session
ACCEPTANCE_RESULTS: dict[int, tuple[str, bool, str]] = {}


@pytest.fixture(scope="session")
def dataset():
    return load_dataset()


@pytest.fixture(scope="session")
def run(dataset):
    return run_model(dataset)


@pytest.fixture(scope="session")
def published() -> dict[tuple[str, str], float]:
    with open(REFERENCE_TABLES, newline="") as fh:
        return {(r["table_id"], r["cell"]): float(r["value"]) for r in csv.DictReader(fh)}


@pytest.fixture
def data_copy(tmp_path) -> Path:
    """A writable copy of the shipped reference dataset."""
    dst = tmp_path / "data"
    dst.mkdir()
    for f in REFERENCE_DATA_DIR.iterdir():
        (dst / f.name).write_bytes(f.read_bytes())
    return dst


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        title, ok, detail = ACCEPTANCE_RESULTS[n]
        line = f"criterion {n:>2} {'PASS' if ok else 'FAIL'}  {title}"
        terminalreporter.write_line(line + (f"  [{detail}]" if detail else ""))
