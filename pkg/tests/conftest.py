import json

import pytest

from oracles import GOLDEN_TABLE
from pming import CountTable, build_context

_criteria = []


def record_criterion(number, description, passed, detail=""):
    _criteria.append((number, description, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, description, passed, detail in sorted(_criteria):
        status = "PASS" if passed else "FAIL"
        line = f"[{status}] criterion {number:>2}: {description}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)


@pytest.fixture
def golden_path(tmp_path):
    path = tmp_path / "golden.json"
    path.write_text(json.dumps(GOLDEN_TABLE), encoding="utf-8")
    return path


@pytest.fixture
def golden_table():
    return CountTable.from_mapping(GOLDEN_TABLE, provider_id="table:golden.json")


@pytest.fixture
def golden_context(golden_table):
    return build_context(["a", "b", "c"], golden_table, rho=0.3)


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("PMING_CACHE", str(tmp_path / "cache.sqlite3"))
