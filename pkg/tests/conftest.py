"""Shared fixtures: a polygon cache (generation is the slow part of the
acceptance suite) and a terminal summary that echoes one line per
acceptance criterion."""
import pytest

from polyws.oracle import generate

_POLY_CACHE = {}
ACCEPTANCE_LINES = []


def cached_polygon(kind, n, seed):
    key = (kind, n, seed)
    if key not in _POLY_CACHE:
        _POLY_CACHE[key] = generate(kind, n, seed)
    return _POLY_CACHE[key]


def record_acceptance(line: str):
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
