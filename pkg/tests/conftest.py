"""Shared fixtures and the acceptance summary hook.

The acceptance module gets one line per criterion in the terminal summary,
with any extra measurements a test recorded (determinant tallies, worst
ratios) appended to its line.
"""

from typing import Dict, List, Tuple

import pytest

_acceptance_outcomes: Dict[str, str] = {}
_acceptance_props: Dict[str, List[Tuple[str, object]]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if hasattr(report, "wasxfail"):
        outcome = "xfail (documented expected failure)"
    else:
        outcome = report.outcome
    _acceptance_outcomes[name] = outcome
    if report.user_properties:
        _acceptance_props[name] = list(report.user_properties)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance_outcomes):
        line = f"{name}: {_acceptance_outcomes[name].upper()}"
        props = _acceptance_props.get(name)
        if props:
            line += "  [" + ", ".join(f"{k}={v}" for k, v in props) + "]"
        terminalreporter.write_line(line)
