"""Shared pytest wiring: surfaces the acceptance criterion lines.

Each acceptance test records one [PASS]/[FAIL] line; they are replayed in
the terminal summary so a plain `pytest -v` run shows them even though
stdout is captured.
"""

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
