"""Shared pytest hooks.

test_acceptance.py records one line per acceptance check; the terminal
summary replays them after the run so the pass/fail ledger is visible
in one block regardless of capture settings.
"""

ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance checks")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
