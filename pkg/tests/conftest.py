"""Shared hooks: echo acceptance criterion lines after the run.

Passing tests have their stdout captured, so the acceptance gate records
its PASS/FAIL lines here and the terminal summary replays one line per
criterion regardless of outcome.
"""

acceptance_results: dict[int, str] = {}


def record_acceptance(num: int, line: str) -> None:
    acceptance_results[num] = line


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(acceptance_results):
        terminalreporter.write_line(acceptance_results[num])
