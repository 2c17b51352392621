"""Shared reporting hook: acceptance verdict lines on the final summary."""

_verdicts: list[str] = []


def record_verdict(line: str):
    _verdicts.append(line)


def pytest_terminal_summary(terminalreporter):
    if _verdicts:
        terminalreporter.section("acceptance criteria")
        for line in _verdicts:
            terminalreporter.write_line(line)
