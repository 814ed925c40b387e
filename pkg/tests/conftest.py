"""Shared pytest plumbing: collect acceptance pass/fail lines and print them
in the terminal summary so they survive output capture."""

acceptance_lines = []


def record_criterion(line):
    acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    if acceptance_lines:
        terminalreporter.write_line("")
        terminalreporter.write_line("acceptance criteria:")
        for line in acceptance_lines:
            terminalreporter.write_line(line)
