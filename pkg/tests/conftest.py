"""Shared pytest plumbing: collect acceptance-criterion verdict lines and
echo them in the terminal summary, where capture cannot swallow them."""

acceptance_lines = []


def pytest_terminal_summary(terminalreporter):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)
