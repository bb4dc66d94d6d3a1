import hypothesis

# deadline=None: exact-arithmetic cases have heavy-tailed runtimes and the
# suite must not flake on a slow box; derandomize keeps runs reproducible
hypothesis.settings.register_profile(
    "suite", deadline=None, max_examples=60, derandomize=True
)
hypothesis.settings.load_profile("suite")

# one result line per acceptance criterion, echoed after the run so the
# summary survives output capture
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
