ACCEPTANCE_KEY = "_adspec_acceptance_lines"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, ACCEPTANCE_KEY, None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
