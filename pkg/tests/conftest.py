import re


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running acceptance checks")


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            m = re.search(r"test_acceptance\.py::test_criterion_(\d+)([a-z]?)_", getattr(rep, "nodeid", ""))
            if m and rep.when == "call":
                lines.append((int(m.group(1)), m.group(2), outcome.upper()[:4]))
    if lines:
        terminalreporter.section("acceptance criteria")
        for num, suffix, status in sorted(lines):
            terminalreporter.write_line(f"criterion {num}{suffix}: {status}")
