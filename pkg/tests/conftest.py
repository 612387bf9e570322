"""Prints one line per acceptance criterion after the run."""

from collections import defaultdict


def pytest_terminal_summary(terminalreporter):
    outcome: dict[int, bool] = {}
    names: dict[int, str] = {}
    details: dict[int, list[str]] = defaultdict(list)
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            props = dict(getattr(rep, "user_properties", []))
            if "criterion" not in props:
                continue
            n, name = props["criterion"]
            names[n] = name
            outcome[n] = outcome.get(n, True) and status == "passed"
            details[n] += [f"{k}={v}" for k, v in props.items() if k != "criterion"]
    if not outcome:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(outcome):
        mark = "PASS" if outcome[n] else "FAIL"
        terminalreporter.write_line(f"[{mark}] {n:2d} {names[n]}: {'; '.join(details[n])}")
