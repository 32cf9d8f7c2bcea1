from __future__ import annotations

import sys
from pathlib import Path

from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    from acceptance_log import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, seconds, detail in RESULTS:
        status = "PASS" if ok else "FAIL"
        extra = f" ({detail})" if detail else ""
        terminalreporter.write_line(f"{status}  {name}  [{seconds:.1f}s]{extra}")
