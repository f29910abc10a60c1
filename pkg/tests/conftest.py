import pytest
from hypothesis import HealthCheck, settings

# One deterministic profile for the whole suite: property tests must not
# flake in CI, and numeric cases can be slow enough to trip the default
# deadline on loaded machines.
settings.register_profile(
    "suite",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print one line per capability criterion after the run."""
    try:
        from test_acceptance import CRITERIA, RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("capability criteria")
    for n in sorted(CRITERIA):
        if n in RESULTS:
            ok, detail = RESULTS[n]
            line = f"CRITERION {n}: {'PASS' if ok else 'FAIL'}"
            if detail:
                line += f" - {detail}"
        else:
            line = f"CRITERION {n}: FAIL - no result recorded"
        terminalreporter.write_line(line)


@pytest.fixture
def defaults():
    from linkstat import default_parameters

    return default_parameters()
