import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ACCEPTANCE_TITLES = {
    1: "strip convergence constant",
    2: "simplicial integrality",
    3: "brute-force oracle equivalence",
    4: "lambda threshold",
    5: "circle/n-gon flat distance",
    6: "regularity constants",
    7: "grid rotation",
    8: "area-invariant oracle",
    9: "reconstruction regression",
    10: "round-trip and determinism",
}

_results: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def record():
    """``record(k, ok, detail)`` stores the outcome of acceptance criterion k."""

    def _record(k, ok, detail=""):
        _results[k] = (bool(ok), detail)
        print(f"criterion {k:2d} {ACCEPTANCE_TITLES[k]}: {'PASS' if ok else 'FAIL'}  {detail}")

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for k, title in ACCEPTANCE_TITLES.items():
        if k in _results:
            ok, detail = _results[k]
            line = f"{'PASS' if ok else 'FAIL'}  [{k:2d}] {title}  {detail}"
        else:
            line = f"FAIL  [{k:2d}] {title}  (not run to completion)"
        terminalreporter.write_line(line)
