import os

from hypothesis import HealthCheck, settings

from valdyn import fixture_names, fixture_path
from valdyn.poly import load_map

settings.register_profile("valdyn", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "valdyn"))

FIXTURES = fixture_names()

# maps of the lambda2 = lambda1 family, one per listed item
FAMILY = ["l1", "l2", "l3", "l4", "l5", "l6", "l7"]


def fmap(name):
    return load_map(fixture_path(name))


# (number, title, passed, detail) lines filled in by test_acceptance.py
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, ok, detail in sorted(ACCEPTANCE, key=lambda t: (t[0], not t[2])):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} [{num}] {title}: {detail}")
