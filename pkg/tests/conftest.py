import numpy as np
import pytest
from hypothesis import strategies as st

from dgblend import euler


def state_strategy(dims=1):
    """Valid primitive states (rho, velocity, p) mapped to conservative vectors."""
    return st.tuples(
        st.floats(0.05, 10.0),
        st.lists(st.floats(-5.0, 5.0), min_size=dims, max_size=dims),
        st.floats(0.05, 10.0),
    ).map(lambda s: euler.from_primitives(s[0], np.array(s[1]), s[2], 1.4))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
    config._criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call" and not report.failed:
        return
    number, title = marker.args
    detail = "; ".join(str(v) for k, v in item.user_properties if k == "measured")
    previous = item.config._criteria.get(number)
    passed = report.passed and (previous is None or previous[1])
    item.config._criteria[number] = (title, passed, detail)


def pytest_terminal_summary(terminalreporter, config):
    criteria = getattr(config, "_criteria", {})
    if not criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(criteria):
        title, passed, detail = criteria[number]
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {title}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
