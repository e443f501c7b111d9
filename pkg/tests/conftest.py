import pytest

from matx import uniform, validate_bases
from matx.catalog import catalog_generate
from oracles import bases_of

_CRITERIA: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num, title = mark.args
    entry = _CRITERIA.setdefault(num, [title, "PASS"])
    if rep.failed or (rep.when == "call" and rep.skipped):
        entry[1] = "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        title, status = _CRITERIA[num]
        terminalreporter.write_line(f"{status} criterion {num:2d}: {title}")


@pytest.fixture(scope="session")
def u24():
    return uniform(2, 4)


@pytest.fixture(scope="session")
def par34():
    """Rank 2 on four elements with 3 and 4 parallel (five bases)."""
    return validate_bases(4, bases_of({1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}))


@pytest.fixture(scope="session")
def exhaustive_catalog():
    """Exhaustive catalog, rank 1..3 on up to six elements."""
    out = []
    for r in (1, 2, 3):
        out.extend(catalog_generate("exhaustive", r, n_max=6))
    return out


@pytest.fixture(scope="session")
def constructed_catalog():
    out = []
    for r in (1, 2, 3):
        out.extend(catalog_generate("constructed", r))
    return out
