import pytest


def pytest_addoption(parser):
    parser.addoption("--slow", action="store_true", default=False,
                     help="also run the full-scale 2D checks")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-scale 2D runs (enable with --slow)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--slow"):
        return
    skip = pytest.mark.skip(reason="needs --slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


_CRITERIA = {}


@pytest.fixture
def criterion():
    """Record one acceptance line; printed in the terminal summary."""
    def record(number, ok, detail):
        status = "PASS" if ok else "FAIL"
        line = f"criterion {number:>4}: {status}  {detail}"
        _CRITERIA[str(number)] = line
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA, key=lambda k: (int(k.rstrip("abcdefghij")), k)):
        terminalreporter.write_line(_CRITERIA[key])
