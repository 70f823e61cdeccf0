import pytest

from pabisim.fixtures import fixture_model, load_data


@pytest.fixture(scope="session")
def middle():
    return load_data("convex_middle.pa")


@pytest.fixture(scope="session")
def cone():
    return load_data("cone_split.pa")


@pytest.fixture(scope="session")
def stutter():
    return load_data("stutter_split.pa")


@pytest.fixture(scope="session")
def principal():
    return load_data("principal_only.pa")


@pytest.fixture(scope="session")
def coin():
    return load_data("coin.pa")


@pytest.fixture(scope="session")
def product():
    return fixture_model("convex_middle_coin")


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS, line

    if RESULTS:
        terminalreporter.section("acceptance")
        for number in sorted(RESULTS):
            terminalreporter.write_line(line(number))
