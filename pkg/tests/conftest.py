import math

import pytest

from idpsim.interferometer import align, calibrated_config, ideal_config


def cos2(alpha):
    return math.cos(math.radians(2 * alpha))


@pytest.fixture(scope="session")
def ideal():
    return ideal_config()


@pytest.fixture(scope="session")
def calibrated():
    return calibrated_config()


@pytest.fixture(scope="session")
def aligned_ideal(ideal):
    cache = {}

    def get(alpha):
        if alpha not in cache:
            cache[alpha] = align(alpha, ideal)
        return cache[alpha]

    return get


@pytest.fixture(scope="session")
def aligned_calibrated(calibrated):
    cache = {}

    def get(alpha):
        if alpha not in cache:
            cache[alpha] = align(alpha, calibrated)
        return cache[alpha]

    return get


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
