import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from idpsim.errors import DomainError, UndefinedEstimateError
from idpsim.interferometer import DetectionProbabilities
from idpsim.photons import (
    CountsRecord,
    PulseEnsemble,
    error_rate_estimate,
    expected_counts,
    sample_counts,
)

ENS = PulseEnsemble(0.2, 1_000_000, 0.83)


def record(*counts):
    c = np.array(counts, dtype=np.int64)
    return CountsRecord(c.astype(float), c, None)


def test_expected_counts_all_pd1():
    assert expected_counts(DetectionProbabilities(1, 0, 0), ENS) == pytest.approx([166000, 0, 0])


def test_expected_counts_all_pd3():
    e = expected_counts((0, 0, 1), PulseEnsemble(0.7, 12, 0.5))
    assert e[:2].tolist() == [0, 0] and e[2] > 0


def test_expected_counts_22_5():
    r = math.sqrt(0.5)
    e = expected_counts((1 - r, 0, r), ENS)
    assert e == pytest.approx([48620.2, 0, 117379.8], abs=0.1)


def test_zero_mean_samples_zero():
    for seed in range(20):
        assert sample_counts((0, 0, 1), ENS, seed).sampled[:2].tolist() == [0, 0]


@pytest.mark.parametrize("seed", range(25))
def test_poisson_within_five_sigma(seed):
    n = sample_counts((1, 0, 0), ENS, seed).count("pd1")
    assert abs(n - 166000) <= 5 * math.sqrt(166000)


def test_same_seed_same_record():
    a = sample_counts((0.3, 0.2, 0.5), ENS, 1234)
    b = sample_counts((0.3, 0.2, 0.5), ENS, 1234)
    assert a == b
    assert a != sample_counts((0.3, 0.2, 0.5), ENS, 1235)


def test_seeded_ratio_bounds():
    rec = sample_counts((0.25, 0.05, 0.7), ENS, 99)
    for e, s in zip(rec.expected, rec.sampled):
        if e > 100:
            assert 1 - 5 / math.sqrt(e) <= s / e <= 1 + 5 / math.sqrt(e)


@given(st.floats(0, 1), st.floats(0.01, 5), st.integers(1, 10**7), st.floats(0.01, 1))
def test_expected_counts_linear(p, mu, n, eta):
    e = expected_counts((p, 1 - p, 0), PulseEnsemble(mu, n, eta))
    assert e.sum() == pytest.approx(n * mu * eta, rel=1e-12)


@pytest.mark.parametrize(
    "kw", [dict(mean_photons_per_pulse=0), dict(n_pulses=0), dict(n_pulses=1.5), dict(detector_efficiency=1.2)]
)
def test_invalid_ensemble(kw):
    with pytest.raises(DomainError):
        PulseEnsemble(**kw)


def test_invalid_probabilities():
    with pytest.raises(DomainError):
        expected_counts((0.5, 0.5), ENS)
    with pytest.raises(DomainError):
        expected_counts((1.5, 0, 0), ENS)


def test_error_rate_no_errors():
    assert error_rate_estimate(record(100, 0, 0)) == (0.0, 0.0)


def test_error_rate_three_percent():
    p, u = error_rate_estimate(record(97, 3, 0))
    assert p == pytest.approx(0.03)
    assert u == pytest.approx(0.0172, abs=2e-4)  # quoted to three figures
    assert u == pytest.approx(math.sqrt(0.03 * 0.97 / 100), rel=1e-12)


def test_error_rate_other_port_and_floor():
    p, u = error_rate_estimate(record(5, 95, 0), error_port="pd1", noise_floor=0.025)
    assert p == pytest.approx(0.05)
    assert u == pytest.approx(math.hypot(math.sqrt(0.05 * 0.95 / 100), 0.025))


def test_error_rate_undefined_without_counts():
    with pytest.raises(UndefinedEstimateError):
        error_rate_estimate(record(0, 0, 0))
