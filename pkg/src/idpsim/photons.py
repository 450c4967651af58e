"""Weak-coherent-pulse detection statistics.

Detection is modelled as linear (analog photocurrent), so expected counts
are ``n_pulses * mean_photons * efficiency * p``. Sampled counts are
independent Poisson draws per detector from numpy's PCG64 generator
seeded with the record's seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UndefinedEstimateError
from .interferometer import DETECTORS, DetectionProbabilities

MEAN_PHOTONS = 0.2
QUANTUM_EFFICIENCY = 0.83
# Measurement noise quoted for the low-light error-rate readings, as a
# fraction of the total detected light.
MEASURED_NOISE_FLOOR = 0.025


@dataclass(frozen=True)
class PulseEnsemble:
    mean_photons_per_pulse: float = MEAN_PHOTONS
    n_pulses: int = 1_000_000
    detector_efficiency: float = QUANTUM_EFFICIENCY

    def __post_init__(self):
        if not self.mean_photons_per_pulse > 0:
            raise DomainError("mean photon number must be positive")
        if int(self.n_pulses) != self.n_pulses or self.n_pulses < 1:
            raise DomainError("n_pulses must be a positive integer")
        if not (0 < self.detector_efficiency <= 1):
            raise DomainError("detector efficiency must lie in (0, 1]")

    @property
    def detected_photons(self) -> float:
        return self.n_pulses * self.mean_photons_per_pulse * self.detector_efficiency


@dataclass(frozen=True, eq=False)
class CountsRecord:
    expected: np.ndarray
    sampled: np.ndarray
    seed: int | None

    def __eq__(self, other):
        if not isinstance(other, CountsRecord):
            return NotImplemented
        return (
            self.seed == other.seed
            and np.array_equal(self.expected, other.expected)
            and np.array_equal(self.sampled, other.sampled)
        )

    def count(self, detector: str) -> int:
        return int(self.sampled[DETECTORS.index(detector)])

    @property
    def total(self) -> int:
        return int(self.sampled.sum())


def _probs_array(probs) -> np.ndarray:
    if isinstance(probs, DetectionProbabilities):
        p = probs.as_array()
    else:
        p = np.asarray(probs, dtype=float)
    if p.shape != (3,) or np.any(p < -1e-12) or np.any(p > 1 + 1e-12):
        raise DomainError(f"expected three probabilities in [0, 1], got {p!r}")
    return np.clip(p, 0.0, 1.0)


def expected_counts(probs, ensemble: PulseEnsemble) -> np.ndarray:
    """Mean photocounts at (PD1, PD2, PD3)."""
    return ensemble.detected_photons * _probs_array(probs)


def sample_counts(probs, ensemble: PulseEnsemble, seed) -> CountsRecord:
    expected = expected_counts(probs, ensemble)
    rng = np.random.default_rng(seed)
    sampled = rng.poisson(expected).astype(np.int64)
    return CountsRecord(expected, sampled, seed)


def error_rate_estimate(counts: CountsRecord, error_port: str = "pd2", noise_floor: float = 0.0):
    """Fraction of detected light at ``error_port`` and its standard error.

    The statistical part is ``sqrt(p (1 - p) / N)``. ``noise_floor`` adds a
    fixed measurement uncertainty (a fraction of the total light) in
    quadrature.

    Returns
    -------
    (estimate, uncertainty)
    """
    total = counts.total
    if total <= 0:
        raise UndefinedEstimateError("no counts recorded; error rate is undefined")
    p = counts.count(error_port) / total
    stat = math.sqrt(p * (1.0 - p) / total)
    return p, math.hypot(stat, noise_floor)
