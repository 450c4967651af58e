"""Closed-form figures of merit for discriminating two pure states."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, NumericalError
from .states import check_alpha, check_priors

RADICAND_TOL = 1e-12


@dataclass(frozen=True)
class BoundsReport:
    helstrom_error: float
    idp_inconclusive: float
    idp_conclusive: float
    overlap_magnitude: float


def _check_overlap(s: float) -> float:
    s = float(s)
    if not (0.0 <= s <= 1.0):
        raise DomainError(f"overlap magnitude must lie in [0, 1], got {s!r}")
    return s


def helstrom_bound(overlap_magnitude: float, prior_plus: float = 0.5, prior_minus: float = 0.5) -> float:
    """Minimum error probability of any two-outcome measurement.

    ``(1 - sqrt(1 - 4 eta+ eta- s^2)) / 2``. A radicand that is negative by
    no more than ``1e-12`` is treated as zero; anything worse raises
    :class:`NumericalError`.
    """
    s = _check_overlap(overlap_magnitude)
    check_priors(prior_plus, prior_minus)
    radicand = 1.0 - 4.0 * prior_plus * prior_minus * s * s
    if radicand < -RADICAND_TOL:
        raise NumericalError(f"negative radicand {radicand!r} in Helstrom bound")
    return 0.5 * (1.0 - math.sqrt(max(radicand, 0.0)))


def idp_bound(overlap_magnitude: float) -> float:
    """Minimum inconclusive probability of an error-free measurement.

    Valid for equal priors only; the value is the overlap magnitude itself.
    """
    return _check_overlap(overlap_magnitude)


def best_von_neumann_error(alpha: float) -> float:
    """Helstrom error for the symmetric pair at ``alpha`` degrees, equal priors."""
    alpha = check_alpha(alpha)
    s = abs(math.cos(math.radians(2.0 * alpha)))
    return helstrom_bound(min(s, 1.0), 0.5, 0.5)


def bounds_report(overlap_magnitude: float, prior_plus: float = 0.5, prior_minus: float = 0.5) -> BoundsReport:
    s = _check_overlap(overlap_magnitude)
    p_q = idp_bound(s)
    return BoundsReport(
        helstrom_error=helstrom_bound(s, prior_plus, prior_minus),
        idp_inconclusive=p_q,
        idp_conclusive=1.0 - p_q,
        overlap_magnitude=s,
    )
