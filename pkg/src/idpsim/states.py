"""Polarization states and the symmetric input pair being discriminated.

Angles are in degrees at every public boundary. Amplitudes are complex
even though the prepared states are real, since downstream path phases
are not.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

NORM_TOL = 1e-9


@dataclass(frozen=True)
class JonesVector:
    """Complex (horizontal, vertical) amplitude pair of one spatial mode."""

    h: complex
    v: complex

    def __post_init__(self):
        object.__setattr__(self, "h", complex(self.h))
        object.__setattr__(self, "v", complex(self.v))

    @classmethod
    def from_array(cls, arr) -> "JonesVector":
        arr = np.asarray(arr, dtype=complex)
        if arr.shape != (2,):
            raise DomainError(f"expected a 2-component vector, got shape {arr.shape}")
        return cls(arr[0], arr[1])

    def as_array(self) -> np.ndarray:
        return np.array([self.h, self.v], dtype=complex)

    @property
    def norm2(self) -> float:
        return abs(self.h) ** 2 + abs(self.v) ** 2

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm2 - 1.0) <= tol

    def normalized(self) -> "JonesVector":
        n = np.sqrt(self.norm2)
        if n == 0:
            raise DomainError("cannot normalize the zero vector")
        return JonesVector(self.h / n, self.v / n)

    def orthogonal(self) -> "JonesVector":
        """The state orthogonal to this one, ``(-v*, h*)``."""
        return JonesVector(-np.conj(self.v), np.conj(self.h))

    def equals_up_to_phase(self, other: "JonesVector", tol: float = 1e-12) -> bool:
        return abs(abs(np.vdot(self.as_array(), other.as_array())) - 1.0) <= tol


H = JonesVector(1.0, 0.0)
V = JonesVector(0.0, 1.0)


@dataclass(frozen=True)
class StatePair:
    psi_plus: JonesVector
    psi_minus: JonesVector
    alpha: float
    prior_plus: float = 0.5
    prior_minus: float = 0.5

    def __post_init__(self):
        check_alpha(self.alpha)
        check_priors(self.prior_plus, self.prior_minus)

    @property
    def priors(self) -> tuple[float, float]:
        return self.prior_plus, self.prior_minus

    def with_priors(self, prior_plus: float, prior_minus: float) -> "StatePair":
        return StatePair(self.psi_plus, self.psi_minus, self.alpha, prior_plus, prior_minus)


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not np.isfinite(alpha) or alpha < 0.0 or alpha > 45.0:
        raise DomainError(f"alpha must lie in [0, 45] degrees, got {alpha!r}")
    return alpha


def check_priors(prior_plus: float, prior_minus: float, tol: float = 1e-12) -> None:
    if prior_plus < 0 or prior_minus < 0:
        raise DomainError(f"priors must be nonnegative, got ({prior_plus}, {prior_minus})")
    if abs(prior_plus + prior_minus - 1.0) > tol:
        raise DomainError(f"priors must sum to 1, got {prior_plus + prior_minus!r}")


def make_states(alpha: float, prior_plus: float = 0.5, prior_minus: float = 0.5) -> StatePair:
    """Prepare ``cos a |H> +/- sin a |V>`` for ``0 <= a <= 45`` degrees.

    Examples
    --------
    >>> pair = make_states(30.0)
    >>> round(overlap(pair.psi_plus, pair.psi_minus).real, 12)
    0.5
    """
    alpha = check_alpha(alpha)
    a = np.deg2rad(alpha)
    c, s = np.cos(a), np.sin(a)
    return StatePair(
        psi_plus=JonesVector(c, s),
        psi_minus=JonesVector(c, -s),
        alpha=alpha,
        prior_plus=prior_plus,
        prior_minus=prior_minus,
    )


def overlap(a: JonesVector, b: JonesVector) -> complex:
    """Inner product ``<a|b>`` of two normalized Jones vectors."""
    for name, vec in (("a", a), ("b", b)):
        if not vec.is_normalized():
            raise DomainError(f"{name} is not normalized (norm^2 = {vec.norm2!r})")
    return complex(np.conj(a.h) * b.h + np.conj(a.v) * b.v)
