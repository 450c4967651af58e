"""Brute-force measurement searches used to check the closed-form bounds.

Both searches evaluate a uniform grid, then make one refinement pass in the
best grid cell. Only real measurement bases are searched; that is enough
for the real state pairs prepared here, because the optimal projective
measurement diagonalises a real symmetric operator.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DomainError
from .states import StatePair

MIN_GRID = 1000
POSITIVITY_TOL = 1e-10
REFINE_ITERS = 80


@dataclass(frozen=True)
class ProjectiveStrategy:
    """Orthonormal basis ``(cos t, sin t), (-sin t, cos t)``; first vector announces psi+."""

    measurement_angle: float

    @property
    def basis(self) -> tuple[np.ndarray, np.ndarray]:
        t = np.deg2rad(self.measurement_angle)
        return np.array([np.cos(t), np.sin(t)]), np.array([-np.sin(t), np.cos(t)])

    def error_probability(self, pair: StatePair) -> float:
        p, m = pair.psi_plus.as_array(), pair.psi_minus.as_array()
        return float(kernels.von_neumann_errors(
            np.array([self.measurement_angle]), p, m, pair.prior_plus, pair.prior_minus)[0])


@dataclass(frozen=True)
class ZeroErrorPOVM:
    """Three-outcome measurement that never misidentifies either state.

    ``Pi+ = weight_plus |u><u|`` with ``u`` orthogonal to psi-, ``Pi-``
    likewise with psi+, and ``Pi? = I - Pi+ - Pi-``.
    """

    weight_plus: float
    weight_minus: float
    pair: StatePair = field(repr=False)

    def elements(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        u = self.pair.psi_minus.orthogonal().as_array()
        w = self.pair.psi_plus.orthogonal().as_array()
        pi_plus = self.weight_plus * np.outer(u, u.conj())
        pi_minus = self.weight_minus * np.outer(w, w.conj())
        return pi_plus, pi_minus, np.eye(2) - pi_plus - pi_minus

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.elements()[2])[0])

    def is_positive(self, tol: float = POSITIVITY_TOL) -> bool:
        return self.min_eigenvalue() >= -tol

    def inconclusive_probability(self) -> float:
        _, _, pi_q = self.elements()
        p, m = self.pair.psi_plus.as_array(), self.pair.psi_minus.as_array()
        return float(
            self.pair.prior_plus * np.vdot(p, pi_q @ p).real
            + self.pair.prior_minus * np.vdot(m, pi_q @ m).real
        )


@dataclass(frozen=True)
class OracleReport:
    best_value: float
    argbest: dict
    grid_resolution: int
    runtime_note: str
    grid_value: float = float("nan")
    n_feasible: int | None = None


def _check_grid(grid_points: int) -> int:
    if int(grid_points) != grid_points or grid_points < MIN_GRID:
        raise DomainError(f"grid_points must be an integer >= {MIN_GRID}, got {grid_points!r}")
    return int(grid_points)


def _note(t0: float) -> str:
    return f"{time.perf_counter() - t0:.3f} s on the {kernels.BACKEND} backend"


def von_neumann_search(pair: StatePair, grid_points: int = 100_000) -> OracleReport:
    """Minimum error over projective measurements at ``grid_points`` angles in [0, 180)."""
    n = _check_grid(grid_points)
    t0 = time.perf_counter()
    p, m = pair.psi_plus.as_array(), pair.psi_minus.as_array()
    step = 180.0 / n
    thetas = np.arange(n) * step
    errs = kernels.von_neumann_errors(thetas, p, m, pair.prior_plus, pair.prior_minus)
    k = int(np.argmin(errs))
    grid_value = float(errs[k])

    f = lambda t: float(kernels.von_neumann_errors(np.array([t]), p, m, pair.prior_plus, pair.prior_minus)[0])
    lo, hi = thetas[k] - step, thetas[k] + step
    g = (np.sqrt(5.0) - 1.0) / 2.0
    for _ in range(REFINE_ITERS):
        c, d = hi - g * (hi - lo), lo + g * (hi - lo)
        if f(c) <= f(d):
            hi = d
        else:
            lo = c
    t_ref = 0.5 * (lo + hi)
    best, angle = grid_value, float(thetas[k])
    if f(t_ref) < best:
        best, angle = f(t_ref), float(t_ref % 180.0)
    return OracleReport(
        best_value=min(max(best, 0.0), 1.0),
        argbest={"measurement_angle": angle},
        grid_resolution=n,
        runtime_note=_note(t0),
        grid_value=grid_value,
    )


def _zero_error_search(pair: StatePair, grid_points: int) -> OracleReport:
    n = _check_grid(grid_points)
    t0 = time.perf_counter()
    p, m = pair.psi_plus.as_array(), pair.psi_minus.as_array()
    u = pair.psi_minus.orthogonal().as_array()
    w = pair.psi_plus.orthogonal().as_array()
    c_p = abs(np.vdot(u, p)) ** 2
    c_m = abs(np.vdot(w, m)) ** 2
    eta_p, eta_m = pair.prior_plus, pair.prior_minus
    weights = np.linspace(0.0, 1.0, n)
    grid_value, i, j, n_feasible = kernels.idp_grid_min(weights, u, w, c_p, c_m, eta_p, eta_m, POSITIVITY_TOL)
    if i < 0:
        raise RuntimeError("no feasible zero-error POVM on the grid")

    def feasible(ap, am):
        return _min_eig(ap, am, u, w) >= -POSITIVITY_TOL

    def value(ap, am):
        return eta_p * (1.0 - ap * c_p) + eta_m * (1.0 - am * c_m)

    # Feasibility is monotone in each weight, so bisect for the largest
    # feasible weight inside the next grid cell along each axis.
    best, arg = grid_value, (weights[i], weights[j])
    for axis in (0, 1):
        k = (i, j)[axis]
        if k + 1 >= n:
            continue
        lo, hi = weights[k], weights[k + 1]
        probe = (lambda x: (x, weights[j])) if axis == 0 else (lambda x: (weights[i], x))
        if feasible(*probe(hi)):
            continue
        for _ in range(REFINE_ITERS):
            mid = 0.5 * (lo + hi)
            if feasible(*probe(mid)):
                lo = mid
            else:
                hi = mid
        v = value(*probe(lo))
        if v < best:
            best, arg = v, probe(lo)
    return OracleReport(
        best_value=min(max(float(best), 0.0), 1.0),
        argbest={"weight_plus": float(arg[0]), "weight_minus": float(arg[1])},
        grid_resolution=n,
        runtime_note=_note(t0),
        grid_value=float(grid_value),
        n_feasible=n_feasible,
    )


def _min_eig(ap, am, u, w) -> float:
    q = np.eye(2) - ap * np.outer(u, u.conj()) - am * np.outer(w, w.conj())
    return float(np.linalg.eigvalsh(q)[0])


def idp_povm_search(pair: StatePair, grid_points: int = 2000) -> OracleReport:
    """Least inconclusive probability over zero-error POVMs, equal priors only."""
    if abs(pair.prior_plus - pair.prior_minus) > 1e-9:
        raise DomainError("idp_povm_search needs equal priors; use unequal_prior_inconclusive")
    return _zero_error_search(pair, grid_points)


def unequal_prior_inconclusive(pair: StatePair, grid_points: int = 2000) -> OracleReport:
    """Same search with the pair's own priors."""
    return _zero_error_search(pair, grid_points)
