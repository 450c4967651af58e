"""Pure-numpy kernels: broadcast the shared formulas over whole batches."""

import numpy as np

from . import _common as C

NAME = "numpy"
_CHUNK = 64


def circuit_probs(E, P2, P3, P5, P6, W6, phi_deg, delta):
    """Detector probabilities, shape ``(n, 4)``, for inputs ``E`` of shape ``(n, 2)``."""
    E = np.asarray(E, dtype=complex)
    phi_deg = np.asarray(phi_deg, dtype=float)
    delta = np.asarray(delta, dtype=float)
    p = C.circuit_probs(E[:, 0], E[:, 1], P2, P3, P5, P6, W6, phi_deg, delta)
    return np.stack(np.broadcast_arrays(*p), axis=-1)


def _grid(E, P2, P3, P5, P6, W6):
    phis = np.arange(C.N_PHI) * C.PHI_STEP
    deltas = np.arange(C.N_DELTA) * C.DELTA_STEP
    n = E.shape[0]
    F = np.empty((n, C.N_PHI, C.N_DELTA))
    for lo in range(0, n, _CHUNK):
        e = E[lo:lo + _CHUNK, :, None, None]
        F[lo:lo + _CHUNK] = C.pd2_objective(
            e[:, 0], e[:, 1], P2, P3, P5, P6, W6, phis[None, :, None], deltas[None, None, :]
        )
    return F


def _local_minima(F):
    """Mask of grid points no larger than any neighbour; delta axis is periodic."""
    pad = np.pad(F, ((0, 0), (1, 1), (0, 0)), constant_values=np.inf)
    mask = np.ones(F.shape, dtype=bool)
    for di in (-1, 0, 1):
        shifted_i = pad[:, 1 + di:1 + di + F.shape[1], :]
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            mask &= F <= np.roll(shifted_i, -dj, axis=2)
    return mask


def _golden(fun, lo, hi):
    c = hi - C.INV_GOLDEN * (hi - lo)
    d = lo + C.INV_GOLDEN * (hi - lo)
    fc = fun(c)
    fd = fun(d)
    for _ in range(C.GOLDEN_ITERS):
        left = fc <= fd
        new_lo = np.where(left, lo, c)
        new_hi = np.where(left, d, hi)
        nc = np.where(left, new_hi - C.INV_GOLDEN * (new_hi - new_lo), d)
        nd = np.where(left, c, new_lo + C.INV_GOLDEN * (new_hi - new_lo))
        probe = np.where(left, nc, nd)
        fp = fun(probe)
        fc, fd = np.where(left, fp, fd), np.where(left, fc, fp)
        lo, hi, c, d = new_lo, new_hi, nc, nd
    x = 0.5 * (lo + hi)
    return x, fun(x)


def align_batch(E, P2, P3, P5, P6, W6):
    """Minimise the PD2 signal over (WP4 angle, path phase) for each input row.

    Returns arrays ``phi, delta, value, converged, passes``.
    """
    E = np.asarray(E, dtype=complex)
    n = E.shape[0]
    K = C.N_CANDIDATES
    F = _grid(E, P2, P3, P5, P6, W6)
    masked = np.where(_local_minima(F), F, np.inf).reshape(n, -1)
    order = np.argsort(masked, axis=1, kind="mergesort")[:, :K]
    fval = np.take_along_axis(masked, order, axis=1).ravel()
    phi = (order // C.N_DELTA).ravel() * C.PHI_STEP
    dlt = (order % C.N_DELTA).ravel() * C.DELTA_STEP
    e = np.repeat(E, K, axis=0)
    e0, e1 = e[:, 0], e[:, 1]

    valid = np.isfinite(fval)
    done = ~valid
    converged = np.zeros(n * K, dtype=bool)
    passes = np.zeros(n * K, dtype=np.int64)
    for _ in range(C.MAX_PASSES):
        if done.all():
            break
        act = ~done
        a0, a1, ph0, d0, f0 = e0[act], e1[act], phi[act], dlt[act], fval[act]

        lo = np.maximum(0.0, ph0 - C.PHI_STEP)
        hi = np.minimum(C.PHI_MAX, ph0 + C.PHI_STEP)
        x, fx = _golden(lambda t: C.pd2_objective(a0, a1, P2, P3, P5, P6, W6, t, d0), lo, hi)
        better = fx < f0
        ph1 = np.where(better, x, ph0)
        f1 = np.where(better, fx, f0)

        x, fx = _golden(
            lambda t: C.pd2_objective(a0, a1, P2, P3, P5, P6, W6, ph1, t),
            d0 - C.DELTA_STEP, d0 + C.DELTA_STEP,
        )
        better = fx < f1
        d1 = np.where(better, x, d0)
        f2 = np.where(better, fx, f1)

        moved = np.abs(ph1 - ph0) + np.abs(d1 - d0)
        phi[act], dlt[act], fval[act] = ph1, d1, f2
        passes[act] += 1
        stop = moved <= C.STEP_TOL
        idx = np.flatnonzero(act)[stop]
        converged[idx] = True
        done[idx] = True

    phi = phi.reshape(n, K)
    dlt = dlt.reshape(n, K)
    fval = fval.reshape(n, K)
    converged = converged.reshape(n, K)
    passes = passes.reshape(n, K)
    best = fval.min(axis=1, keepdims=True)
    eligible = fval <= best + C.TIE_TOL
    pick = np.argmin(np.where(eligible, phi, np.inf), axis=1)[:, None]
    take = lambda a: np.take_along_axis(a, pick, axis=1)[:, 0]
    return (
        take(phi),
        np.mod(take(dlt), 2.0 * np.pi),
        take(fval),
        take(converged),
        take(passes),
    )


def von_neumann_errors(thetas_deg, p, m, eta_p, eta_m):
    return C.von_neumann_error(np.asarray(thetas_deg, dtype=float), p[0], p[1], m[0], m[1], eta_p, eta_m)


def idp_grid_min(weights, u, w, c_p, c_m, eta_p, eta_m, tol):
    """Best feasible point of the zero-error POVM family on ``weights x weights``.

    Rows index the ``+`` weight. Returns ``(value, i, j, n_feasible)``; ties
    resolve to the first point in row-major order.
    """
    weights = np.asarray(weights, dtype=float)
    n = weights.size
    best, bi, bj, feasible = np.inf, -1, -1, 0
    for lo in range(0, n, _CHUNK):
        ap = weights[lo:lo + _CHUNK, None]
        am = weights[None, :]
        ok = C.inconclusive_min_eig(ap, am, u[0], u[1], w[0], w[1]) >= -tol
        val = np.where(ok, C.inconclusive_prob(ap, am, c_p, c_m, eta_p, eta_m), np.inf)
        feasible += int(ok.sum())
        k = int(np.argmin(val))
        if val.flat[k] < best:
            best = float(val.flat[k])
            bi, bj = lo + k // n, k % n
    return best, bi, bj, feasible
