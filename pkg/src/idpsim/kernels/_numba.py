"""numba-compiled kernels: the shared formulas jitted for scalars, driven by loops."""

import importlib.util

import numba
import numpy as np

from . import _common as C

NAME = "numba"

_jit = numba.njit(cache=True)


def _clone_common():
    """Fresh copy of the shared-formula module whose globals can be rebound."""
    spec = importlib.util.find_spec(C.__name__)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


# Jit every shared formula inside the clone so calls between them resolve
# to compiled dispatchers.
_M = _clone_common()
for _name in (
    "abs2",
    "circuit_amplitudes",
    "circuit_probs",
    "pd2_objective",
    "von_neumann_error",
    "inconclusive_min_eig",
    "inconclusive_prob",
):
    setattr(_M, _name, numba.njit(cache=True, inline="always")(getattr(_M, _name)))

_probs = _M.circuit_probs
_objective = _M.pd2_objective
_vn_error = _M.von_neumann_error
_min_eig = _M.inconclusive_min_eig
_inc_prob = _M.inconclusive_prob


@_jit
def _circuit_probs_loop(E, P2, P3, P5, P6, W6, phi_deg, delta):
    n = E.shape[0]
    out = np.empty((n, 4))
    for k in range(n):
        p = _probs(E[k, 0], E[k, 1], P2, P3, P5, P6, W6, phi_deg[k], delta[k])
        out[k, 0] = p[0]
        out[k, 1] = p[1]
        out[k, 2] = p[2]
        out[k, 3] = p[3]
    return out


def circuit_probs(E, P2, P3, P5, P6, W6, phi_deg, delta):
    E = np.ascontiguousarray(E, dtype=np.complex128)
    phi_deg, delta = np.broadcast_arrays(np.asarray(phi_deg, dtype=float), np.asarray(delta, dtype=float))
    shape = np.broadcast_shapes(E.shape[:1], phi_deg.shape)
    E = np.broadcast_to(E, shape + (2,)).copy()
    phi_deg = np.broadcast_to(phi_deg, shape).astype(float).ravel()
    delta = np.broadcast_to(delta, shape).astype(float).ravel()
    return _circuit_probs_loop(E, P2, P3, P5, P6, W6, phi_deg, delta)


@_jit
def _golden(axis, e0, e1, P2, P3, P5, P6, W6, fixed, lo, hi):
    c = hi - C.INV_GOLDEN * (hi - lo)
    d = lo + C.INV_GOLDEN * (hi - lo)
    if axis == 0:
        fc = _objective(e0, e1, P2, P3, P5, P6, W6, c, fixed)
        fd = _objective(e0, e1, P2, P3, P5, P6, W6, d, fixed)
    else:
        fc = _objective(e0, e1, P2, P3, P5, P6, W6, fixed, c)
        fd = _objective(e0, e1, P2, P3, P5, P6, W6, fixed, d)
    for _ in range(C.GOLDEN_ITERS):
        if fc <= fd:
            hi = d
            d = c
            fd = fc
            c = hi - C.INV_GOLDEN * (hi - lo)
            if axis == 0:
                fc = _objective(e0, e1, P2, P3, P5, P6, W6, c, fixed)
            else:
                fc = _objective(e0, e1, P2, P3, P5, P6, W6, fixed, c)
        else:
            lo = c
            c = d
            fc = fd
            d = lo + C.INV_GOLDEN * (hi - lo)
            if axis == 0:
                fd = _objective(e0, e1, P2, P3, P5, P6, W6, d, fixed)
            else:
                fd = _objective(e0, e1, P2, P3, P5, P6, W6, fixed, d)
    x = 0.5 * (lo + hi)
    if axis == 0:
        return x, _objective(e0, e1, P2, P3, P5, P6, W6, x, fixed)
    return x, _objective(e0, e1, P2, P3, P5, P6, W6, fixed, x)


@_jit
def _align_one(e0, e1, P2, P3, P5, P6, W6):
    nP, nD, K = C.N_PHI, C.N_DELTA, C.N_CANDIDATES
    F = np.empty((nP, nD))
    for i in range(nP):
        for j in range(nD):
            F[i, j] = _objective(e0, e1, P2, P3, P5, P6, W6, i * C.PHI_STEP, j * C.DELTA_STEP)
    masked = np.empty(nP * nD)
    for i in range(nP):
        for j in range(nD):
            f = F[i, j]
            is_min = True
            for di in range(-1, 2):
                ii = i + di
                if ii < 0 or ii >= nP:
                    continue
                for dj in range(-1, 2):
                    if di == 0 and dj == 0:
                        continue
                    if f > F[ii, (j + dj) % nD]:
                        is_min = False
            masked[i * nD + j] = f if is_min else np.inf
    order = np.argsort(masked, kind="mergesort")

    best_phi = np.inf
    best_delta = 0.0
    best_f = np.inf
    best_conv = False
    best_passes = 0
    cphi = np.empty(K)
    cdel = np.empty(K)
    cf = np.empty(K)
    cconv = np.zeros(K, dtype=np.bool_)
    cpass = np.zeros(K, dtype=np.int64)
    for k in range(K):
        idx = order[k]
        f = masked[idx]
        phi = (idx // nD) * C.PHI_STEP
        dlt = (idx % nD) * C.DELTA_STEP
        conv = False
        npass = 0
        if np.isfinite(f):
            for _ in range(C.MAX_PASSES):
                lo = max(0.0, phi - C.PHI_STEP)
                hi = min(C.PHI_MAX, phi + C.PHI_STEP)
                x, fx = _golden(0, e0, e1, P2, P3, P5, P6, W6, dlt, lo, hi)
                ph1 = phi
                f1 = f
                if fx < f:
                    ph1 = x
                    f1 = fx
                x, fx = _golden(1, e0, e1, P2, P3, P5, P6, W6, ph1, dlt - C.DELTA_STEP, dlt + C.DELTA_STEP)
                d1 = dlt
                f2 = f1
                if fx < f1:
                    d1 = x
                    f2 = fx
                moved = abs(ph1 - phi) + abs(d1 - dlt)
                phi, dlt, f = ph1, d1, f2
                npass += 1
                if moved <= C.STEP_TOL:
                    conv = True
                    break
        cphi[k] = phi
        cdel[k] = dlt
        cf[k] = f
        cconv[k] = conv
        cpass[k] = npass
    fmin = cf.min()
    for k in range(K):
        if cf[k] <= fmin + C.TIE_TOL and cphi[k] < best_phi:
            best_phi = cphi[k]
            best_delta = cdel[k]
            best_f = cf[k]
            best_conv = cconv[k]
            best_passes = cpass[k]
    return best_phi, best_delta % (2.0 * np.pi), best_f, best_conv, best_passes


@_jit
def _align_loop(E, P2, P3, P5, P6, W6):
    n = E.shape[0]
    phi = np.empty(n)
    dlt = np.empty(n)
    val = np.empty(n)
    conv = np.zeros(n, dtype=np.bool_)
    passes = np.zeros(n, dtype=np.int64)
    for k in range(n):
        phi[k], dlt[k], val[k], conv[k], passes[k] = _align_one(E[k, 0], E[k, 1], P2, P3, P5, P6, W6)
    return phi, dlt, val, conv, passes


def align_batch(E, P2, P3, P5, P6, W6):
    return _align_loop(np.ascontiguousarray(E, dtype=np.complex128), P2, P3, P5, P6, W6)


@_jit
def _vn_loop(thetas, p0, p1, m0, m1, eta_p, eta_m):
    out = np.empty(thetas.size)
    for k in range(thetas.size):
        out[k] = _vn_error(thetas[k], p0, p1, m0, m1, eta_p, eta_m)
    return out


def von_neumann_errors(thetas_deg, p, m, eta_p, eta_m):
    thetas = np.ascontiguousarray(thetas_deg, dtype=float).ravel()
    return _vn_loop(thetas, complex(p[0]), complex(p[1]), complex(m[0]), complex(m[1]), float(eta_p), float(eta_m))


@_jit
def _idp_loop(weights, u0, u1, w0, w1, c_p, c_m, eta_p, eta_m, tol):
    n = weights.size
    best = np.inf
    bi = -1
    bj = -1
    feasible = 0
    for i in range(n):
        ap = weights[i]
        for j in range(n):
            am = weights[j]
            if _min_eig(ap, am, u0, u1, w0, w1) >= -tol:
                feasible += 1
                v = _inc_prob(ap, am, c_p, c_m, eta_p, eta_m)
                if v < best:
                    best = v
                    bi = i
                    bj = j
    return best, bi, bj, feasible


def idp_grid_min(weights, u, w, c_p, c_m, eta_p, eta_m, tol):
    best, bi, bj, feasible = _idp_loop(
        np.ascontiguousarray(weights, dtype=float),
        complex(u[0]), complex(u[1]), complex(w[0]), complex(w[1]),
        float(c_p), float(c_m), float(eta_p), float(eta_m), float(tol),
    )
    return float(best), int(bi), int(bj), int(feasible)
