"""Elementwise formulas shared by both backends.

Everything here uses only arithmetic and ``np`` ufuncs so the same source
broadcasts over numpy arrays and compiles under ``numba.njit`` for scalars.
"""

import numpy as np

DEG = np.pi / 180.0

# alignment search
PHI_STEP = 1.0
PHI_MAX = 90.0
N_PHI = 91
DELTA_STEP = 0.05
N_DELTA = 126
N_CANDIDATES = 4
GOLDEN_ITERS = 72
MAX_PASSES = 60
STEP_TOL = 1e-10
TIE_TOL = 1e-13

INV_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def abs2(z):
    return z.real * z.real + z.imag * z.imag


def circuit_amplitudes(e0, e1, P2, P3, P5, P6, W6, phi_deg, delta):
    """Output amplitudes of the interferometer for a prepared input ``(e0, e1)``.

    Returns ``(pd1_h, pd1_v, pd2_h, pd2_v, pd3_h, pd3_v, dump_h, dump_v)``.
    ``phi_deg`` is the WP4 axis angle and ``delta`` the arm-A path phase.
    """
    # PBS2, top port: transmit -> arm A, reflect -> arm B
    a0 = P2[0, 0] * e0 + P2[0, 1] * e1
    a1 = P2[1, 0] * e0 + P2[1, 1] * e1
    b0 = P2[2, 0] * e0 + P2[2, 1] * e1
    b1 = P2[3, 0] * e0 + P2[3, 1] * e1
    # WP4
    c = np.cos(2.0 * phi_deg * DEG)
    s = np.sin(2.0 * phi_deg * DEG)
    w0 = c * a0 + s * a1
    w1 = s * a0 - c * a1
    # PBS3: transmit -> PD3, reflect continues
    d0 = P3[0, 0] * w0 + P3[0, 1] * w1
    d1 = P3[1, 0] * w0 + P3[1, 1] * w1
    r0 = P3[2, 0] * w0 + P3[2, 1] * w1
    r1 = P3[3, 0] * w0 + P3[3, 1] * w1
    # arm A relabel (H <-> V) and path phase
    ph = np.exp(1j * delta)
    x0 = r1 * ph
    x1 = r0 * ph
    # PBS5: arm A on the top port, arm B on the side port
    o0 = P5[0, 0] * x0 + P5[0, 1] * x1 + P5[0, 2] * b0 + P5[0, 3] * b1
    o1 = P5[1, 0] * x0 + P5[1, 1] * x1 + P5[1, 2] * b0 + P5[1, 3] * b1
    o2 = P5[2, 0] * x0 + P5[2, 1] * x1 + P5[2, 2] * b0 + P5[2, 3] * b1
    o3 = P5[3, 0] * x0 + P5[3, 1] * x1 + P5[3, 2] * b0 + P5[3, 3] * b1
    # WP6 then PBS6: transmit -> PD1, reflect -> PD2
    u0 = W6[0, 0] * o0 + W6[0, 1] * o1
    u1 = W6[1, 0] * o0 + W6[1, 1] * o1
    q0 = P6[0, 0] * u0 + P6[0, 1] * u1
    q1 = P6[1, 0] * u0 + P6[1, 1] * u1
    q2 = P6[2, 0] * u0 + P6[2, 1] * u1
    q3 = P6[3, 0] * u0 + P6[3, 1] * u1
    return q0, q1, q2, q3, d0, d1, o2, o3


def circuit_probs(e0, e1, P2, P3, P5, P6, W6, phi_deg, delta):
    """``(p_pd1, p_pd2, p_pd3, p_lost)`` for one input and one setting."""
    q0, q1, q2, q3, d0, d1, o2, o3 = circuit_amplitudes(e0, e1, P2, P3, P5, P6, W6, phi_deg, delta)
    return (
        abs2(q0) + abs2(q1),
        abs2(q2) + abs2(q3),
        abs2(d0) + abs2(d1),
        abs2(o2) + abs2(o3),
    )


def pd2_objective(e0, e1, P2, P3, P5, P6, W6, phi_deg, delta):
    q0, q1, q2, q3, d0, d1, o2, o3 = circuit_amplitudes(e0, e1, P2, P3, P5, P6, W6, phi_deg, delta)
    return abs2(q2) + abs2(q3)


def von_neumann_error(theta_deg, p0, p1, m0, m1, eta_p, eta_m):
    """Error of the projective measurement with basis ``(cos t, sin t), (-sin t, cos t)``.

    Outcome 1 announces psi+, outcome 2 announces psi-.
    """
    c = np.cos(theta_deg * DEG)
    s = np.sin(theta_deg * DEG)
    plus_as_minus = abs2(-s * p0 + c * p1)
    minus_as_plus = abs2(c * m0 + s * m1)
    return eta_p * plus_as_minus + eta_m * minus_as_plus


def inconclusive_min_eig(a_p, a_m, u0, u1, w0, w1):
    """Smallest eigenvalue of ``I - a_p |u><u| - a_m |w><w|``."""
    m00 = 1.0 - a_p * abs2(u0) - a_m * abs2(w0)
    m11 = 1.0 - a_p * abs2(u1) - a_m * abs2(w1)
    m01 = -a_p * u0 * np.conj(u1) - a_m * w0 * np.conj(w1)
    half_tr = 0.5 * (m00 + m11)
    half_diff = 0.5 * (m00 - m11)
    return half_tr - np.sqrt(half_diff * half_diff + abs2(m01))


def inconclusive_prob(a_p, a_m, c_p, c_m, eta_p, eta_m):
    """``eta+ <psi+|Pi?|psi+> + eta- <psi-|Pi?|psi->`` for the zero-error family."""
    return eta_p * (1.0 - a_p * c_p) + eta_m * (1.0 - a_m * c_m)
