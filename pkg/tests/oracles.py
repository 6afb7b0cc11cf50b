"""Independent reference computations used by the tests.

Nothing here calls into the library's numerical kernels; formulas are
re-evaluated with mpmath or solved as plain linear systems.
"""

import math
import random

import mpmath as mp
import numpy as np

from wfcrack import Face, FaceTraction, LoadCase, Mode, PointForce

# frozen with mpmath at 30 digits for mu+ = 1, nu+ = 0.2, mu- = 3, nu- = 0.3
ETA_HALF = {
    "d_star": 0.225806451612903225806451612903,
    "alpha": 0.548387096774193548387096774194,
    "epsilon": 0.0731368417311117451719278573825,
    "K_hutchinson_unit": 0.819038536439170546168815563808,
    "K_hutchinson_P1_Q05_a2": complex(0.593077216924897610141883336469, 0.259854752452941497736172740233),
    "c1p": complex(0.429493805906524873981968047486, 0.573403312730780109069454119698),
    "c1m": complex(0.573403312730780109069454119698, 0.429493805906524873981968047486),
    "c2p": complex(0.999768310192553084125742584871, -1.00522740515371732462439780343),
    "c3p": complex(-0.700982866097605907372816240294, -0.632333758172367589219543812194),
    "KS_three_point": complex(0.865833141745908257208727217055, 0.00971647583607782428919999136035),
    "KA_three_point": complex(-0.0256615577488561641186612292005, -0.00532838997462332299730322106858),
}


def mp_gamma(z):
    return complex(mp.gamma(complex(z)))


def hutchinson_K(params, P, Q, a):
    """Closed form sqrt(2/pi) cosh(pi eps) (P + iQ) a^(-1/2 - i eps)."""
    eps = params.epsilon
    return math.sqrt(2 / math.pi) * math.cosh(math.pi * eps) * complex(P, Q) * a ** complex(-0.5, -eps)


def three_point_oracle(params, F, a, b, order=1):
    """K^S, K^A (order 1) or A^S, A^A (order 2) by direct mpmath evaluation."""
    eps = params.epsilon
    z = mp.mpc(-0.5 - (order - 1), -eps)
    pref = mp.sqrt(2 / mp.pi) * mp.cosh(mp.pi * eps) * F * mp.power(a, z)
    side = 0.25 * mp.power(1 + mp.mpf(b) / a, z) + 0.25 * mp.power(1 - mp.mpf(b) / a, z)
    sgn = 1 if order == 1 else -1
    return complex(sgn * pref * (0.5 + side)), complex(sgn * params.alpha * pref * (0.5 - side))


def polar_rows(s, theta, mu, nu):
    """Linear maps C -> (s_tt, s_rt, u_r, u_t) for one material at angle theta."""
    a, b = (s + 1) * theta, (s - 1) * theta
    k = (s + 1) / (s - 1)
    g = 4 * (1 - nu) / (s - 1)
    stt = np.array([np.cos(a), np.cos(b), np.sin(a), np.sin(b)])
    srt = np.array([-k * np.sin(a), -np.sin(b), k * np.cos(a), np.cos(b)])
    ur = np.array([np.cos(a) * (1 + g), np.cos(b), np.sin(a) * (1 + g), np.sin(b)]) / (2 * s * mu)
    ut = -np.array([-k * np.sin(a) + g * np.sin(a), -np.sin(b), k * np.cos(a) - g * np.cos(a), np.cos(b)]) / (2 * s * mu)
    return stt, srt, ur, ut


def coefficients_by_solve(s, P, Q, JP, JQ, params):
    """C_1..C_4 of both materials from the 8x8 boundary and interface system."""
    M = np.zeros((8, 8), complex)
    rhs = np.zeros(8, complex)
    up, lo = params.plus, params.minus
    stt, srt, _, _ = polar_rows(s, math.pi, up.mu, up.nu)
    M[0, :4], M[1, :4] = stt, srt
    rhs[0], rhs[1] = P + JP / 2, Q + JQ / 2
    stt, srt, _, _ = polar_rows(s, -math.pi, lo.mu, lo.nu)
    M[2, 4:], M[3, 4:] = stt, srt
    rhs[2], rhs[3] = P - JP / 2, Q - JQ / 2
    a = polar_rows(s, 0.0, up.mu, up.nu)
    b = polar_rows(s, 0.0, lo.mu, lo.nu)
    for i in range(4):
        M[4 + i, :4] = a[i]
        M[4 + i, 4:] = -b[i]
    x = np.linalg.solve(M, rhs)
    return x[:4], x[4:]


def random_balanced_points(rng: random.Random, n_sym=2, lo=-10.0, hi=-0.1):
    """Random self-balanced point loads: symmetric pairs plus a balanced skew triple."""
    tr = []
    for _ in range(n_sym):
        x = rng.uniform(lo, hi)
        c = (rng.uniform(-1, 1), rng.uniform(-1, 1))
        tr += [FaceTraction(Face.UPPER, PointForce(x, c)), FaceTraction(Face.LOWER, PointForce(x, c))]
    xs = sorted(rng.uniform(lo, hi) for _ in range(3))
    k = rng.uniform(-1, 1)
    kq = rng.uniform(-1, 1)
    jumps_p = (k * (xs[1] - xs[2]), k * (xs[2] - xs[0]), k * (xs[0] - xs[1]))
    jumps_q = (kq, -kq, 0.0)
    for x, jp, jq in zip(xs, jumps_p, jumps_q):
        tr.append(FaceTraction(Face.UPPER, PointForce(x, (jq, jp))))
    return LoadCase(Mode.PLANE_STRAIN, tuple(tr))


def _mp_c1(eps):
    cp = (1 + 1j) * mp.sqrt(mp.pi) / (2 * mp.gamma(mp.mpc(0.5, eps)))
    cm = (1 + 1j) * mp.sqrt(mp.pi) / (2 * mp.gamma(mp.mpc(0.5, -eps)))
    return cp, cm


def _pattern(a, b):
    # [[a, -b], [b, a]] layout shared by every weight-function matrix
    return np.array([[complex(a), -complex(b)], [complex(b), complex(a)]])


def jump_trace_mp(r, params):
    """[[U]] at x1 = r > 0 written out term by term with mpmath."""
    eps, d0 = params.epsilon, params.d0
    cp, cm = _mp_c1(eps)
    r = mp.mpf(r)
    pre = r ** -0.5 / (2 * d0 * mp.sqrt(2 * mp.pi))
    kp, km = r ** mp.mpc(0, -eps) / cp, r ** mp.mpc(0, eps) / cm
    return pre * (kp + km), 1j * pre * (kp - km)


def sigma_potential_mp(r, params):
    """G with dG/dr = -Sigma(-r); Sigma entries are -G' of r^(-1/2 -+ i eps) terms."""
    eps, d0, b = params.epsilon, params.d0, params.b
    cp, cm = _mp_c1(eps)
    r = mp.mpf(r)
    pre = r ** -0.5 / (2 * b * d0 ** 3 * mp.sqrt(2 * mp.pi))
    kp, km = r ** mp.mpc(0, -eps) / cp, r ** mp.mpc(0, eps) / cm
    return pre * (kp + km), 1j * pre * (kp - km)


def damped_transform_plus(k, params):
    """int_0^inf [[U]](x) exp(-k x) dx, i.e. the transform at beta = i k."""
    def entry(i):
        f = lambda u: 2 * u * jump_trace_mp(u * u, params)[i] * mp.exp(-k * u * u)
        return mp.quad(f, [0, 1, mp.inf])
    return _pattern(entry(0), entry(1))


def damped_transform_minus(k, params):
    """Sigma transform at beta = -i k as the finite part -k int_0^inf G exp(-k r) dr."""
    def entry(i):
        f = lambda u: 2 * u * sigma_potential_mp(u * u, params)[i] * mp.exp(-k * u * u)
        return -k * mp.quad(f, [0, 1, mp.inf])
    return _pattern(entry(0), entry(1))


def homogeneous_mean_to_opening(nu, s=0.5):
    """Displacement ahead of the tip over the face opening, for the homogeneous symmetric singular solution.

    The null space of the traction-free face conditions at ``s`` is
    two-dimensional; the combination with ``u_theta(0) = 0`` is the
    symmetric one.
    """
    from scipy.linalg import null_space
    a = polar_rows(s, math.pi, 1.0, nu)
    b = polar_rows(s, -math.pi, 1.0, nu)
    N = null_space(np.array([a[0], a[1], b[0], b[1]], dtype=complex))
    z0 = polar_rows(s, 0.0, 1.0, nu)
    ut = np.array([z0[3] @ N[:, 0], z0[3] @ N[:, 1]])
    C = N @ np.array([ut[1], -ut[0]])
    opening = polar_rows(s, math.pi, 1.0, nu)[3] @ C - polar_rows(s, -math.pi, 1.0, nu)[3] @ C
    return complex((z0[2] @ C) / opening)
