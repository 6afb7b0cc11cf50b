"""Mellin-transform solution of the loaded interfacial crack.

The physical crack occupies ``theta = +-pi``; the upper material (``+``)
fills ``0 < theta < pi`` and the lower one ``-pi < theta < 0``.  Transforms
follow ``f~(s) = int_0^inf f(r) r^s dr`` for tractions and stresses, so that
``sigma(r, theta) = (1/2 pi i) int sigma~(s, theta) r^(-s-1) ds`` and
``u(r, theta) = (1/2 pi i) int u~(s, theta) r^(-s) ds``.

Near-tip terms are residues of these integrands.  They are evaluated by the
trapezoidal rule on small circles around each group of poles, which stays
accurate when the pair ``-l/2 +- i eps`` merges into a double pole
(identical materials).

Stress tensors are returned in polar components
``[[s_rr, s_rt], [s_rt, s_tt]]`` and displacements as ``(u_r, u_t)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InputDomainError, NumericalError
from .loading import LoadCase, LoadDecomposition, Mode, decompose
from .materials import BimaterialParams
from .quadrature import gauss_kronrod_15

__all__ = [
    "MellinLoads",
    "MellinState",
    "TipExpansion",
    "FieldValue",
    "delta_fn",
    "delta_prime",
    "pole_pair",
    "mellin_coefficients",
    "mellin_state",
    "sigma_tilde",
    "u_tilde",
    "contour_residue",
    "tip_expansion",
    "field_asymptotics",
    "series_terms",
    "mellin_inverse",
    "rotation",
    "translation_display",
    "linear_term_display",
    "quadratic_term_display",
    "t_stress_display",
    "s_tensor_display",
]

_ROOT_2PI = math.sqrt(2.0 * math.pi)
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)
STRESS_CENTERS = (-0.5, -1.0, -1.5, -2.0, -2.5)
DISP_CENTERS = (0.0, -0.5, -1.0, -1.5, -2.0, -2.5)


def rotation(theta: float) -> np.ndarray:
    """``Q(theta)``: Cartesian components to polar components."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [-s, c]])


def _side(theta: float) -> int:
    # +0.0 belongs to the upper material, -0.0 to the lower one
    return 1 if math.copysign(1.0, theta) > 0.0 else -1


# ---------------------------------------------------------------- load transforms

class MellinLoads:
    """Mellin transforms ``<p~>, <q~>, [[p~]], [[q~]]`` of a plane-strain load, vectorised in s.

    Point atoms are transformed exactly (``c a^s``).  Smooth parts use
    composite Gauss-Legendre panels in ``u = ln r``; the panel count is
    doubled until two consecutive rules agree to ``rule_tol`` for
    ``|Im s| <= im_max``.

    Parameters
    ----------
    dec : LoadDecomposition
    im_max : float
        Largest ``|Im s|`` at which smooth transforms must be resolved.
    """

    def __init__(self, dec: LoadDecomposition, im_max: float = 80.0, rule_tol: float = 1e-13):
        if dec.mode is not Mode.PLANE_STRAIN:
            raise InputDomainError("Mellin loads are defined for plane-strain load cases")
        self.dec = dec
        radii = []
        amps = []
        for part, atoms, _ in dec.parts():
            for pos, comps in atoms.items():
                radii.append(-pos)
                vec = np.zeros(4)
                base = 0 if part == "sym" else 2
                vec[base] = comps[1]       # p
                vec[base + 1] = comps[0]   # q
                amps.append(vec)
        self.atom_r = np.array(radii, dtype=float)
        self.atom_amp = np.array(amps, dtype=float).reshape(-1, 4)
        self._nodes = []
        for part, _, smooth in dec.parts():
            base = 0 if part == "sym" else 2
            for sp in smooth:
                self._nodes.append(self._build_rule(sp, base, im_max, rule_tol))
        if self._nodes:
            self.node_u = np.concatenate([n[0] for n in self._nodes])
            self.node_w = np.concatenate([n[1] for n in self._nodes])
        else:
            self.node_u = np.zeros(0)
            self.node_w = np.zeros((0, 4))
        lo = [-sp.source.hi for _, _, sm in dec.parts() for sp in sm]
        hi = [-sp.source.lo for _, _, sm in dec.parts() for sp in sm]
        self.r_min = float(min(list(self.atom_r) + lo))
        self.r_max = float(max(list(self.atom_r) + hi))

    @staticmethod
    def _rule(sp, base, npanel):
        r0, r1 = -sp.source.hi, -sp.source.lo
        edges = np.linspace(math.log(r0), math.log(r1), npanel + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        u = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
        w = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
        vals = np.real(sp.values(-np.exp(u), 0))
        wt = np.zeros((u.size, 4))
        wt[:, base] = w * vals[:, 1] * np.exp(u)
        wt[:, base + 1] = w * vals[:, 0] * np.exp(u)
        return u, wt

    def _build_rule(self, sp, base, im_max, rule_tol):
        probe = np.array([0.0, 0.25 + 1j * im_max, -2.5 - 1j * im_max, 0.5j * im_max])
        npanel = 8
        u, w = self._rule(sp, base, npanel)
        prev = np.exp(np.outer(probe, u)) @ w
        while npanel < 4096:
            npanel *= 2
            u, w = self._rule(sp, base, npanel)
            cur = np.exp(np.outer(probe, u)) @ w
            scale = max(float(np.max(np.abs(cur))), 1e-300)
            if np.max(np.abs(cur - prev)) <= rule_tol * scale:
                return u, w
            prev = cur
        raise NumericalError("Mellin transform of a smooth load did not converge",
                             estimate=cur, error=float(np.max(np.abs(cur - prev))))

    def __call__(self, s, log_power: int = 0, r_ref: float = 1.0) -> np.ndarray:
        """Transforms at ``s`` (any shape); result has shape ``s.shape + (4,)``.

        ``log_power = k`` returns ``int f(r) r^s (ln r)^k dr`` instead, and
        ``r_ref`` returns ``r_ref^(-s)`` times the transform, formed without
        overflow as ``int f(r) (r / r_ref)^s dr``.
        """
        s = np.asarray(s, dtype=complex)
        flat = s.ravel()
        out = np.zeros((flat.size, 4), dtype=complex)
        shift = math.log(r_ref)
        if self.atom_r.size:
            la = np.log(self.atom_r)
            pw = np.exp(np.outer(flat, la - shift)) * la[None, :] ** log_power
            out += pw @ self.atom_amp
        if self.node_u.size:
            pw = np.exp(np.outer(flat, self.node_u - shift)) * self.node_u[None, :] ** log_power
            out += pw @ self.node_w
        return out.reshape(s.shape + (4,))


# ------------------------------------------------------------------ coefficients

def delta_fn(s, params: BimaterialParams):
    """``delta(s) = cos^2(pi s) + d*^2 sin^2(pi s)``."""
    s = np.asarray(s, dtype=complex)
    return np.cos(np.pi * s) ** 2 + params.d_star ** 2 * np.sin(np.pi * s) ** 2


def delta_prime(s, params: BimaterialParams):
    s = np.asarray(s, dtype=complex)
    return 2.0 * np.pi * (params.d_star ** 2 - 1.0) * np.sin(np.pi * s) * np.cos(np.pi * s)


def pole_pair(n: int, params: BimaterialParams):
    """Zeros ``s_n^{+-} = (1 - 2n)/2 +- i eps`` of ``delta``."""
    re = 0.5 * (1 - 2 * n)
    return complex(re, params.epsilon), complex(re, -params.epsilon)


def _trig(z, scaled: bool):
    # cos and sin, optionally times exp(-|Im z|) so they stay bounded
    if not scaled:
        return np.cos(z), np.sin(z)
    e1 = np.exp(1j * z - np.abs(z.imag))
    e2 = np.exp(-1j * z - np.abs(z.imag))
    return 0.5 * (e1 + e2), -0.5j * (e1 - e2)


def mellin_coefficients(s, transforms, params: BimaterialParams, scaled: bool = False):
    """Coefficients ``C_1..C_4`` of both materials.

    Parameters
    ----------
    s : array_like of complex
    transforms : ndarray, shape ``s.shape + (4,)``
        ``<p~>, <q~>, [[p~]], [[q~]]`` at ``s``.
    scaled : bool
        Return ``exp(pi |Im s|)`` times the coefficients, which stays finite
        far up the contour where the plain values underflow or overflow.

    Returns
    -------
    ndarray, shape ``s.shape + (2, 4)``
        Index 0 along the material axis is the upper (+) material.
    """
    s = np.asarray(s, dtype=complex)
    T = np.asarray(transforms, dtype=complex)
    P, Q, JP, JQ = (T[..., k] for k in range(4))
    d, al = params.d_star, params.alpha
    # every term is linear in cos, sin or cos^2/sin over delta, so rescaling
    # cos and sin by exp(-pi |Im s|) scales the result by exp(pi |Im s|)
    c, sn = _trig(np.pi * s, True)
    dl = c * c + d * d * sn * sn
    cs = c * c / sn
    out = np.empty(s.shape + (2, 4), dtype=complex)
    for idx, sg in ((0, 1.0), (1, -1.0)):
        f1 = 1.0 - sg * d
        skew_ss = (d - al) * d * sn + (1.0 - sg * al) * cs
        C1 = (s - 1.0) / (2.0 * dl) * (
            P * f1 * c + 0.5 * JP * f1 * al * c - Q * f1 * d * sn + 0.5 * JQ * skew_ss)
        C3 = (s - 1.0) / (2.0 * dl) * (
            -P * f1 * d * sn + 0.5 * JP * skew_ss - Q * f1 * c - 0.5 * JQ * f1 * al * c)
        g2 = 1.0 + s + sg * (1.0 - s) * d
        C2 = -1.0 / (2.0 * dl) * (
            P * g2 * c + 0.5 * JP * g2 * al * c
            - Q * g2 * d * sn
            + 0.5 * JQ * (-(al * (1.0 + s) + d * (1.0 - s)) * d * sn - (1.0 - sg * al) * (1.0 - s) * cs))
        g4 = 1.0 - s + sg * (1.0 + s) * d
        C4 = -1.0 / (2.0 * dl) * (
            P * g4 * d * sn
            + 0.5 * JP * ((al * (1.0 - s) + d * (1.0 + s)) * d * sn + (1.0 - sg * al) * (1.0 + s) * cs)
            + Q * g4 * c + 0.5 * JQ * g4 * al * c)
        out[..., idx, 0] = C1
        out[..., idx, 1] = C2
        out[..., idx, 2] = C3
        out[..., idx, 3] = C4
    if not scaled:
        out *= np.exp(-np.pi * np.abs(s.imag))[..., None, None]
    return out


def sigma_tilde(s, theta: float, coeffs, scaled: bool = False):
    """Transformed stresses ``(s_rr, s_rt, s_tt)`` at angle ``theta`` from the coefficients of its material.

    With ``scaled=True`` the angular factors are multiplied by
    ``exp(-|theta Im s|)``.
    """
    s = np.asarray(s, dtype=complex)
    C = coeffs[..., 0 if _side(theta) > 0 else 1, :]
    C1, C2, C3, C4 = (C[..., k] for k in range(4))
    ca, sa = _trig((s + 1.0) * theta, scaled)
    cb, sb = _trig((s - 1.0) * theta, scaled)
    k = (s + 1.0) / (s - 1.0)
    k3 = (s + 3.0) / (s - 1.0)
    stt = C1 * ca + C2 * cb + C3 * sa + C4 * sb
    srr = -k3 * C1 * ca - C2 * cb - k3 * C3 * sa - C4 * sb
    srt = -k * C1 * sa - C2 * sb + k * C3 * ca + C4 * cb
    return np.stack([srr, srt, stt], axis=-1)


def u_tilde(s, theta: float, coeffs, params: BimaterialParams, scaled: bool = False):
    """Transformed displacements ``(u_r, u_t)`` at angle ``theta``; ``scaled`` as in :func:`sigma_tilde`."""
    s = np.asarray(s, dtype=complex)
    sign = _side(theta)
    mat = params.material(sign)
    C = coeffs[..., 0 if sign > 0 else 1, :]
    C1, C2, C3, C4 = (C[..., k] for k in range(4))
    ca, sa = _trig((s + 1.0) * theta, scaled)
    cb, sb = _trig((s - 1.0) * theta, scaled)
    k = (s + 1.0) / (s - 1.0)
    g = 4.0 * (1.0 - mat.nu) / (s - 1.0)
    pref = 1.0 / (2.0 * s * mat.mu)
    ur = pref * (C1 * ca + C2 * cb + C3 * sa + C4 * sb + g * (C1 * ca + C3 * sa))
    ut = -pref * (-k * C1 * sa - C2 * sb + k * C3 * ca + C4 * cb + g * (C1 * sa - C3 * ca))
    return np.stack([ur, ut], axis=-1)


@dataclass(frozen=True)
class MellinState:
    """Mellin-side data at one point ``s``.

    Attributes
    ----------
    s : complex
    C : ndarray, shape (2, 4)
        ``C[0]`` holds ``C_1^+..C_4^+``, ``C[1]`` holds ``C_1^-..C_4^-``.
    delta : complex
    load_transforms : ndarray, shape (4,)
        ``<p~>, <q~>, [[p~]], [[q~]]``.
    """

    s: complex
    C: np.ndarray
    delta: complex
    load_transforms: np.ndarray


def _check_regular(s: complex, params: BimaterialParams, scale: float = 1e-12):
    dl = complex(delta_fn(s, params))
    if abs(dl) < scale:
        raise InputDomainError(f"s = {s:.6g} is a pole: delta(s) vanishes there")
    if abs(math.sin(math.pi * s.real)) < scale and abs(s.imag) < scale:
        raise InputDomainError(f"s = {s:.6g} is a pole: sin(pi s) vanishes there")
    if abs(s) < scale:
        raise InputDomainError("s = 0 is a pole of the displacement transform")


def _loads_for(lc: LoadCase, im_max: float = 80.0) -> MellinLoads:
    if not isinstance(lc, LoadCase) or lc.mode is not Mode.PLANE_STRAIN:
        raise InputDomainError("the Mellin solution needs a plane-strain LoadCase")
    return MellinLoads(decompose(lc), im_max=im_max)


def mellin_state(s, params: BimaterialParams, lc: LoadCase) -> MellinState:
    """Evaluate ``C_j^{+-}(s)``, ``delta(s)`` and the load transforms at one point."""
    s = complex(s)
    _check_regular(s, params)
    loads = _loads_for(lc, im_max=max(80.0, abs(s.imag) * 1.5))
    T = loads(np.array([s]))[0]
    C = mellin_coefficients(np.array([s]), T[None, :], params)[0]
    return MellinState(s=s, C=C, delta=complex(delta_fn(s, params)), load_transforms=T)


# ---------------------------------------------------------------------- residues

def _circle(center: float, params: BimaterialParams, npts: int):
    rad = min(0.45, max(0.25, abs(params.epsilon) + 0.1))
    phi = 2.0 * np.pi * (np.arange(npts) + 0.5) / npts
    z = np.exp(1j * phi)
    return center + rad * z, rad * z / npts


def contour_residue(func, center: float, params: BimaterialParams, npts: int = 192):
    """Sum of residues of ``func`` inside a small circle around ``center``.

    ``func`` maps an array of s values to values of shape ``s.shape + extra``.
    The circle radius ``max(0.25, |eps| + 0.1)`` (at most 0.45) encloses the
    pole pair ``center +- i eps`` and no other pole.
    """
    s, w = _circle(center, params, npts)
    vals = np.asarray(func(s))
    return np.tensordot(w, vals, axes=(0, 0))


def _stress_block(loads, params, theta, r, center):
    def f(s):
        C = mellin_coefficients(s, loads(s), params)
        return sigma_tilde(s, theta, C) * (r ** (-s - 1.0))[:, None]
    return contour_residue(f, center, params)


def _disp_block(loads, params, theta, r, center):
    def f(s):
        C = mellin_coefficients(s, loads(s), params)
        return u_tilde(s, theta, C, params) * (r ** (-s))[:, None]
    return contour_residue(f, center, params)


def _tensor(v) -> np.ndarray:
    srr, srt, stt = v
    return np.array([[srr, srt], [srt, stt]])


# ----------------------------------------------------------------- tip expansion

@dataclass(frozen=True)
class TipExpansion:
    """Near-tip coefficients extracted from the Mellin solution.

    Attributes
    ----------
    K, A, B : complex
        From residues of ``sigma_tt + i sigma_rt`` on the interface ahead of the tip.
    T_plus, T_minus : float
        T-stress in the upper and lower material.
    w0 : ndarray, shape (2,)
        Translation of the crack tip (residue at ``s = 0``).
    w0_display : tuple of ndarray
        Translation from the closed-form display with the upper and lower
        material constants.
    jump_integrals : dict
        ``int [[p]]/r``, ``int [[q]]/r``, ``int [[p]]/r^2``, ``int [[q]]/r^2``
        keyed ``"p1"``, ``"q1"``, ``"p2"``, ``"q2"``.
    mean_integrals : dict
        ``int <p> dr`` and ``int <q> dr`` keyed ``"p"`` and ``"q"``; also the
        log moments ``"jp_log"`` and ``"jq_log"`` of the jumps.
    diagnostics : dict
        Differences against the load-integral closed forms of K, A, B.
    """

    K: complex
    A: complex
    B: complex
    T_plus: float
    T_minus: float
    w0: np.ndarray
    w0_display: tuple
    jump_integrals: dict
    mean_integrals: dict
    loads: MellinLoads = field(repr=False)
    diagnostics: dict = field(default_factory=dict)

    def T(self, sign: int) -> float:
        return self.T_plus if sign > 0 else self.T_minus


def tip_expansion(params: BimaterialParams, lc: LoadCase) -> TipExpansion:
    """K, A, B, T-stress, tip translation and the jump integrals of a load case.

    K, A and B come from contour residues of the transformed interface
    tractions at ``s = -1/2, -3/2, -5/2``; the closed-form load integrals
    are evaluated alongside and their differences stored in ``diagnostics``.
    """
    loads = _loads_for(lc)
    _require_balanced(lc)

    def interface(s):
        C = mellin_coefficients(s, loads(s), params)
        sig = sigma_tilde(s, 0.0, C)
        return sig[:, 2] + 1j * sig[:, 1]

    K, A, B = (_ROOT_2PI * complex(contour_residue(interface, c, params)) for c in (-0.5, -1.5, -2.5))
    integ = _jump_moments(loads)
    T_plus, T_minus = (t_stress_display(integ, params, sg) for sg in (1, -1))

    def disp0(s):
        C = mellin_coefficients(s, loads(s), params)
        return u_tilde(s, 0.0, C, params)

    w0 = np.real(contour_residue(disp0, 0.0, params))
    w0_disp = tuple(translation_display(integ, params, sg) for sg in (1, -1))
    from .sif import sif_closed_form
    ref = sif_closed_form(params, lc)
    diag = {
        "K": abs(K - ref.K) / max(abs(ref.K), 1e-300),
        "A": abs(A - ref.A) / max(abs(ref.A), 1e-300),
        "B": abs(B - ref.B) / max(abs(ref.B), 1e-300),
    }
    return TipExpansion(
        K=K, A=A, B=B, T_plus=T_plus, T_minus=T_minus, w0=w0, w0_display=w0_disp,
        jump_integrals={k: integ[k] for k in ("p1", "q1", "p2", "q2")},
        mean_integrals={k: integ[k] for k in ("p", "q", "jp_log", "jq_log")},
        loads=loads, diagnostics=diag,
    )


def _require_balanced(lc: LoadCase):
    from .loading import check_balance
    if not check_balance(lc).balanced:
        raise InputDomainError("the near-tip expansion needs a self-balanced load")


def _jump_moments(loads: MellinLoads) -> dict:
    pts = np.array([0.0, -1.0, -2.0], dtype=complex)
    T = np.real(loads(pts))
    L = np.real(loads(np.array([0.0 + 0j]), log_power=1))[0]
    return {
        "p": T[0, 0], "q": T[0, 1],
        "p1": T[1, 2], "q1": T[1, 3], "p2": T[2, 2], "q2": T[2, 3],
        "jp_log": L[2], "jq_log": L[3],
    }


# ----------------------------------------------------------------- display forms

def t_stress_display(integ: dict, params: BimaterialParams, sign: int) -> float:
    """``T = ((1 -+ alpha)/pi) int [[q]] dr / r`` for the upper (+1) or lower (-1) material."""
    return (1.0 - sign * params.alpha) / math.pi * integ["q1"]


def translation_display(integ: dict, params: BimaterialParams, sign: int) -> np.ndarray:
    """Tip translation ``w0`` written with the constants of one material."""
    mat = params.material(sign)
    mu, nu = mat.mu, mat.nu
    lead = (1.0 - 2.0 * nu + sign * 2.0 * params.d_star * (nu - 1.0)) * math.pi
    tail = (-1.0 + sign * params.alpha) * (nu - 1.0)
    w01 = (lead * integ["p"] + tail * integ["jq_log"]) / (2.0 * math.pi * mu)
    w02 = (-lead * integ["q"] + tail * integ["jp_log"]) / (2.0 * math.pi * mu)
    return np.array([w01, w02])


def linear_term_display(x1: float, x2: float, integ: dict, params: BimaterialParams, sign: int) -> np.ndarray:
    """Degree-one displacement block ``w_1`` in Cartesian components."""
    mat = params.material(sign)
    mu, nu = mat.mu, mat.nu
    f = (1.0 - sign * params.alpha) / (2.0 * math.pi * mu)
    w11 = f * (1.0 - nu) * (x1 * integ["q1"] - x2 * integ["p1"])
    w12 = f * ((1.0 - nu) * x1 * integ["p1"] - nu * x2 * integ["q1"])
    return np.array([w11, w12])


def quadratic_term_display(x1: float, x2: float, integ: dict, params: BimaterialParams, sign: int) -> np.ndarray:
    """Degree-two displacement block ``w_2`` in Cartesian components."""
    mat = params.material(sign)
    mu, nu = mat.mu, mat.nu
    f = (1.0 - sign * params.alpha) / (8.0 * math.pi * mu)
    rr, dd = x1 * x1 + x2 * x2, x1 * x1 - x2 * x2
    w21 = f * (4.0 * (1.0 - nu) * x1 * x2 * integ["p2"] + (rr - (3.0 - 2.0 * nu) * dd) * integ["q2"])
    w22 = f * (-(rr + (1.0 - 2.0 * nu) * dd) * integ["p2"] + 4.0 * nu * x1 * x2 * integ["q2"])
    return np.array([w21, w22])


def s_tensor_display(theta: float, integ: dict, params: BimaterialParams) -> np.ndarray:
    """Polar stress tensor ``S(theta)`` multiplying ``r`` in the expansion."""
    sign = _side(theta)
    x1, x2 = math.cos(theta), math.sin(theta)
    f = (1.0 - sign * params.alpha) / math.pi
    m = np.array([
        [x2 * integ["p2"] - x1 * integ["q2"], x2 * integ["q2"]],
        [x2 * integ["q2"], 0.0],
    ])
    Q = rotation(theta)
    return f * Q @ m @ Q.T


# ------------------------------------------------------------- series evaluation

@dataclass(frozen=True)
class FieldValue:
    """Stress (polar tensor) and displacement (polar vector) at one point."""

    r: float
    theta: float
    stress: Optional[np.ndarray]
    displacement: Optional[np.ndarray]
    error: float = 0.0


def series_terms(r: float, theta: float, exp: TipExpansion, params: BimaterialParams):
    """Individual residue terms at ``(r, theta)``.

    Returns
    -------
    stress_terms : list of ndarray
        Polar tensors of the terms ``r^(-1/2)``, ``r^0`` (T), ``r^(1/2)``,
        ``r^1`` (S r) and ``r^(3/2)``.
    disp_terms : list of ndarray
        Polar vectors of ``V_0``, ``V_1/2``, ``V_1 r``, ``V_3/2``,
        ``V_2 r^2`` and ``V_5/2``.
    """
    _check_point(r, theta)
    stress = [_tensor(np.real(_stress_block(exp.loads, params, theta, r, c))) for c in STRESS_CENTERS]
    disp = [np.real(_disp_block(exp.loads, params, theta, r, c)) for c in DISP_CENTERS]
    return stress, disp


def _check_point(r, theta):
    if not (math.isfinite(r) and r > 0.0):
        raise InputDomainError(f"r must be positive, got {r!r}")
    if not (-math.pi <= theta <= math.pi):
        raise InputDomainError(f"theta must lie in [-pi, pi], got {theta!r}")


def field_asymptotics(r: float, theta: float, n_terms: int, exp: TipExpansion, params: BimaterialParams):
    """Truncated near-tip expansion of stress and displacement.

    Parameters
    ----------
    r, theta : float
        Polar position; ``theta = +0.0`` and ``-0.0`` select the upper and
        lower material on the interface.
    n_terms : int
        Number of stress terms (1 to 5).  The displacement sum uses
        ``V_0`` plus the same number of further terms.
    exp : TipExpansion

    Returns
    -------
    stress : ndarray, shape (2, 2)
    displacement : ndarray, shape (2,)
    """
    if not (1 <= int(n_terms) <= 5):
        raise InputDomainError(f"n_terms must lie in 1..5, got {n_terms!r}")
    _check_point(r, theta)
    n = int(n_terms)
    stress = sum(_tensor(np.real(_stress_block(exp.loads, params, theta, r, c))) for c in STRESS_CENTERS[:n])
    disp = sum(np.real(_disp_block(exp.loads, params, theta, r, c)) for c in DISP_CENTERS[:n + 1])
    return stress, disp


# --------------------------------------------------------------- inverse Mellin

def mellin_inverse(r: float, theta: float, params: BimaterialParams, lc: LoadCase,
                   omega: float = 0.25, quantity: str = "both", tol: float = 1e-8,
                   t_max: float = 4000.0) -> FieldValue:
    """Stress and displacement by numerical inversion along a contour ``Re s ~ omega``.

    When ``r`` is closer to the tip than every load the contour is tilted to
    the left, ``s = omega - kappa |t| + i t``, and when it lies beyond every
    load it is tilted to the right; both make the integrand decay
    exponentially, including on the crack faces.  Otherwise the vertical
    line is used, which decays only for ``|theta| < pi``.

    Parameters
    ----------
    omega : float
        Contour abscissa: ``-1/2 < omega < 1/2`` for stresses and
        ``0 < omega < 1/2`` whenever displacements are requested.
    quantity : {"both", "stress", "displacement"}
    tol : float
        Relative truncation tolerance.

    Raises
    ------
    InputDomainError
        ``omega`` outside the strip of analyticity.
    NumericalError
        When the tail does not decay below ``tol`` before ``t_max``.
    """
    _check_point(r, theta)
    if quantity not in ("both", "stress", "displacement"):
        raise InputDomainError(f"unknown quantity {quantity!r}")
    want_s = quantity in ("both", "stress")
    want_u = quantity in ("both", "displacement")
    lo_w = 0.0 if want_u else -0.5
    if not (lo_w < omega < 0.5):
        raise InputDomainError(f"omega must lie in ({lo_w}, 0.5) for {quantity}, got {omega}")
    loads = _loads_for(lc, im_max=min(t_max, 200.0))
    eps = abs(params.epsilon)
    if r < loads.r_min:
        direction = -1.0
        kappa = 1.0 if eps == 0.0 else min(1.0, 0.9 * (omega + 0.5) / eps)
    elif r > loads.r_max:
        direction = 1.0
        kappa = 1.0 if eps == 0.0 else min(1.0, 0.9 * (0.5 - omega) / eps)
    else:
        direction, kappa = 0.0, 0.0

    def integrand(t):
        t = np.asarray(t, dtype=float)
        s = omega + direction * kappa * np.abs(t) + 1j * t
        ds = 1j + direction * kappa * np.sign(t)
        # loads relative to r absorb r^(-s); scaled trig leaves this damping
        damp = np.exp(-(np.pi - abs(theta)) * np.abs(t)) * ds / (2.0 * np.pi * 1j)
        C = mellin_coefficients(s, loads(s, r_ref=r), params, scaled=True)
        parts = []
        if want_s:
            parts.append(sigma_tilde(s, theta, C, scaled=True) * (damp / r)[:, None])
        if want_u:
            parts.append(u_tilde(s, theta, C, params, scaled=True) * damp[:, None])
        return np.concatenate(parts, axis=1)

    total, err = _line_integral(integrand, tol, t_max)
    vals = np.real(total)
    stress = _tensor(vals[:3]) if want_s else None
    disp = (vals[3:] if want_s else vals) if want_u else None
    return FieldValue(r=r, theta=theta, stress=stress, displacement=disp, error=err)


def _line_integral(func, tol: float, t_max: float, width: float = 1.0):
    """Integrate over the real line by symmetric panels until the tail is negligible."""
    total = None
    err = 0.0
    quiet = 0
    t = 0.0
    while t < t_max:
        contrib = 0.0
        for a, b in ((t, t + width), (-t - width, -t)):
            v, e = _panel(func, a, b, tol)
            total = v if total is None else total + v
            err += e
            contrib = max(contrib, float(np.max(np.abs(v))))
        t += width
        scale = max(float(np.max(np.abs(total))), 1e-300)
        quiet = quiet + 1 if contrib <= 0.1 * tol * scale else 0
        if quiet >= 3:
            return total, err
        if t > 16 * width:
            width *= 2.0
    raise NumericalError(f"inverse Mellin integral did not decay before |Im s| = {t_max:g}",
                         estimate=total, error=err)


def _panel(func, a, b, tol, depth=0):
    v, e = gauss_kronrod_15(func, a, b)
    if not np.all(np.isfinite(v)):
        raise NumericalError(f"non-finite integrand on the contour panel [{a:g}, {b:g}]")
    scale = max(float(np.max(np.abs(v))), 1e-300)
    if e <= max(tol * scale, 1e-15 * scale) or depth >= 12:
        return v, e
    m = 0.5 * (a + b)
    v1, e1 = _panel(func, a, m, tol, depth + 1)
    v2, e2 = _panel(func, m, b, tol, depth + 1)
    return v1 + v2, e1 + e2
