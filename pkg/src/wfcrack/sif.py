"""Complex stress intensity factor K and the higher-order coefficients A, B.

Two independent routes are provided:

* ``sif_closed_form`` integrates the loads against ``r^(-1/2-i eps)``,
  ``r^(-3/2-i eps)`` and ``r^(-5/2-i eps)`` (Mellin-side formulas);
* ``sif_quadrature`` convolves the loads with the weight-function traces
  and inverts the matrices ``M_1`` and ``M_2``.

Loads use the physical convention: crack on ``x1 < 0`` and ``r = -x1``.
Plane-strain components are ordered ``(p1, p2)``, so ``q = p1`` (shear) and
``p = p2`` (normal).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InputDomainError, NumericalError
from .loading import LoadCase, LoadDecomposition, Mode, decompose
from .materials import BimaterialParams
from .quadrature import adaptive_integrate
from .special import osc_constants
from .weights import (jump_kernel, jump_kernel_derivative, mean_kernel,
                      mean_kernel_derivative, mode3_trace)

__all__ = [
    "Provenance",
    "TipCoefficients",
    "sif_closed_form",
    "sif_quadrature",
    "three_point_reference",
    "three_point_second_order",
    "mode3_sif",
    "tip_prefactor",
    "R_MATRIX",
]

R_MATRIX = np.diag([-1.0, 1.0])
_ROOT_2_PI = math.sqrt(2.0 / math.pi)


class Provenance(enum.Enum):
    CLOSED_FORM = "closed_form"
    QUADRATURE = "quadrature"
    FULL_FIELD = "full_field"


@dataclass(frozen=True)
class TipCoefficients:
    """Near-tip coefficients of one load case.

    For plane strain ``K``, ``A`` and ``B`` are complex (``B`` is ``None`` on
    the weight-function route).  For Mode III they hold the real ``K_III``
    and ``A_III`` and ``B`` is ``None``.

    ``diagnostics`` collects cross-check residuals, e.g. the mismatch between
    the direct and integrated-by-parts forms.
    """

    K: complex
    A: complex
    B: Optional[complex]
    provenance: Provenance
    mode: Mode = Mode.PLANE_STRAIN
    diagnostics: dict = field(default_factory=dict)

    @property
    def K_I(self) -> float:
        return float(np.real(self.K))

    @property
    def K_II(self) -> float:
        return float(np.imag(self.K))

    @property
    def K_III(self) -> float:
        if self.mode is not Mode.MODE_III:
            raise InputDomainError("K_III is only defined for Mode III load cases")
        return float(np.real(self.K))

    @property
    def A_III(self) -> float:
        if self.mode is not Mode.MODE_III:
            raise InputDomainError("A_III is only defined for Mode III load cases")
        return float(np.real(self.A))

    @property
    def K_vector(self) -> np.ndarray:
        return np.array([self.K, np.conj(self.K)])

    @property
    def A_vector(self) -> np.ndarray:
        return np.array([self.A, np.conj(self.A)])


def tip_prefactor(params: BimaterialParams) -> float:
    """``sqrt(2/pi) cosh(pi eps)``, the factor shared by K, A and B."""
    return _ROOT_2_PI * math.cosh(math.pi * params.epsilon)


def _require(lc: LoadCase, mode: Mode):
    if not isinstance(lc, LoadCase):
        raise InputDomainError("expected a LoadCase")
    if lc.mode is not mode:
        raise InputDomainError(f"this operation needs a {mode.value} load case, got {lc.mode.value}")


# ------------------------------------------------------------ load combination

def _combined_atoms(dec: LoadDecomposition, weight: float):
    """``{r: <p> + i<q> + w([[p]] + i[[q]])}`` for plane strain, ``{r: <p3> + w[[p3]]}`` for Mode III."""
    out = {}
    for pos, comps in dec.sym_atoms.items():
        out[-pos] = out.get(-pos, 0.0) + _complexify(comps)
    for pos, comps in dec.skew_atoms.items():
        out[-pos] = out.get(-pos, 0.0) + weight * _complexify(comps)
    return out


def _complexify(comps) -> complex:
    comps = np.asarray(comps)
    if comps.shape[-1] == 1:
        return complex(comps[..., 0]) if comps.ndim == 1 else comps[..., 0].astype(complex)
    return comps[..., 1] + 1j * comps[..., 0]


def _smooth_parts(dec: LoadDecomposition, weight: float):
    """Yield ``(lo, hi, handle(order))`` for every smooth part, scaled into ``L``."""
    for scale, parts in ((1.0, dec.sym_smooth), (weight, dec.skew_smooth)):
        for sp in parts:
            def handle(order, sp=sp, scale=scale):
                def func(x1):
                    vals = scale * sp.values(np.atleast_1d(x1), order)
                    return _complexify(vals)
                return func
            yield sp.source.lo, sp.source.hi, sp, handle


def _power_integral(func, lo: float, hi: float, expo: complex, tol: float) -> complex:
    """``int_{lo}^{hi} func(x1) r^expo dx1`` with ``r = -x1``; support away from the tip."""

    def integrand(x):
        return func(x) * np.exp(expo * np.log(-x))

    val, _ = adaptive_integrate(integrand, lo, hi, tol=tol, abs_floor=1e-300)
    return complex(val)


# -------------------------------------------------------------- closed form

def sif_closed_form(params: BimaterialParams, lc: LoadCase, tol: float = 1e-10,
                    ibp_tol: float = 1e-8) -> TipCoefficients:
    """K, A and B from the load integrals against ``r^(-k/2 - i eps)``.

    Parameters
    ----------
    params : BimaterialParams
    lc : LoadCase
        Plane-strain load case.
    tol : float
        Relative tolerance of the smooth-load quadrature.
    ibp_tol : float
        Allowed relative mismatch between the direct and integrated-by-parts
        forms of A and B when derivative handles are present.

    Returns
    -------
    TipCoefficients
        ``diagnostics`` holds ``ibp_A`` and ``ibp_B`` residuals when checked.
    """
    _require(lc, Mode.PLANE_STRAIN)
    dec = decompose(lc)
    eps = params.epsilon
    pref = tip_prefactor(params)
    w = 0.5 * params.alpha
    expos = (-0.5 - 1j * eps, -1.5 - 1j * eps, -2.5 - 1j * eps)
    signs = (-1.0, 1.0, -1.0)
    atoms = _combined_atoms(dec, w)
    vals = [0j, 0j, 0j]
    for r, amp in atoms.items():
        for k in range(3):
            vals[k] += amp * r ** expos[k]
    diag = {}
    smooth = [0j, 0j, 0j]
    ibp = [0j, 0j]
    check_ibp = _has_derivs(dec, 2)
    for lo, hi, _, handle in _smooth_parts(dec, w):
        L0 = handle(0)
        for k in range(3):
            smooth[k] += _power_integral(L0, lo, hi, expos[k], tol)
        if check_ibp:
            a_part, b_part = _ibp_forms(handle, lo, hi, eps, tol)
            ibp[0] += a_part
            ibp[1] += b_part
    if check_ibp:
        a_dir, b_dir = pref * smooth[1], -pref * smooth[2]
        diag["ibp_A"] = abs(pref * ibp[0] - a_dir) / max(abs(a_dir), 1e-300)
        diag["ibp_B"] = abs(-pref * ibp[1] - b_dir) / max(abs(b_dir), 1e-300)
        if max(diag["ibp_A"], diag["ibp_B"]) > ibp_tol:
            raise NumericalError(
                f"integrated-by-parts forms disagree (A: {diag['ibp_A']:.2e}, B: {diag['ibp_B']:.2e}); "
                "check the derivative handles", estimate=(a_dir, b_dir),
                error=max(diag["ibp_A"], diag["ibp_B"]))
    K, A, B = (pref * signs[k] * (vals[k] + smooth[k]) for k in range(3))
    return TipCoefficients(K=complex(K), A=complex(A), B=complex(B),
                           provenance=Provenance.CLOSED_FORM, diagnostics=diag)


def _has_derivs(dec: LoadDecomposition, order: int) -> bool:
    parts = dec.sym_smooth + dec.skew_smooth
    handles = ("deriv", "deriv2")[:order]
    return bool(parts) and all(getattr(sp.source, h) is not None for sp in parts for h in handles)


def _ibp_forms(handle, lo: float, hi: float, eps: float, tol: float):
    """Integrals of ``L r^(-3/2-i eps)`` and ``L r^(-5/2-i eps)`` rebuilt from load derivatives.

    Boundary values at the support ends are kept, so loads that do not
    vanish at the ends of their support are handled exactly.
    """
    z1 = -0.5 - 1j * eps
    z2 = -1.5 - 1j * eps
    L0, L1, L2 = handle(0), handle(1), handle(2)     # derivatives in x1
    r0, r1 = -hi, -lo
    ends = np.array([hi, lo])                         # x1 at r0 and at r1
    Lr = L0(ends)
    dLr = -L1(ends)                                   # d/dr = -d/dx1
    j0_L1 = _power_integral(lambda x: -L1(x), lo, hi, z1, tol)
    j0_L2 = _power_integral(L2, lo, hi, z1, tol)
    # J_k(f) = int f r^(z_k - 1) = [f r^z_k / z_k] - J_{k-1}(f') / z_k
    j1_L = (Lr[1] * r1 ** z1 - Lr[0] * r0 ** z1) / z1 - j0_L1 / z1
    j1_L1 = (dLr[1] * r1 ** z1 - dLr[0] * r0 ** z1) / z1 - j0_L2 / z1
    j2_L = (Lr[1] * r1 ** z2 - Lr[0] * r0 ** z2) / z2 - j1_L1 / z2
    return j1_L, j2_L


# ------------------------------------------------------- weight-function route

def _kernel_apply(kern, vals):
    # rows of kern^T R v for kern (n, 2, 2) and v (n, 2)
    return np.einsum("nji,nj->ni", kern, vals * np.diag(R_MATRIX))


def sif_quadrature(params: BimaterialParams, lc: LoadCase, tol: float = 1e-8) -> TipCoefficients:
    """K and A by convolving the loads with the weight-function traces.

    ``K = -i M1^{-1} int {[[U]]^T(-x1) R <p>(x1) + <U>^T(-x1) R [[p]](x1)} dx1``
    and ``A = M2^{-1} int {...}`` with load derivatives.  Point atoms use the
    equivalent form with the kernel derivative, so no delta derivatives are
    needed.  Smooth loads without derivative handles take the same route;
    with handles both forms are evaluated and their mismatch is reported in
    ``diagnostics["ibp_A"]``.

    Raises
    ------
    NumericalError
        When a smooth-load integral fails to reach ``tol``.
    """
    _require(lc, Mode.PLANE_STRAIN)
    dec = decompose(lc)
    osc = osc_constants(params)
    kv = np.zeros(2, dtype=complex)
    av = np.zeros(2, dtype=complex)
    kernels = {
        "sym": (jump_kernel, jump_kernel_derivative),
        "skew": (mean_kernel, mean_kernel_derivative),
    }
    for part, atoms, smooth in dec.parts():
        kern, dkern = kernels[part]
        for pos, comps in atoms.items():
            r = np.array([-pos])
            v = np.asarray(comps, dtype=complex)[None, :]
            kv += _kernel_apply(kern(r, params), v)[0]
            av += _kernel_apply(dkern(r, params), v)[0]
        for sp in smooth:
            lo, hi = sp.source.lo, sp.source.hi

            def k_int(x, sp=sp, kern=kern):
                return _kernel_apply(kern(-x, params), sp.values(x, 0))

            def a_int(x, sp=sp, dkern=dkern):
                return _kernel_apply(dkern(-x, params), sp.values(x, 0))

            kv += _integrate(k_int, lo, hi, tol)
            av += _integrate(a_int, lo, hi, tol)
    K_vec = -1j * np.linalg.solve(osc.M[0], kv)
    A_vec = np.linalg.solve(osc.M[1], av)
    diag = {
        "conjugate_K": abs(K_vec[1] - np.conj(K_vec[0])),
        "conjugate_A": abs(A_vec[1] - np.conj(A_vec[0])),
    }
    if _has_derivs(dec, 1):
        alt = _load_derivative_A(dec, params, tol)
        A_alt = np.linalg.solve(osc.M[1], alt)
        diag["ibp_A"] = abs(A_alt[0] - A_vec[0]) / max(abs(A_vec[0]), 1e-300)
    return TipCoefficients(K=complex(K_vec[0]), A=complex(A_vec[0]), B=None,
                           provenance=Provenance.QUADRATURE, diagnostics=diag)


def _integrate(func, lo, hi, tol):
    val, _ = adaptive_integrate(func, lo, hi, tol=tol, abs_floor=1e-300)
    return np.asarray(val, dtype=complex)


def _load_derivative_A(dec: LoadDecomposition, params: BimaterialParams, tol: float) -> np.ndarray:
    """Smooth-load part of the A integral written with load derivatives, atoms included.

    The distributional derivative of ``v 1_[lo, hi]`` adds the end atoms
    ``v(lo) delta(x1 - lo) - v(hi) delta(x1 - hi)``.
    """
    out = np.zeros(2, dtype=complex)
    kernels = {"sym": jump_kernel, "skew": mean_kernel}
    dkernels = {"sym": jump_kernel_derivative, "skew": mean_kernel_derivative}
    for part, atoms, smooth in dec.parts():
        kern = kernels[part]
        for pos, comps in atoms.items():
            v = np.asarray(comps, dtype=complex)[None, :]
            out += _kernel_apply(dkernels[part](np.array([-pos]), params), v)[0]
        for sp in smooth:
            lo, hi = sp.source.lo, sp.source.hi

            def d_int(x, sp=sp, kern=kern):
                return _kernel_apply(kern(-x, params), sp.values(x, 1))

            out += _integrate(d_int, lo, hi, tol)
            ends = np.array([lo, hi])
            vals = sp.values(ends, 0)
            kends = kern(-ends, params)
            out += _kernel_apply(kends[:1], vals[:1])[0] - _kernel_apply(kends[1:], vals[1:])[0]
    return out


# ------------------------------------------------------------- reference cases

def _three_point_check(a: float, b: float):
    if not a > 0.0:
        raise InputDomainError("a must be positive")
    if not (0.0 <= b < a):
        raise InputDomainError(f"need 0 <= b < a, got a={a}, b={b}")


def _three_point_terms(params, F, a, b, expo):
    _three_point_check(a, b)
    pref = tip_prefactor(params) * F * a ** expo
    side = 0.25 * (1.0 + b / a) ** expo + 0.25 * (1.0 - b / a) ** expo
    return pref, side


def three_point_reference(params: BimaterialParams, F: float, a: float, b: float):
    """Closed-form ``(K^S, K^A)`` for the three-point load.

    Upper face ``-F`` at distance ``a``; lower face ``-F/2`` at ``a - b`` and
    ``a + b``.
    """
    pref, side = _three_point_terms(params, F, a, b, -0.5 - 1j * params.epsilon)
    return complex(pref * (0.5 + side)), complex(params.alpha * pref * (0.5 - side))


def three_point_second_order(params: BimaterialParams, F: float, a: float, b: float):
    """Closed-form ``(A^S, A^A)`` for the three-point load (delta substitution)."""
    pref, side = _three_point_terms(params, F, a, b, -1.5 - 1j * params.epsilon)
    return complex(-pref * (0.5 + side)), complex(-params.alpha * pref * (0.5 - side))


# --------------------------------------------------------------------- Mode III

def mode3_sif(params: BimaterialParams, lc: LoadCase, tol: float = 1e-10) -> TipCoefficients:
    """Real ``K_III`` and ``A_III`` of an antiplane load case.

    ``K_III = -sqrt(2/pi) int {<p3> + (eta/2)[[p3]]} (-x1)^(-1/2) dx1`` and
    ``A_III = sqrt(2/pi) int {<p3> + (eta/2)[[p3]]} (-x1)^(-3/2) dx1``; the
    second is the load-derivative form integrated by parts.  The weight
    function route ``K_III = -(1+i) int {[[U3]] <p3> + <U3> [[p3]]}`` is
    evaluated alongside and its mismatch stored in ``diagnostics``.
    """
    _require(lc, Mode.MODE_III)
    dec = decompose(lc)
    w = 0.5 * params.eta
    root = _ROOT_2_PI
    atoms = _combined_atoms(dec, w)
    k_sum = sum(amp * r ** -0.5 for r, amp in atoms.items())
    a_sum = sum(amp * r ** -1.5 for r, amp in atoms.items())
    a_deriv = 0j
    has_d = _has_derivs(dec, 1)
    for lo, hi, _, handle in _smooth_parts(dec, w):
        L0 = handle(0)
        k_sum += _power_integral(L0, lo, hi, -0.5, tol)
        a_sum += _power_integral(L0, lo, hi, -1.5, tol)
        if has_d:
            ends = np.array([lo, hi])
            Le = L0(ends)
            a_deriv += (_power_integral(handle(1), lo, hi, -0.5, tol)
                        + Le[0] * (-lo) ** -0.5 - Le[1] * (-hi) ** -0.5)
    K = -root * k_sum
    A = root * a_sum
    # weight-function route
    wk = 0j
    for pos, comps in dec.sym_atoms.items():
        wk += mode3_trace(-pos, params)[0] * comps[0]
    for pos, comps in dec.skew_atoms.items():
        wk += mode3_trace(-pos, params)[1] * comps[0]
    for sp in dec.sym_smooth + dec.skew_smooth:
        idx = 0 if sp in dec.sym_smooth else 1
        lo, hi = sp.source.lo, sp.source.hi

        def integrand(x, sp=sp, idx=idx):
            tr = np.array([mode3_trace(-xi, params)[idx] for xi in x])
            return tr * sp.values(x, 0)[:, 0]

        wk += complex(_integrate(integrand, lo, hi, tol))
    wk = -(1 + 1j) * wk
    diag = {"weights_K": abs(wk - K) / max(abs(K), 1e-300), "imag_K": abs(np.imag(wk))}
    if has_d:
        A_d = -2.0 * root * a_deriv
        diag["ibp_A"] = abs(A_d - A) / max(abs(A), 1e-300)
    return TipCoefficients(K=float(np.real(K)), A=float(np.real(A)), B=None,
                           provenance=Provenance.CLOSED_FORM, mode=Mode.MODE_III, diagnostics=diag)
