"""Symmetric and skew-symmetric weight functions of the interfacial crack.

The weight-function problem lives on a crack occupying x1 > 0, the mirror
image of the physical crack.  Matrices are laid out with the displacement or
traction component along rows and the basis function along columns, so that
``jumpU[j, k]`` is the j-th component of the k-th weight function.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InputDomainError
from .materials import BimaterialParams
from .special import osc_constants

__all__ = [
    "WeightSample",
    "plane_strain_trace",
    "jump_kernel",
    "jump_kernel_derivative",
    "mean_kernel",
    "mean_kernel_derivative",
    "sigma_kernel",
    "half_plane_log",
    "half_plane_power",
    "plane_strain_transform",
    "alternative_basis",
    "alternative_basis_from_transform",
    "mode3_trace",
    "mode3_field",
]

_ROOT_2PI = math.sqrt(2.0 * math.pi)
_B = np.array([[1.0, -1j], [1j, 1.0]])
_BT = _B.T.copy()


@dataclass(frozen=True)
class WeightSample:
    """Weight-function traces at one point of the crack line."""

    at: float
    jumpU: np.ndarray
    meanU: np.ndarray
    sigma: np.ndarray


def _kernel_pair(x, params, sigma_exp):
    # x^{sigma - i eps}/c1^+ and x^{sigma + i eps}/c1^-
    osc = osc_constants(params)
    cp, cm = osc.cp(1), osc.cm(1)
    lx = np.log(x)
    eps = params.epsilon
    plus = np.exp((sigma_exp - 1j * eps) * lx) / cp
    minus = np.exp((sigma_exp + 1j * eps) * lx) / cm
    return plus, minus


def _combine(plus, minus, sign=1.0):
    # plus * B + sign * minus * B^T, broadcast over leading axis
    return plus[..., None, None] * _B + sign * minus[..., None, None] * _BT


def jump_kernel(x, params: BimaterialParams):
    """``[[U]](x)`` for ``x > 0``; array of shape x.shape + (2, 2)."""
    x = np.asarray(x, dtype=float)
    plus, minus = _kernel_pair(x, params, -0.5)
    return _combine(plus, minus) / (2.0 * params.d0 * _ROOT_2PI)


def jump_kernel_derivative(x, params: BimaterialParams):
    """Derivative of ``[[U]]`` with respect to its argument, ``x > 0``."""
    x = np.asarray(x, dtype=float)
    eps = params.epsilon
    plus, minus = _kernel_pair(x, params, -1.5)
    plus = -(0.5 + 1j * eps) * plus
    minus = -(0.5 - 1j * eps) * minus
    return _combine(plus, minus) / (2.0 * params.d0 * _ROOT_2PI)


def mean_kernel(x, params: BimaterialParams):
    """``<U>(x)`` for any nonzero x (array input, x != 0)."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape + (2, 2), dtype=complex)
    pos = x > 0.0
    if np.any(pos):
        out[pos] = 0.5 * params.alpha * jump_kernel(x[pos], params)
    neg = x < 0.0
    if np.any(neg):
        plus, minus = _kernel_pair(-x[neg], params, -0.5)
        pref = params.skew_factor / (4.0 * params.d0 ** 3 * _ROOT_2PI)
        out[neg] = -1j * pref * _combine(plus, minus, sign=-1.0)
    return out


def mean_kernel_derivative(x, params: BimaterialParams):
    """Derivative of ``<U>`` with respect to its argument (x != 0)."""
    x = np.asarray(x, dtype=float)
    eps = params.epsilon
    out = np.zeros(x.shape + (2, 2), dtype=complex)
    pos = x > 0.0
    if np.any(pos):
        out[pos] = 0.5 * params.alpha * jump_kernel_derivative(x[pos], params)
    neg = x < 0.0
    if np.any(neg):
        # d/dx = -d/dr with r = -x
        plus, minus = _kernel_pair(-x[neg], params, -1.5)
        plus = (0.5 + 1j * eps) * plus
        minus = (0.5 - 1j * eps) * minus
        pref = params.skew_factor / (4.0 * params.d0 ** 3 * _ROOT_2PI)
        out[neg] = -1j * pref * _combine(plus, minus, sign=-1.0)
    return out


def sigma_kernel(x, params: BimaterialParams):
    """Weight-function tractions ``Sigma(x)`` for ``x < 0``."""
    x = np.asarray(x, dtype=float)
    eps = params.epsilon
    plus, minus = _kernel_pair(-x, params, -1.5)
    plus = (0.5 + 1j * eps) * plus
    minus = (0.5 - 1j * eps) * minus
    return _combine(plus, minus) / (2.0 * params.b * params.d0 ** 3 * _ROOT_2PI)


def plane_strain_trace(x1: float, params: BimaterialParams) -> WeightSample:
    """Weight-function traces ``[[U]]``, ``<U>`` and ``Sigma`` at ``x1``.

    Parameters
    ----------
    x1 : float
        Nonzero abscissa on the crack line.
    params : BimaterialParams

    Returns
    -------
    WeightSample
        ``jumpU`` vanishes for ``x1 < 0``, ``sigma`` vanishes for ``x1 > 0``.
    """
    x1 = float(x1)
    if x1 == 0.0 or not math.isfinite(x1):
        raise InputDomainError("weight-function traces are not defined at x1 = 0")
    zero = np.zeros((2, 2), dtype=complex)
    arr = np.array([x1])
    if x1 > 0.0:
        jump = jump_kernel(arr, params)[0]
        return WeightSample(x1, jump, 0.5 * params.alpha * jump, zero)
    return WeightSample(x1, zero, mean_kernel(arr, params)[0], sigma_kernel(arr, params)[0])


# ---------------------------------------------------------------- transforms

def half_plane_log(beta, side: str) -> complex:
    """Logarithm of ``beta`` continued from the upper (``"+"``) or lower (``"-"``) half-plane.

    On the real axis the argument is taken as the limit from the chosen
    side: ``arg`` lies in ``[0, pi]`` for ``"+"`` and ``[-pi, 0]`` for ``"-"``.
    """
    beta = complex(beta)
    if beta == 0:
        raise InputDomainError("beta = 0 is a branch point")
    arg = math.atan2(beta.imag, beta.real)
    if side == "+":
        if beta.imag < 0.0:
            raise InputDomainError("Plus-side functions need Im(beta) >= 0")
        if arg < 0.0:
            arg += 2.0 * math.pi
    elif side == "-":
        if beta.imag > 0.0:
            raise InputDomainError("Minus-side functions need Im(beta) <= 0")
        if arg > 0.0:
            arg -= 2.0 * math.pi
    else:
        raise InputDomainError(f"side must be '+' or '-', got {side!r}")
    return complex(math.log(abs(beta)), arg)


def half_plane_power(beta, exponent: complex, side: str) -> complex:
    """``beta_{+-}^{exponent}`` with the half-plane branch of :func:`half_plane_log`."""
    return cmath.exp(exponent * half_plane_log(beta, side))


def _rotation(angle: complex) -> np.ndarray:
    c, s = cmath.cos(angle), cmath.sin(angle)
    return np.array([[c, -s], [s, c]], dtype=complex)


def plane_strain_transform(beta, side: str, params: BimaterialParams) -> np.ndarray:
    """Fourier transform of the weight-function traces.

    Parameters
    ----------
    beta : complex
        Transform variable, ``Im(beta) >= 0`` for ``side="+"`` and
        ``Im(beta) <= 0`` for ``side="-"``.
    side : {"+", "-"}
        ``"+"`` returns the transform of ``[[U]]`` (supported on x1 > 0),
        ``"-"`` the transform of ``Sigma`` (supported on x1 < 0).

    Notes
    -----
    The transform convention is ``F(beta) = int f(x) exp(i beta x) dx``.
    """
    beta = complex(beta)
    eps = params.epsilon
    if side == "+":
        half_plane_log(beta, "+")  # domain check
        angle = -eps * cmath.log(-1j * beta)
        root = half_plane_power(beta, 0.5, "+")
        return params.d0 / root * _rotation(angle)
    if side == "-":
        half_plane_log(beta, "-")
        angle = -eps * cmath.log(1j * beta)
        root = half_plane_power(beta, 0.5, "-")
        return -(root / (params.b * params.d0)) * _rotation(angle)
    raise InputDomainError(f"side must be '+' or '-', got {side!r}")


def alternative_basis(beta, params: BimaterialParams) -> np.ndarray:
    """Closed form of the alternative weight-function basis (Plus side)."""
    osc = osc_constants(params)
    cp, cm = osc.cp(1), osc.cm(1)
    e0, d0, eps = params.e0, params.d0, params.epsilon
    bp = half_plane_power(beta, 1j * eps, "+")
    bm = half_plane_power(beta, -1j * eps, "+")
    root = half_plane_power(beta, -0.5, "+")
    u11 = root / (2.0 * d0 ** 2) * (-e0 * bp / cm + bm / (e0 * cp))
    u21 = -1j * root / (2.0 * d0 ** 2) * (e0 * bp / cm + bm / (e0 * cp))
    return np.array([[u11, -u21], [u21, u11]], dtype=complex)


def alternative_basis_from_transform(beta, params: BimaterialParams) -> np.ndarray:
    """Alternative basis built as a linear combination of the first two weight functions."""
    osc = osc_constants(params)
    cp, cm = osc.cp(1), osc.cm(1)
    mix = np.array([[-cp + cm, 1j * (cp + cm)], [-1j * (cp + cm), -cp + cm]], dtype=complex)
    jump = plane_strain_transform(beta, "+", params)
    return jump @ mix / (2.0 * cp * cm * params.d0 ** 3)


# ---------------------------------------------------------------- Mode III

def mode3_trace(x1: float, params: BimaterialParams):
    """Mode III traces ``([[U3]], <U3>, Sigma32)`` at ``x1``."""
    x1 = float(x1)
    if x1 == 0.0 or not math.isfinite(x1):
        raise InputDomainError("Mode III traces are not defined at x1 = 0")
    if x1 > 0.0:
        jump = (1 - 1j) / _ROOT_2PI * x1 ** -0.5
        return jump, 0.5 * params.eta * jump, 0j
    sig = (1 - 1j) * (-x1) ** -1.5 / (2.0 * _ROOT_2PI * (params.b + params.e))
    return 0j, 0j, sig


def mode3_field(x1: float, x2: float, params: BimaterialParams):
    """Mode III weight-function fields ``(u3, sigma31, sigma32)`` at ``(x1, x2)``.

    The upper formulas apply for ``x2 > 0`` and for ``x2 = +0.0``; the lower
    ones for ``x2 < 0`` and ``x2 = -0.0``, so the two faces of the weight
    crack can be addressed with signed zeros.
    """
    x1, x2 = float(x1), float(x2)
    if x1 == 0.0 and x2 == 0.0:
        raise InputDomainError("Mode III fields are singular at the origin")
    mu_p, mu_m = params.plus.mu, params.minus.mu
    tot = mu_p + mu_m
    root_pi = math.sqrt(math.pi)
    prod = mu_p * mu_m / (4.0 * root_pi * tot)
    if math.copysign(1.0, x2) > 0.0:
        z1 = complex(x2, x1)     # i x1 + x2
        z2 = complex(x2, -x1)    # -i x1 + x2
        u3 = mu_m / (2.0 * root_pi * tot) * (z1 ** -0.5 - 1j * z2 ** -0.5)
        s31 = -prod * (1j * z1 ** -1.5 - z2 ** -1.5)
        s32 = -prod * (z1 ** -1.5 - 1j * z2 ** -1.5)
    else:
        z1 = complex(-x2, x1)    # i x1 - x2
        z2 = complex(-x2, -x1)   # -i x1 - x2
        u3 = -mu_p / (2.0 * root_pi * tot) * (z1 ** -0.5 - 1j * z2 ** -0.5)
        s31 = prod * (1j * z1 ** -1.5 - z2 ** -1.5)
        s32 = -prod * (z1 ** -1.5 - 1j * z2 ** -1.5)
    return u3, s31, s32
