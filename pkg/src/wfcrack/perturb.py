"""Quasi-static advance of the crack tip and a Fourier-inversion probe for plus functions.

Advancing the tip by ``a`` is modelled, as for the unperturbed problem, by
re-expressing the face loads in coordinates attached to the new tip: the
traction seen there is ``p(x1 + a)``.  ``K*(a)`` and ``A*(a)`` are then the
ordinary extraction formulas applied to the shifted load, and their slopes at
``a = 0`` are ``(1/2 + i eps) A0`` and ``(3/2 + i eps) B0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import sici

from .errors import InputDomainError, NumericalError
from .loading import LoadCase, Mode, check_balance
from .materials import BimaterialParams
from .quadrature import adaptive_integrate
from .sif import sif_closed_form
from .special import osc_constants

__all__ = [
    "AdvanceResult",
    "advance_sif",
    "first_order",
    "first_order_matrices",
    "advance_ladder",
    "ProbeReport",
    "tauberian_probe",
]


@dataclass(frozen=True)
class AdvanceResult:
    """Tip coefficients after an advance ``a`` together with the unperturbed ones."""

    a: float
    K_star: complex
    A_star: complex
    K0: complex
    A0: complex
    B0: complex


def advance_sif(params: BimaterialParams, lc: LoadCase, a: float, tol: float = 1e-10) -> AdvanceResult:
    """``K*(a)`` and ``A*(a)`` from the loads shifted by ``a``.

    Parameters
    ----------
    a : float
        Advance length, ``0 <= a < gap``.

    Raises
    ------
    InputDomainError
        If ``a`` is negative or reaches the load-free gap.
    """
    a = float(a)
    if not (math.isfinite(a) and 0.0 <= a < lc.gap):
        raise InputDomainError(f"advance must satisfy 0 <= a < gap = {lc.gap:g}, got {a!r}")
    if lc.mode is not Mode.PLANE_STRAIN:
        raise InputDomainError("crack advance is implemented for plane-strain load cases")
    base = sif_closed_form(params, lc, tol=tol)
    star = base if a == 0.0 else sif_closed_form(params, lc.shifted(a), tol=tol)
    return AdvanceResult(a=a, K_star=star.K, A_star=star.A, K0=base.K, A0=base.A, B0=base.B)


def first_order_matrices(params: BimaterialParams):
    """``-i M1^{-1} M2`` and ``-i M2^{-1} M3``; both are diagonal in exact arithmetic."""
    M = osc_constants(params).M
    return -1j * np.linalg.solve(M[0], M[1]), -1j * np.linalg.solve(M[1], M[2])


def first_order(params: BimaterialParams, lc: LoadCase, tol: float = 1e-10):
    """Slopes ``dK = K*'(0)`` and ``dA = A*'(0)``.

    Both the scalar forms ``(1/2 + i eps) A0``, ``(3/2 + i eps) B0`` and the
    matrix forms ``-i M1^{-1} M2 [A0, conj A0]`` and
    ``-i M2^{-1} M3 [B0, conj B0]`` are evaluated; a disagreement beyond
    round-off raises :class:`NumericalError`.

    Returns
    -------
    dK, dA : complex
    """
    if not check_balance(lc).balanced:
        raise InputDomainError("first-order advance formulas need a self-balanced load")
    base = sif_closed_form(params, lc, tol=tol)
    eps = params.epsilon
    dK = (0.5 + 1j * eps) * base.A
    dA = (1.5 + 1j * eps) * base.B
    m12, m23 = first_order_matrices(params)
    dK_m = (m12 @ base.A_vector)[0]
    dA_m = (m23 @ np.array([base.B, np.conj(base.B)]))[0]
    for name, s, m in (("dK", dK, dK_m), ("dA", dA, dA_m)):
        if abs(s - m) > 1e-10 * max(abs(s), 1e-300) + 1e-300:
            raise NumericalError(f"scalar and matrix forms of {name} disagree", estimate=s, error=abs(s - m))
    return complex(dK), complex(dA)


def advance_ladder(params: BimaterialParams, lc: LoadCase, fractions=(1e-2, 1e-3, 1e-4)):
    """Finite-difference errors ``|(K*(a) - K0)/a - dK|`` at ``a = fraction * gap``.

    Returns
    -------
    list of (a, AdvanceResult, predicted K*(a), error)
    """
    dK, _ = first_order(params, lc)
    rows = []
    for f in fractions:
        a = f * lc.gap
        res = advance_sif(params, lc, a)
        pred = res.K0 + a * dK
        rows.append((a, res, pred, abs((res.K_star - res.K0) / a - dK)))
    return rows


# -------------------------------------------------------------- plus-function probe

@dataclass(frozen=True)
class ProbeReport:
    """Numerical inverse ``f(x) = (1/2 pi) int psi(t) exp(-i x t) dt`` and its limits at ``0+``.

    Attributes
    ----------
    x, f : ndarray
        Grid and inverted values.
    f0, df0 : complex
        Polynomial extrapolations of ``f(0+)`` and ``f'(0+)``.
    f0_expected, df0_expected : complex
        ``-i a1`` and ``-a2``.
    max_negative : float
        ``max |f(x)|`` over grid points ``x < 0``.
    tail_bound : float
        Size of the fitted cubic tail correction, an estimate of the truncation error.
    """

    x: np.ndarray
    f: np.ndarray
    f0: complex
    df0: complex
    f0_expected: complex
    df0_expected: complex
    max_negative: float
    tail_bound: float
    diagnostics: dict = field(default_factory=dict)

    @property
    def f0_error(self) -> float:
        return abs(self.f0 - self.f0_expected)

    @property
    def df0_error(self) -> float:
        return abs(self.df0 - self.df0_expected)


def _tail_moments(x, T):
    """``int_{|t|>T} t^{-k} exp(-i x t) dt`` for ``k = 1, 2, 3``."""
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    sg = np.sign(x)
    y = ax * T
    si, _ = sici(y)
    rest = 0.5 * np.pi - si               # int_y^inf sin(u)/u du
    with np.errstate(divide="ignore", invalid="ignore"):
        j3 = np.where(y > 0, np.sin(y) / (2 * y * y) + np.cos(y) / (2 * y) - 0.5 * rest, 0.0)
    t1 = -2j * sg * rest
    t2 = 2.0 * (np.cos(y) / T - ax * rest)
    t3 = -2j * sg * ax * ax * j3
    # at x = 0 the odd moments vanish and the even one is 2/T
    t1 = np.where(ax == 0.0, 0.0, t1)
    t3 = np.where(ax == 0.0, 0.0, t3)
    return t1, t2, t3


def tauberian_probe(a1: complex, a2: complex, psi, x_grid, T: float = 4000.0,
                    tol: float = 1e-13, fit_points: int = 6, fit_degree: int = 3) -> ProbeReport:
    """Invert a plus function numerically and extrapolate ``f(0+)`` and ``f'(0+)``.

    The integral over ``[-T, T]`` is computed by adaptive Gauss-Kronrod
    quadrature; beyond ``T`` the integrand is replaced by
    ``a1/t + a2/t^2 + a3/t^3`` with ``a3`` fitted at ``t = +-T``, whose
    transforms are expressed through the sine integral.

    Parameters
    ----------
    a1, a2 : complex
        Coefficients of the expansion ``psi(t) = a1/t + a2/t^2 + O(t^-3)``.
    psi : callable
        Vectorised; analytic in the upper half-plane.
    x_grid : array_like
        Points at which ``f`` is returned.  The ``fit_points`` smallest
        positive points feed the extrapolation to ``0+``.

    Raises
    ------
    NumericalError
        When the quadrature fails to converge or the grid has too few
        positive points to extrapolate.
    """
    x = np.asarray(x_grid, dtype=float).ravel()
    pos = np.sort(x[x > 0.0])
    if pos.size < fit_points:
        raise NumericalError(f"need at least {fit_points} positive grid points to extrapolate to 0+")
    a1, a2 = complex(a1), complex(a2)

    def integrand(t):
        vals = np.asarray(psi(t), dtype=complex)
        return vals[:, None] * np.exp(-1j * np.outer(t, x))

    total = np.zeros(x.size, dtype=complex)
    err = 0.0
    # f vanishes for x < 0, so the error target is absolute, scaled by psi
    floor = tol * max(abs(a1), abs(a2), float(np.max(np.abs(psi(np.array([-1.0, 0.0, 1.0]))))))
    edges = np.concatenate([-np.geomspace(T, 1.0, 14), np.geomspace(1.0, T, 14)])
    # a single G7-K15 pass over many periods can alias to a tiny error
    # estimate, so no starting panel may span more than about two periods
    span = 4.0 * np.pi / max(float(np.max(np.abs(x))), 1e-300)
    fine = [edges[0]]
    for lo, hi in zip(edges[:-1], edges[1:]):
        fine.extend(np.linspace(lo, hi, int(np.ceil((hi - lo) / span)) + 1)[1:])
    for lo, hi in zip(fine[:-1], fine[1:]):
        v, e = adaptive_integrate(integrand, lo, hi, tol=tol, abs_floor=floor, max_intervals=200000)
        total += v
        err += float(np.max(np.abs(e))) if np.ndim(e) else float(e)
    tp = np.array([T, -T])
    rem = (np.asarray(psi(tp), dtype=complex) - a1 / tp - a2 / tp ** 2) * tp ** 3
    a3 = complex(np.mean(rem))
    m1, m2, m3 = _tail_moments(x, T)
    tail3 = a3 * m3
    f = (total + a1 * m1 + a2 * m2 + tail3) / (2.0 * np.pi)
    neg = x < 0.0
    max_neg = float(np.max(np.abs(f[neg]))) if np.any(neg) else 0.0

    near = pos[:fit_points]
    idx = [int(np.flatnonzero(x == v)[0]) for v in near]
    coef_re = np.polyfit(near, f[idx].real, fit_degree)
    coef_im = np.polyfit(near, f[idx].imag, fit_degree)
    f0 = complex(coef_re[-1], coef_im[-1])
    df0 = complex(coef_re[-2], coef_im[-2])
    return ProbeReport(
        x=x, f=f, f0=f0, df0=df0, f0_expected=-1j * a1, df0_expected=-a2,
        max_negative=max_neg, tail_bound=float(np.max(np.abs(tail3))) / (2.0 * np.pi),
        diagnostics={"quadrature_error": err / (2.0 * np.pi), "a3": a3},
    )
