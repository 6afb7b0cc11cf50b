"""Bimaterial constants for a crack lying on the interface of two isotropic half-planes.

The upper half-plane (x2 > 0) carries the ``+`` label and the lower one the
``-`` label.  Every constant is derived from the two shear moduli and the two
Poisson ratios under plane strain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InputDomainError

__all__ = [
    "ElasticHalfPlane",
    "BimaterialParams",
    "derive_params",
    "params_from_eta",
    "verify_identities",
    "IDENTITY_TOL",
]

IDENTITY_TOL = 1e-12


@dataclass(frozen=True)
class ElasticHalfPlane:
    """Isotropic elastic half-plane.

    Parameters
    ----------
    mu : float
        Shear modulus, strictly positive.
    nu : float
        Poisson ratio in the open interval (-1, 0.5).
    """

    mu: float
    nu: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and self.mu > 0.0):
            raise InputDomainError(f"shear modulus must be positive and finite, got {self.mu!r}")
        if not (math.isfinite(self.nu) and -1.0 < self.nu < 0.5):
            raise InputDomainError(f"Poisson ratio must lie in (-1, 0.5), got {self.nu!r}")


@dataclass(frozen=True)
class BimaterialParams:
    """Derived constants of an interfacial crack.

    Attributes
    ----------
    plus, minus : ElasticHalfPlane
        Upper and lower materials.
    epsilon : float
        Oscillation index, ``arctanh(d_star) / pi``.
    alpha, d_star : float
        Dundurs-type mismatch parameters.
    gamma : float
        Product ``alpha * gamma_star``; finite for every material pair.
    d, b, e, f : float
        Compliance combinations (inverse stress units).
    eta : float
        Shear-modulus contrast ``(mu_- - mu_+) / (mu_- + mu_+)``.
    d0, e0 : float
        ``(1 - d_star**2)**(1/4)`` and ``exp(pi * epsilon / 2)``.
    nu_equiv : float
        Poisson ratio of the equivalent homogeneous material.
    """

    plus: ElasticHalfPlane
    minus: ElasticHalfPlane
    epsilon: float
    alpha: float
    d_star: float
    gamma: float
    d: float
    b: float
    e: float
    f: float
    eta: float
    d0: float
    e0: float
    nu_equiv: float

    @property
    def gamma_star(self) -> float:
        """``gamma / alpha``; undefined when the materials have ``alpha == 0``."""
        if self.alpha == 0.0:
            raise InputDomainError("gamma_star is singular at alpha = 0; use gamma = alpha*gamma_star")
        return self.gamma / self.alpha

    @property
    def skew_factor(self) -> float:
        """``alpha*d_star - gamma``, the finite form of ``alpha*(d_star - gamma_star)``."""
        return self.alpha * self.d_star - self.gamma

    def material(self, sign: int) -> ElasticHalfPlane:
        """Return the upper material for ``sign > 0`` and the lower one otherwise."""
        return self.plus if sign > 0 else self.minus

    def as_dict(self) -> dict:
        out = {
            "mu_plus": self.plus.mu,
            "nu_plus": self.plus.nu,
            "mu_minus": self.minus.mu,
            "nu_minus": self.minus.nu,
        }
        for name in ("epsilon", "alpha", "d_star", "gamma", "d", "b", "e", "f",
                     "eta", "d0", "e0", "nu_equiv"):
            out[name] = getattr(self, name)
        out["gamma_star"] = self.gamma / self.alpha if self.alpha != 0.0 else float("nan")
        return out


def derive_params(plus: ElasticHalfPlane, minus: ElasticHalfPlane) -> BimaterialParams:
    """Compute every bimaterial constant from the two elastic half-planes.

    Parameters
    ----------
    plus, minus : ElasticHalfPlane
        Upper (x2 > 0) and lower (x2 < 0) materials.

    Returns
    -------
    BimaterialParams
    """
    if not isinstance(plus, ElasticHalfPlane) or not isinstance(minus, ElasticHalfPlane):
        raise InputDomainError("derive_params expects two ElasticHalfPlane instances")
    mp, np_ = plus.mu, plus.nu
    mm, nm = minus.mu, minus.nu

    comp_p = (1.0 - np_) / mp
    comp_m = (1.0 - nm) / mm
    b = comp_p + comp_m
    alpha = (comp_p - comp_m) / b
    d = (1.0 - 2.0 * np_) / (2.0 * mp) - (1.0 - 2.0 * nm) / (2.0 * mm)
    d_star = d / b
    gamma = ((1.0 - 2.0 * np_) / (2.0 * mp) + (1.0 - 2.0 * nm) / (2.0 * mm)) / b
    e = np_ / mp + nm / mm
    f = np_ / mp - nm / mm
    eta = (mm - mp) / (mm + mp)

    epsilon = math.atanh(d_star) / math.pi
    d0 = (1.0 - d_star * d_star) ** 0.25
    e0 = math.exp(0.5 * math.pi * epsilon)
    nu_equiv = 1.0 - b * d0 ** 4 / (b + e)

    return BimaterialParams(
        plus=plus, minus=minus, epsilon=epsilon, alpha=alpha, d_star=d_star,
        gamma=gamma, d=d, b=b, e=e, f=f, eta=eta, d0=d0, e0=e0, nu_equiv=nu_equiv,
    )


def params_from_eta(eta: float, nu_plus: float, nu_minus: float) -> BimaterialParams:
    """Build parameters from the modulus contrast with ``mu_+ = 1``.

    ``mu_- = (1 + eta) / (1 - eta)`` so that ``(mu_- - mu_+)/(mu_- + mu_+) = eta``.
    """
    if not (-1.0 < eta < 1.0):
        raise InputDomainError(f"eta must lie in (-1, 1), got {eta!r}")
    return derive_params(
        ElasticHalfPlane(1.0, nu_plus),
        ElasticHalfPlane((1.0 + eta) / (1.0 - eta), nu_minus),
    )


def _rel(lhs: float, rhs: float) -> float:
    scale = max(1.0, abs(lhs), abs(rhs))
    return abs(lhs - rhs) / scale


def verify_identities(params: BimaterialParams):
    """Evaluate the residual of every relation between the derived constants.

    Returns
    -------
    residuals : list of (str, float)
        Identity label and its relative residual.
    worst : float
        Largest residual in the list.
    """
    p = params
    mp, np_ = p.plus.mu, p.plus.nu
    mm, nm = p.minus.mu, p.minus.nu
    kp, km = 3.0 - 4.0 * np_, 3.0 - 4.0 * nm
    ch = math.cosh(math.pi * p.epsilon)
    sh = math.sinh(math.pi * p.epsilon)
    den = 2.0 * mm * (1.0 - np_) + 2.0 * mp * (1.0 - nm)
    rows = [
        ("epsilon = log((mu+ + k+ mu-)/(mu- + k- mu+))/(2 pi)",
         _rel(p.epsilon, math.log((mp + kp * mm) / (mm + km * mp)) / (2.0 * math.pi))),
        ("exp(2 pi epsilon) = (1+d_star)/(1-d_star)",
         _rel(math.exp(2.0 * math.pi * p.epsilon), (1.0 + p.d_star) / (1.0 - p.d_star))),
        ("cosh(pi epsilon) d0^2 = 1", _rel(ch * p.d0 ** 2, 1.0)),
        ("sinh(pi epsilon) d0^2 = d_star", _rel(sh * p.d0 ** 2, p.d_star)),
        ("e0^2 = (1+d_star)/d0^2", _rel(p.e0 ** 2, (1.0 + p.d_star) / p.d0 ** 2)),
        ("d_star = d/b", _rel(p.d_star, p.d / p.b)),
        ("d_star from moduli", _rel(p.d_star, (mm * (1.0 - 2.0 * np_) - mp * (1.0 - 2.0 * nm)) / den)),
        ("alpha from moduli",
         _rel(p.alpha, 2.0 * (mm * (1.0 - np_) - mp * (1.0 - nm)) / den)),
        ("gamma from moduli", _rel(p.gamma, (mm * (1.0 - 2.0 * np_) + mp * (1.0 - 2.0 * nm)) / den)),
        ("b + e = 1/mu+ + 1/mu-", _rel(p.b + p.e, 1.0 / mp + 1.0 / mm)),
        ("b alpha + f = 1/mu+ - 1/mu-", _rel(p.b * p.alpha + p.f, 1.0 / mp - 1.0 / mm)),
        ("1 - nu_equiv = b d0^4/(b+e)", _rel(1.0 - p.nu_equiv, p.b * p.d0 ** 4 / (p.b + p.e))),
    ]
    skew_den = 2.0 * mm * (1.0 - np_) - 2.0 * mp * (1.0 - nm)
    if skew_den != 0.0 and p.alpha != 0.0:
        gamma_star = (mm * (1.0 - 2.0 * np_) + mp * (1.0 - 2.0 * nm)) / skew_den
        rows.append(("alpha gamma_star = gamma", _rel(p.alpha * gamma_star, p.gamma)))
    worst = max(r for _, r in rows)
    return rows, worst
