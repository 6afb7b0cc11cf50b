"""Face tractions on the physical crack x1 < 0 and their symmetric/skew split.

Tractions are ``p_j^{+-}(x1) = sigma_2j(x1, 0^{+-})``.  Plane-strain loads
carry the components ``(p1, p2)`` (shear, normal) and Mode III loads carry
``(p3,)``.  Point forces are kept as exact atoms; smooth distributions are
function handles with bounded support.

Coordinates along the crack are also exposed in the radial form used by the
Mellin solution, ``r = -x1`` with ``p(r) = p2(-r)`` and ``q(r) = p1(-r)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .errors import InputDomainError
from .quadrature import adaptive_integrate

__all__ = [
    "Face",
    "Mode",
    "PointForce",
    "SmoothTraction",
    "FaceTraction",
    "LoadCase",
    "SmoothPart",
    "LoadDecomposition",
    "BalanceReport",
    "decompose",
    "check_balance",
    "split_symmetric",
    "three_point_case",
    "hutchinson_case",
    "x1_to_r",
    "r_to_x1",
]


class Face(enum.Enum):
    UPPER = "upper"
    LOWER = "lower"


class Mode(enum.Enum):
    PLANE_STRAIN = "plane_strain"
    MODE_III = "mode3"

    @property
    def ncomp(self) -> int:
        return 2 if self is Mode.PLANE_STRAIN else 1


def x1_to_r(x1):
    return -np.asarray(x1, dtype=float) if np.ndim(x1) else -float(x1)


def r_to_x1(r):
    return -np.asarray(r, dtype=float) if np.ndim(r) else -float(r)


@dataclass(frozen=True)
class PointForce:
    """Concentrated traction ``components * delta(x1 - position)``."""

    position: float
    components: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(float(c) for c in self.components))
        if not (math.isfinite(self.position) and self.position < 0.0):
            raise InputDomainError(f"point force must sit on the crack x1 < 0, got {self.position!r}")


@dataclass(frozen=True)
class SmoothTraction:
    """Distributed traction on ``[lo, hi]`` (both negative).

    Parameters
    ----------
    func : callable
        Maps an array of x1 values of shape (n,) to an array of shape
        (n, ncomp).
    lo, hi : float
        Support limits with ``lo < hi < 0``.
    deriv, deriv2 : callable, optional
        First and second derivatives with respect to x1, same signature.
    """

    func: Callable
    lo: float
    hi: float
    deriv: Optional[Callable] = None
    deriv2: Optional[Callable] = None

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi) and self.lo < self.hi < 0.0):
            raise InputDomainError(f"smooth support must satisfy lo < hi < 0, got [{self.lo}, {self.hi}]")


@dataclass(frozen=True)
class FaceTraction:
    face: Face
    load: object

    def __post_init__(self):
        if not isinstance(self.face, Face):
            raise InputDomainError(f"face must be a Face, got {self.face!r}")
        if not isinstance(self.load, (PointForce, SmoothTraction)):
            raise InputDomainError("load must be a PointForce or a SmoothTraction")

    @property
    def nearest(self) -> float:
        """Distance from the crack tip to the closest loaded point."""
        if isinstance(self.load, PointForce):
            return -self.load.position
        return -self.load.hi


@dataclass(frozen=True)
class LoadCase:
    """Collection of face tractions with a load-free gap ahead of the tip.

    Parameters
    ----------
    mode : Mode
    tractions : tuple of FaceTraction
    gap : float, optional
        Distance from the tip inside which no load acts.  Defaults to the
        distance of the nearest loaded point.
    allow_unbalanced : bool
        Skip the self-balance requirement (unit tests only).
    """

    mode: Mode
    tractions: tuple
    gap: Optional[float] = None
    allow_unbalanced: bool = False

    def __post_init__(self):
        object.__setattr__(self, "tractions", tuple(self.tractions))
        if not self.tractions:
            raise InputDomainError("a load case needs at least one traction")
        ncomp = self.mode.ncomp
        for tr in self.tractions:
            if not isinstance(tr, FaceTraction):
                raise InputDomainError("tractions must be FaceTraction instances")
            if isinstance(tr.load, PointForce) and len(tr.load.components) != ncomp:
                raise InputDomainError(
                    f"{self.mode.value} point forces need {ncomp} component(s), "
                    f"got {len(tr.load.components)}")
        nearest = min(tr.nearest for tr in self.tractions)
        if self.gap is None:
            object.__setattr__(self, "gap", nearest)
        if not self.gap > 0.0:
            raise InputDomainError("the load-free gap must be positive")
        if nearest < self.gap * (1.0 - 1e-12):
            raise InputDomainError(f"a load reaches x1 = {-nearest:g}, inside the declared gap {self.gap:g}")
        if not self.allow_unbalanced:
            rep = check_balance(self)
            if not rep.balanced:
                raise InputDomainError(
                    f"load is not self-balanced (force {rep.force}, moment {rep.moment:g})")

    @property
    def points(self):
        return [tr for tr in self.tractions if isinstance(tr.load, PointForce)]

    @property
    def smooth(self):
        return [tr for tr in self.tractions if isinstance(tr.load, SmoothTraction)]

    @property
    def has_smooth(self) -> bool:
        return bool(self.smooth)

    def shifted(self, a: float) -> "LoadCase":
        """Loads seen from a tip advanced by ``a``: new tractions ``p(x1 + a)``."""
        out = []
        for tr in self.tractions:
            ld = tr.load
            if isinstance(ld, PointForce):
                out.append(FaceTraction(tr.face, PointForce(ld.position - a, ld.components)))
            else:
                out.append(FaceTraction(tr.face, SmoothTraction(
                    _shift_handle(ld.func, a), ld.lo - a, ld.hi - a,
                    _shift_handle(ld.deriv, a), _shift_handle(ld.deriv2, a))))
        return LoadCase(self.mode, tuple(out), gap=self.gap + a, allow_unbalanced=True)


def _shift_handle(func, a):
    if func is None:
        return None
    return lambda x: func(np.asarray(x) + a)


@dataclass(frozen=True)
class SmoothPart:
    """A smooth traction scaled by ``weight`` inside a symmetric or skew part."""

    weight: float
    source: SmoothTraction

    def values(self, x1, order: int = 0):
        handle = (self.source.func, self.source.deriv, self.source.deriv2)[order]
        if handle is None:
            raise InputDomainError(f"derivative of order {order} was not supplied for a smooth traction")
        x1 = np.asarray(x1, dtype=float)
        vals = np.asarray(handle(x1), dtype=complex).reshape(x1.shape[0], -1)
        inside = (x1 >= self.source.lo) & (x1 <= self.source.hi)
        return self.weight * vals * inside[:, None]


@dataclass(frozen=True)
class LoadDecomposition:
    """Symmetric part ``<p> = (p+ + p-)/2`` and skew part ``[[p]] = p+ - p-``.

    Atoms are stored as ``{position: components}``; smooth parts as lists of
    weighted handles.
    """

    mode: Mode
    sym_atoms: dict
    skew_atoms: dict
    sym_smooth: tuple = field(default_factory=tuple)
    skew_smooth: tuple = field(default_factory=tuple)
    gap: float = 0.0

    @property
    def ncomp(self) -> int:
        return self.mode.ncomp

    def parts(self):
        """Yield ``(name, atoms, smooth)`` for the symmetric then skew part."""
        yield "sym", self.sym_atoms, self.sym_smooth
        yield "skew", self.skew_atoms, self.skew_smooth

    def evaluate(self, part: str, x1, order: int = 0):
        """Smooth contribution of one part at ``x1`` (array of shape (n,))."""
        smooth = self.sym_smooth if part == "sym" else self.skew_smooth
        x1 = np.atleast_1d(np.asarray(x1, dtype=float))
        out = np.zeros((x1.shape[0], self.ncomp), dtype=complex)
        for sp in smooth:
            out += sp.values(x1, order)
        return out

    def reconstruct(self, face: Face):
        """Point atoms of ``p+ = <p> + [[p]]/2`` or ``p- = <p> - [[p]]/2``."""
        sign = 1 if face is Face.UPPER else -1
        out = {}
        for pos in set(self.sym_atoms) | set(self.skew_atoms):
            s = np.asarray(self.sym_atoms.get(pos, np.zeros(self.ncomp)))
            k = np.asarray(self.skew_atoms.get(pos, np.zeros(self.ncomp)))
            val = s + sign * 0.5 * k
            if np.any(val != 0.0):
                out[pos] = val
        return out

    def supports(self):
        """Bounded intervals carrying smooth load, as ``(lo, hi)`` pairs in x1."""
        seen = []
        for sp in self.sym_smooth + self.skew_smooth:
            key = (sp.source.lo, sp.source.hi)
            if key not in seen:
                seen.append(key)
        return seen


def decompose(lc: LoadCase) -> LoadDecomposition:
    """Split a load case into its symmetric and skew parts."""
    ncomp = lc.mode.ncomp
    upper: dict = {}
    lower: dict = {}
    for tr in lc.points:
        book = upper if tr.face is Face.UPPER else lower
        acc = book.setdefault(tr.load.position, [Fraction(0)] * ncomp)
        for j, c in enumerate(tr.load.components):
            acc[j] += Fraction(c)
    sym, skew = {}, {}
    for pos in sorted(set(upper) | set(lower)):
        u = upper.get(pos, [Fraction(0)] * ncomp)
        lo = lower.get(pos, [Fraction(0)] * ncomp)
        s = [(a + b) / 2 for a, b in zip(u, lo)]
        k = [a - b for a, b in zip(u, lo)]
        if any(v != 0 for v in s):
            sym[pos] = np.array([float(v) for v in s])
        if any(v != 0 for v in k):
            skew[pos] = np.array([float(v) for v in k])
    sym_smooth, skew_smooth = [], []
    for tr in lc.smooth:
        sym_smooth.append(SmoothPart(0.5, tr.load))
        skew_smooth.append(SmoothPart(1.0 if tr.face is Face.UPPER else -1.0, tr.load))
    return LoadDecomposition(lc.mode, sym, skew, tuple(sym_smooth), tuple(skew_smooth), lc.gap)


@dataclass(frozen=True)
class BalanceReport:
    """Net force (per component) and net moment of the applied tractions.

    The force residual is ``int [[p_j]] dx1`` and the moment residual is
    ``int x1 [[p_n]] dx1`` with ``p_n`` the out-of-face-line component
    (p2 in plane strain, p3 in Mode III).
    """

    force: np.ndarray
    moment: float
    scale: float
    tol: float = 1e-12

    @property
    def balanced(self) -> bool:
        return bool(np.all(np.abs(self.force) <= self.tol * self.scale)
                    and abs(self.moment) <= self.tol * self.scale)


def check_balance(lc: LoadCase) -> BalanceReport:
    """Sum the net force and moment over all atoms and smooth tractions."""
    ncomp = lc.mode.ncomp
    force = np.zeros(ncomp)
    moment = 0.0
    scale = 0.0
    for tr in lc.tractions:
        sign = 1.0 if tr.face is Face.UPPER else -1.0
        ld = tr.load
        if isinstance(ld, PointForce):
            comps = np.asarray(ld.components)
            force += sign * comps
            moment += sign * ld.position * comps[-1]
            scale += float(np.sum(np.abs(comps))) * (1.0 + abs(ld.position))
        else:
            def integrand(x, f=ld.func):
                x = np.asarray(x)
                vals = np.asarray(f(x), dtype=float).reshape(x.shape[0], -1)
                return np.concatenate([vals, x[:, None] * vals[:, -1:], np.abs(vals) * (1.0 + np.abs(x[:, None]))], axis=1)

            tot, _ = adaptive_integrate(integrand, ld.lo, ld.hi, tol=1e-13, abs_floor=1e-15)
            tot = np.real(tot)
            force += sign * tot[:ncomp]
            moment += sign * tot[ncomp]
            scale += float(np.sum(tot[ncomp + 1:]))
    return BalanceReport(force=force, moment=moment, scale=max(scale, 1e-300))


def _scaled_handle(func, k):
    if func is None:
        return None
    return lambda x: k * np.asarray(func(x))


def _scaled_load(load, k):
    if isinstance(load, PointForce):
        return PointForce(load.position, tuple(k * c for c in load.components))
    return SmoothTraction(_scaled_handle(load.func, k), load.lo, load.hi,
                          _scaled_handle(load.deriv, k), _scaled_handle(load.deriv2, k))


def split_symmetric(lc: LoadCase):
    """Two load cases carrying only ``<p>`` and only ``[[p]]``.

    The first has ``p+ = p- = <p>``; the second has ``p+ = -p- = [[p]]/2``.
    Both inherit the gap of ``lc`` and add up to it.
    """
    sym, skew = [], []
    for tr in lc.tractions:
        sign = 1.0 if tr.face is Face.UPPER else -1.0
        for face in (Face.UPPER, Face.LOWER):
            fs = 1.0 if face is Face.UPPER else -1.0
            sym.append(FaceTraction(face, _scaled_load(tr.load, 0.5)))
            skew.append(FaceTraction(face, _scaled_load(tr.load, 0.5 * sign * fs)))
    return (LoadCase(lc.mode, tuple(sym), gap=lc.gap, allow_unbalanced=True),
            LoadCase(lc.mode, tuple(skew), gap=lc.gap, allow_unbalanced=True))


def three_point_case(F: float, a: float, b: float) -> LoadCase:
    """Upper face ``-F delta(x1 + a)``; lower face ``-F/2`` at ``x1 = -a - b`` and ``-a + b``.

    Normal (p2) forces only; the load-free gap is ``a - b``.
    """
    if not a > 0.0:
        raise InputDomainError("a must be positive")
    if not (0.0 <= b < a):
        raise InputDomainError(f"need 0 <= b < a, got a={a}, b={b}")
    tr = (
        FaceTraction(Face.UPPER, PointForce(-a, (0.0, -F))),
        FaceTraction(Face.LOWER, PointForce(-a - b, (0.0, -0.5 * F))),
        FaceTraction(Face.LOWER, PointForce(-a + b, (0.0, -0.5 * F))),
    )
    return LoadCase(Mode.PLANE_STRAIN, tr, gap=a - b)


def hutchinson_case(P: float, Q: float, a: float) -> LoadCase:
    """Equal tractions ``-P`` (normal) and ``-Q`` (shear) on both faces at distance ``a``."""
    if not a > 0.0:
        raise InputDomainError("a must be positive")
    comps = (-Q, -P)
    tr = (
        FaceTraction(Face.UPPER, PointForce(-a, comps)),
        FaceTraction(Face.LOWER, PointForce(-a, comps)),
    )
    return LoadCase(Mode.PLANE_STRAIN, tr, gap=a)
