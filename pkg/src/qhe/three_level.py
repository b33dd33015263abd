"""Three-level engines: case classification, shape parameters and PWC regions.

A 3-level cycle is fixed by four spacings: the lower and upper gaps while in
contact with the hot bath (d1h, d2h) and with the cold bath (d1l, d2l). The
high-temperature positive-work condition of a case-I engine reads
T_h > T_l * kappa with kappa = (dh/dl) * theta, and the engine beats the
2-level bound when 1 < kappa < min(dh/dl, d1h/d1l).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .cycle import OttoCycle
from .errors import (
    BoundarySubcaseError,
    DimensionMismatchError,
    InvalidSpacingError,
    NotApplicableError,
    ThetaUndefinedError,
    XiUndefinedError,
)
from .spectrum import LevelSpectrum, from_spacings, spacings

__all__ = [
    "Case",
    "Region",
    "Subcase",
    "SpacingEndpoints",
    "ShapeParams",
    "RatioCoords",
    "LoosenessVerdict",
    "classify_case",
    "shape_params",
    "f_value",
    "theta",
    "closed_form_work",
    "high_t_pwc_sign",
    "kappa_high_t",
    "ratio_coords",
    "endpoints_from_ratios",
    "solution_region",
    "is_looser",
    "looseness_verdict",
    "case2_subcase",
]


class Case(str, Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    BOUNDARY = "boundary"


class Region(str, Enum):
    SOLUTION_I = "solution_I"
    SOLUTION_II = "solution_II"
    NEITHER = "neither"


class Subcase(str, Enum):
    A = "a"
    B = "b"
    C = "c"
    D = "d"


@dataclass(frozen=True)
class SpacingEndpoints:
    d1h: float
    d2h: float
    d1l: float
    d2l: float

    def __post_init__(self):
        for name in ("d1h", "d2h", "d1l", "d2l"):
            v = float(getattr(self, name))
            if not (v > 0 and math.isfinite(v)):
                raise InvalidSpacingError(f"{name} must be positive, got {v}")
            object.__setattr__(self, name, v)

    @property
    def dh(self) -> float:
        return self.d1h + self.d2h

    @property
    def dl(self) -> float:
        return self.d1l + self.d2l

    @classmethod
    def from_spectra(cls, hot: LevelSpectrum, cold: LevelSpectrum) -> "SpacingEndpoints":
        if len(hot) != 3 or len(cold) != 3:
            raise DimensionMismatchError("spacing endpoints need two 3-level spectra")
        (d1h, d2h), (d1l, d2l) = spacings(hot), spacings(cold)
        return cls(d1h, d2h, d1l, d2l)

    def hot_spectrum(self) -> LevelSpectrum:
        return from_spacings((self.d1h, self.d2h))

    def cold_spectrum(self) -> LevelSpectrum:
        return from_spacings((self.d1l, self.d2l))

    def cycle(self, t_hot: float, t_cold: float) -> OttoCycle:
        return OttoCycle(self.hot_spectrum(), self.cold_spectrum(), t_hot, t_cold)


@dataclass(frozen=True)
class ShapeParams:
    xi: float
    eta: float
    lam: float


@dataclass(frozen=True)
class RatioCoords:
    """Spacings in units of the hot lower gap d1h."""

    r1l: float
    r2l: float
    r2h: float


@dataclass(frozen=True)
class LoosenessVerdict:
    kappa_high_t: float
    two_level_full: float
    two_level_sub: float
    looser: bool


def classify_case(e: SpacingEndpoints) -> Case:
    s1 = e.d1h - e.d1l
    s2 = e.d2h - e.d2l
    if s1 == 0 or s2 == 0:
        return Case.BOUNDARY
    if s1 > 0:
        return Case.I if s2 > 0 else Case.II
    return Case.III if s2 > 0 else Case.IV


def shape_params(e: SpacingEndpoints) -> ShapeParams:
    """(xi, eta, lam) with xi = 1 + (d2h - d2l)/(d1h - d1l), eta = d1l/dl, lam = d1h/dh."""
    if e.d1h == e.d1l:
        raise XiUndefinedError("xi is undefined when the lower spacing does not change")
    xi = 1.0 + (e.d2h - e.d2l) / (e.d1h - e.d1l)
    return ShapeParams(xi, e.d1l / e.dl, e.d1h / e.dh)


def f_value(xi: float, x: float) -> float:
    return (2.0 * xi - 1.0) + (2.0 - xi) * x


def theta(e: SpacingEndpoints) -> float:
    p = shape_params(e)
    denom = f_value(p.xi, p.eta)
    if denom == 0:
        raise ThetaUndefinedError(f"F(xi, eta) vanishes at {p}")
    return f_value(p.xi, p.lam) / denom


def closed_form_work(e: SpacingEndpoints, t_hot: float, t_cold: float) -> float:
    """Net work of the 3-level cycle from the two-term G/Theta expression."""
    bh = 1.0 / t_hot
    bl = 1.0 / t_cold
    d1h, dh, d1l, dl = e.d1h, e.dh, e.d1l, e.dl
    # Theta(full gap, lower gap) and its mirror with the roles swapped
    theta_full = (
        math.exp(-bh * dh)
        - math.exp(-bl * dl)
        + math.exp(-bh * dh - bl * d1l)
        - math.exp(-bh * d1h - bl * dl)
    )
    theta_low = (
        math.exp(-bh * d1h)
        - math.exp(-bl * d1l)
        + math.exp(-bh * d1h - bl * dl)
        - math.exp(-bh * dh - bl * d1l)
    )
    g = theta_full * (dh - dl) + theta_low * (d1h - d1l)
    zh = 1.0 + math.exp(-bh * d1h) + math.exp(-bh * dh)
    zl = 1.0 + math.exp(-bl * d1l) + math.exp(-bl * dl)
    return g / (zh * zl)


def high_t_pwc_sign(e: SpacingEndpoints, t_hot: float, t_cold: float) -> bool:
    """Sign of the leading high-temperature term of the net work (strict)."""
    p = shape_params(e)
    bracket = f_value(p.xi, p.eta) - (t_cold / t_hot) * (e.dh / e.dl) * f_value(p.xi, p.lam)
    return bracket * (e.d1h - e.d1l) > 0


def kappa_high_t(e: SpacingEndpoints) -> float:
    """High-temperature critical ratio (dh/dl) * theta of a case-I engine.

    Other cases raise NotApplicableError naming the case (and the sign
    subcase for case II), since there the condition is not of the form
    T_h > kappa T_l.
    """
    case = classify_case(e)
    if case is Case.BOUNDARY and e.d1h == e.d1l:
        raise XiUndefinedError("boundary case d1h == d1l")
    if case is Case.II:
        try:
            sub = case2_subcase(e).value
        except BoundarySubcaseError:
            sub = "boundary"
        raise NotApplicableError(f"case II, subcase {sub}")
    if case is not Case.I:
        raise NotApplicableError(f"case {case.value}")
    return e.dh / e.dl * theta(e)


def ratio_coords(e: SpacingEndpoints) -> RatioCoords:
    return RatioCoords(e.d1l / e.d1h, e.d2l / e.d1h, e.d2h / e.d1h)


def endpoints_from_ratios(rc: RatioCoords, d1h: float = 1.0) -> SpacingEndpoints:
    return SpacingEndpoints(d1h, rc.r2h * d1h, rc.r1l * d1h, rc.r2l * d1h)


def solution_region(rc: RatioCoords) -> Region:
    """Solution I / II membership in ratio coordinates (case I presupposed)."""
    r1l, r2l, r2h = rc.r1l, rc.r2l, rc.r2h
    if not (r1l < 1 and r2h > r2l):
        return Region.NEITHER
    lhs = r2h + r1l - r2l
    prod = r1l * r2h
    if lhs > 1 and r2l > prod:
        return Region.SOLUTION_I
    if lhs < 1 and r2l < prod:
        return Region.SOLUTION_II
    return Region.NEITHER


def is_looser(e: SpacingEndpoints, kappa: float) -> bool:
    """Does T_h > kappa T_l beat both 2-level bounds while still needing T_h > T_l?"""
    return 1.0 < kappa < e.dh / e.dl and kappa < e.d1h / e.d1l


def looseness_verdict(e: SpacingEndpoints) -> LoosenessVerdict:
    case = classify_case(e)
    if case is not Case.I:
        raise NotApplicableError(f"looseness is defined for case I only, got {case.value}")
    kappa = kappa_high_t(e)
    return LoosenessVerdict(
        kappa_high_t=kappa,
        two_level_full=e.dh / e.dl,
        two_level_sub=e.d1h / e.d1l,
        looser=is_looser(e, kappa),
    )


def case2_subcase(e: SpacingEndpoints) -> Subcase:
    case = classify_case(e)
    if case is not Case.II:
        raise NotApplicableError(f"subcases are defined for case II only, got {case.value}")
    p = shape_params(e)
    f_eta = f_value(p.xi, p.eta)
    f_lam = f_value(p.xi, p.lam)
    if f_eta == 0 or f_lam == 0:
        raise BoundarySubcaseError(f"F vanishes at {p}")
    if f_eta > 0:
        return Subcase.A if f_lam > 0 else Subcase.B
    return Subcase.C if f_lam < 0 else Subcase.D
