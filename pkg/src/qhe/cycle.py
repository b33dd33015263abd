"""Four-stroke quantum Otto cycle between two thermal baths.

Stroke 1 equilibrates the hot spectrum with the bath at ``t_hot``; stroke 2
deforms it into the cold spectrum with populations frozen; stroke 3
equilibrates with the bath at ``t_cold``; stroke 4 deforms back. Energies
in the work and heat sums are measured from each spectrum's own ground
level.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from . import _backend
from .errors import DimensionMismatchError, InvalidTemperatureError, MultipleRootsError
from .spectrum import LevelSpectrum
from .thermo import ThermalState, entropy, gibbs_populations

__all__ = [
    "OttoCycle",
    "CycleReport",
    "StrokeState",
    "HighTemperatureThreshold",
    "BRACKET",
    "N_SCAN",
    "RTOL",
    "strokes",
    "net_work",
    "heat_absorbed",
    "heat_released",
    "efficiency",
    "pwc_holds",
    "critical_hot_temperature",
    "high_temperature_threshold",
    "cycle_report",
]

# critical-temperature search: T_h in [T_l * BRACKET[0], T_l * BRACKET[1]]
BRACKET = (1.0 + 1e-9, 1e6)
N_SCAN = 64
RTOL = 1e-14


@dataclass(frozen=True)
class OttoCycle:
    hot: LevelSpectrum
    cold: LevelSpectrum
    t_hot: float
    t_cold: float

    def __post_init__(self):
        if len(self.hot) != len(self.cold):
            raise DimensionMismatchError(
                f"hot spectrum has {len(self.hot)} levels, cold has {len(self.cold)}"
            )
        for name in ("t_hot", "t_cold"):
            t = float(getattr(self, name))
            if not (t > 0 and math.isfinite(t)):
                raise InvalidTemperatureError(f"{name} must be positive, got {t}")
            object.__setattr__(self, name, t)


@dataclass(frozen=True)
class CycleReport:
    net_work: float
    heat_in: float
    heat_out: float
    efficiency: Optional[float]
    pwc: bool
    entropy_hot: float
    entropy_cold: float


@dataclass(frozen=True)
class StrokeState:
    """Spectrum and populations at the end of one stroke."""

    stroke: int
    spectrum: LevelSpectrum
    state: ThermalState


@dataclass(frozen=True)
class HighTemperatureThreshold:
    """Leading-order positive-work condition when both baths are hot.

    kind is one of ``"above"`` (T_h > ratio * T_l), ``"below"``
    (T_h < ratio * T_l), ``"always"`` or ``"never"``.
    """

    kind: str
    ratio: Optional[float] = None


def strokes(c: OttoCycle) -> tuple[StrokeState, StrokeState, StrokeState, StrokeState]:
    hot_eq = gibbs_populations(c.hot, c.t_hot)
    cold_eq = gibbs_populations(c.cold, c.t_cold)
    # adiabatic strokes hand the populations on untouched
    return (
        StrokeState(1, c.hot, hot_eq),
        StrokeState(2, c.cold, hot_eq),
        StrokeState(3, c.cold, cold_eq),
        StrokeState(4, c.hot, cold_eq),
    )


def _quantities(c: OttoCycle) -> tuple[float, float, float]:
    return _backend.kernels.otto_quantities(c.hot.energies, c.cold.energies, c.t_hot, c.t_cold)


def net_work(c: OttoCycle) -> float:
    """Work done by the substance per cycle: sum_m (p_m^h - p_m^l)(E_m^h - E_m^l)."""
    return _quantities(c)[0]


def heat_absorbed(c: OttoCycle) -> float:
    """Heat taken from the hot bath in stroke 1."""
    return _quantities(c)[1]


def heat_released(c: OttoCycle) -> float:
    """Heat given to the cold bath in stroke 3."""
    return _quantities(c)[2]


def efficiency(c: OttoCycle) -> Optional[float]:
    w, q, _ = _quantities(c)
    if w > 0 and q > 0:
        return w / q
    return None


def pwc_holds(c: OttoCycle) -> bool:
    return net_work(c) > 0


def critical_hot_temperature(
    hot: LevelSpectrum, cold: LevelSpectrum, t_cold: float
) -> Optional[float]:
    """Hot-bath temperature at which the net work changes sign.

    Searches T_h over ``BRACKET`` times ``t_cold``. Returns None when the
    work does not change sign there and raises MultipleRootsError when the
    pre-scan sees more than one crossing.
    """
    if len(hot) != len(cold):
        raise DimensionMismatchError(f"{len(hot)} hot levels vs {len(cold)} cold levels")
    t_cold = float(t_cold)
    if not (t_cold > 0 and math.isfinite(t_cold)):
        raise InvalidTemperatureError(f"t_cold must be positive, got {t_cold}")
    status, t = _backend.kernels.critical_temperature(
        hot.energies,
        cold.energies,
        t_cold,
        t_cold * BRACKET[0],
        t_cold * BRACKET[1],
        N_SCAN,
        RTOL,
    )
    if status == _backend.MULTIPLE_ROOTS:
        raise MultipleRootsError(
            f"net work changes sign more than once for T_h in "
            f"[{t_cold * BRACKET[0]:g}, {t_cold * BRACKET[1]:g}]"
        )
    if status == _backend.NOT_FOUND:
        return None
    return t


def high_temperature_threshold(hot: LevelSpectrum, cold: LevelSpectrum) -> HighTemperatureThreshold:
    """First-order expansion of the net work in 1/T for any number of levels.

    With p_m ~ (1 - (E_m - <E>)/T)/N the work is proportional to
    A/T_l - B/T_h, where A = sum (E^l - <E^l>) dE and B = sum (E^h - <E^h>) dE.
    """
    if len(hot) != len(cold):
        raise DimensionMismatchError(f"{len(hot)} hot levels vs {len(cold)} cold levels")
    eh = hot.relative()
    el = cold.relative()
    n = len(eh)
    mean_h = math.fsum(eh) / n
    mean_l = math.fsum(el) / n
    de = [h - l for h, l in zip(eh, el)]
    a = math.fsum((l - mean_l) * d for l, d in zip(el, de))
    b = math.fsum((h - mean_h) * d for h, d in zip(eh, de))
    if a > 0:
        return HighTemperatureThreshold("above", b / a) if b > 0 else HighTemperatureThreshold("always")
    if a < 0:
        return HighTemperatureThreshold("below", b / a) if b < 0 else HighTemperatureThreshold("never")
    return HighTemperatureThreshold("always") if b < 0 else HighTemperatureThreshold("never")


def cycle_report(c: OttoCycle) -> CycleReport:
    w, qin, qout = _quantities(c)
    st = strokes(c)
    return CycleReport(
        net_work=w,
        heat_in=qin,
        heat_out=qout,
        efficiency=w / qin if (w > 0 and qin > 0) else None,
        pwc=w > 0,
        entropy_hot=entropy(st[0].state),
        entropy_cold=entropy(st[2].state),
    )
