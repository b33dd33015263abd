"""Lambda-type 3-level atom driven by one classical field.

Basis order is (|e>, |1>, |2>). The excited state sits at the common
detuning delta and couples to both ground states with the same real Rabi
frequency omega; only |omega| enters the spectrum. The antisymmetric ground
combination (|1> - |2>)/sqrt 2 decouples from the field and stays at zero
energy for every (delta, omega).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateSpacingError, InvalidParameterError
from .spectrum import LevelSpectrum
from .three_level import SpacingEndpoints

__all__ = [
    "DarkStateParams",
    "DarkStateSpectrum",
    "DARK_STATE",
    "hamiltonian",
    "hamiltonian_family",
    "spectrum_closed_form",
    "eigenvectors_closed_form",
    "to_endpoints",
    "case1_constraints",
    "solution1_region",
    "solution2_region",
]

DARK_STATE = np.array([0.0, 1.0, -1.0]) / math.sqrt(2.0)


@dataclass(frozen=True)
class DarkStateParams:
    delta: float
    omega: float

    def __post_init__(self):
        delta, omega = float(self.delta), float(self.omega)
        if not (math.isfinite(delta) and math.isfinite(omega)):
            raise InvalidParameterError(f"non-finite control point ({delta}, {omega})")
        if omega < 0:
            raise InvalidParameterError(f"Rabi frequency magnitude must be >= 0, got {omega}")
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "omega", omega)

    @property
    def k(self) -> float:
        return math.hypot(self.delta, math.sqrt(8.0) * self.omega)


@dataclass(frozen=True)
class DarkStateSpectrum:
    e_minus: float
    e_zero: float
    e_plus: float
    k: float

    @property
    def spacing1(self) -> float:
        return self.e_zero - self.e_minus

    @property
    def spacing2(self) -> float:
        return self.e_plus - self.e_zero

    def level_spectrum(self) -> LevelSpectrum:
        if not (self.spacing1 > 0 and self.spacing2 > 0):
            raise DegenerateSpacingError(f"zero level spacing in {self}")
        return LevelSpectrum((self.e_minus, self.e_zero, self.e_plus))


def _matrix(delta: float, omega: float) -> np.ndarray:
    return np.array(
        [[delta, omega, omega], [omega, 0.0, 0.0], [omega, 0.0, 0.0]], dtype=complex
    )


def hamiltonian(p: DarkStateParams) -> np.ndarray:
    return _matrix(p.delta, p.omega)


def hamiltonian_family(R: Sequence[float]) -> np.ndarray:
    """Family over R = (delta, omega), usable by the `thermo` operator tools."""
    return _matrix(float(R[0]), float(R[1]))


def spectrum_closed_form(p: DarkStateParams) -> DarkStateSpectrum:
    delta, omega = p.delta, p.omega
    k = p.k
    # the small root is formed as 4|omega|^2 / (K + |delta|) to avoid cancellation
    if delta >= 0:
        e_plus = 0.5 * (delta + k)
        e_minus = -(4.0 * omega * omega / (k + delta)) if omega > 0 else 0.0
    else:
        e_minus = 0.5 * (delta - k)
        e_plus = 4.0 * omega * omega / (k - delta)
    return DarkStateSpectrum(e_minus, 0.0, e_plus, k)


def eigenvectors_closed_form(p: DarkStateParams) -> np.ndarray:
    """Columns are eigenvectors for (e_minus, 0, e_plus); requires omega > 0."""
    if not p.omega > 0:
        raise DegenerateSpacingError("eigenvectors are not unique at omega = 0")
    s = spectrum_closed_form(p)
    cols = []
    for e in (s.e_minus, s.e_plus):
        v = np.array([e, p.omega, p.omega])
        cols.append(v / np.linalg.norm(v))
    return np.column_stack([cols[0], DARK_STATE, cols[1]])


def to_endpoints(hot: DarkStateParams, cold: DarkStateParams) -> SpacingEndpoints:
    for name, p in (("hot", hot), ("cold", cold)):
        if not p.omega > 0:
            raise DegenerateSpacingError(f"{name} point has omega = 0: spacings degenerate")
    sh = spectrum_closed_form(hot)
    sl = spectrum_closed_form(cold)
    return SpacingEndpoints(sh.spacing1, sh.spacing2, sl.spacing1, sl.spacing2)


def case1_constraints(hot: DarkStateParams, cold: DarkStateParams) -> bool:
    """Both spacings shrink from hot to cold, written through K and delta."""
    e = to_endpoints(hot, cold)
    # (K - delta)/2 and (K + delta)/2 are exactly the two spacings
    return e.d1l / e.d1h < 1 and e.d2l / e.d2h < 1


def solution1_region(hot: DarkStateParams, cold: DarkStateParams) -> bool:
    if not (hot.delta > cold.delta > 0):
        return False
    return abs(cold.omega / cold.delta) < abs(hot.omega / hot.delta)


def solution2_region(hot: DarkStateParams, cold: DarkStateParams) -> bool:
    if not (hot.delta < cold.delta < 0):
        return False
    return abs(cold.omega / cold.delta) < abs(hot.omega / hot.delta)
