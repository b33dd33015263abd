"""Discrete energy spectra of the working substance.

Natural units throughout (k_B = hbar = 1). The ground energy is arbitrary;
only spacings and populations enter the cycle quantities.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

from .errors import InvalidParameterError, InvalidScaleError, InvalidSpacingError

__all__ = [
    "LevelSpectrum",
    "Explicit",
    "Harmonic",
    "Box",
    "SpectrumFamily",
    "spacings",
    "from_spacings",
    "uniform_scale",
    "family_spectrum",
]


@dataclass(frozen=True)
class LevelSpectrum:
    """Strictly increasing energy levels, at least two of them."""

    energies: tuple[float, ...]

    def __post_init__(self):
        energies = tuple(float(e) for e in self.energies)
        object.__setattr__(self, "energies", energies)
        if len(energies) < 2:
            raise InvalidSpacingError("a spectrum needs at least two levels")
        if not all(math.isfinite(e) for e in energies):
            raise InvalidSpacingError(f"non-finite energy in {energies}")
        for lower, upper in zip(energies, energies[1:]):
            if not upper > lower:
                raise InvalidSpacingError(
                    f"energies must be strictly increasing, got {energies}"
                )

    def __len__(self) -> int:
        return len(self.energies)

    @property
    def ground(self) -> float:
        return self.energies[0]

    def relative(self) -> tuple[float, ...]:
        """Energies measured from the ground level."""
        e0 = self.energies[0]
        return tuple(e - e0 for e in self.energies)


@dataclass(frozen=True)
class Explicit:
    levels: tuple[float, ...]


@dataclass(frozen=True)
class Harmonic:
    """E_n = (n + 1/2) * frequency, n = 0 .. levels-1."""

    frequency: float
    levels: int


@dataclass(frozen=True)
class Box:
    """Infinite square well of the given width, unit mass.

    E_n = (n + 1)^2 pi^2 / (2 width^2), n = 0 .. levels-1.
    """

    width: float
    levels: int


SpectrumFamily = Union[Explicit, Harmonic, Box]


def spacings(s: LevelSpectrum) -> tuple[float, ...]:
    e = s.energies
    return tuple(e[i + 1] - e[i] for i in range(len(e) - 1))


def from_spacings(deltas: Sequence[float], ground: float = 0.0) -> LevelSpectrum:
    """Build a spectrum by stacking `deltas` on top of `ground`."""
    deltas = [float(d) for d in deltas]
    if not deltas:
        raise InvalidSpacingError("need at least one spacing")
    for d in deltas:
        if not (d > 0 and math.isfinite(d)):
            raise InvalidSpacingError(f"spacings must be positive and finite, got {deltas}")
    energies = [float(ground)]
    for d in deltas:
        energies.append(energies[-1] + d)
    return LevelSpectrum(tuple(energies))


def uniform_scale(s: LevelSpectrum, c: float) -> LevelSpectrum:
    if not (c > 0 and math.isfinite(c)):
        raise InvalidScaleError(f"scale factor must be positive, got {c}")
    return LevelSpectrum(tuple(c * e for e in s.energies))


def family_spectrum(f: SpectrumFamily) -> LevelSpectrum:
    if isinstance(f, Explicit):
        return LevelSpectrum(tuple(f.levels))
    if isinstance(f, Harmonic):
        if not f.frequency > 0:
            raise InvalidParameterError(f"frequency must be positive, got {f.frequency}")
        _check_levels(f.levels)
        return LevelSpectrum(tuple((n + 0.5) * f.frequency for n in range(f.levels)))
    if isinstance(f, Box):
        if not f.width > 0:
            raise InvalidParameterError(f"width must be positive, got {f.width}")
        _check_levels(f.levels)
        unit = math.pi**2 / (2.0 * f.width**2)
        return LevelSpectrum(tuple((n + 1) ** 2 * unit for n in range(f.levels)))
    raise InvalidParameterError(f"unknown spectrum family {f!r}")


def _check_levels(n: int) -> None:
    if int(n) != n or n < 2:
        raise InvalidParameterError(f"number of levels must be an integer >= 2, got {n}")
