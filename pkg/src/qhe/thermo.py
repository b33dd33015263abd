"""Gibbs-state thermodynamics and the work/heat split of a Hamiltonian change.

Thermal states are diagonal in the instantaneous eigenbasis, so a state is
just its temperature and level populations. The operator part works on dense
Hermitian matrices produced by a `HamiltonianFamily`, any callable mapping a
parameter point to a fixed-size Hermitian matrix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DegenerateEigenbasisError,
    DimensionMismatchError,
    InvalidParameterError,
    InvalidTemperatureError,
)
from .spectrum import LevelSpectrum

__all__ = [
    "ThermalState",
    "HamiltonianFamily",
    "DEGENERACY_THRESHOLD",
    "partition_function",
    "log_partition_function",
    "gibbs_populations",
    "internal_energy",
    "entropy",
    "eigensystem",
    "decompose_differential",
    "overlap_change",
    "feynman_hellman_residual",
]

HamiltonianFamily = Callable[[Sequence[float]], np.ndarray]

# relative to the spectral span
DEGENERACY_THRESHOLD = 1e-10


@dataclass(frozen=True)
class ThermalState:
    temperature: float
    populations: tuple[float, ...]

    @property
    def beta(self) -> float:
        return 1.0 / self.temperature

    def __len__(self) -> int:
        return len(self.populations)


def _check_temperature(T: float) -> float:
    T = float(T)
    if not (T > 0 and math.isfinite(T)):
        raise InvalidTemperatureError(f"temperature must be positive and finite, got {T}")
    return T


def _boltzmann_weights(energies: Sequence[float], T: float) -> list[float]:
    # shift by the lowest level so every exponent is <= 0 and the sum is >= 1
    e0 = min(energies)
    return [math.exp(-(e - e0) / T) for e in energies]


def _energies(s: LevelSpectrum | Sequence[float]) -> tuple[float, ...]:
    if isinstance(s, LevelSpectrum):
        return s.energies
    energies = tuple(float(e) for e in s)
    if not energies:
        raise DimensionMismatchError("empty spectrum")
    return energies


def log_partition_function(s: LevelSpectrum | Sequence[float], T: float) -> float:
    T = _check_temperature(T)
    energies = _energies(s)
    return -min(energies) / T + math.log(math.fsum(_boltzmann_weights(energies, T)))


def partition_function(s: LevelSpectrum | Sequence[float], T: float) -> float:
    """Z = sum_m exp(-E_m / T).

    May overflow or underflow for extreme ground offsets; use
    `log_partition_function` there.
    """
    return math.exp(log_partition_function(s, T))


def gibbs_populations(s: LevelSpectrum | Sequence[float], T: float) -> ThermalState:
    T = _check_temperature(T)
    w = _boltzmann_weights(_energies(s), T)
    z = math.fsum(w)
    return ThermalState(T, tuple(x / z for x in w))


def internal_energy(s: LevelSpectrum | Sequence[float], st: ThermalState) -> float:
    energies = _energies(s)
    if len(st.populations) != len(energies):
        raise DimensionMismatchError(
            f"{len(st.populations)} populations for {len(energies)} levels"
        )
    return math.fsum(p * e for p, e in zip(st.populations, energies))


def entropy(st: ThermalState) -> float:
    """Von Neumann entropy of a diagonal state, natural log, 0 ln 0 = 0."""
    return -math.fsum(p * math.log(p) for p in st.populations if p > 0.0)


def _phase_fix(vecs: np.ndarray) -> np.ndarray:
    """Make the largest component of every column real and positive.

    Ties (e.g. the (0, 1, -1)/sqrt 2 dark state) resolve to the first index
    within a relative 1e-8 of the maximum, so the gauge stays put as the
    parameters move.
    """
    vecs = np.array(vecs, dtype=complex)
    mags = np.abs(vecs)
    for k in range(vecs.shape[1]):
        col = mags[:, k]
        i = int(np.flatnonzero(col >= col.max() * (1 - 1e-8))[0])
        vecs[:, k] *= abs(vecs[i, k]) / vecs[i, k]
    return vecs


def eigensystem(H: np.ndarray, check_degenerate: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and phase-fixed eigenvectors (columns) of H."""
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {H.shape}")
    if not np.allclose(H, H.conj().T, rtol=0, atol=1e-12):
        raise InvalidParameterError("matrix is not Hermitian")
    vals, vecs = np.linalg.eigh(H)
    if check_degenerate:
        span = vals[-1] - vals[0]
        gaps = np.diff(vals)
        if span <= 0 or (gaps.size and gaps.min() < DEGENERACY_THRESHOLD * span):
            raise DegenerateEigenbasisError(f"degenerate spectrum {vals}")
    return vals, _phase_fix(vecs)


def decompose_differential(
    f: HamiltonianFamily, R: Sequence[float], dR: Sequence[float]
) -> tuple[np.ndarray, np.ndarray]:
    """Split the change H(R + dR) - H(R) into work and heat parts.

    Both parts are expressed in the eigenbasis of H(R): the work part is the
    diagonal of the change, the heat part its off-diagonal remainder. They
    add back to the change exactly.
    """
    R = np.asarray(R, dtype=float)
    dR = np.asarray(dR, dtype=float)
    H0 = np.asarray(f(R))
    dH = np.asarray(f(R + dR)) - H0
    _, V = eigensystem(H0)
    dH_eig = V.conj().T @ dH @ V
    work = np.diag(np.diag(dH_eig))
    heat = dH_eig - work
    return work, heat


def overlap_change(f: HamiltonianFamily, R: Sequence[float], dR: Sequence[float]) -> np.ndarray:
    """<m(R)|n(R + dR)> - delta_mn with the phase convention of `eigensystem`."""
    R = np.asarray(R, dtype=float)
    _, V0 = eigensystem(f(R))
    _, V1 = eigensystem(f(R + np.asarray(dR, dtype=float)))
    return V0.conj().T @ V1 - np.eye(V0.shape[0])


def feynman_hellman_residual(
    f: HamiltonianFamily, R: Sequence[float], direction: Sequence[float], h: float
) -> list[float]:
    """Per-level mismatch between <m|dH/du|m> and dE_m/du.

    Both derivatives are central differences with step `h` along the unit
    vector `direction`. The residual shrinks as O(h^2) until rounding takes
    over (h below ~1e-7 is not meaningful).
    """
    R = np.asarray(R, dtype=float)
    u = np.asarray(direction, dtype=float)
    norm = np.linalg.norm(u)
    if norm == 0:
        raise InvalidParameterError("direction must be nonzero")
    u = u / norm
    if not h > 0:
        raise InvalidParameterError(f"step must be positive, got {h}")
    _, V = eigensystem(f(R))
    Hp = np.asarray(f(R + h * u))
    Hm = np.asarray(f(R - h * u))
    dH = (Hp - Hm) / (2 * h)
    expect = np.real(np.einsum("im,ij,jm->m", V.conj(), dH, V))
    Ep = np.linalg.eigvalsh(Hp)
    Em = np.linalg.eigvalsh(Hm)
    dE = (Ep - Em) / (2 * h)
    return [float(x) for x in np.abs(expect - dE)]
