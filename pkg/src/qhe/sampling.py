"""Reproducible random 3-level endpoints for property checks.

Draws come from a Philox stream keyed by (seed, stream); row i of a batch
depends only on the key and i, never on how many rows are requested or on
evaluation order.
"""
from __future__ import annotations

import numpy as np

from .three_level import Case

SPACING_RANGE = (1e-2, 1e2)


def generator(seed: int, stream: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, stream])))


def log_uniform(rng: np.random.Generator, shape, low: float, high: float) -> np.ndarray:
    return np.exp(rng.uniform(np.log(low), np.log(high), size=shape))


def endpoints(seed: int, n: int, stream: int = 0, spacing_range=SPACING_RANGE) -> np.ndarray:
    """(n, 4) array of (d1h, d2h, d1l, d2l), each log-uniform on `spacing_range`."""
    return log_uniform(generator(seed, stream), (n, 4), *spacing_range)


def case_endpoints(
    seed: int, n: int, case: Case, stream: int = 0, spacing_range=SPACING_RANGE, gap: float = 1e-9
) -> np.ndarray:
    """(n, 4) endpoints forced into `case` by ordering each hot/cold pair.

    Pairs closer than a relative `gap` are redrawn so no sample sits on a
    case boundary.
    """
    lower_down = case in (Case.I, Case.II)
    upper_down = case in (Case.I, Case.III)
    rng = generator(seed, stream)
    out = np.empty((0, 4))
    while out.shape[0] < n:
        raw = log_uniform(rng, (n, 4), *spacing_range)
        a1, b1 = raw[:, 0], raw[:, 1]
        a2, b2 = raw[:, 2], raw[:, 3]
        ok = (np.abs(a1 - b1) > gap * np.maximum(a1, b1)) & (
            np.abs(a2 - b2) > gap * np.maximum(a2, b2)
        )
        hi1, lo1 = np.maximum(a1, b1), np.minimum(a1, b1)
        hi2, lo2 = np.maximum(a2, b2), np.minimum(a2, b2)
        d1h, d1l = (hi1, lo1) if lower_down else (lo1, hi1)
        d2h, d2l = (hi2, lo2) if upper_down else (lo2, hi2)
        block = np.column_stack([d1h, d2h, d1l, d2l])[ok]
        out = np.vstack([out, block])
    return out[:n]
