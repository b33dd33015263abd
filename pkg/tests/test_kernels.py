"""Compiled and pure-Python kernels must agree; the compiled one is optional."""
import os
import subprocess
import sys

import numpy as np
import pytest

from qhe import _backend, _kernels_py, sampling

compiled = pytest.importorskip("qhe._kernels")


@pytest.mark.skipif(os.environ.get("QHE_PURE_PYTHON") in ("1", "true", "yes"), reason="fallback forced")
def test_backend_prefers_compiled():
    assert _backend.NAME == "cython"
    assert _backend.kernels is compiled


def test_env_forces_python():
    env = dict(os.environ, QHE_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import qhe; print(qhe.BACKEND)"], env=env, capture_output=True, text=True
    )
    assert out.stdout.strip() == "python"


def _random_cases(n=300):
    rng = sampling.generator(77, 0)
    for _ in range(n):
        levels = int(rng.integers(2, 7))
        eh = tuple(np.concatenate([[rng.normal()], sampling.log_uniform(rng, levels - 1, 1e-2, 1e2)]).cumsum())
        el = tuple(np.concatenate([[rng.normal()], sampling.log_uniform(rng, levels - 1, 1e-2, 1e2)]).cumsum())
        th, tl = sampling.log_uniform(rng, 2, 1e-2, 1e4)
        yield eh, el, th, tl


def test_otto_quantities_agree():
    for eh, el, th, tl in _random_cases():
        a = compiled.otto_quantities(eh, el, th, tl)
        b = _kernels_py.otto_quantities(eh, el, th, tl)
        assert a == pytest.approx(b, rel=1e-13, abs=1e-300)


def test_critical_temperature_agrees():
    for eh, el, _, tl in _random_cases(100):
        sa, ta = compiled.critical_temperature(eh, el, tl, tl * (1 + 1e-9), tl * 1e6, 64, 1e-14)
        sb, tb = _kernels_py.critical_temperature(eh, el, tl, tl * (1 + 1e-9), tl * 1e6, 64, 1e-14)
        assert sa == sb
        if sa == _backend.FOUND:
            assert ta == pytest.approx(tb, rel=1e-12)


def test_batches_agree():
    rows = sampling.endpoints(5, 200)
    cols = [np.ascontiguousarray(rows[:, j]) for j in range(4)]
    th = np.full(200, 3.0)
    tl = np.full(200, 1.0)
    assert compiled.net_work3_batch(*cols, th, tl) == pytest.approx(
        _kernels_py.net_work3_batch(*cols, th, tl), rel=1e-13, abs=1e-300
    )
    sa, ra = compiled.critical_ratio3_batch(*cols, tl, 1 + 1e-9, 1e6, 64, 1e-14)
    sb, rb = _kernels_py.critical_ratio3_batch(*cols, tl, 1 + 1e-9, 1e6, 64, 1e-14)
    assert np.array_equal(sa, sb)
    found = sa == _backend.FOUND
    assert found.any()
    assert ra[found] == pytest.approx(rb[found], rel=1e-12)
    assert np.isnan(ra[~found]).all() and np.isnan(rb[~found]).all()


def test_extreme_temperatures_finite():
    for k in (compiled, _kernels_py):
        w, q, _ = k.otto_quantities((0.0, 1.0, 3.0), (0.0, 0.5, 1.0), 1e-6, 1e-7)
        assert np.isfinite([w, q]).all()
        w, q, _ = k.otto_quantities((0.0, 1.0, 3.0), (0.0, 0.5, 1.0), 1e12, 1e11)
        assert np.isfinite([w, q]).all() and w > 0
