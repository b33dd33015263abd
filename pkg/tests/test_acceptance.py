"""Acceptance suite: one or more tests per criterion, summarized at session end.

Run alone with ``pytest tests/test_acceptance.py -v``; the terminal summary
prints one PASS/FAIL line per criterion.
"""
import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from qhe import _backend, cycle, dark_state as ds, sampling, scans
from qhe.cycle import OttoCycle, critical_hot_temperature, cycle_report, net_work, pwc_holds, strokes
from qhe.spectrum import Box, Harmonic, LevelSpectrum, family_spectrum, from_spacings, uniform_scale
from qhe.thermo import eigensystem, entropy, feynman_hellman_residual
from qhe.three_level import (
    Case,
    Region,
    SpacingEndpoints,
    Subcase,
    case2_subcase,
    classify_case,
    closed_form_work,
    f_value,
    high_t_pwc_sign,
    is_looser,
    kappa_high_t,
    looseness_verdict,
    ratio_coords,
    shape_params,
    solution_region,
    theta,
)

SEED = 20240607
acceptance = pytest.mark.acceptance


def random_three_level_cycles(n=10_000):
    e = sampling.endpoints(SEED, n, stream=1)
    t = sampling.log_uniform(sampling.generator(SEED, 2), (n, 2), 1e-1, 1e2)
    return [(SpacingEndpoints(*row), th, tl) for row, (th, tl) in zip(e, t)]


def random_n_level_cycles(n=2_000):
    rng = sampling.generator(SEED, 3)
    out = []
    for _ in range(n):
        levels = int(rng.integers(2, 7))
        hot = from_spacings(sampling.log_uniform(rng, levels - 1, 1e-2, 1e2), ground=rng.normal())
        cold = from_spacings(sampling.log_uniform(rng, levels - 1, 1e-2, 1e2), ground=rng.normal())
        th, tl = sampling.log_uniform(rng, 2, 1e-1, 1e2)
        out.append(OttoCycle(hot, cold, th, tl))
    return out


# -- 1 -------------------------------------------------------------------------------


@acceptance(1, "closed-form 3-level work equals the direct population sum")
def test_closed_form_matches_direct_sum():
    t0 = time.perf_counter()
    bad = []
    for e, th, tl in random_three_level_cycles():
        exact = net_work(e.cycle(th, tl))
        closed = closed_form_work(e, th, tl)
        if abs(closed - exact) > max(1e-12 * abs(exact), 1e-15):
            bad.append((e, th, tl, closed, exact))
    elapsed = time.perf_counter() - t0
    assert not bad, bad[:3]
    assert elapsed < 5.0


# -- 2 -------------------------------------------------------------------------------


@acceptance(2, "2-level PWC holds exactly above T_l * D_h / D_l")
def test_two_level_pwc_grid():
    t0 = time.perf_counter()
    ratios = np.linspace(1.01, 10.0, 100)
    t_ratios = np.linspace(0.5, 20.0, 100)
    t_l = 1.0
    mismatches = []
    for r in ratios:
        hot, cold = from_spacings([r]), from_spacings([1.0])
        for tr in t_ratios:
            if abs(tr - r) <= 1e-9 * r:
                continue
            if pwc_holds(OttoCycle(hot, cold, tr * t_l, t_l)) != (tr * t_l > t_l * r):
                mismatches.append((r, tr))
        t_c = critical_hot_temperature(hot, cold, t_l)
        assert t_c is not None and abs(t_c - t_l * r) <= 1e-9 * t_l * r, (r, t_c)
    assert not mismatches, mismatches[:5]
    assert time.perf_counter() - t0 < 5.0


# -- 3 -------------------------------------------------------------------------------


def _proportional_pairs():
    rng = sampling.generator(SEED, 7)
    for n in range(2, 7):
        for c in (1.3, 2.0, 3.7):
            yield f"harmonic N={n} c={c}", (
                family_spectrum(Harmonic(c, n)), family_spectrum(Harmonic(1.0, n)), c,
            )
            # E ~ 1/L^2: widening the well by sqrt(c) lowers every level by c
            yield f"box N={n} c={c}", (
                family_spectrum(Box(1.0, n)), family_spectrum(Box(math.sqrt(c), n)), c,
            )
            cold = from_spacings(sampling.log_uniform(rng, n - 1, 0.1, 10.0), ground=rng.normal())
            yield f"explicit N={n} c={c}", (uniform_scale(cold, c), cold, c)


@acceptance(3, "proportional spectra: critical ratio c and efficiency 1 - 1/c")
@pytest.mark.parametrize("label,pair", list(_proportional_pairs()), ids=lambda x: x if isinstance(x, str) else "")
def test_proportional_scaling(label, pair):
    hot, cold, c = pair
    for t_l in (0.3, 1.0, 7.0):
        t_c = critical_hot_temperature(hot, cold, t_l)
        assert t_c is not None and abs(t_c / t_l - c) <= 1e-9 * c
        for factor in (1.05, 2.0, 10.0):
            eff = cycle.efficiency(OttoCycle(hot, cold, factor * c * t_l, t_l))
            assert eff is not None and abs(eff - (1 - 1 / c)) <= 1e-9


# -- 4 -------------------------------------------------------------------------------


@acceptance(4, "high-temperature kappa converges; sign of the expansion agrees")
def test_high_temperature_kappa_convergence():
    t0 = time.perf_counter()
    for row in sampling.case_endpoints(SEED, 500, Case.I, stream=4):
        e = SpacingEndpoints(*row)
        k = kappa_high_t(e)
        gaps = []
        for scale in (1e4, 1e5):
            t_l = scale * row.max()
            t_c = critical_hot_temperature(e.hot_spectrum(), e.cold_spectrum(), t_l)
            gaps.append(abs(t_c / t_l - k) / k)
        assert gaps[0] < 1e-2, (row, gaps)
        assert gaps[1] < gaps[0], (row, gaps)
    assert time.perf_counter() - t0 < 30.0


@acceptance(4, "high-temperature kappa converges; sign of the expansion agrees")
def test_high_temperature_sign_agreement():
    t0 = time.perf_counter()
    rng = sampling.generator(SEED, 5)
    checked = 0
    by_case = {}
    for row in sampling.endpoints(SEED, 5000, stream=6):
        e = SpacingEndpoints(*row)
        if e.d1h == e.d1l:
            continue
        p = shape_params(e)
        f_eta, f_lam = f_value(p.xi, p.eta), f_value(p.xi, p.lam)
        boundary = e.dh / e.dl * f_lam / f_eta
        r = float(np.exp(rng.uniform(np.log(0.5), np.log(50.0))))
        if boundary > 0 and rng.uniform() < 0.5:
            # half the draws sit just outside the 1% band around the boundary
            r = boundary * (1 + rng.choice([-1.0, 1.0]) * rng.uniform(0.01, 0.2))
        if boundary > 0 and abs(r / boundary - 1) <= 0.01:
            continue
        # both baths at least 1e3 times the largest spacing
        t_l = 1e3 * row.max() * max(1.0, 1.0 / r)
        t_h = r * t_l
        exact = net_work(e.cycle(t_h, t_l)) > 0
        assert exact == high_t_pwc_sign(e, t_h, t_l), (row, r, boundary)
        by_case[classify_case(e)] = by_case.get(classify_case(e), 0) + 1
        checked += 1
        if checked == 1000:
            break
    assert checked == 1000
    assert set(by_case) == {Case.I, Case.II, Case.III, Case.IV}
    assert time.perf_counter() - t0 < 30.0


# -- 5 -------------------------------------------------------------------------------


def _near(a, b, band=1e-9):
    return abs(a - b) <= band * max(abs(a), abs(b), 1.0)


@acceptance(5, "solution regions match the shape-parameter and theta criteria")
def test_region_logic():
    violations = []
    skipped = 0
    for row in sampling.case_endpoints(SEED, 100_000, Case.I, stream=8):
        e = SpacingEndpoints(*row)
        rc = ratio_coords(e)
        p = shape_params(e)
        th = theta(e)
        if (
            _near(p.xi, 2) or _near(p.xi, 1) or _near(p.lam, p.eta) or _near(th, 1)
            or _near(rc.r2h + rc.r1l - rc.r2l, 1) or _near(rc.r2l, rc.r1l * rc.r2h)
        ):
            skipped += 1
            continue
        region = solution_region(rc)
        if (region is Region.SOLUTION_I) != (p.xi > 2 and p.lam > p.eta):
            violations.append(("I", row))
        if (region is Region.SOLUTION_II) != (1 < p.xi < 2 and p.lam < p.eta):
            violations.append(("II", row))
        if (region is not Region.NEITHER) != (th < 1):
            violations.append(("theta", row))
    assert not violations, violations[:5]
    assert skipped < 10


# -- 6 -------------------------------------------------------------------------------


def _critical_ratios(rows):
    """Exact T_h/T_l at T_l = 1e4 * max spacing; NaN where no crossing exists."""
    rows = np.ascontiguousarray(rows)
    cols = [np.ascontiguousarray(rows[:, j]) for j in range(4)]
    status, ratio = _backend.kernels.critical_ratio3_batch(
        *cols, 1e4 * rows.max(axis=1), cycle.BRACKET[0], cycle.BRACKET[1], cycle.N_SCAN, cycle.RTOL
    )
    assert not np.any(status == _backend.MULTIPLE_ROOTS)
    return np.where(status == _backend.FOUND, ratio, np.nan)


@acceptance(6, "only case I can beat the 2-level bound; case II subcases b and c")
@pytest.mark.parametrize("case", [Case.II, Case.III, Case.IV], ids=lambda c: f"case_{c.value}")
def test_no_looser_outside_case_one(case):
    rows = sampling.case_endpoints(SEED, 100_000, case, stream=20 + ["II", "III", "IV"].index(case.value))
    kappas = np.full(len(rows), np.nan)
    exact_rows = []
    for i, row in enumerate(rows):
        e = SpacingEndpoints(*row)
        th = cycle.high_temperature_threshold(e.hot_spectrum(), e.cold_spectrum())
        if th.kind == "above":
            kappas[i] = th.ratio
        else:
            exact_rows.append(i)
    if exact_rows:
        idx = np.array(exact_rows)
        kappas[idx] = _critical_ratios(rows[idx])
    looser = [
        row for row, k in zip(rows, kappas) if np.isfinite(k) and is_looser(SpacingEndpoints(*row), k)
    ]
    assert not looser, looser[:3]


@acceptance(6, "only case I can beat the 2-level bound; case II subcases b and c")
def test_solution_one_is_looser():
    witness = looseness_verdict(SpacingEndpoints(1.0, 1.5, 0.5, 0.8))
    assert witness.looser
    checked = 0
    for row in sampling.case_endpoints(SEED, 100_000, Case.I, stream=30):
        e = SpacingEndpoints(*row)
        if solution_region(ratio_coords(e)) is not Region.SOLUTION_I:
            continue
        v = looseness_verdict(e)
        if v.kappa_high_t < e.d1h / e.d1l:
            assert v.looser, row
            checked += 1
    assert checked > 1000


@acceptance(6, "only case I can beat the 2-level bound; case II subcases b and c")
def test_case_two_subcases():
    counts = {s: 0 for s in Subcase}
    for row in sampling.case_endpoints(SEED, 100_000, Case.II, stream=31):
        counts[case2_subcase(SpacingEndpoints(*row))] += 1
    assert counts[Subcase.B] == 0
    assert counts[Subcase.A] > 0 and counts[Subcase.C] > 0 and counts[Subcase.D] > 0

    found = 0
    batch = 0
    while found < 100_000:
        for row in sampling.case_endpoints(SEED, 100_000, Case.II, stream=1000 + batch):
            e = SpacingEndpoints(*row)
            if case2_subcase(e) is not Subcase.C:
                continue
            assert not e.dh / e.dl * theta(e) > 1, row
            found += 1
            if found == 100_000:
                break
        batch += 1


# -- 7 -------------------------------------------------------------------------------


@acceptance(7, "kappa lies between the two spacing ratios")
def test_kappa_bounds():
    violations = []
    for row in sampling.case_endpoints(SEED, 100_000, Case.I, stream=40):
        k = kappa_high_t(SpacingEndpoints(*row))
        r1, r2 = row[0] / row[2], row[1] / row[3]
        if not min(r1, r2) <= k <= max(r1, r2):
            violations.append((row, k))
    assert not violations, violations[:5]


# -- 8 -------------------------------------------------------------------------------


def _dark_points(n, stream):
    rng = sampling.generator(SEED, stream)
    return [ds.DarkStateParams(rng.uniform(-10, 10), 10.0 * (1.0 - rng.uniform())) for _ in range(n)]


@acceptance(8, "dark-state spectrum, dark vector, solution regions and triangle")
def test_dark_state_spectrum():
    for p in _dark_points(10_000, 50):
        h = ds.hamiltonian(p)
        numeric = np.linalg.eigvalsh(h)
        s = ds.spectrum_closed_form(p)
        closed = np.array([s.e_minus, s.e_zero, s.e_plus])
        assert np.max(np.abs(closed - numeric)) < 1e-12, p
        vecs = ds.eigenvectors_closed_form(p)
        for j, val in enumerate(closed):
            assert np.linalg.norm(h @ vecs[:, j] - val * vecs[:, j]) < 1e-12, p
        vals, v = eigensystem(h)
        dark = v[:, int(np.argmin(np.abs(vals)))]
        assert abs(np.vdot(ds.DARK_STATE, dark)) > 1 - 1e-12, p


@acceptance(8, "dark-state spectrum, dark vector, solution regions and triangle")
def test_dark_regions_imply_case_one():
    rng = sampling.generator(SEED, 51)
    hits = {1: 0, 2: 0}
    for _ in range(10_000):
        sign = 1.0 if rng.uniform() < 0.5 else -1.0
        dh = sign * rng.uniform(0.1, 10.0)
        oh = rng.uniform(0.01, 10.0)
        # cold point drawn inside the wedge half of the time
        dl = sign * rng.uniform(0.0, abs(dh)) if rng.uniform() < 0.5 else rng.uniform(-10, 10)
        ol = abs(dl) * abs(oh / dh) * rng.uniform() if rng.uniform() < 0.5 else rng.uniform(0.01, 10.0)
        if ol == 0 or dl == 0:
            continue
        hot, cold = ds.DarkStateParams(dh, oh), ds.DarkStateParams(dl, ol)
        e = ds.to_endpoints(hot, cold)
        for which, member, label in (
            (1, ds.solution1_region(hot, cold), Region.SOLUTION_I),
            (2, ds.solution2_region(hot, cold), Region.SOLUTION_II),
        ):
            if member:
                hits[which] += 1
                assert classify_case(e) is Case.I, (hot, cold)
                assert solution_region(ratio_coords(e)) is label, (hot, cold)
    assert hits[1] > 1000 and hits[2] > 1000


@acceptance(8, "dark-state spectrum, dark vector, solution regions and triangle")
def test_dark_triangle_raster():
    doc = {
        "hot": {"delta": 2.0, "omega": 2.0},
        "grid": {
            "delta_l": {"min": -3, "max": 3, "steps": 301},
            "omega_l": {"min": 0.01, "max": 3, "steps": 300},
        },
        "temperatures": {"t_h": 100.0, "t_l": 10.0},
    }
    cfg = scans.load_config("scan-dark", doc, workers=4)
    rows = scans.run_scan_dark(cfg)
    assert len(rows) == 301 * 300
    d_omega = float(np.diff(np.linspace(0.01, 3, 300)).max())
    members = {}
    for r in rows:
        if r["in_solution1"]:
            members.setdefault(r["delta_l"], []).append(r["omega_l"])
    assert members
    assert all(0 < d < 2 for d in members)
    for d in (x for x in np.linspace(-3, 3, 301) if 0 < x < 2):
        top = max(members.get(d, [0.0]))
        # boundary of the wedge is the line omega_l = delta_l
        assert abs(top - d) <= d_omega, (d, top)


# -- 9 -------------------------------------------------------------------------------


@acceptance(9, "first law and adiabatic entropy invariance")
def test_first_law_and_entropy():
    cycles = [e.cycle(th, tl) for e, th, tl in random_three_level_cycles()] + random_n_level_cycles()
    for c in cycles:
        r = cycle_report(c)
        assert abs(r.net_work - (r.heat_in - r.heat_out)) <= 1e-12 * max(1.0, abs(r.heat_in)), c
        s1, s2, s3, s4 = strokes(c)
        assert s2.state.populations == s1.state.populations
        assert s4.state.populations == s3.state.populations
        assert entropy(s2.state) == entropy(s1.state) == r.entropy_hot
        assert entropy(s4.state) == entropy(s3.state) == r.entropy_cold


# -- 10 ------------------------------------------------------------------------------


@acceptance(10, "Feynman-Hellman residual converges at second order")
def test_feynman_hellman_order():
    rng = sampling.generator(SEED, 60)
    accepted = rejected = 0
    while accepted < 20:
        R = [rng.uniform(-5, 5), rng.uniform(0.5, 5)]
        u = rng.normal(size=2)
        coarse = feynman_hellman_residual(ds.hamiltonian_family, R, u, 1e-3)
        fine = feynman_hellman_residual(ds.hamiltonian_family, R, u, 5e-4)
        # the dark level is exactly linear in (delta, omega): rounding only
        assert coarse[1] < 1e-13 and fine[1] < 1e-13
        pairs = [(coarse[m], fine[m]) for m in (0, 2)]
        # rounding floor is ~eps*|E|/h ~ 5e-13; the order is only measurable well above it
        if min(c for c, _ in pairs) < 5e-11:
            rejected += 1
            continue
        for c, f in pairs:
            assert 3.2 <= c / f <= 4.8, (R, u, c, f)
        accepted += 1
    assert rejected < accepted


# -- 11 ------------------------------------------------------------------------------

CLI_CONFIGS = {
    "scan-region3": {
        "grid": {
            "r1l": {"min": 0.05, "max": 1.2, "steps": 6},
            "r2l": {"min": 0.1, "max": 2.0, "steps": 5},
            "r2h": {"min": 0.1, "max": 2.0, "steps": 5},
        }
    },
    "scan-dark": {
        "hot": {"delta": 2.0, "omega": 2.0},
        "grid": {"delta_l": {"min": -3, "max": 3, "steps": 13}, "omega_l": {"min": 0, "max": 3, "steps": 7}},
        "temperatures": {"t_h": 100.0, "t_l": 10.0},
    },
    "work-curve": {
        "hot": {"spacings": [1.0, 1.5]},
        "cold": {"spacings": [0.5, 0.8]},
        "temperatures": {"t_l": 1.0},
        "grid": {"t_h": {"min": 0.5, "max": 10, "steps": 40, "scale": "log"}},
    },
    "limit-study": {
        "endpoints": {"d1h": 1.0, "d2h": 1.5, "d1l": 0.5, "d2l": 0.8},
        "ladder": {"min": 10, "max": 10000, "steps": 4, "unit": "delta_h"},
    },
    "cycle-report": {
        "hot": {"dark_state": {"delta": 2.0, "omega": 2.0}},
        "cold": {"dark_state": {"delta": 1.0, "omega": 0.5}},
        "temperatures": {"t_h": 100.0, "t_l": 10.0},
    },
}


def _qhe(*args):
    return subprocess.run([sys.executable, "-m", "qhe.cli", *args], capture_output=True, check=False)


@acceptance(11, "CLI output is byte-stable; 50^3 region scan under 60 s")
@pytest.mark.parametrize("command", list(CLI_CONFIGS))
def test_cli_determinism(command, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(CLI_CONFIGS[command]))
    outs = []
    for extra in ([], [], ["--workers", "3"]):
        out = tmp_path / f"out{len(outs)}"
        proc = _qhe(command, "--config", str(cfg), "--out", str(out), *extra)
        assert proc.returncode == 0, proc.stderr.decode()
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]
    assert outs[0]


@acceptance(11, "CLI output is byte-stable; 50^3 region scan under 60 s")
def test_region3_scan_runtime(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "grid": {
            "r1l": {"min": 0.02, "max": 0.98, "steps": 50},
            "r2l": {"min": 0.05, "max": 3.0, "steps": 50},
            "r2h": {"min": 0.05, "max": 3.0, "steps": 50},
        }
    }))
    out = tmp_path / "region3.csv"
    t0 = time.perf_counter()
    proc = _qhe("scan-region3", "--config", str(cfg), "--out", str(out))
    elapsed = time.perf_counter() - t0
    assert proc.returncode == 0, proc.stderr.decode()
    assert elapsed < 60.0
    lines = out.read_text().splitlines()
    assert len(lines) == 1 + 50**3


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
