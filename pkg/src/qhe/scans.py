"""Grid sweeps and report documents behind the ``qhe`` command line.

Every command takes one JSON config. Grids are objects keyed by axis name,
each axis either ``{"min", "max", "steps"[, "scale": "linear"|"log"]}`` or
``{"values": [...]}``; cells are visited row-major in the order the axes
are declared. Records are plain dicts whose keys are the command's fixed
column list.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Any, Callable, Iterable, Optional

import numpy as np

from . import dark_state as ds
from .cycle import OttoCycle, critical_hot_temperature, cycle_report, high_temperature_threshold, strokes
from .errors import ConfigError, QHEError, XiUndefinedError
from .spectrum import Box, Harmonic, LevelSpectrum, family_spectrum, from_spacings
from .three_level import (
    Case,
    Region,
    RatioCoords,
    SpacingEndpoints,
    case2_subcase,
    classify_case,
    endpoints_from_ratios,
    f_value,
    is_looser,
    kappa_high_t,
    looseness_verdict,
    ratio_coords,
    shape_params,
    solution_region,
    theta,
)

COMMANDS = ("scan-region3", "scan-dark", "work-curve", "limit-study", "cycle-report")
DEFAULT_SEED = 42

COLUMNS = {
    "scan-region3": [
        "r1l", "r2l", "r2h", "presup_r1l_lt_1", "presup_r2h_gt_r2l", "case", "region",
        "xi", "eta", "lam", "theta", "kappa_high_t", "looser", "status",
    ],
    "scan-dark": [
        "delta_l", "omega_l", "delta1_l", "delta2_l", "case", "case1_constraints",
        "in_solution1", "in_solution2", "kappa_high_t", "looser", "net_work", "pwc", "status",
    ],
    "work-curve": ["t_h", "net_work", "heat_in", "efficiency", "pwc", "status"],
    "limit-study": ["t_l", "kappa_exact", "kappa_high_t", "rel_gap", "case", "status"],
}

GRID_AXES = {
    "scan-region3": ("r1l", "r2l", "r2h"),
    "scan-dark": ("delta_l", "omega_l"),
    "work-curve": ("t_h",),
}


class ValidationError(QHEError):
    """Emitted records contradict each other."""


@dataclass(frozen=True)
class Axis:
    name: str
    values: tuple[float, ...]


@dataclass
class ScanConfig:
    command: str
    params: dict
    out: Optional[str] = None
    fmt: str = "csv"
    seed: int = DEFAULT_SEED
    workers: int = 1
    axes: list[Axis] = field(default_factory=list)


# -- config ------------------------------------------------------------------


def _number(value: Any, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{what} must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"{what} must be finite, got {value}")
    return value


def _require(block: Any, key: str, where: str) -> Any:
    if not isinstance(block, dict) or key not in block:
        raise ConfigError(f"missing '{key}' in {where}")
    return block[key]


def parse_axis(name: str, spec: Any) -> Axis:
    if not isinstance(spec, dict):
        raise ConfigError(f"axis '{name}' must be an object")
    if "values" in spec:
        vals = spec["values"]
        if not isinstance(vals, list) or not vals:
            raise ConfigError(f"axis '{name}': values must be a non-empty list")
        return Axis(name, tuple(_number(v, f"axis '{name}' value") for v in vals))
    lo = _number(_require(spec, "min", f"axis '{name}'"), f"axis '{name}' min")
    hi = _number(_require(spec, "max", f"axis '{name}'"), f"axis '{name}' max")
    steps = _require(spec, "steps", f"axis '{name}'")
    if isinstance(steps, bool) or not isinstance(steps, int) or steps < 2:
        raise ConfigError(f"axis '{name}': steps must be an integer >= 2, got {steps!r}")
    if not lo < hi:
        raise ConfigError(f"axis '{name}': min must be < max, got {lo} >= {hi}")
    scale = spec.get("scale", "linear")
    if scale == "linear":
        vals = np.linspace(lo, hi, steps)
    elif scale == "log":
        if lo <= 0:
            raise ConfigError(f"axis '{name}': log scale needs min > 0")
        vals = np.geomspace(lo, hi, steps)
    else:
        raise ConfigError(f"axis '{name}': unknown scale {scale!r}")
    vals[0], vals[-1] = lo, hi
    return Axis(name, tuple(float(v) for v in vals))


def parse_grid(command: str, grid: Any) -> list[Axis]:
    expected = GRID_AXES[command]
    if not isinstance(grid, dict):
        raise ConfigError("'grid' must be an object")
    if set(grid) != set(expected):
        raise ConfigError(f"{command} grid needs exactly the axes {list(expected)}, got {list(grid)}")
    return [parse_axis(name, grid[name]) for name in grid]


def grid_points(axes: list[Axis], order: tuple[str, ...]) -> list[tuple[float, ...]]:
    """Row-major over the declared axes; each point is returned in `order`."""
    pos = [[a.name for a in axes].index(name) for name in order]
    return [tuple(p[i] for i in pos) for p in itertools.product(*(a.values for a in axes))]


def _set_dotted(doc: dict, dotted: str, value: Any) -> None:
    keys = dotted.split(".")
    node = doc
    for k in keys[:-1]:
        node = node.setdefault(k, {})
        if not isinstance(node, dict):
            raise ConfigError(f"cannot override '{dotted}': '{k}' is not an object")
    node[keys[-1]] = value


def load_config(
    command: str,
    doc: dict,
    *,
    out: Optional[str] = None,
    fmt: Optional[str] = None,
    seed: Optional[int] = None,
    workers: int = 1,
    overrides: Iterable[tuple[str, Any]] = (),
) -> ScanConfig:
    """Validate a config document; explicit arguments win over file values."""
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}")
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    doc = json.loads(json.dumps(doc))
    for dotted, value in overrides:
        _set_dotted(doc, dotted, value)
    fmt = fmt or doc.get("format") or ("json" if command == "cycle-report" else "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {fmt!r}")
    if command == "cycle-report" and fmt != "json":
        raise ConfigError("cycle-report emits a single JSON document")
    seed = doc.get("seed", DEFAULT_SEED) if seed is None else seed
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2**64:
        raise ConfigError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    if workers < 1:
        raise ConfigError("workers must be >= 1")
    cfg = ScanConfig(command, doc, out or doc.get("out"), fmt, seed, workers)
    if command in GRID_AXES:
        cfg.axes = parse_grid(command, _require(doc, "grid", "config"))
        if command == "scan-region3" and any(v <= 0 for a in cfg.axes for v in a.values):
            raise ConfigError("ratio coordinates must be positive")
        if command == "work-curve" and any(v <= 0 for v in cfg.axes[0].values):
            raise ConfigError("hot temperatures must be positive")
    return cfg


def parse_spectrum(spec: Any, where: str) -> LevelSpectrum:
    """Spectrum from one of the documented config forms."""
    if not isinstance(spec, dict) or len(spec) != 1 and "spacings" not in spec:
        raise ConfigError(f"{where}: expected one spectrum form, got {spec!r}")
    try:
        if "energies" in spec:
            return LevelSpectrum(tuple(_number(e, f"{where} energy") for e in spec["energies"]))
        if "spacings" in spec:
            ground = _number(spec.get("ground", 0.0), f"{where} ground")
            return from_spacings([_number(d, f"{where} spacing") for d in spec["spacings"]], ground)
        if "harmonic" in spec:
            h = spec["harmonic"]
            return family_spectrum(
                Harmonic(_number(_require(h, "frequency", where), "frequency"), _require(h, "levels", where))
            )
        if "box" in spec:
            b = spec["box"]
            return family_spectrum(Box(_number(_require(b, "width", where), "width"), _require(b, "levels", where)))
        if "dark_state" in spec:
            return ds.spectrum_closed_form(parse_dark(spec["dark_state"], where)).level_spectrum()
    except (QHEError, TypeError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"{where}: {exc}") from exc
    raise ConfigError(f"{where}: unknown spectrum form {list(spec)}")


def parse_dark(spec: Any, where: str) -> ds.DarkStateParams:
    delta = _number(_require(spec, "delta", where), f"{where} delta")
    omega = _number(_require(spec, "omega", where), f"{where} omega")
    try:
        return ds.DarkStateParams(delta, omega)
    except QHEError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _temperatures(doc: dict, keys: tuple[str, ...], required: bool = True) -> Optional[dict]:
    block = doc.get("temperatures")
    if block is None:
        if required:
            raise ConfigError("missing 'temperatures' block")
        return None
    temps = {}
    for k in keys:
        t = _number(_require(block, k, "temperatures"), k)
        if t <= 0:
            raise ConfigError(f"{k} must be positive")
        temps[k] = t
    return temps


# -- per-cell evaluation -----------------------------------------------------


def _status(flags: list[str]) -> str:
    return ";".join(flags) if flags else "ok"


def _general_looser(e: SpacingEndpoints) -> bool:
    th = high_temperature_threshold(e.hot_spectrum(), e.cold_spectrum())
    return th.kind == "above" and is_looser(e, th.ratio)


def region3_cell(point: tuple[float, float, float]) -> dict:
    r1l, r2l, r2h = point
    rc = RatioCoords(r1l, r2l, r2h)
    e = endpoints_from_ratios(rc)
    case = classify_case(e)
    rec = {
        "r1l": r1l, "r2l": r2l, "r2h": r2h,
        "presup_r1l_lt_1": r1l < 1, "presup_r2h_gt_r2l": r2h > r2l,
        "case": case.value, "region": solution_region(rc).value,
        "xi": None, "eta": None, "lam": None, "theta": None, "kappa_high_t": None,
        "looser": None,
    }
    flags = []
    try:
        p = shape_params(e)
        rec.update(xi=p.xi, eta=p.eta, lam=p.lam)
        if f_value(p.xi, p.eta) != 0:
            rec["theta"] = theta(e)
        else:
            flags.append("theta_undefined")
    except XiUndefinedError:
        flags.append("xi_undefined")
    if case is Case.I:
        v = looseness_verdict(e)
        rec["kappa_high_t"] = v.kappa_high_t
        rec["looser"] = v.looser
    else:
        rec["looser"] = _general_looser(e)
        flags.append("kappa_not_case_i")
    rec["status"] = _status(flags)
    return rec


def dark_cell(hot: ds.DarkStateParams, temps: Optional[dict], point: tuple[float, float]) -> dict:
    delta_l, omega_l = point
    rec = dict.fromkeys(COLUMNS["scan-dark"])
    rec.update(delta_l=delta_l, omega_l=omega_l)
    if omega_l <= 0:
        rec["status"] = "degenerate"
        return rec
    cold = ds.DarkStateParams(delta_l, omega_l)
    e = ds.to_endpoints(hot, cold)
    case = classify_case(e)
    flags = []
    rec.update(
        delta1_l=e.d1l,
        delta2_l=e.d2l,
        case=case.value,
        case1_constraints=ds.case1_constraints(hot, cold),
        in_solution1=ds.solution1_region(hot, cold),
        in_solution2=ds.solution2_region(hot, cold),
    )
    if case is Case.I:
        v = looseness_verdict(e)
        rec.update(kappa_high_t=v.kappa_high_t, looser=v.looser)
    else:
        rec["looser"] = _general_looser(e)
        flags.append("kappa_not_case_i")
    if temps is None:
        flags.append("no_temperatures")
    else:
        w = cycle_report(e.cycle(temps["t_h"], temps["t_l"]))
        rec.update(net_work=w.net_work, pwc=w.pwc)
    rec["status"] = _status(flags)
    return rec


def work_curve_cell(hot: LevelSpectrum, cold: LevelSpectrum, t_l: float, t_h: float) -> dict:
    r = cycle_report(OttoCycle(hot, cold, t_h, t_l))
    return {
        "t_h": t_h, "net_work": r.net_work, "heat_in": r.heat_in, "efficiency": r.efficiency,
        "pwc": r.pwc, "status": "ok" if r.efficiency is not None else "efficiency_undefined",
    }


def limit_cell(e: SpacingEndpoints, t_l: float) -> dict:
    rec = {"t_l": t_l, "kappa_exact": None, "kappa_high_t": None, "rel_gap": None,
           "case": classify_case(e).value}
    flags = []
    t_crit = critical_hot_temperature(e.hot_spectrum(), e.cold_spectrum(), t_l)
    if t_crit is None:
        flags.append("not_found")
    else:
        rec["kappa_exact"] = t_crit / t_l
    try:
        rec["kappa_high_t"] = kappa_high_t(e)
    except QHEError:
        flags.append("kappa_high_t_not_applicable")
    if rec["kappa_exact"] is not None and rec["kappa_high_t"] is not None:
        rec["rel_gap"] = abs(rec["kappa_exact"] - rec["kappa_high_t"]) / rec["kappa_high_t"]
    rec["status"] = _status(flags)
    return rec


# -- commands ------------------------------------------------------------------


def _map(fn: Callable, items: list, workers: int) -> list:
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (8 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


def run_scan_region3(cfg: ScanConfig) -> list[dict]:
    pts = grid_points(cfg.axes, GRID_AXES["scan-region3"])
    return _map(region3_cell, pts, cfg.workers)


def run_scan_dark(cfg: ScanConfig) -> list[dict]:
    hot = parse_dark(_require(cfg.params, "hot", "config"), "hot")
    if not hot.omega > 0:
        raise ConfigError("hot point needs omega > 0")
    temps = _temperatures(cfg.params, ("t_h", "t_l"), required=False)
    pts = grid_points(cfg.axes, GRID_AXES["scan-dark"])
    if any(p[1] < 0 for p in pts):
        raise ConfigError("omega_l must be >= 0")
    return _map(partial(dark_cell, hot, temps), pts, cfg.workers)


def run_work_curve(cfg: ScanConfig) -> list[dict]:
    hot = parse_spectrum(_require(cfg.params, "hot", "config"), "hot")
    cold = parse_spectrum(_require(cfg.params, "cold", "config"), "cold")
    if len(hot) != len(cold):
        raise ConfigError(f"hot has {len(hot)} levels, cold has {len(cold)}")
    t_l = _temperatures(cfg.params, ("t_l",))["t_l"]
    pts = [p[0] for p in grid_points(cfg.axes, ("t_h",))]
    return _map(partial(work_curve_cell, hot, cold, t_l), pts, cfg.workers)


def _endpoints_from(doc: dict) -> SpacingEndpoints:
    try:
        if "endpoints" in doc:
            b = doc["endpoints"]
            return SpacingEndpoints(*(_number(_require(b, k, "endpoints"), k) for k in ("d1h", "d2h", "d1l", "d2l")))
        hot = parse_spectrum(_require(doc, "hot", "config"), "hot")
        cold = parse_spectrum(_require(doc, "cold", "config"), "cold")
        return SpacingEndpoints.from_spectra(hot, cold)
    except ConfigError:
        raise
    except QHEError as exc:
        raise ConfigError(str(exc)) from exc


def ladder(doc: dict, e: SpacingEndpoints) -> list[float]:
    spec = _require(doc, "ladder", "config")
    unit = spec.get("unit", "delta_h")
    units = {"delta_h": e.dh, "max_spacing": max(e.d1h, e.d2h, e.d1l, e.d2l), "absolute": 1.0}
    if unit not in units:
        raise ConfigError(f"ladder unit must be one of {sorted(units)}, got {unit!r}")
    axis = parse_axis("ladder", {k: v for k, v in spec.items() if k != "unit"} | {"scale": "log"})
    if axis.values[0] <= 0:
        raise ConfigError("ladder values must be positive")
    return [v * units[unit] for v in axis.values]


def run_limit_study(cfg: ScanConfig) -> list[dict]:
    e = _endpoints_from(cfg.params)
    return _map(partial(limit_cell, e), ladder(cfg.params, e), cfg.workers)


def run_cycle_report(cfg: ScanConfig) -> dict:
    doc = cfg.params
    temps = _temperatures(doc, ("t_h", "t_l"))
    out: dict[str, Any] = {"command": "cycle-report", "seed": cfg.seed, "status": "ok"}
    try:
        hot = parse_spectrum(_require(doc, "hot", "config"), "hot")
        cold = parse_spectrum(_require(doc, "cold", "config"), "cold")
    except ConfigError as exc:
        # a degenerate dark-state point is a legitimate input, reported in-document
        if "spacing" in str(exc) and "dark_state" in json.dumps(doc):
            out.update(status="degenerate", detail=str(exc))
            return out
        raise
    if len(hot) != len(cold):
        raise ConfigError(f"hot has {len(hot)} levels, cold has {len(cold)}")
    c = OttoCycle(hot, cold, temps["t_h"], temps["t_l"])
    r = cycle_report(c)
    st = strokes(c)
    th = high_temperature_threshold(hot, cold)
    out["inputs"] = {"hot": list(hot.energies), "cold": list(cold.energies), **temps}
    out["cycle"] = {
        "net_work": r.net_work, "heat_in": r.heat_in, "heat_out": r.heat_out,
        "efficiency": r.efficiency, "pwc": r.pwc,
        "entropy_hot": r.entropy_hot, "entropy_cold": r.entropy_cold,
        "populations_hot": list(st[0].state.populations),
        "populations_cold": list(st[2].state.populations),
        "critical_t_h": critical_hot_temperature(hot, cold, temps["t_l"]),
        "high_t_threshold": {"kind": th.kind, "ratio": th.ratio},
    }
    out["three_level"] = _three_level_block(SpacingEndpoints.from_spectra(hot, cold)) if len(hot) == 3 else None
    out["dark_state"] = None
    if "dark_state" in doc["hot"] and "dark_state" in doc["cold"]:
        ph = parse_dark(doc["hot"]["dark_state"], "hot")
        pc = parse_dark(doc["cold"]["dark_state"], "cold")
        out["dark_state"] = {
            "case1_constraints": ds.case1_constraints(ph, pc),
            "in_solution1": ds.solution1_region(ph, pc),
            "in_solution2": ds.solution2_region(ph, pc),
        }
    return out


def _three_level_block(e: SpacingEndpoints) -> dict:
    case = classify_case(e)
    rc = ratio_coords(e)
    block: dict[str, Any] = {
        "endpoints": {"d1h": e.d1h, "d2h": e.d2h, "d1l": e.d1l, "d2l": e.d2l},
        "case": case.value,
        "xi": None, "eta": None, "lam": None, "theta": None,
        "kappa_high_t": None, "kappa_high_t_status": "ok",
        "ratio_coords": {"r1l": rc.r1l, "r2l": rc.r2l, "r2h": rc.r2h},
        "solution_region": solution_region(rc).value,
        "looseness": None,
        "case2_subcase": None,
    }
    try:
        p = shape_params(e)
        block.update(xi=p.xi, eta=p.eta, lam=p.lam)
        block["theta"] = theta(e)
    except QHEError as exc:
        block["theta_status"] = str(exc)
    try:
        block["kappa_high_t"] = kappa_high_t(e)
    except QHEError as exc:
        block["kappa_high_t_status"] = str(exc)
    if case is Case.I:
        v = looseness_verdict(e)
        block["looseness"] = {
            "kappa_high_t": v.kappa_high_t, "two_level_full": v.two_level_full,
            "two_level_sub": v.two_level_sub, "looser": v.looser,
        }
    if case is Case.II:
        try:
            block["case2_subcase"] = case2_subcase(e).value
        except QHEError:
            block["case2_subcase"] = "boundary"
    return block


RUNNERS = {
    "scan-region3": run_scan_region3,
    "scan-dark": run_scan_dark,
    "work-curve": run_work_curve,
    "limit-study": run_limit_study,
}


# -- validation and output ---------------------------------------------------------


def validate(command: str, records: list[dict]) -> list[str]:
    """Cross-check categorical labels within each row; returns the problems found."""
    problems = []
    for i, r in enumerate(records):
        bad = []
        if command == "scan-region3":
            if r["region"] != Region.NEITHER.value and r["case"] != Case.I.value:
                bad.append("solution region outside case I")
            if r["case"] == Case.I.value and not (r["presup_r1l_lt_1"] and r["presup_r2h_gt_r2l"]):
                bad.append("case I without its presuppositions")
            if r["looser"] and r["case"] != Case.I.value:
                bad.append("looser outside case I")
        elif command == "scan-dark":
            if r["in_solution1"] and r["in_solution2"]:
                bad.append("both solutions")
            if (r["in_solution1"] or r["in_solution2"]) and not (
                r["case1_constraints"] and r["case"] == Case.I.value
            ):
                bad.append("solution without case I")
            if r["case1_constraints"] is not None and r["case1_constraints"] != (r["case"] == Case.I.value):
                bad.append("case I constraints disagree with classification")
            if r["looser"] and r["case"] != Case.I.value:
                bad.append("looser outside case I")
            if r["pwc"] is not None and r["pwc"] != (r["net_work"] > 0):
                bad.append("pwc disagrees with net work")
        elif command == "work-curve":
            if r["pwc"] != (r["net_work"] > 0):
                bad.append("pwc disagrees with net work")
            if r["efficiency"] is not None and not r["pwc"]:
                bad.append("efficiency without positive work")
        for key, val in r.items():
            if isinstance(val, float) and not math.isfinite(val):
                bad.append(f"non-finite {key}")
        problems.extend(f"row {i}: {b}" for b in bad)
    return problems


def _csv_value(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def to_csv(columns: list[str], records: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in records:
        w.writerow([_csv_value(r[c]) for c in columns])
    return buf.getvalue()


def _json_clean(v: Any) -> Any:
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, dict):
        return {k: _json_clean(x) for k, x in v.items()}
    if isinstance(v, list):
        return [_json_clean(x) for x in v]
    return v


def to_json(doc: Any) -> str:
    return json.dumps(_json_clean(doc), indent=2, allow_nan=False) + "\n"


def run(cfg: ScanConfig) -> str:
    """Execute a command and return the serialized output."""
    if cfg.command == "cycle-report":
        return to_json(run_cycle_report(cfg))
    records = RUNNERS[cfg.command](cfg)
    problems = validate(cfg.command, records)
    if problems:
        raise ValidationError("; ".join(problems[:5]) + (" ..." if len(problems) > 5 else ""))
    columns = COLUMNS[cfg.command]
    if cfg.fmt == "csv":
        return to_csv(columns, records)
    return to_json({"command": cfg.command, "seed": cfg.seed, "columns": columns, "records": records})
