"""Scenario configuration, built-in figure presets and the sweep runner.

A scenario is a flat ``key = value`` document.  Frequencies are written as
X/2pi in Hz under ``<field>_hz`` keys, powers in W, the wavelength in m::

    name = my_scan
    omega_m_hz = 10e6
    kappa_hz = 215e3
    ...
    P_l = 6e-6
    axis = delta
    axis_min = 5e6
    axis_max = 15e6
    axis_count = 401
    outputs = T_sq, phi

See ``docs/config.md`` for the complete key list.
"""
from __future__ import annotations

import concurrent.futures as cf
import datetime as _dt
import math
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from .dispersion import DELAY_MAX_HALVINGS, DELAY_RTOL, delay_at
from .errors import (
    ConfigError,
    HybridomError,
    MissingKeyError,
    ScenarioError,
    UnitSuffixError,
    UnknownKeyError,
)
from .params import (
    DEFAULT_WAVELENGTH,
    TWO_PI,
    DriveParams,
    PowerCalibration,
    SystemParams,
    validate,
    validate_drive,
)
from .response import Variant, probe_response
from .steady import solve_steady_state

FREQUENCY_FIELDS = (
    "omega_m", "gamma_m", "kappa", "delta_c", "g0", "g_ac", "gamma_a", "delta_a",
)
PARAM_KEYS = tuple(f + "_hz" for f in FREQUENCY_FIELDS) + ("sigma_z_ss", "lambda_l")
DRIVE_KEYS = ("E_l_hz", "P_l", "probe_ratio", "delta0_hz", "power_calibration",
              "p_ref", "kappa_ref_hz", "e_ref_hz")
SCENARIO_KEYS = ("name", "axis", "axis_min", "axis_max", "axis_count", "axis_spacing",
                 "series", "series_values", "outputs", "variant")
KNOWN_KEYS = frozenset(PARAM_KEYS + DRIVE_KEYS + SCENARIO_KEYS)
REQUIRED_KEYS = ("name",) + PARAM_KEYS[:8] + ("axis", "axis_min", "axis_max", "axis_count", "outputs")

AXES = ("delta", "pump_power", "g0", "g_ac", "kappa", "delta_a")
SERIES_QUANTITIES = ("pump_power", "g0", "g_ac", "kappa", "delta_a")
OBSERVABLES = ("T_sq", "phi", "tau_g", "c_minus", "steady")
DEFAULT_PROBE_RATIO = 1e-3

AXIS_COLUMNS = {
    "delta": "delta_hz", "pump_power": "pump_power_w", "g0": "g0_hz",
    "g_ac": "g_ac_hz", "kappa": "kappa_hz", "delta_a": "delta_a_hz",
}
AXIS_LABELS = {
    "delta": "probe detuning delta/2pi (Hz)", "pump_power": "pump power P_l (W)",
    "g0": "g0/2pi (Hz)", "g_ac": "g_ac/2pi (Hz)", "kappa": "kappa/2pi (Hz)",
    "delta_a": "Delta_a/2pi (Hz)",
}
OBSERVABLE_COLUMNS = {
    "T_sq": ("T_sq",), "phi": ("phi",), "tau_g": ("tau_g",),
    "c_minus": ("c_minus_re", "c_minus_im"),
    "steady": ("n_s", "delta_tilde", "branch_count"),
}
OBSERVABLE_LABELS = {
    "T_sq": "|T|^2", "phi": "phi_t (rad)", "tau_g": "tau_g (s)",
    "c_minus": "c_- (per unit pump amplitude)", "steady": "steady state",
}


@dataclass(frozen=True)
class ToleranceProfile:
    name: str = "default"
    delay_rtol: float = DELAY_RTOL
    delay_max_halvings: int = DELAY_MAX_HALVINGS


TOLERANCE_PROFILES = {
    "default": ToleranceProfile(),
    "strict": ToleranceProfile("strict", delay_rtol=1e-6, delay_max_halvings=24),
}


@dataclass(frozen=True)
class Axis:
    quantity: str
    min: float
    max: float
    count: int
    spacing: str = "linear"

    def values(self) -> np.ndarray:
        return np.linspace(self.min, self.max, self.count)


@dataclass(frozen=True)
class Scenario:
    """A fully resolved sweep.

    ``base`` keeps every parameter and drive value in config units (Hz, W, m),
    so serializing and reloading a scenario reproduces it exactly.
    """

    name: str
    base: tuple
    axis: Axis
    outputs: tuple
    variant: Variant = Variant.ORACLE_CONSISTENT
    series: str | None = None
    series_values: tuple = ()

    @property
    def values(self) -> dict:
        return dict(self.base)

    def with_value(self, key, value) -> "Scenario":
        vals = self.values
        vals[key] = value
        return replace(self, base=tuple(sorted(vals.items())))

    @property
    def calibration(self) -> PowerCalibration:
        v = self.values
        return PowerCalibration(
            mode=v.get("power_calibration", "physical"),
            p_ref=v.get("p_ref", 6e-6),
            kappa_ref=TWO_PI * v.get("kappa_ref_hz", 215e3),
            e_ref=TWO_PI * v.get("e_ref_hz", 2e6),
        )

    @property
    def params(self) -> SystemParams:
        v = self.values
        kw = {f: TWO_PI * v[f + "_hz"] for f in FREQUENCY_FIELDS}
        kw["sigma_z_ss"] = v.get("sigma_z_ss", 1.0)
        kw["lambda_l"] = v.get("lambda_l", DEFAULT_WAVELENGTH)
        return SystemParams(**kw)

    def pump_amplitude(self, params: SystemParams, pump_power=None) -> float:
        v = self.values
        if pump_power is None and "E_l_hz" in v:
            return TWO_PI * v["E_l_hz"]
        P = v.get("P_l") if pump_power is None else pump_power
        return self.calibration.amplitude(P, params.kappa, params.lambda_l)

    @property
    def delta0(self) -> float:
        v = self.values
        return TWO_PI * v["delta0_hz"] if "delta0_hz" in v else TWO_PI * v["omega_m_hz"]

    @property
    def drive(self) -> DriveParams:
        E_l = self.pump_amplitude(self.params)
        return DriveParams(E_l, self.values.get("probe_ratio", DEFAULT_PROBE_RATIO) * E_l, self.delta0)

    def point(self, axis_value, series_value=None):
        """``(params, E_l, E_p, delta)`` at one axis/series coordinate."""
        overrides = {}
        power = None
        for quantity, value in ((self.series, series_value), (self.axis.quantity, axis_value)):
            if quantity is None or value is None:
                continue
            if quantity == "pump_power":
                power = value
            elif quantity != "delta":
                overrides[quantity] = TWO_PI * value
        params = self.params.replace(**overrides) if overrides else self.params
        E_l = self.pump_amplitude(params, power)
        E_p = self.values.get("probe_ratio", DEFAULT_PROBE_RATIO) * E_l
        delta = TWO_PI * axis_value if self.axis.quantity == "delta" else self.delta0
        return params, E_l, E_p, delta


# --- parsing -----------------------------------------------------------------

def _parse_text(text: str) -> dict:
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = value
    return raw


def _check_keys(raw: dict):
    for key in raw:
        if key in KNOWN_KEYS:
            continue
        if key in FREQUENCY_FIELDS or key in ("delta0", "E_l", "kappa_ref", "e_ref"):
            raise UnitSuffixError(f"{key!r} is a frequency; write it as {key + '_hz'!r} in Hz")
        if key.endswith("_hz") and key[:-3] in KNOWN_KEYS:
            raise UnitSuffixError(f"{key!r}: {key[:-3]!r} is not a frequency; drop the '_hz' suffix")
        if key in ("P_l_w", "lambda_l_m"):
            raise UnitSuffixError(f"{key!r}: write {key.rsplit('_', 1)[0]!r} (SI units implied)")
        raise UnknownKeyError(f"unknown key {key!r}")
    missing = [k for k in REQUIRED_KEYS if k not in raw]
    if missing:
        raise MissingKeyError("missing required key(s): " + ", ".join(missing))
    if "pump_power" in (raw.get("axis"), raw.get("series")):
        if "E_l_hz" in raw:
            raise ConfigError("'E_l_hz' conflicts with a pump_power axis or series")
    elif ("E_l_hz" in raw) == ("P_l" in raw):
        raise MissingKeyError("exactly one of 'E_l_hz' and 'P_l' must be given")


def _float(key, value):
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {value!r}") from None


def scenario_from_mapping(raw: dict) -> Scenario:
    _check_keys(raw)
    base = {}
    for key in PARAM_KEYS + DRIVE_KEYS:
        if key in raw and key != "power_calibration":
            base[key] = _float(key, raw[key])
    if "power_calibration" in raw:
        base["power_calibration"] = raw["power_calibration"]
    base.setdefault("sigma_z_ss", 1.0)
    base.setdefault("lambda_l", DEFAULT_WAVELENGTH)

    quantity = raw["axis"]
    if quantity not in AXES:
        raise ConfigError(f"axis must be one of {', '.join(AXES)}, got {quantity!r}")
    try:
        count = int(raw["axis_count"])
    except ValueError:
        raise ConfigError(f"axis_count must be an integer, got {raw['axis_count']!r}") from None
    spacing = raw.get("axis_spacing", "linear")
    if spacing != "linear":
        raise ConfigError(f"only linear axis spacing is supported, got {spacing!r}")
    axis = Axis(quantity, _float("axis_min", raw["axis_min"]), _float("axis_max", raw["axis_max"]),
                count, spacing)

    outputs = tuple(s.strip() for s in raw["outputs"].split(",") if s.strip())
    bad = [o for o in outputs if o not in OBSERVABLES]
    if bad or not outputs:
        raise ConfigError(f"outputs must be a nonempty subset of {', '.join(OBSERVABLES)}; got {bad or outputs}")

    series = raw.get("series") or None
    series_values = ()
    if series is not None:
        if series not in SERIES_QUANTITIES or series == quantity:
            raise ConfigError(f"series must be one of {', '.join(SERIES_QUANTITIES)} other than the axis")
        if "series_values" not in raw:
            raise MissingKeyError("'series' needs 'series_values'")
        series_values = tuple(_float("series_values", s) for s in raw["series_values"].split(",") if s.strip())
    elif "series_values" in raw:
        raise ConfigError("'series_values' given without 'series'")

    scenario = Scenario(
        name=raw["name"],
        base=tuple(sorted(base.items())),
        axis=axis,
        outputs=outputs,
        variant=Variant.parse(raw.get("variant", Variant.ORACLE_CONSISTENT.value)),
        series=series,
        series_values=series_values,
    )
    validate_scenario(scenario)
    return scenario


def validate_scenario(scenario: Scenario):
    """Raise :class:`ConfigError` if the scenario cannot be run."""
    if scenario.axis.count < 2:
        raise ConfigError(f"axis_count must be at least 2 for a sweep, got {scenario.axis.count}")
    if not scenario.axis.max > scenario.axis.min:
        raise ConfigError("axis_max must exceed axis_min")
    if scenario.series and not scenario.series_values:
        raise ConfigError("series_values must be nonempty")
    try:
        scenario.calibration
    except HybridomError as exc:
        raise ConfigError(str(exc)) from None
    report = validate(scenario.params)
    if not report.ok:
        raise ConfigError("invalid parameters: " + "; ".join(report.violations))
    ratio = scenario.values.get("probe_ratio", DEFAULT_PROBE_RATIO)
    drive = DriveParams(1.0, ratio)
    if not validate_drive(drive).ok:
        raise ConfigError("invalid drive: " + "; ".join(validate_drive(drive).violations))


def _fmt(v) -> str:
    return repr(float(v)) if isinstance(v, (int, float)) else str(v)


def serialize(scenario: Scenario) -> str:
    lines = [f"name = {scenario.name}"]
    lines += [f"{k} = {_fmt(v)}" for k, v in scenario.base]
    a = scenario.axis
    lines += [
        f"axis = {a.quantity}",
        f"axis_min = {_fmt(a.min)}",
        f"axis_max = {_fmt(a.max)}",
        f"axis_count = {a.count}",
        f"axis_spacing = {a.spacing}",
        "outputs = " + ", ".join(scenario.outputs),
        f"variant = {scenario.variant.value}",
    ]
    if scenario.series:
        lines.append(f"series = {scenario.series}")
        lines.append("series_values = " + ", ".join(_fmt(v) for v in scenario.series_values))
    return "\n".join(lines) + "\n"


def load_config(source) -> Scenario:
    """Scenario from a preset name, a path or a config text."""
    if isinstance(source, Path):
        return scenario_from_mapping(_parse_text(source.read_text()))
    if isinstance(source, str):
        if source in PRESETS:
            return preset(source)
        if "\n" not in source and "=" not in source:
            path = Path(source)
            if not path.exists():
                raise ConfigError(f"{source!r} is neither a preset name nor an existing file")
            return scenario_from_mapping(_parse_text(path.read_text()))
        return scenario_from_mapping(_parse_text(source))
    raise ConfigError(f"cannot load a scenario from {type(source).__name__}")


# --- presets -------------------------------------------------------------------

BASE_HZ = {
    "omega_m_hz": 10e6, "gamma_m_hz": 140.0, "kappa_hz": 215e3, "delta_c_hz": 10e6,
    "g0_hz": 1.2e6, "g_ac_hz": 4e6, "gamma_a_hz": 200e3, "delta_a_hz": 10e6,
    "sigma_z_ss": 1.0, "lambda_l": DEFAULT_WAVELENGTH,
}
SPECTRUM_AXIS = {"axis": "delta", "axis_min": "5e6", "axis_max": "15e6", "axis_count": "2001"}
POWER_AXIS = {"axis": "pump_power", "axis_min": "1e-7", "axis_max": "2e-5", "axis_count": "41",
              "power_calibration": "anchored"}


def _preset_text(name, *, axis, outputs, **values):
    raw = {k: repr(v) for k, v in BASE_HZ.items()}
    raw.update({k: (v if isinstance(v, str) else repr(v)) for k, v in values.items()})
    raw.update(axis)
    raw["name"] = name
    raw["outputs"] = outputs
    return raw


PRESETS = {
    **{
        f"fig2{tag}": _preset_text(f"fig2{tag}", axis=SPECTRUM_AXIS, outputs="T_sq, phi",
                                   kappa_hz=1e6, g_ac_hz=0.0, g0_hz=g0, E_l_hz=2e6)
        for tag, g0 in zip("abcd", (0.0, 0.5e6, 0.8e6, 1.2e6))
    },
    "fig3b": _preset_text("fig3b", axis=POWER_AXIS, outputs="tau_g, steady",
                          kappa_hz=1e6, g_ac_hz=0.0),
    "fig4a": _preset_text("fig4a", axis=SPECTRUM_AXIS, outputs="T_sq", P_l=6e-6,
                          power_calibration="anchored", series="g_ac",
                          series_values="0.0, 1.2e6, 1.4e6, 1.6e6"),
    "fig4b": _preset_text("fig4b", axis=SPECTRUM_AXIS, outputs="phi", P_l=6e-6,
                          power_calibration="anchored", g_ac_hz=1.2e6),
    "fig5": _preset_text("fig5", axis=POWER_AXIS, outputs="tau_g", series="g_ac",
                         series_values="4e6, 8e6"),
    "fig6a": _preset_text("fig6a", axis=SPECTRUM_AXIS, outputs="phi", P_l=6e-6,
                          power_calibration="anchored", g_ac_hz=1.6e6, g0_hz=0.1e6,
                          series="delta_a", series_values="10e6, -10e6"),
    "fig7": _preset_text("fig7", axis=POWER_AXIS, outputs="tau_g", delta_a_hz=-10e6,
                         series="kappa", series_values="107.5e3, 215e3, 322.5e3"),
}

PRESET_DESCRIPTIONS = {
    "fig2a": "probe transmission, g0/2pi = 0 (no optomechanics), atom off",
    "fig2b": "probe transmission, g0/2pi = 0.5 MHz, atom off",
    "fig2c": "probe transmission, g0/2pi = 0.8 MHz, atom off",
    "fig2d": "probe transmission, g0/2pi = 1.2 MHz, atom off",
    "fig3b": "group delay vs pump power at delta = omega_m, atom off",
    "fig4a": "probe transmission vs g_ac at Delta_a = +omega_m, P_l = 6 uW",
    "fig4b": "probe phase, g_ac/2pi = 1.2 MHz, Delta_a = +omega_m",
    "fig5": "group delay vs pump power, Delta_a = +omega_m, g_ac/2pi = 4 and 8 MHz (fast light)",
    "fig6a": "probe phase for Delta_a = +/- omega_m, g_ac/2pi = 1.6 MHz, g0/2pi = 0.1 MHz",
    "fig7": "group delay vs pump power, Delta_a = -omega_m, three cavity decay rates (slow light)",
}


def preset(name: str) -> Scenario:
    try:
        raw = PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; known: {', '.join(PRESETS)}") from None
    return scenario_from_mapping(dict(raw))


# --- running -------------------------------------------------------------------

@dataclass
class SweepResult:
    scenario: Scenario
    axis_values: np.ndarray
    columns: list
    rows: list
    errors: list
    tolerances: ToleranceProfile = field(default_factory=ToleranceProfile)
    provenance: dict = field(default_factory=dict)

    @property
    def failed_points(self) -> int:
        return sum(1 for e in self.errors if e)

    def column(self, name) -> np.ndarray:
        j = self.columns.index(name)
        return np.array([np.nan if r[j] is None else r[j] for r in self.rows], dtype=float)


def column_names(scenario: Scenario) -> list:
    base = [c for o in scenario.outputs for c in OBSERVABLE_COLUMNS[o]]
    if not scenario.series:
        return base
    key = AXIS_COLUMNS[scenario.series]
    return [f"{c}[{key}={v:g}]" for v in scenario.series_values for c in base]


def evaluate_point(scenario: Scenario, axis_value, series_value=None,
                   tolerances: ToleranceProfile = TOLERANCE_PROFILES["default"]) -> list:
    """Observables at one coordinate, in the order of :func:`column_names`."""
    params, E_l, E_p, delta = scenario.point(axis_value, series_value)
    steady = solve_steady_state(params, E_l)
    out = []
    resp = None
    if {"T_sq", "phi", "c_minus"} & set(scenario.outputs):
        resp = probe_response(params, steady, E_p, delta, scenario.variant)
    for o in scenario.outputs:
        if o == "T_sq":
            out.append(resp.T_sq)
        elif o == "phi":
            out.append(resp.phi_t)
        elif o == "c_minus":
            out += [resp.c_minus.real / E_l, resp.c_minus.imag / E_l]
        elif o == "tau_g":
            out.append(delay_at(params, E_l, E_p, delta, scenario.variant,
                                rtol=tolerances.delay_rtol,
                                max_halvings=tolerances.delay_max_halvings))
        elif o == "steady":
            out += [steady.n_s, steady.delta_tilde, float(steady.branch_count)]
    return out


def _evaluate_row(args):
    scenario, x, tolerances = args
    series = scenario.series_values if scenario.series else (None,)
    width = len(column_names(scenario)) // len(series)
    row, messages = [], []
    for s in series:
        try:
            row += evaluate_point(scenario, x, s, tolerances)
        except (HybridomError, ArithmeticError, ValueError) as exc:
            row += [None] * width
            messages.append(f"{type(exc).__name__}: {exc}")
    return row, "; ".join(messages)


def _default_workers():
    return os.cpu_count() or 1


def run_scenario(scenario: Scenario, workers: int | None = None,
                 tolerances: ToleranceProfile = TOLERANCE_PROFILES["default"]) -> SweepResult:
    """Evaluate every axis point; failures are recorded per row, not raised."""
    validate_scenario(scenario)
    xs = scenario.axis.values()
    jobs = [(scenario, float(x), tolerances) for x in xs]
    workers = workers or _default_workers()
    if workers > 1 and len(jobs) > 1:
        with cf.ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_evaluate_row, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        results = [_evaluate_row(j) for j in jobs]
    rows = [r for r, _ in results]
    errors = [e for _, e in results]
    if all(errors):
        raise ScenarioError(f"all {len(xs)} points of {scenario.name!r} failed; first: {errors[0]}")
    return SweepResult(
        scenario=scenario,
        axis_values=xs,
        columns=column_names(scenario),
        rows=rows,
        errors=errors,
        tolerances=tolerances,
        provenance=_provenance(scenario, tolerances),
    )


def _provenance(scenario, tolerances):
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    now = (_dt.datetime.fromtimestamp(int(epoch), _dt.timezone.utc) if epoch
           else _dt.datetime.now(_dt.timezone.utc))
    return {
        "tool": "hybridom",
        "version": __version__,
        "variant": scenario.variant.value,
        "tolerance_profile": tolerances.name,
        "delay_rtol": tolerances.delay_rtol,
        "delay_max_halvings": tolerances.delay_max_halvings,
        "timestamp": now.replace(microsecond=0).isoformat(),
    }


def nan_safe(x):
    return None if x is None or (isinstance(x, float) and math.isnan(x)) else x
