"""Scenario files: YAML documents describing a medium, a probe and a grid.

Schema (version 1)::

    schema_version: 1
    name: fig1
    units: normalized | wavenumber-fs
    profile:                       # mixture medium (optional)
      modes:
        - {comb_depth: 0.8, omega: 1.0, phase: 0.0}
    stages:                        # cascade, traversed in order (optional)
      - modes: [{comb_depth: 0.8, omega: 1.0}]
    pulse: {omega0: 15.2, length_T: 0.08, peak_time: 0.83, peak_amplitude: 1.0}
    grid: {start: 0.0, stop: 15.0, count: 1501}     # count may be null
    solver: {rel_tol: 1.0e-10, abs_tol: null, max_steps: 1000000}
    spectrum: {taper: hann, floor: 1.0e-3}
    outputs: [map, compare]

In ``normalized`` files frequencies are in units of the reference Raman
frequency and times in its periods (multiplied by 2*pi on load).  In
``wavenumber-fs`` files frequencies are cm^-1 and times fs.  Files keep the
quoted numbers verbatim; conversion happens in :func:`from_dict`.
"""

from __future__ import annotations

import copy
import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import yaml

from . import units
from .propagation import CascadeStage, ProbePulse, default_grid_count, make_grid
from .susceptibility import RamanMode, SusceptibilityProfile
from .timemap import MapSolverConfig

SCHEMA_VERSION = 1
OUTPUTS = ("map", "field", "compare", "spectrum", "report", "synthesis")


class ScenarioError(ValueError):
    """Malformed or inconsistent scenario file."""


@dataclass(frozen=True)
class Scenario:
    """A scenario converted to internal units."""

    name: str
    units: str
    profile: Optional[SusceptibilityProfile]
    stages: Optional[list]
    pulse: ProbePulse
    grid_start: float
    grid_stop: float
    grid_count: Optional[int]
    solver: MapSolverConfig
    outputs: tuple
    taper: str
    floor: float
    raw: dict

    @property
    def time_scale(self) -> float:
        """Internal time per file time unit."""
        return 2.0 * math.pi if self.units == units.NORMALIZED else 1.0

    @property
    def freq_scale(self) -> float:
        """Internal angular frequency per file frequency unit."""
        if self.units == units.NORMALIZED:
            return 1.0
        return float(units.wavenumber_to_angular(1.0))

    @property
    def time_unit(self) -> str:
        return "T_ref (reference Raman period)" if self.units == units.NORMALIZED else "fs"

    @property
    def freq_unit(self) -> str:
        return "omega_ref" if self.units == units.NORMALIZED else "cm^-1"

    def total_depth(self) -> float:
        """Depth sum bounding ``log G`` for the mixture or the whole cascade."""
        mix = self.profile.total_depth if self.profile is not None else 0.0
        casc = sum(st.profile.total_depth for st in self.stages) if self.stages else 0.0
        return max(mix, casc)

    def resolved_count(self, override: Optional[int] = None) -> int:
        if override is not None:
            return int(override)
        if self.grid_count is not None:
            return self.grid_count
        return default_grid_count(self.pulse, self.total_depth(), self.grid_start, self.grid_stop)

    def grid(self, count_override: Optional[int] = None):
        return make_grid(self.grid_start, self.grid_stop, self.resolved_count(count_override))

    def hash(self) -> str:
        blob = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _num(section: dict, key: str, where: str, default=None, required=True) -> Optional[float]:
    if key not in section or section[key] is None:
        if required and default is None:
            raise ScenarioError(f"{where}: missing '{key}'")
        return default
    value = section[key]
    if isinstance(value, str):
        # YAML 1.1 reads exponent literals without a dot ("1e-3") as strings
        try:
            value = float(value)
        except ValueError:
            pass
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{where}.{key}: expected a number, got {value!r}")
    return float(value)


def _modes(section, where: str, fscale: float) -> SusceptibilityProfile:
    if not isinstance(section, dict) or not isinstance(section.get("modes", None), list):
        raise ScenarioError(f"{where}: expected a mapping with a 'modes' list")
    modes = []
    for i, m in enumerate(section["modes"]):
        w = f"{where}.modes[{i}]"
        if not isinstance(m, dict):
            raise ScenarioError(f"{w}: expected a mapping")
        try:
            modes.append(
                RamanMode(
                    _num(m, "comb_depth", w),
                    _num(m, "omega", w) * fscale,
                    _num(m, "phase", w, default=0.0, required=False),
                )
            )
        except ValueError as exc:
            if isinstance(exc, ScenarioError):
                raise
            raise ScenarioError(f"{w}: {exc}") from exc
    return SusceptibilityProfile(tuple(modes))


def from_dict(raw: dict) -> Scenario:
    if not isinstance(raw, dict):
        raise ScenarioError("scenario must be a mapping")
    version = raw.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ScenarioError(f"unsupported schema_version {version!r}; expected {SCHEMA_VERSION}")
    unit_sys = raw.get("units", units.NORMALIZED)
    if unit_sys not in units.UNIT_SYSTEMS:
        raise ScenarioError(f"units must be one of {units.UNIT_SYSTEMS}, got {unit_sys!r}")
    tscale = 2.0 * math.pi if unit_sys == units.NORMALIZED else 1.0
    fscale = 1.0 if unit_sys == units.NORMALIZED else float(units.wavenumber_to_angular(1.0))

    profile = _modes(raw["profile"], "profile", fscale) if raw.get("profile") is not None else None
    stages = None
    if raw.get("stages") is not None:
        if not isinstance(raw["stages"], list) or not raw["stages"]:
            raise ScenarioError("stages: expected a non-empty list")
        stages = [
            CascadeStage(_modes(st, f"stages[{i}]", fscale)) for i, st in enumerate(raw["stages"])
        ]
    if profile is None and stages is None:
        raise ScenarioError("scenario needs a 'profile' or 'stages'")

    p = raw.get("pulse")
    if not isinstance(p, dict):
        raise ScenarioError("missing 'pulse' section")
    try:
        pulse = ProbePulse(
            _num(p, "omega0", "pulse") * fscale,
            _num(p, "length_T", "pulse") * tscale,
            _num(p, "peak_time", "pulse", default=0.0, required=False) * tscale,
            _num(p, "peak_amplitude", "pulse", default=1.0, required=False),
        )
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError(f"pulse: {exc}") from exc

    g = raw.get("grid")
    if not isinstance(g, dict):
        raise ScenarioError("missing 'grid' section")
    start = _num(g, "start", "grid") * tscale
    stop = _num(g, "stop", "grid") * tscale
    if not stop > start:
        raise ScenarioError("grid: start must be less than stop")
    count = g.get("count")
    if count is not None:
        if isinstance(count, bool) or not isinstance(count, int) or count < 2:
            raise ScenarioError(f"grid.count: expected an integer >= 2, got {count!r}")

    sv = raw.get("solver") or {}
    if not isinstance(sv, dict):
        raise ScenarioError("solver: expected a mapping")
    try:
        solver = MapSolverConfig(
            rel_tol=_num(sv, "rel_tol", "solver", default=1e-10, required=False),
            abs_tol=(
                None
                if sv.get("abs_tol") is None
                else _num(sv, "abs_tol", "solver") * tscale
            ),
            max_steps=int(_num(sv, "max_steps", "solver", default=1_000_000, required=False)),
        )
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError(f"solver: {exc}") from exc

    outputs = raw.get("outputs") or []
    if not isinstance(outputs, list) or any(o not in OUTPUTS for o in outputs):
        raise ScenarioError(f"outputs: expected a list drawn from {OUTPUTS}, got {outputs!r}")

    sp = raw.get("spectrum") or {}
    taper = sp.get("taper", "hann")
    if taper not in ("none", "hann"):
        raise ScenarioError(f"spectrum.taper: expected 'none' or 'hann', got {taper!r}")
    floor = _num(sp, "floor", "spectrum", default=1e-3, required=False)
    if not 0.0 < floor < 1.0:
        raise ScenarioError("spectrum.floor must lie in (0, 1)")

    return Scenario(
        name=str(raw.get("name", "scenario")),
        units=unit_sys,
        profile=profile,
        stages=stages,
        pulse=pulse,
        grid_start=start,
        grid_stop=stop,
        grid_count=count,
        solver=solver,
        outputs=tuple(outputs),
        taper=taper,
        floor=floor,
        raw=copy.deepcopy(raw),
    )


def load(path) -> Scenario:
    try:
        raw = yaml.safe_load(Path(path).read_text())
    except (OSError, yaml.YAMLError) as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc}") from exc
    return from_dict(raw)


def dump(raw: dict) -> str:
    return yaml.safe_dump(raw, sort_keys=False, default_flow_style=None)


# --------------------------------------------------------------------------- presets

_FIG12_MODES = [
    {"comb_depth": 0.8, "omega": 1.0, "phase": 0.0},
    {"comb_depth": 0.6, "omega": 0.07, "phase": 0.0},
]
_FIG2_PULSE = {"omega0": 15.2, "length_T": 0.08, "peak_amplitude": 1.0}
_SOLVER = {"rel_tol": 1e-10, "abs_tol": None, "max_steps": 1_000_000}


def _base(name, description, unit_sys=units.NORMALIZED):
    return {"schema_version": SCHEMA_VERSION, "name": name, "description": description,
            "units": unit_sys}


def preset(name: str) -> dict:
    """Raw scenario dictionary for one of the published figure setups."""
    if name == "fig1":
        raw = _base("fig1", "Biharmonic mixture: total factor G against the product G_a*G_b")
        raw.update(
            profile={"modes": copy.deepcopy(_FIG12_MODES)},
            pulse={**_FIG2_PULSE, "peak_time": 0.83},
            grid={"start": 0.0, "stop": 15.0, "count": 1501},
            outputs=["map", "compare"],
        )
    elif name in ("fig2a", "fig2b"):
        peak, start, stop = (0.83, 0.5, 2.5) if name == "fig2a" else (8.8, 7.0, 9.0)
        raw = _base(name, f"Biharmonic mixture, short probe peaking at {peak} T_a")
        raw.update(
            profile={"modes": copy.deepcopy(_FIG12_MODES)},
            pulse={**_FIG2_PULSE, "peak_time": peak},
            grid={"start": start, "stop": stop, "count": None},
            outputs=["map", "field", "compare", "report"],
        )
    elif name == "fig3":
        raw = _base("fig3", "Mixture against cascades M_a M_b and M_b M_a")
        raw.update(
            profile={"modes": copy.deepcopy(_FIG12_MODES)},
            stages=[{"modes": [copy.deepcopy(_FIG12_MODES[0])]},
                    {"modes": [copy.deepcopy(_FIG12_MODES[1])]}],
            pulse={**_FIG2_PULSE, "peak_time": 3.1},
            grid={"start": 3.5, "stop": 5.5, "count": None},
            outputs=["compare", "field", "spectrum"],
        )
    elif name == "fig4":
        raw = _base("fig4", "Mixed H2/D2 cell: broadband spectrum and zero-phase synthesis",
                    units.WAVENUMBER_FS)
        raw.update(
            profile={"modes": [
                {"comb_depth": 0.587, "omega": 587.0, "phase": 0.0},
                {"comb_depth": 0.179, "omega": 179.0, "phase": 0.0},
            ]},
            pulse={"omega0": 20000.0, "length_T": 4500.0, "peak_time": 0.0,
                   "peak_amplitude": 1.0},
            grid={"start": -18000.0, "stop": 18000.0, "count": None},
            outputs=["spectrum", "synthesis", "report"],
        )
    else:
        raise ScenarioError(f"unknown preset {name!r}; choose from {PRESETS}")
    raw["solver"] = dict(_SOLVER)
    if raw["units"] == units.NORMALIZED:
        # the short normalized probes need a tighter map for 1e-6 area conservation
        raw["solver"]["rel_tol"] = 1e-12
    raw["spectrum"] = {"taper": "hann", "floor": 1e-3}
    return raw


PRESETS = ("fig1", "fig2a", "fig2b", "fig3", "fig4")
