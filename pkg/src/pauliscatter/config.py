"""Run configuration: ``[section]`` headers with ``key = value`` lines.

Values are kept in lab units (Hz, um, mW, GHz, ms) exactly as written in
the file; conversion to SI happens at the point of use. ``dumps`` emits a
canonical form with every key present, so ``dumps(loads(dumps(cfg)))``
reproduces ``dumps(cfg)`` byte for byte.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class Grid:
    start: float
    stop: float
    count: int
    log: bool = False

    def __post_init__(self):
        if self.count < 1:
            raise ConfigError("grid count must be at least 1")
        if self.count > 1 and not self.stop > self.start:
            raise ConfigError("grid must be strictly increasing (max > min)")
        if self.log and self.start <= 0:
            raise ConfigError("log grid needs a positive minimum")

    @classmethod
    def parse(cls, text: str) -> "Grid":
        parts = [p.strip() for p in text.split(":")]
        if len(parts) not in (3, 4):
            raise ConfigError(f"grid {text!r} is not min:max:count[:log]")
        log = False
        if len(parts) == 4:
            if parts[3] not in ("log", "lin"):
                raise ConfigError(f"grid spacing must be 'log' or 'lin', got {parts[3]!r}")
            log = parts[3] == "log"
        try:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise ConfigError(f"bad grid {text!r}: {exc}") from None
        return cls(start, stop, count, log)

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.start])
        if self.log:
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)

    def __str__(self):
        text = f"{_fmt(self.start)}:{_fmt(self.stop)}:{self.count}"
        return text + (":log" if self.log else "")


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".12g")
    if value is None:
        return ""
    return str(value)


@dataclass(frozen=True)
class SpeciesSection:
    name: str = "lithium6"


@dataclass(frozen=True)
class TrapSection:
    f_r_hz: float = 34000.0
    f_z_hz: float = 770.0
    atom_number: float = 6e5


@dataclass(frozen=True)
class BeamSection:
    waist_um: float = 110.0
    power_mw: float = 2.35
    detuning_ghz: float = -100.0
    pulse_ms: float = 25.0


@dataclass(frozen=True)
class SampleSection:
    t_over_tf: float = 0.2


@dataclass(frozen=True)
class ScatteringSection:
    angle_deg: float = 90.0
    aperture_average: bool = False
    numerical_aperture: float = 0.27


@dataclass(frozen=True)
class HeatingSection:
    detuning_ghz: float = -112.0
    pulse_ms: float = 50.0
    initial_t_over_tf: float = 0.2
    heat_per_event_recoils: float = 2.0
    include_overlap: bool = False
    angle_average: str = "isotropic"
    blocking: bool = True
    low_fraction: float = 0.25
    high_fraction: float = 0.25
    trajectory_power_mw: float = 5.0


@dataclass(frozen=True)
class SqSection:
    t_over_tf: float = 0.2
    phase_space_density: Optional[float] = None


@dataclass(frozen=True)
class InelasticSection:
    gamma: float = 2.0
    amplitude: float = 1.0
    delta_min_ghz: Optional[float] = None


@dataclass(frozen=True)
class GridsSection:
    t_over_tf: Grid = Grid(0.15, 3.0, 40, True)
    power_mw: Grid = Grid(0.5, 10.0, 20, False)
    delta_ghz: Grid = Grid(100.0, 500.0, 9, True)
    q_over_kf: Grid = Grid(0.0, 3.0, 61, False)
    q_lambda: Grid = Grid(0.0, 10.0, 51, False)


@dataclass(frozen=True)
class RunConfig:
    species: SpeciesSection = field(default_factory=SpeciesSection)
    trap: TrapSection = field(default_factory=TrapSection)
    beam: BeamSection = field(default_factory=BeamSection)
    sample: SampleSection = field(default_factory=SampleSection)
    scattering: ScatteringSection = field(default_factory=ScatteringSection)
    heating: HeatingSection = field(default_factory=HeatingSection)
    sq: SqSection = field(default_factory=SqSection)
    inelastic: InelasticSection = field(default_factory=InelasticSection)
    grids: GridsSection = field(default_factory=GridsSection)


_POSITIVE = {
    ("trap", "f_r_hz"), ("trap", "f_z_hz"), ("trap", "atom_number"),
    ("beam", "waist_um"), ("beam", "pulse_ms"), ("heating", "pulse_ms"),
    ("heating", "initial_t_over_tf"), ("sample", "t_over_tf"), ("sq", "t_over_tf"),
    ("scattering", "angle_deg"), ("scattering", "numerical_aperture"),
}
_NON_NEGATIVE = {("beam", "power_mw"), ("heating", "heat_per_event_recoils"),
                 ("heating", "trajectory_power_mw"), ("inelastic", "gamma")}
_CHOICES = {("heating", "angle_average"): ("isotropic", "dipole")}


def _convert(section: str, key: str, raw: str, template, line=None):
    kind = type(template)
    try:
        if section == "grids":
            return Grid.parse(raw)
        if isinstance(template, bool):
            low = raw.lower()
            if low in ("true", "yes", "1", "on"):
                return True
            if low in ("false", "no", "0", "off"):
                return False
            raise ConfigError(f"{section}.{key}: expected a boolean, got {raw!r}")
        if template is None:
            # optional float
            return None if raw == "" else float(raw)
        if kind is float:
            value = float(raw)
            if not math.isfinite(value):
                raise ValueError("not finite")
            return value
        return raw
    except ConfigError as exc:
        raise ConfigError(str(exc), line=line) from None
    except ValueError:
        raise ConfigError(f"{section}.{key}: cannot parse {raw!r}", line=line) from None


def _validate(section, key, value, line=None):
    if (section, key) in _POSITIVE and not value > 0:
        raise ConfigError(f"{section}.{key} must be positive, got {value}", line=line)
    if (section, key) in _NON_NEGATIVE and value < 0:
        raise ConfigError(f"{section}.{key} must be non-negative, got {value}", line=line)
    if (section, key) in _CHOICES and value not in _CHOICES[(section, key)]:
        raise ConfigError(f"{section}.{key} must be one of {_CHOICES[(section, key)]}",
                          line=line)
    if (section, key) == ("scattering", "angle_deg") and value > 180:
        raise ConfigError("scattering.angle_deg must lie in (0, 180]", line=line)
    if section == "heating" and key.endswith("_fraction") and not 0 < value <= 1:
        raise ConfigError(f"heating.{key} must lie in (0, 1]", line=line)


def _section_types():
    return {f.name: f.default_factory() for f in fields(RunConfig)}


def loads(text: str) -> RunConfig:
    """Parse configuration text; errors carry the offending line number."""
    sections = _section_types()
    updates = {name: {} for name in sections}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"malformed section header {line!r}", line=lineno)
            current = line[1:-1].strip()
            if current not in sections:
                raise ConfigError(f"unknown section [{current}]", line=lineno)
            continue
        if current is None:
            raise ConfigError("key=value outside of any [section]", line=lineno)
        if "=" not in line:
            raise ConfigError(f"expected key = value, got {line!r}", line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        defaults = sections[current]
        if key not in {f.name for f in fields(defaults)}:
            raise ConfigError(f"unknown key {key!r} in [{current}]", line=lineno)
        template = getattr(defaults, key)
        converted = _convert(current, key, value, template, line=lineno)
        if converted is not None and current != "grids":
            _validate(current, key, converted, line=lineno)
        updates[current][key] = converted
    built = {name: replace(sections[name], **updates[name]) for name in sections}
    return RunConfig(**built)


def load(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return loads(text)


def dumps(config: RunConfig) -> str:
    """Canonical text form: fixed section and key order, normalised numbers."""
    out = []
    for sec in fields(RunConfig):
        out.append(f"[{sec.name}]")
        section = getattr(config, sec.name)
        for key in fields(section):
            out.append(f"{key.name} = {_fmt(getattr(section, key.name))}".rstrip())
        out.append("")
    return "\n".join(out)


def config_hash(config: RunConfig) -> str:
    return hashlib.sha256(dumps(config).encode("utf-8")).hexdigest()


def override_grid(config: RunConfig, text: str) -> RunConfig:
    """Apply a ``name=min:max:count[:log]`` override from the command line."""
    if "=" not in text:
        raise ConfigError(f"--grid expects name=min:max:count[:log], got {text!r}")
    name, text = (part.strip() for part in text.split("=", 1))
    if name not in {f.name for f in fields(GridsSection)}:
        raise ConfigError(f"unknown grid {name!r}")
    grids = replace(config.grids, **{name: Grid.parse(text)})
    return replace(config, grids=grids)


def set_value(config: RunConfig, section: str, key: str, value) -> RunConfig:
    return replace(config, **{section: replace(getattr(config, section), **{key: value})})
