"""Scenario files (``key = value`` text) and the validated simulation config."""
import logging
import math
import re
from pathlib import Path
from typing import Literal, Optional, Union

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, InstanceOf, ValidationError, field_validator, model_validator

from src.core.config import get_settings
from src.kdv.control.feedback import FEEDBACK_TYPES, LAW_NAMES, make_law
from src.kdv.errors import ConfigurationError, KdvError
from src.kdv.grid import PROFILE_NAMES, SpatialGrid, StateField, named_profile
from src.kdv.operators.nonlinear import ADVECTION_SCHEMES

logger = logging.getLogger(__name__)

_PI_MULTIPLE = re.compile(r"^\s*(?P<coef>[-+]?(\d+(\.\d*)?|\.\d+)([eE][-+]?\d+)?)?\s*\*?\s*pi\s*$")
_TRUE = {"true", "yes", "on", "1"}
_FALSE = {"false", "no", "off", "0"}


def parse_real(value):
    """Accept plain numbers and multiples of pi such as ``2pi`` or ``2*pi``."""
    if isinstance(value, str):
        match = _PI_MULTIPLE.match(value.lower())
        if match:
            coef = match.group("coef")
            return (float(coef) if coef else 1.0) * math.pi
    return value


def _settings_default(name: str):
    return lambda: getattr(get_settings(), name)


class ScenarioFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    length: float = 2 * math.pi
    n_interior: int = Field(256, ge=4)
    dt: Union[Literal["auto"], float] = "auto"
    initial_profile: str = "one-minus-cos"
    initial_scale: Optional[float] = Field(None, ge=0)
    initial_file: Optional[str] = None
    law: str = "linear"
    gain: float = Field(1.0, gt=0)
    level: Optional[float] = Field(None, gt=0)
    final_time: float = Field(6.0, gt=0)
    stride: int = Field(default_factory=_settings_default("KDV_SNAPSHOT_STRIDE"), ge=1)
    snapshot_full: bool = False
    cfl_safety: float = Field(default_factory=_settings_default("KDV_CFL_SAFETY"), gt=0, le=1)
    nonlinear: bool = True
    advection: str = "skew"
    slack: Optional[float] = Field(None, ge=0)
    experimental: bool = False
    perturbation: float = Field(0.0, ge=0)

    @field_validator("length", "final_time", mode="before")
    @classmethod
    def _reals(cls, value):
        return parse_real(value)

    @field_validator("dt", mode="before")
    @classmethod
    def _dt(cls, value):
        if isinstance(value, str) and value.strip().lower() == "auto":
            return "auto"
        return parse_real(value)

    @field_validator("nonlinear", "snapshot_full", "experimental", mode="before")
    @classmethod
    def _flag(cls, value):
        if isinstance(value, str):
            lowered = value.strip().lower()
            if lowered in _TRUE:
                return True
            if lowered in _FALSE:
                return False
        return value

    @model_validator(mode="after")
    def _consistent(self):
        if self.length <= 0:
            raise ValueError("length must be positive")
        if self.dt != "auto" and not (0 < self.dt < self.final_time):
            raise ValueError(f"dt must satisfy 0 < dt < final_time, got dt={self.dt}")
        if self.initial_profile not in PROFILE_NAMES:
            raise ValueError(f"initial_profile must be one of {PROFILE_NAMES}")
        if self.initial_profile == "tabulated" and not self.initial_file:
            raise ValueError("initial_profile = tabulated needs initial_file")
        if self.law not in LAW_NAMES:
            raise ValueError(f"law must be one of {LAW_NAMES}")
        if self.law in ("saturated", "pointwise") and self.level is None:
            raise ValueError(f"law = {self.law} needs level")
        if self.law == "pointwise" and not self.experimental:
            raise ValueError("law = pointwise is experimental; set experimental = true")
        if self.advection not in ADVECTION_SCHEMES:
            raise ValueError(f"advection must be one of {ADVECTION_SCHEMES}")
        return self

    def with_law(self, law: str) -> "ScenarioFile":
        return self.model_copy(update={"law": law, "name": f"{self.name}-{law}"})

    def to_sim_config(self, base_dir: Path = Path(".")) -> "SimConfig":
        grid = SpatialGrid(self.length, self.n_interior)
        table = None
        if self.initial_profile == "tabulated":
            table = load_profile_table(Path(base_dir) / self.initial_file)
        initial = named_profile(self.initial_profile, grid, scale=self.initial_scale, table=table)
        return SimConfig(
            grid=grid,
            initial=initial,
            law=make_law(self.law, self.gain, self.level),
            final_time=self.final_time,
            dt=self.dt,
            stride=self.stride,
            snapshot_full=self.snapshot_full,
            cfl_safety=self.cfl_safety,
            nonlinear=self.nonlinear,
            advection=self.advection,
        )


class SimConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True, frozen=True)

    grid: InstanceOf[SpatialGrid]
    initial: InstanceOf[StateField]
    law: object
    final_time: float = Field(gt=0)
    dt: Union[Literal["auto"], float] = "auto"
    stride: int = Field(default_factory=_settings_default("KDV_SNAPSHOT_STRIDE"), ge=1)
    snapshot_full: bool = False
    cfl_safety: float = Field(default_factory=_settings_default("KDV_CFL_SAFETY"), gt=0, le=1)
    nonlinear: bool = True
    advection: str = "skew"
    energy_slack: float = Field(default_factory=_settings_default("KDV_ENERGY_SLACK"), ge=0)
    max_retries: int = Field(default_factory=_settings_default("KDV_MAX_RETRIES"), ge=0)

    @model_validator(mode="after")
    def _consistent(self):
        if self.dt != "auto" and not (0 < self.dt < self.final_time):
            raise ValueError(f"dt must satisfy 0 < dt < final_time, got dt={self.dt}")
        if not isinstance(self.law, FEEDBACK_TYPES):
            raise ValueError(f"law must be a feedback law, got {self.law!r}")
        if self.initial.grid != self.grid:
            raise ValueError("initial state lives on a different grid")
        return self


def build_sim_config(**kwargs) -> SimConfig:
    try:
        return SimConfig(**kwargs)
    except ValidationError as exc:
        raise ConfigurationError(f"Invalid simulation config: {exc}") from exc


def load_profile_table(path: Path):
    try:
        frame = pd.read_csv(path)
    except (OSError, pd.errors.ParserError) as exc:
        raise ConfigurationError(f"Cannot read tabulated profile {path}: {exc}") from exc
    if not {"x", "y"}.issubset(frame.columns):
        raise ConfigurationError(f"Tabulated profile {path} needs columns 'x' and 'y'")
    return frame["x"].to_numpy(dtype=float), frame["y"].to_numpy(dtype=float)


def parse_scenario_text(text: str, source: str = "<scenario>") -> ScenarioFile:
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{source}:{lineno}: expected 'key = value', got '{raw.strip()}'")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigurationError(f"{source}:{lineno}: empty key")
        if key in entries:
            raise ConfigurationError(f"{source}:{lineno}: duplicate key '{key}'")
        entries[key] = value
    try:
        return ScenarioFile(**entries)
    except ValidationError as exc:
        errors = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'scenario'}: {err['msg']}" for err in exc.errors()
        )
        raise ConfigurationError(f"{source}: {errors}") from exc


def load_scenario(path: Union[str, Path]) -> ScenarioFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"Cannot read scenario {path}: {exc}") from exc
    scenario = parse_scenario_text(text, source=str(path))
    logger.info("Loaded scenario %s from %s", scenario.name, path)
    return scenario


def scenario_to_config(scenario: ScenarioFile, base_dir: Path = Path(".")) -> SimConfig:
    try:
        return scenario.to_sim_config(base_dir)
    except ValidationError as exc:
        raise ConfigurationError(f"Scenario {scenario.name}: {exc}") from exc
    except KdvError as exc:
        if isinstance(exc, ConfigurationError):
            raise
        raise ConfigurationError(f"Scenario {scenario.name}: {exc.detail}") from exc
