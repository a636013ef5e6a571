"""Distributed feedback laws f(y) acting on the whole domain."""
from dataclasses import dataclass
from typing import Union

import numpy as np

from src.kdv.errors import ConfigurationError, DomainError
from src.kdv.grid import StateField
from src.kdv.saturation import saturate_pointwise, saturate_rows


def _positive(label: str, value: float):
    if not value > 0:
        raise DomainError(f"Feedback {label} must be positive, got {value}")


@dataclass(frozen=True)
class ZeroFeedback:
    name = "zero"


@dataclass(frozen=True)
class LinearFeedback:
    gain: float
    name = "linear"

    def __post_init__(self):
        _positive("gain", self.gain)


@dataclass(frozen=True)
class SaturatedFeedback:
    gain: float
    level: float
    name = "saturated"

    def __post_init__(self):
        _positive("gain", self.gain)
        _positive("level", self.level)


@dataclass(frozen=True)
class PointwiseSaturatedFeedback:
    """Amplitude-clipped control. No stability certificate exists for it."""
    gain: float
    level: float
    name = "pointwise"

    def __post_init__(self):
        _positive("gain", self.gain)
        _positive("level", self.level)


FeedbackLaw = Union[ZeroFeedback, LinearFeedback, SaturatedFeedback, PointwiseSaturatedFeedback]
FEEDBACK_TYPES = (ZeroFeedback, LinearFeedback, SaturatedFeedback, PointwiseSaturatedFeedback)

LAW_NAMES = ("zero", "linear", "saturated", "pointwise")


def make_law(name: str, gain: float = 1.0, level: float = None) -> FeedbackLaw:
    if name == "zero":
        return ZeroFeedback()
    if name == "linear":
        return LinearFeedback(gain)
    if name in ("saturated", "pointwise"):
        if level is None:
            raise ConfigurationError(f"Law '{name}' needs a saturation level")
        cls = SaturatedFeedback if name == "saturated" else PointwiseSaturatedFeedback
        return cls(gain, level)
    raise ConfigurationError(f"Unknown feedback law '{name}', expected one of {', '.join(LAW_NAMES)}")


def control_values(law: FeedbackLaw, values: np.ndarray, h: float) -> np.ndarray:
    """f(y) on raw node values; 2-D input holds one field per row."""
    if isinstance(law, ZeroFeedback):
        return np.zeros_like(values)
    if isinstance(law, LinearFeedback):
        return law.gain * values
    if isinstance(law, SaturatedFeedback):
        return saturate_rows(law.gain * values, law.level, h)
    if isinstance(law, PointwiseSaturatedFeedback):
        return saturate_pointwise(law.gain * values, law.level)
    raise ConfigurationError(f"Unsupported feedback law {law!r}")


def control_field(law: FeedbackLaw, y: StateField) -> StateField:
    return StateField(y.grid, control_values(law, y.values, y.grid.h))
