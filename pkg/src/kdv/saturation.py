"""L2-norm saturation, its Lipschitz ratio and the sector condition."""
from dataclasses import dataclass

import numpy as np

from src.kdv.errors import DomainError, PreconditionError, UndefinedRatioError
from src.kdv.grid import StateField, l2_norm


@dataclass(frozen=True)
class SaturationParams:
    level: float

    def __post_init__(self):
        if not self.level > 0:
            raise DomainError(f"Saturation level must be positive, got {self.level}")


@dataclass(frozen=True)
class SectorGain:
    gain_a: float
    radius_r: float
    k_of_r: float

    def __post_init__(self):
        if not self.k_of_r > 0:
            raise DomainError(f"Sector gain must be positive, got {self.k_of_r}")


def saturate_rows(values: np.ndarray, level: float, h: float) -> np.ndarray:
    """Apply the L2 saturation along the last axis.

    Works on a single field (1-D) or a stack of fields (2-D, one per row).
    Rows whose norm does not exceed the level are returned bit-identical.
    """
    values = np.asarray(values, dtype=float)
    norms = np.sqrt(h * np.einsum("...i,...i->...", values, values))
    over = norms > level
    if not np.any(over):
        return values.copy()
    factor = np.ones_like(norms)
    np.divide(level, norms, out=factor, where=over)
    return values * factor[..., None] if values.ndim > 1 else values * factor


def saturate_pointwise(values: np.ndarray, level: float) -> np.ndarray:
    """Amplitude clipping, experimental only: carries no certificate."""
    return np.clip(values, -level, level)


def sat(s: StateField, p: SaturationParams) -> StateField:
    # single branch on ||s|| > u_s; both formulas agree at equality
    norm = l2_norm(s)
    if norm > p.level:
        return s * (p.level / norm)
    return s


def lipschitz_ratio(s: StateField, s_tilde: StateField, p: SaturationParams) -> float:
    diff = l2_norm(s - s_tilde)
    if diff == 0.0:
        raise UndefinedRatioError("Lipschitz ratio undefined for identical fields")
    return l2_norm(sat(s, p) - sat(s_tilde, p)) / diff


def sector_gain(a: float, u_s: float, r: float) -> SectorGain:
    for label, value in (("a", a), ("u_s", u_s), ("r", r)):
        if not value > 0:
            raise DomainError(f"sector_gain needs {label} > 0, got {value}")
    return SectorGain(gain_a=a, radius_r=r, k_of_r=min(u_s / (a * r), 1.0))


def sector_defect(s: StateField, g: SectorGain, p: SaturationParams) -> float:
    """Smallest nodal value of (sat(a s) - k(r) a s) * s.

    The sector lemma states this is nonnegative whenever ||s|| <= r.
    """
    norm = l2_norm(s)
    if norm > g.radius_r:
        raise PreconditionError(
            f"Sector condition needs ||s|| <= r, got ||s|| = {norm:.17g} > r = {g.radius_r:.17g}"
        )
    a_s = g.gain_a * s.values
    saturated = saturate_rows(a_s, p.level, s.grid.h)
    beta = (saturated - g.k_of_r * a_s) * s.values
    return float(np.min(beta))
