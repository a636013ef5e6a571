"""Critical lengths L = 2 pi sqrt((k^2 + k l + l^2) / 3) of the linearized equation."""
from dataclasses import dataclass
from typing import List

import numpy as np

from src.kdv.errors import DomainError


@dataclass(frozen=True)
class CriticalLengthQuery:
    length: float
    search_bound: int = 50
    tolerance: float = 1e-9

    def __post_init__(self):
        if not self.length > 0:
            raise DomainError(f"Length must be positive, got {self.length}")
        if int(self.search_bound) != self.search_bound or self.search_bound < 1:
            raise DomainError(f"Search bound must be an integer >= 1, got {self.search_bound}")
        if not self.tolerance > 0:
            raise DomainError(f"Tolerance must be positive, got {self.tolerance}")


@dataclass(frozen=True)
class CriticalMatch:
    k: int
    l: int
    length: float


def critical_length(k: int, l: int) -> float:
    return float(2.0 * np.pi * np.sqrt((k * k + k * l + l * l) / 3.0))


def critical_lengths(query: CriticalLengthQuery) -> List[CriticalMatch]:
    """All ordered pairs (k, l) in [1, bound]^2 whose critical length is within tolerance.

    Both (k, l) and (l, k) are listed, so the result is symmetric by construction.
    """
    idx = np.arange(1, int(query.search_bound) + 1)
    k, l = np.meshgrid(idx, idx, indexing="ij")
    lengths = 2.0 * np.pi * np.sqrt((k * k + k * l + l * l) / 3.0)
    hits = np.argwhere(np.abs(lengths - query.length) <= query.tolerance)
    return [CriticalMatch(int(k[i, j]), int(l[i, j]), float(lengths[i, j])) for i, j in hits]
