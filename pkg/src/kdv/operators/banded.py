"""Band-storage matrices with a reusable LAPACK LU factorization."""
import logging
from typing import Optional

import numpy as np
from scipy import sparse
from scipy.linalg import lapack

from src.kdv.errors import DimensionError, FactorizationError

logger = logging.getLogger(__name__)

# a pivot smaller than this fraction of its row maximum counts as singular
PIVOT_TOLERANCE = 1e-13


class BandedMatrix:
    """
    Square matrix in diagonal-ordered band storage.

    Entry A[i, j] lives at ``band[ku + i - j, j]`` (the layout used by
    ``scipy.linalg.solve_banded``). The LU factors are computed on first
    solve and reused afterwards; once factorized the instance is read-only
    and safe to share between threads for concurrent solves.
    """

    def __init__(self, band: np.ndarray, lower: int, upper: int):
        band = np.array(band, dtype=float, copy=True)
        if lower < 0 or upper < 0:
            raise DimensionError("Bandwidths must be nonnegative")
        if band.ndim != 2 or band.shape[0] != lower + upper + 1:
            raise DimensionError(
                f"Band storage needs {lower + upper + 1} rows, got shape {band.shape}"
            )
        band.setflags(write=False)
        self.band = band
        self.lower = lower
        self.upper = upper
        self.n = band.shape[1]
        self._lu: Optional[np.ndarray] = None
        self._piv: Optional[np.ndarray] = None

    @classmethod
    def from_sparse(cls, matrix, lower: int, upper: int) -> "BandedMatrix":
        coo = sparse.coo_matrix(matrix)
        n, m = coo.shape
        if n != m:
            raise DimensionError(f"Banded matrices must be square, got {coo.shape}")
        offsets = coo.col - coo.row
        if np.any(offsets > upper) or np.any(-offsets > lower):
            raise DimensionError(
                f"Matrix has entries outside the band (lower={lower}, upper={upper})"
            )
        band = np.zeros((lower + upper + 1, n))
        np.add.at(band, (upper + coo.row - coo.col, coo.col), coo.data)
        return cls(band, lower, upper)

    @classmethod
    def identity(cls, n: int) -> "BandedMatrix":
        return cls(np.ones((1, n)), 0, 0)

    @property
    def is_factorized(self) -> bool:
        return self._lu is not None

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.n, self.n))
        for k in range(-self.lower, self.upper + 1):
            row = self.upper - k
            if k >= 0:
                dense[np.arange(self.n - k), np.arange(k, self.n)] = self.band[row, k:]
            else:
                dense[np.arange(-k, self.n), np.arange(self.n + k)] = self.band[row, :self.n + k]
        return dense

    def matvec(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[0] != self.n:
            raise DimensionError(f"Vector of length {x.shape[0]} for matrix of size {self.n}")
        out = np.zeros_like(x)
        for k in range(-self.lower, self.upper + 1):
            diag = self.band[self.upper - k]
            if k >= 0:
                out[:self.n - k] += diag[k:] * x[k:]
            else:
                out[-k:] += diag[:self.n + k] * x[:self.n + k]
        return out

    def _row_max(self) -> np.ndarray:
        dense_rows = np.zeros(self.n)
        for k in range(-self.lower, self.upper + 1):
            diag = np.abs(self.band[self.upper - k])
            if k >= 0:
                dense_rows[:self.n - k] = np.maximum(dense_rows[:self.n - k], diag[k:])
            else:
                dense_rows[-k:] = np.maximum(dense_rows[-k:], diag[:self.n + k])
        return dense_rows

    def factorize(self) -> "BandedMatrix":
        if self.is_factorized:
            return self
        kl, ku = self.lower, self.upper
        # dgbtrf wants kl extra rows on top for the fill-in of row interchanges
        work = np.zeros((2 * kl + ku + 1, self.n))
        work[kl:, :] = self.band
        lu, piv, info = lapack.dgbtrf(work, kl, ku)
        if info < 0:
            raise FactorizationError(f"dgbtrf rejected argument {-info}")
        if info > 0:
            raise FactorizationError(f"Exactly singular pivot at row {info}")
        pivots = np.abs(lu[kl + ku])
        row_max = self._row_max()
        tiny = pivots < PIVOT_TOLERANCE * row_max
        if np.any(tiny):
            row = int(np.argmax(tiny))
            raise FactorizationError(
                f"Pivot {pivots[row]:.3e} at row {row} is below {PIVOT_TOLERANCE:g} of the row maximum"
            )
        self._lu, self._piv = lu, piv
        logger.debug("Factorized banded matrix n=%d (kl=%d, ku=%d)", self.n, kl, ku)
        return self

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        self.factorize()
        rhs = np.asarray(rhs, dtype=float)
        if rhs.shape[0] != self.n:
            raise DimensionError(f"Right-hand side of length {rhs.shape[0]} for matrix of size {self.n}")
        columns = np.asfortranarray(rhs.reshape(self.n, -1))
        x, info = lapack.dgbtrs(self._lu, self.lower, self.upper, columns, self._piv)
        if info != 0:
            raise FactorizationError(f"dgbtrs failed with info={info}")
        return np.asarray(x).reshape(rhs.shape)


def solve_banded(matrix: BandedMatrix, rhs: np.ndarray) -> np.ndarray:
    """Solve matrix @ x = rhs, reusing the cached factorization of ``matrix``."""
    return matrix.solve(rhs)
