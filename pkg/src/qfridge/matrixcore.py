"""Dense complex-matrix utilities shared by the whole package.

Everything operates on plain ``numpy`` arrays of dtype complex128.  The
matrices involved are tiny (8x8 operators, 64x64 superoperators), so there is
no sparse path and no attempt at clever storage.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DensityMatrixError",
    "RankAmbiguityWarning",
    "DensityMatrix",
    "require_finite",
    "dagger",
    "kron",
    "null_space",
    "dm_validate",
]

#: Relative rank threshold for null-space extraction.  The problem matrices
#: are 8- to 64-dimensional and O(1)-scaled after nondimensionalization, so a
#: single fixed relative tolerance is adequate.
DEFAULT_RANK_TOL = 1e-10

#: Default density-matrix validation tolerances (one order above solver tol).
DEFAULT_HERM_TOL = 1e-9
DEFAULT_TRACE_TOL = 1e-9
DEFAULT_PSD_TOL = 1e-9


class DensityMatrixError(ValueError):
    """A matrix failed density-matrix validation.

    ``violation`` names the broken invariant: ``"non-hermitian"``,
    ``"trace-off"`` or ``"negative-eigenvalue"``.
    """

    def __init__(self, violation: str, detail: str):
        super().__init__(f"{violation}: {detail}")
        self.violation = violation


class RankAmbiguityWarning(UserWarning):
    """Singular values cluster at the rank threshold; the null-space
    dimension is not well separated from the numerical noise floor."""


def require_finite(m: np.ndarray, name: str = "matrix") -> np.ndarray:
    """Return ``m`` as a complex array, rejecting NaN/Inf entries."""
    a = np.asarray(m, dtype=complex)
    if not np.isfinite(a).all():
        raise ValueError(f"{name} contains non-finite entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(m).conj().T


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two finite matrices."""
    return np.kron(require_finite(a, "kron operand a"),
                   require_finite(b, "kron operand b"))


def null_space(m: np.ndarray, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Orthonormal basis of the right null space of a square matrix.

    The rank is decided by a singular-value decomposition: singular values
    below ``tol * s_max`` count as zero.  Returns an ``(n, k)`` array whose
    columns span the null space (``k = 0`` for a full-rank input).

    Warns with :class:`RankAmbiguityWarning` when any singular value falls
    within a factor of 10 of the threshold on either side, since the
    reported dimension is then sensitive to the tolerance choice.
    """
    a = require_finite(m, "null_space input")
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"null_space expects a square matrix, got {a.shape}")
    _, s, vh = np.linalg.svd(a)
    if s.size == 0 or s[0] == 0.0:
        return np.eye(a.shape[0], dtype=complex)
    cut = tol * s[0]
    ambiguous = np.count_nonzero((s > cut / 10.0) & (s < cut * 10.0))
    if ambiguous:
        warnings.warn(
            f"{ambiguous} singular value(s) within a decade of the rank "
            f"threshold {cut:.3e}; null-space dimension is ambiguous",
            RankAmbiguityWarning,
            stacklevel=2,
        )
    k = int(np.count_nonzero(s < cut))
    if k == 0:
        return np.zeros((a.shape[0], 0), dtype=complex)
    return vh[-k:].conj().T


@dataclass(frozen=True)
class DensityMatrix:
    """A validated density matrix (Hermitian, unit trace, PSD within tol)."""

    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def populations(self, basis: np.ndarray | None = None) -> np.ndarray:
        """Real diagonal of the matrix, optionally in another orthonormal
        basis given as column vectors."""
        rho = self.matrix
        if basis is not None:
            rho = dagger(basis) @ rho @ basis
        return np.real(np.diag(rho))


def dm_validate(
    rho: np.ndarray,
    tol_herm: float = DEFAULT_HERM_TOL,
    tol_trace: float = DEFAULT_TRACE_TOL,
    tol_psd: float = DEFAULT_PSD_TOL,
) -> DensityMatrix:
    """Validate a candidate density matrix.

    Raises :class:`DensityMatrixError` naming the violated invariant:
    Hermiticity within ``tol_herm``, unit trace within ``tol_trace``, and
    eigenvalues above ``-tol_psd``.
    """
    a = require_finite(rho, "density matrix")
    herm = np.abs(a - dagger(a)).max()
    if herm > tol_herm:
        raise DensityMatrixError("non-hermitian", f"|rho - rho^dag| = {herm:.3e}")
    tr = np.trace(a)
    if abs(tr - 1.0) > tol_trace:
        raise DensityMatrixError("trace-off", f"trace = {tr:.12g}")
    evals = np.linalg.eigvalsh(0.5 * (a + dagger(a)))
    if evals.min() < -tol_psd:
        raise DensityMatrixError(
            "negative-eigenvalue", f"min eigenvalue = {evals.min():.3e}"
        )
    return DensityMatrix(matrix=a)
