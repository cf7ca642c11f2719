"""Dense complex matrix primitives: Hermitian parts, eigensolves, spectral
norm, LU-based inversion and the Loewner order.

Everything operates on plain numpy arrays (dtype complex128) and is pure:
no function mutates its arguments. Eigensolves and LU factorizations are
delegated to LAPACK; ``lambda_max`` carries closed-form fast paths for
1x1/2x2/3x3 Hermitian matrices because the numerical-range scans evaluate
thousands of tiny problems per call.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from .errors import (
    DimensionMismatchError,
    NoConvergenceError,
    NotHermitianError,
    SingularMatrixError,
)

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "as_matrix",
    "real_part",
    "imag_part",
    "HermitianEigen",
    "hermitian_eigen",
    "lambda_max",
    "lambda_min",
    "spectral_norm",
    "inverse",
    "loewner_margin",
    "loewner_leq",
]


@dataclass(frozen=True)
class Tolerances:
    """Central tolerance record used by every module."""

    atol: float = 1e-10
    rtol: float = 1e-8

    def effective(self, scale: float) -> float:
        return self.atol + self.rtol * abs(scale)


DEFAULT_TOL = Tolerances()

#: Relative deviation from conjugate symmetry accepted by hermitian_eigen.
HERMITIAN_CHECK_TOL = 1e-12


def as_matrix(a) -> np.ndarray:
    """Validate and return ``a`` as a square finite complex128 array."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionMismatchError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("matrix entries must be finite")
    return m


def real_part(a) -> np.ndarray:
    """Hermitian part (A + A*)/2.

    Conjugate symmetry holds exactly: entry (i,j) and entry (j,i) are
    computed from the same two IEEE additions, and the diagonal imaginary
    parts cancel exactly.
    """
    m = as_matrix(a)
    return 0.5 * (m + m.conj().T)


def imag_part(a) -> np.ndarray:
    """Hermitian matrix (A - A*)/(2i), so that A = re + i*im."""
    m = as_matrix(a)
    return (m - m.conj().T) / 2j


class HermitianEigen(NamedTuple):
    """Spectral decomposition H = V diag(values) V*, values ascending."""

    values: np.ndarray
    vectors: np.ndarray


def _require_hermitian(a, what: str = "matrix") -> np.ndarray:
    m = as_matrix(a)
    scale = max(1.0, float(np.abs(m).max()))
    dev = float(np.abs(m - m.conj().T).max())
    if dev > HERMITIAN_CHECK_TOL * scale:
        raise NotHermitianError(
            f"{what} deviates from conjugate symmetry by {dev:.3e} "
            f"(allowed {HERMITIAN_CHECK_TOL * scale:.3e})"
        )
    return 0.5 * (m + m.conj().T)


def hermitian_eigen(h) -> HermitianEigen:
    """Full spectral decomposition of a Hermitian matrix.

    The input is checked for conjugate symmetry (within 1e-12 relative),
    symmetrized, and factored; eigenvalues come back ascending with
    orthonormal eigenvector columns.
    """
    sym = _require_hermitian(h)
    try:
        values, vectors = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NoConvergenceError(str(exc)) from exc
    return HermitianEigen(values, vectors)


def lambda_max(h: np.ndarray) -> np.ndarray | float:
    """Largest eigenvalue of a Hermitian matrix or a batch of them.

    Accepts shape (n, n) or (..., n, n); no symmetry check is performed
    (hot path). For n <= 3 closed forms are used: the direct formula for
    2x2 and the trigonometric (Cardano) method for 3x3, both accurate to
    O(eps * ||H||).
    """
    n = h.shape[-1]
    if n == 1:
        out = h[..., 0, 0].real
    elif n == 2:
        a = h[..., 0, 0].real
        c = h[..., 1, 1].real
        b = h[..., 0, 1]
        mid = 0.5 * (a + c)
        dif = 0.5 * (a - c)
        out = mid + np.sqrt(dif * dif + (b * b.conj()).real)
    elif n == 3:
        a = h[..., 0, 0].real
        b = h[..., 1, 1].real
        c = h[..., 2, 2].real
        d = h[..., 0, 1]
        e = h[..., 0, 2]
        f = h[..., 1, 2]
        p1 = (d * d.conj()).real + (e * e.conj()).real + (f * f.conj()).real
        q = (a + b + c) / 3.0
        p2 = (a - q) ** 2 + (b - q) ** 2 + (c - q) ** 2 + 2.0 * p1
        p = np.sqrt(np.maximum(p2, 0.0) / 6.0)
        safe = p > 0
        ps = np.where(safe, p, 1.0)
        aa = (a - q) / ps
        bb = (b - q) / ps
        cc = (c - q) / ps
        dd = d / ps
        ee = e / ps
        ff = f / ps
        detm = (
            aa * bb * cc
            + 2.0 * (dd * ff * ee.conj()).real
            - aa * (ff * ff.conj()).real
            - bb * (ee * ee.conj()).real
            - cc * (dd * dd.conj()).real
        )
        phi = np.arccos(np.clip(0.5 * detm, -1.0, 1.0)) / 3.0
        out = np.where(safe, q + 2.0 * p * np.cos(phi), q)
    else:
        out = np.linalg.eigvalsh(h)[..., -1]
    if h.ndim == 2:
        return float(out)
    return out


def lambda_min(h: np.ndarray) -> np.ndarray | float:
    """Smallest eigenvalue, via lambda_max of the negated matrix."""
    out = lambda_max(-np.asarray(h))
    return -out


def spectral_norm(a) -> float:
    """Operator (spectral) norm sqrt(lambda_max(A* A))."""
    m = as_matrix(a)
    g = m.conj().T @ m
    top = lambda_max(0.5 * (g + g.conj().T))
    return float(np.sqrt(max(top, 0.0)))


def inverse(a) -> np.ndarray:
    """Inverse via LU with partial pivoting.

    Raises SingularMatrixError when the smallest pivot falls below
    n * eps * (max row 1-norm), a scale-invariant test.
    """
    m = as_matrix(a)
    n = m.shape[0]
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", LinAlgWarning)
            lu, piv = lu_factor(m, check_finite=False)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise SingularMatrixError(str(exc)) from exc
    row_norm = float(np.abs(m).sum(axis=1).max())
    threshold = n * np.finfo(float).eps * row_norm
    min_pivot = float(np.abs(np.diagonal(lu)).min())
    if min_pivot <= threshold:
        raise SingularMatrixError(
            f"pivot {min_pivot:.3e} below threshold {threshold:.3e}"
        )
    return lu_solve((lu, piv), np.eye(n, dtype=complex), check_finite=False)


def loewner_margin(x, y) -> float:
    """lambda_min(Y - X); nonnegative iff X <= Y in the Loewner order."""
    xm = _require_hermitian(x, "left operand")
    ym = _require_hermitian(y, "right operand")
    if xm.shape != ym.shape:
        raise DimensionMismatchError(
            f"operands have shapes {xm.shape} and {ym.shape}"
        )
    diff = ym - xm
    if diff.shape[-1] <= 3:
        return float(lambda_min(diff))
    return float(np.linalg.eigvalsh(diff)[0])


def loewner_leq(x, y, tol: float = 0.0) -> bool:
    """True iff X <= Y in the Loewner order, up to -tol on lambda_min."""
    return loewner_margin(x, y) >= -tol
