"""Numerical range quantities: the numerical radius w(A), boundary points
of W(A), accretivity, and the sectorial index.

w(A) is computed from the support-function identity

    w(A) = max over theta of lambda_max(Re(e^{i theta} A)),

where Re(e^{i theta} A) = cos(theta) * Re(A) - sin(theta) * Im(A). The
maximand h(theta) is a pointwise maximum of cosines with amplitudes
|<Ax, x>| <= w(A), so its global maximum sits on a smooth cosine crest
with |h''| <= w(A). A coarse grid of ``grid`` points therefore brackets
every candidate crest; golden-section refinement is launched from every
strict local maximum of the grid (h is not assumed unimodal) and runs
until the bracket is narrower than ``bracket_tol`` radians. The grid
error of the returned value is bounded by w * (pi/grid)^2 / 2 before
refinement and is negligible after it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NotAccretiveError
from .linalg import as_matrix, imag_part, lambda_max, lambda_min, real_part, spectral_norm

__all__ = [
    "DEFAULT_GRID",
    "BRACKET_TOL",
    "BoundaryPoint",
    "SectorProfile",
    "numerical_radius",
    "boundary_scan",
    "sectorial_index",
    "is_accretive",
    "sector_profile",
]

#: Default number of support directions sampled on [0, 2*pi).
DEFAULT_GRID = 1024

#: Golden-section refinement stops once a bracket is this narrow (radians).
BRACKET_TOL = 1e-10

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class BoundaryPoint:
    """A sampled point z = <A x, x> of W(A) with its attaining unit vector."""

    theta: float
    z: complex
    vector: np.ndarray


@dataclass(frozen=True)
class SectorProfile:
    """Summary of one matrix: accretivity, sectorial index, w and norm."""

    accretive: bool
    alpha: float | None
    numerical_radius: float
    spectral_norm: float
    min_real_part: float


def _cos_sin_combo(p: np.ndarray, q: np.ndarray, thetas: np.ndarray, sign: float) -> np.ndarray:
    """Stack of Hermitian matrices cos(t) * p + sign * sin(t) * q."""
    return (
        np.cos(thetas)[:, None, None] * p
        + sign * np.sin(thetas)[:, None, None] * q
    )


def _support_values(p: np.ndarray, q: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """h(theta) = lambda_max(Re(e^{i theta} A)) for a batch of angles."""
    return np.asarray(lambda_max(_cos_sin_combo(p, q, thetas, -1.0)))


def _local_max_brackets(values: np.ndarray, step: float, thetas: np.ndarray):
    """Initial refinement brackets: one per strict cyclic local maximum,
    always including the global argmax (ties resolved to the smallest
    theta by argmax)."""
    mask = (values > np.roll(values, 1)) & (values > np.roll(values, -1))
    seeds = np.union1d(np.flatnonzero(mask), [int(np.argmax(values))])
    return thetas[seeds] - step, thetas[seeds] + step


def _golden_refine(evaluate, lo, hi, bracket_tol, prune_curvature=None):
    """Vectorized golden-section ascent on all brackets simultaneously.

    ``evaluate`` maps an array of angles to objective values. Returns the
    best value seen anywhere. With ``prune_curvature`` = C, a bracket is
    abandoned once max_value_in_bracket + C * width^2 / 8 cannot beat the
    running best (valid when the objective has second derivative >= -C at
    its smooth maxima).
    """
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    c = lo + (1.0 - _INVPHI) * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    fc = evaluate(c)
    fd = evaluate(d)
    best = max(float(fc.max()), float(fd.max()))
    active = np.ones(lo.shape, dtype=bool)
    while True:
        width = hi - lo
        active &= width > bracket_tol
        if prune_curvature is not None:
            cap = np.maximum(fc, fd) + prune_curvature * width * width / 8.0
            active &= cap >= best
        idx = np.flatnonzero(active)
        if idx.size == 0:
            return best
        left = fc[idx] >= fd[idx]
        il, ir = idx[left], idx[~left]
        # shrink toward the higher interior point, reusing its evaluation
        hi[il] = d[il]
        d[il] = c[il]
        fd[il] = fc[il]
        lo[ir] = c[ir]
        c[ir] = d[ir]
        fc[ir] = fd[ir]
        fresh = np.empty(idx.size, dtype=float)
        fresh[left] = lo[il] + (1.0 - _INVPHI) * (hi[il] - lo[il])
        fresh[~left] = lo[ir] + _INVPHI * (hi[ir] - lo[ir])
        fval = evaluate(fresh)
        c[il] = fresh[left]
        fc[il] = fval[left]
        d[ir] = fresh[~left]
        fd[ir] = fval[~left]
        best = max(best, float(fval.max()))


def numerical_radius(a, grid: int = DEFAULT_GRID, bracket_tol: float = BRACKET_TOL) -> float:
    """Numerical radius w(A) = max |<Ax, x>| over unit vectors."""
    m = as_matrix(a)
    if grid < 8:
        raise DomainError("grid must be at least 8")
    if np.array_equal(m, m.conj().T):
        # exactly Hermitian: W(A) = [lambda_min, lambda_max], and the
        # support crest sits at theta in {0, pi}, both grid points
        if m.shape[0] <= 3:
            return max(abs(lambda_max(m)), abs(lambda_min(m)))
        eigs = np.linalg.eigvalsh(m)
        return float(np.abs(eigs).max())
    p = real_part(m)
    q = imag_part(m)
    step = 2.0 * math.pi / grid
    thetas = step * np.arange(grid)
    h = _support_values(p, q, thetas)
    best = float(h.max())
    lo, hi = _local_max_brackets(h, step, thetas)
    # amplitude bound for the crest curvature: w <= grid max / cos(step/2)
    curvature = abs(best) / math.cos(step / 2.0) + 1e-300
    refined = _golden_refine(
        lambda ths: _support_values(p, q, ths), lo, hi, bracket_tol, curvature
    )
    return max(best, refined)


def _boundary_batch(m: np.ndarray, p: np.ndarray, q: np.ndarray, thetas: np.ndarray):
    """Support points z(theta) = <A x, x>, x a top eigenvector of
    Re(e^{-i theta} A)."""
    stack = _cos_sin_combo(p, q, thetas, +1.0)
    _, vectors = np.linalg.eigh(stack)
    x = vectors[..., -1]
    z = np.einsum("bi,ij,bj->b", x.conj(), m, x)
    return z, x


def boundary_scan(a, grid: int = DEFAULT_GRID) -> list[BoundaryPoint]:
    """Sample W(A) at ``grid`` support directions theta_k = 2 pi k / grid.

    Each returned point lies in W(A); the convex hull of the points
    converges to W(A) as the grid is refined.
    """
    m = as_matrix(a)
    if grid < 8:
        raise DomainError("grid must be at least 8")
    p = real_part(m)
    q = imag_part(m)
    thetas = 2.0 * math.pi / grid * np.arange(grid)
    z, x = _boundary_batch(m, p, q, thetas)
    return [
        BoundaryPoint(float(t), complex(zz), vec.copy())
        for t, zz, vec in zip(thetas, z, x)
    ]


def is_accretive(a) -> bool:
    """True iff lambda_min(Re A) > 0 strictly (no tolerance slack)."""
    m = as_matrix(a)
    re = real_part(m)
    if m.shape[0] <= 3:
        low = lambda_min(re)
    else:
        low = float(np.linalg.eigvalsh(re)[0])
    return low > 0.0


def sectorial_index(a, grid: int = DEFAULT_GRID, bracket_tol: float = BRACKET_TOL) -> float:
    """Smallest alpha with W(A) inside {z : |Im z| <= tan(alpha) Re z}.

    Requires accretive input. The index is the maximum of
    g(theta) = arctan(|Im z| / Re z) over boundary support points; the
    maximizing brackets of a ``grid``-point scan are refined by
    golden section. The returned value never exceeds the true index
    (every evaluated point lies in W(A)).
    """
    m = as_matrix(a)
    if grid < 8:
        raise DomainError("grid must be at least 8")
    re = real_part(m)
    low = lambda_min(re) if m.shape[0] <= 3 else float(np.linalg.eigvalsh(re)[0])
    if low <= 0.0:
        raise NotAccretiveError(
            f"lambda_min(Re A) = {low:.3e}; the sectorial index requires Re A > 0"
        )
    p = re
    q = imag_part(m)
    step = 2.0 * math.pi / grid
    thetas = step * np.arange(grid)

    def angles(ths: np.ndarray) -> np.ndarray:
        z, _ = _boundary_batch(m, p, q, ths)
        return np.arctan2(np.abs(z.imag), z.real)

    g = angles(thetas)
    best = float(g.max())
    lo, hi = _local_max_brackets(g, step, thetas)
    refined = _golden_refine(angles, lo, hi, bracket_tol)
    return min(max(best, refined), math.pi / 2.0)


def sector_profile(a, grid: int = DEFAULT_GRID) -> SectorProfile:
    """Accretivity, sectorial index (None when not accretive), w and norm."""
    m = as_matrix(a)
    re = real_part(m)
    low = lambda_min(re) if m.shape[0] <= 3 else float(np.linalg.eigvalsh(re)[0])
    accretive = low > 0.0
    alpha = sectorial_index(m, grid) if accretive else None
    return SectorProfile(
        accretive=accretive,
        alpha=alpha,
        numerical_radius=numerical_radius(m, grid),
        spectral_norm=spectral_norm(m),
        min_real_part=float(low),
    )
