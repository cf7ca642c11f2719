"""Kubo-Ando means of accretive matrices.

All means reduce to weighted harmonic means integrated against the
probability measure of a MonotoneRep:

    A sigma_f B = sum_i w_i (A !_{s_i} B),
    A !_s B     = ((1-s) A^(-1) + s B^(-1))^(-1).

The weighted geometric mean is sigma of a fractional-power
representation, the logarithmic mean is a Gauss-Legendre average of
geometric means over the weight t, and the Heinz mean symmetrizes the
geometric mean in t. Matching scalar forms (used as right-hand sides of
the harness inequalities) are provided under the same discretization so
that each matrix/scalar pair instantiates one exactly representable
member of the monotone class.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import DimensionMismatchError, DomainError, NotAccretiveError, SingularMatrixError
from .linalg import as_matrix, inverse, lambda_min, real_part
from .matfun import DEFAULT_NODES, MonotoneRep, power_rep

__all__ = [
    "DEFAULT_LOG_NODES",
    "harmonic_mean",
    "sigma_mean",
    "geometric_mean",
    "logarithmic_mean",
    "heinz_mean",
    "scalar_log_mean",
    "scalar_heinz",
]

#: Default Gauss-Legendre node count for the logarithmic mean's t-integral.
DEFAULT_LOG_NODES = 32


def _check_pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    am = as_matrix(a)
    bm = as_matrix(b)
    if am.shape != bm.shape:
        raise DimensionMismatchError(
            f"operands have shapes {am.shape} and {bm.shape}"
        )
    for name, m in (("left", am), ("right", bm)):
        re = real_part(m)
        low = lambda_min(re) if m.shape[0] <= 3 else float(np.linalg.eigvalsh(re)[0])
        if low <= 0.0:
            raise NotAccretiveError(f"{name} operand: lambda_min(Re) = {low:.3e} <= 0")
    return am, bm


def _harmonic_batch(inv_a: np.ndarray, inv_b: np.ndarray, nodes: np.ndarray) -> np.ndarray:
    """Stack of A !_s B over the node vector, one batched inversion."""
    s = nodes[:, None, None]
    combo = (1.0 - s) * inv_a + s * inv_b
    try:
        return np.linalg.inv(combo)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError("harmonic-mean inversion failed") from exc


def harmonic_mean(a, b, s: float) -> np.ndarray:
    """Weighted harmonic mean A !_s B for s in [0, 1] (endpoints exact)."""
    am, bm = _check_pair(a, b)
    if not 0.0 <= s <= 1.0:
        raise DomainError(f"harmonic weight must lie in [0, 1], got {s}")
    if s == 0.0:
        return am.copy()
    if s == 1.0:
        return bm.copy()
    return _harmonic_batch(inverse(am), inverse(bm), np.array([s]))[0]


def sigma_mean(rep: MonotoneRep, a, b) -> np.ndarray:
    """A sigma_f B under rep's measure. Not symmetrized: the orientation
    (A first) matters for every non-symmetric f."""
    am, bm = _check_pair(a, b)
    terms = _harmonic_batch(inverse(am), inverse(bm), rep.nodes)
    return np.tensordot(rep.weights, terms, axes=1)


def geometric_mean(a, b, t: float, n_nodes: int = DEFAULT_NODES) -> np.ndarray:
    """Weighted geometric mean A #_t B, t in (0, 1)."""
    return sigma_mean(power_rep(t, n_nodes), a, b)


@lru_cache(maxsize=64)
def _gauss_legendre_01(k: int) -> tuple[np.ndarray, np.ndarray]:
    x, c = np.polynomial.legendre.leggauss(k)
    nodes = 0.5 * (x + 1.0)
    weights = 0.5 * c
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def logarithmic_mean(a, b, k: int = DEFAULT_LOG_NODES, n_nodes: int = DEFAULT_NODES) -> np.ndarray:
    """L(A, B) = integral of A #_t B dt, Gauss-Legendre with k nodes.

    The integrand is analytic in t for fixed accretive operands, so the
    rule converges spectrally; all harmonic-mean resolvents across the
    (t, s) tensor grid are folded into a single batched inversion.
    """
    if k < 4:
        raise DomainError(f"logarithmic mean needs k >= 4 nodes, got {k}")
    am, bm = _check_pair(a, b)
    t_nodes, t_weights = _gauss_legendre_01(k)
    s_all = []
    w_all = []
    for t, c in zip(t_nodes, t_weights):
        rep = power_rep(float(t), n_nodes)
        s_all.append(rep.nodes)
        w_all.append(c * rep.weights)
    nodes = np.concatenate(s_all)
    weights = np.concatenate(w_all)
    terms = _harmonic_batch(inverse(am), inverse(bm), nodes)
    return np.tensordot(weights, terms, axes=1)


def heinz_mean(a, b, t: float, n_nodes: int = DEFAULT_NODES) -> np.ndarray:
    """Heinz mean (A #_t B + A #_{1-t} B) / 2 for t in [0, 1].

    Endpoints use the continuity convention #_0 = left, #_1 = right, so
    t in {0, 1} yields the arithmetic mean (A + B) / 2.
    """
    am, bm = _check_pair(a, b)
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"Heinz weight must lie in [0, 1], got {t}")
    if t in (0.0, 1.0):
        return 0.5 * (am + bm)
    if t == 0.5:
        return geometric_mean(am, bm, 0.5, n_nodes)
    g1 = geometric_mean(am, bm, t, n_nodes)
    g2 = geometric_mean(am, bm, 1.0 - t, n_nodes)
    return 0.5 * (g1 + g2)


def scalar_log_mean(a: float, b: float, k: int = DEFAULT_LOG_NODES, n_nodes: int = DEFAULT_NODES) -> float:
    """Scalar logarithmic mean under the same (t, s) discretization as
    ``logarithmic_mean``."""
    t_nodes, t_weights = _gauss_legendre_01(k)
    total = 0.0
    for t, c in zip(t_nodes, t_weights):
        total += c * power_rep(float(t), n_nodes).scalar_sigma(a, b)
    return float(total)


def scalar_heinz(a: float, b: float, t: float, n_nodes: int = DEFAULT_NODES) -> float:
    """Scalar Heinz mean under the same representations as ``heinz_mean``."""
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"Heinz weight must lie in [0, 1], got {t}")
    if t in (0.0, 1.0):
        return 0.5 * (a + b)
    if t == 0.5:
        return power_rep(0.5, n_nodes).scalar_sigma(a, b)
    s1 = power_rep(t, n_nodes).scalar_sigma(a, b)
    s2 = power_rep(1.0 - t, n_nodes).scalar_sigma(a, b)
    return 0.5 * (s1 + s2)
