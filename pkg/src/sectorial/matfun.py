"""Representable operator monotone functions and their action on
accretive matrices.

A function f in the class m (operator monotone on (0, inf), f(1) = 1) is
carried as a discrete probability measure: nodes s_i in (0, 1) and
positive weights w_i summing to one, such that

    f(x) ~= sum_i w_i * ((1 - s_i) + s_i / x)^(-1)
    f(A)  = sum_i w_i * ((1 - s_i) I + s_i A^(-1))^(-1),

the matrix form being valid for any accretive A. Because each term
x -> x / ((1 - s) x + s) is itself operator monotone with value 1 at 1,
the discretized function is an exact member of the class, with the
discrete measure as its exact representing measure; the quadrature error
lives only in the distance to the *named* scalar function.

Fractional powers use the Loewner measure of x^t,

    d nu_t(s) = sin(t pi)/pi * s^(t-1) (1-s)^(-t) ds,

discretized by a tanh-sinh (double-exponential) rule whose variable
change absorbs both endpoint singularities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import expit

from .errors import DomainError, NotAccretiveError, SingularMatrixError
from .linalg import as_matrix, hermitian_eigen, inverse, lambda_min, real_part

__all__ = [
    "DEFAULT_NODES",
    "MonotoneRep",
    "power_rep",
    "single_atom_rep",
    "builtin_reps",
    "apply_monotone",
    "fractional_power",
    "hermitian_apply",
    "kubo_mean_hermitian",
]

#: Default tanh-sinh node budget for fractional-power representations.
DEFAULT_NODES = 96

#: Scalar arguments at which every representation must reproduce its
#: named function, and the relative tolerance of that gate.
_VALIDATION_GRID = (0.1, 0.5, 2.0, 10.0)
_VALIDATION_RTOL = 1e-7


@dataclass(frozen=True)
class MonotoneRep:
    """Discretely represented operator monotone function with f(1) = 1.

    Construction validates the probability-measure invariants and checks
    that the quadrature reproduces ``scalar_eval`` on a fixed grid of
    arguments; an invalid representation never escapes.
    """

    name: str
    scalar_eval: Callable[[float], float]
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.ndim != 1 or nodes.shape != weights.shape:
            raise DomainError("nodes and weights must be 1-D arrays of equal length")
        if not (np.all(nodes > 0.0) and np.all(nodes < 1.0)):
            raise DomainError("nodes must lie strictly inside (0, 1)")
        if not np.all(weights > 0.0):
            raise DomainError("weights must be strictly positive")
        if abs(float(weights.sum()) - 1.0) > 1e-10:
            raise DomainError("weights must sum to 1 (probability measure)")
        if abs(self.scalar_eval(1.0) - 1.0) > 1e-12:
            raise DomainError(f"{self.name}: scalar form must satisfy f(1) = 1")
        for x in _VALIDATION_GRID:
            expect = self.scalar_eval(x)
            got = self(x)
            if abs(got - expect) > _VALIDATION_RTOL * abs(expect):
                raise DomainError(
                    f"{self.name}: quadrature reproduces f({x}) = {expect!r} "
                    f"only to {abs(got - expect):.3e}"
                )
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def __call__(self, x: float) -> float:
        """Evaluate the discretized scalar function at x > 0."""
        s = self.nodes
        return float(np.sum(self.weights * x / ((1.0 - s) * x + s)))

    def scalar_sigma(self, a: float, b: float) -> float:
        """Scalar Kubo-Ando mean a sigma_f b under the same measure."""
        s = self.nodes
        return float(np.sum(self.weights * a * b / ((1.0 - s) * b + s * a)))


def _log_cosh(u: np.ndarray) -> np.ndarray:
    au = np.abs(u)
    return au + np.log1p(np.exp(-2.0 * au)) - math.log(2.0)


@lru_cache(maxsize=4096)
def power_rep(t: float, n_nodes: int = DEFAULT_NODES) -> MonotoneRep:
    """Representation of f(x) = x^t for t in (0, 1).

    tanh-sinh discretization of the Loewner density
    sin(t pi)/pi * s^(t-1) (1-s)^(-t): nodes s_k = (1 + tanh(v_k))/2 with
    v_k = (pi/2) sinh(k h). The truncation window scales like
    1/min(t, 1-t) so the slowest-decaying endpoint is always resolved;
    weights are computed in log space and renormalized to sum exactly 1.
    """
    if not 0.0 < t < 1.0:
        raise DomainError(f"power exponent must lie in (0, 1), got {t}")
    if n_nodes < 8:
        raise DomainError("n_nodes must be at least 8")
    half = n_nodes // 2
    # Truncation window: the density decays like exp(-2 min(t, 1-t) |v|),
    # so the window grows as 1/min(t, 1-t) while the step h only grows
    # logarithmically. The constant balances the ~exp(-25) truncation tail
    # against discretization error, which dominates for wide windows.
    reach = max(25.0 / (2.0 * min(t, 1.0 - t)), 40.0)
    h = math.asinh(2.0 * reach / math.pi) / half
    u = h * np.arange(-half, half + 1)
    v = 0.5 * math.pi * np.sinh(u)
    # Nodes whose true position underflows are clamped to the closest
    # representable point inside (0, 1); they still carry their weight
    # (for extreme t most of the mass lives in that region).
    s = np.clip(expit(2.0 * v), np.finfo(float).tiny, np.nextafter(1.0, 0.0))
    log_s = -np.logaddexp(0.0, -2.0 * v)
    log_1ms = -np.logaddexp(0.0, 2.0 * v)
    log_ds = math.log(0.25 * math.pi * h) + _log_cosh(u) + 2.0 * (
        math.log(2.0) - np.logaddexp(v, -v)
    )
    log_w = log_ds + (t - 1.0) * log_s - t * log_1ms + math.log(math.sin(math.pi * t) / math.pi)
    w = np.exp(log_w)
    keep = w > 0.0
    s, w = s[keep], w[keep]
    w = w / w.sum()
    return MonotoneRep(
        name=f"power({t:g})",
        scalar_eval=lambda x, _t=t: x**_t,
        nodes=s,
        weights=w,
    )


def single_atom_rep(s0: float) -> MonotoneRep:
    """Representation with a single atom at s0: f(x) = x / ((1-s0) x + s0)."""
    if not 0.0 < s0 < 1.0:
        raise DomainError(f"atom must lie in (0, 1), got {s0}")
    return MonotoneRep(
        name=f"atom({s0:g})",
        scalar_eval=lambda x, _s=s0: x / ((1.0 - _s) * x + _s),
        nodes=np.array([s0]),
        weights=np.array([1.0]),
    )


def builtin_reps(n_nodes: int = DEFAULT_NODES) -> list[MonotoneRep]:
    """The registry of representations exercised by the harness.

    Power functions x^t for t in {1/4, 1/2, 3/4} and single-atom means
    for s0 in {1/4, 1/2, 3/4}. The arithmetic mean (atoms at s = 0 and
    s = 1) is intentionally absent: its atoms need A and B directly
    rather than resolvents, and arithmetic combinations are formed
    directly where needed.
    """
    reps = [power_rep(t, n_nodes) for t in (0.25, 0.5, 0.75)]
    reps += [single_atom_rep(s0) for s0 in (0.25, 0.5, 0.75)]
    return reps


def _require_accretive(m: np.ndarray, what: str) -> None:
    re = real_part(m)
    low = lambda_min(re) if m.shape[0] <= 3 else float(np.linalg.eigvalsh(re)[0])
    if low <= 0.0:
        raise NotAccretiveError(f"{what}: lambda_min(Re A) = {low:.3e} <= 0")


def apply_monotone(rep: MonotoneRep, a) -> np.ndarray:
    """f(A) = sum_i w_i ((1-s_i) I + s_i A^(-1))^(-1) for accretive A.

    Each resolvent is computed as ((1-s_i) A + s_i I)^(-1) A, one batched
    LU solve per node; A^(-1) is never formed.
    """
    m = as_matrix(a)
    _require_accretive(m, "apply_monotone")
    n = m.shape[0]
    s = rep.nodes[:, None, None]
    lhs = (1.0 - s) * m + s * np.eye(n, dtype=complex)
    rhs = np.broadcast_to(m, lhs.shape)
    try:
        terms = np.linalg.solve(lhs, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(
            "resolvent solve failed; input violates accretivity"
        ) from exc
    return np.tensordot(rep.weights, terms, axes=1)


def fractional_power(a, t: float, n_nodes: int = DEFAULT_NODES) -> np.ndarray:
    """A^t for accretive A and t in (-1, 1).

    t = 0 gives the identity (continuity convention); negative powers are
    defined as A^t = (A^(-1))^(-t).
    """
    m = as_matrix(a)
    if not -1.0 < t < 1.0:
        raise DomainError(f"fractional power requires |t| < 1, got {t}")
    _require_accretive(m, "fractional_power")
    if t == 0.0:
        return np.eye(m.shape[0], dtype=complex)
    if t < 0.0:
        return apply_monotone(power_rep(-t, n_nodes), inverse(m))
    return apply_monotone(power_rep(t, n_nodes), m)


def hermitian_apply(fn: Callable[[np.ndarray], np.ndarray], h) -> np.ndarray:
    """Functional calculus V f(Lambda) V* for Hermitian input.

    ``fn`` is applied to the eigenvalue vector; the caller is responsible
    for the eigenvalues lying in fn's domain.
    """
    values, vectors = hermitian_eigen(h)
    transformed = np.asarray(fn(values), dtype=float)
    out = (vectors * transformed) @ vectors.conj().T
    return 0.5 * (out + out.conj().T)


def kubo_mean_hermitian(fn: Callable[[np.ndarray], np.ndarray], x, y) -> np.ndarray:
    """Kubo-Ando mean of positive definite X, Y by Hermitian calculus:
    X^(1/2) f(X^(-1/2) Y X^(-1/2)) X^(1/2)."""
    xm = as_matrix(x)
    ym = as_matrix(y)
    values, vectors = hermitian_eigen(xm)
    if float(values[0]) <= 0.0:
        raise NotAccretiveError("left operand must be positive definite")
    root = (vectors * np.sqrt(values)) @ vectors.conj().T
    inv_root = (vectors / np.sqrt(values)) @ vectors.conj().T
    inner = inv_root @ ym @ inv_root.conj().T
    out = root @ hermitian_apply(fn, inner) @ root.conj().T
    return 0.5 * (out + out.conj().T)
