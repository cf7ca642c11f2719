"""Seeded generation of structured test matrices.

Reproducibility contract: every generator is a pure function of its
GenSpec. Randomness comes from numpy's Philox counter-based bit
generator keyed by the spec's 64-bit seed, so draws are identical across
platforms and safe to produce in parallel. Seeds for related draws are
derived with ``derive_seed``, a BLAKE2b hash of the canonicalized
components (ints, floats by their IEEE-754 bytes, strings by UTF-8).
"""

from __future__ import annotations

import hashlib
import math
import struct
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, DomainError
from .linalg import as_matrix

__all__ = [
    "GenSpec",
    "derive_seed",
    "random_positive_definite",
    "random_sectorial",
    "block_antidiagonal",
]


def derive_seed(*components) -> int:
    """Collapse ints / floats / strings into a well-mixed 64-bit seed."""
    blob = bytearray()
    for part in components:
        if isinstance(part, bool):
            raise DomainError("booleans are ambiguous seed components")
        if isinstance(part, int):
            blob += b"i" + part.to_bytes(16, "little", signed=True)
        elif isinstance(part, float):
            blob += b"f" + struct.pack("<d", part)
        elif isinstance(part, str):
            blob += b"s" + part.encode("utf-8")
        else:
            raise DomainError(f"unsupported seed component type {type(part)!r}")
        blob += b"\x00"
    digest = hashlib.blake2b(bytes(blob), digest_size=8).digest()
    return int.from_bytes(digest, "little")


@dataclass(frozen=True)
class GenSpec:
    """Parameters of one random draw."""

    dim: int
    alpha_target: float = 0.0
    seed: int = 0
    condition_cap: float = 100.0

    def __post_init__(self):
        if self.dim < 1:
            raise DomainError(f"dim must be >= 1, got {self.dim}")
        if not 0.0 <= self.alpha_target < math.pi / 2.0:
            raise DomainError(
                f"alpha_target must lie in [0, pi/2), got {self.alpha_target}"
            )
        if self.condition_cap < 1.0:
            raise DomainError(f"condition_cap must be >= 1, got {self.condition_cap}")


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed & (2**64 - 1)))


def _haar_like_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    phases = d / np.abs(d)
    return q * phases.conj()


def _draw_positive(rng: np.random.Generator, dim: int, cap: float) -> np.ndarray:
    q = _haar_like_unitary(rng, dim)
    lam = np.exp(rng.uniform(0.0, math.log(cap), dim)) if cap > 1.0 else np.ones(dim)
    h = (q * lam) @ q.conj().T
    return 0.5 * (h + h.conj().T)


def random_positive_definite(spec: GenSpec) -> np.ndarray:
    """Q diag(lambda) Q* with Haar-like Q and lambda log-uniform in
    [1, condition_cap]; condition_cap = 1 returns the identity."""
    rng = _rng(spec.seed)
    return _draw_positive(rng, spec.dim, spec.condition_cap)


def random_sectorial(spec: GenSpec) -> np.ndarray:
    """Accretive matrix with certified numerical range inside the sector
    of half-angle alpha_target.

    Construction: A = H^(1/2) (I + iT) H^(1/2) with H positive definite
    and T Hermitian scaled to ||T|| = u * tan(alpha_target), u uniform in
    [0.5, 1]. For any unit x, with y = H^(1/2) x,

        <A x, x> = ||y||^2 + i <T y, y>,

    so |Im| / Re <= ||T|| <= tan(alpha_target): the certificate is exact
    by construction, and the true sectorial index equals
    atan(u * tan(alpha_target)).
    """
    rng = _rng(spec.seed)
    h = _draw_positive(rng, spec.dim, spec.condition_cap)
    if spec.alpha_target == 0.0:
        return h
    t0 = rng.standard_normal((spec.dim, spec.dim)) + 1j * rng.standard_normal(
        (spec.dim, spec.dim)
    )
    t0 = 0.5 * (t0 + t0.conj().T)
    u = rng.uniform(0.5, 1.0)
    top = float(np.abs(np.linalg.eigvalsh(t0)).max())
    if top == 0.0:  # measure-zero draw; keep the certificate valid
        return h
    t = t0 * (math.tan(spec.alpha_target) * u / top)
    values, vectors = np.linalg.eigh(h)
    root = (vectors * np.sqrt(values)) @ vectors.conj().T
    eye = np.eye(spec.dim, dtype=complex)
    return root @ (eye + 1j * t) @ root.conj().T


def block_antidiagonal(a, b) -> np.ndarray:
    """The 2n x 2n block matrix [[0, A], [B, 0]]."""
    am = as_matrix(a)
    bm = as_matrix(b)
    if am.shape != bm.shape:
        raise DimensionMismatchError(
            f"blocks have shapes {am.shape} and {bm.shape}"
        )
    n = am.shape[0]
    zero = np.zeros((n, n), dtype=complex)
    return np.block([[zero, am], [bm, zero]])
