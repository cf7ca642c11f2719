"""Executable inequality checks and the randomized trial campaign runner.

Every check is a predicate over one or two generated matrices certified
to lie in a sector of half-angle alpha, parametrized where applicable by
an exponent t, a convex weight, and a monotone-function representation.
Margins are signed slacks:

* scalar bound lhs <= rhs: margin = rhs - lhs;
* two-sided chains: the minimum slack, with lhs/rhs reporting the
  binding side;
* Loewner bounds X <= Y: margin = lambda_min(Y - X), with lhs/rhs
  carrying ||X|| and ||Y|| as the scale for the tolerance;
* equalities: margin = -|difference|.

A trial passes when margin >= -(atol + rtol * max(|lhs|, |rhs|)).
Trials are deterministic: the per-trial key is a BLAKE2b hash of
(campaign seed, check id, dim, alpha, trial index) feeding a Philox
generator, so any result can be replayed bit-for-bit from its digest and
cells may be evaluated in parallel without changing the report.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import MatrixDomainError
from .genprop import GenSpec, block_antidiagonal, derive_seed, random_positive_definite, random_sectorial
from .linalg import Tolerances, inverse, lambda_min, real_part, spectral_norm
from .matfun import MonotoneRep, apply_monotone, builtin_reps, fractional_power, hermitian_apply, kubo_mean_hermitian
from .means import geometric_mean, heinz_mean, logarithmic_mean, scalar_heinz, scalar_log_mean, sigma_mean
from .numrange import numerical_radius, sectorial_index

__all__ = [
    "HARNESS_TOL",
    "DEFAULT_DIMS",
    "DEFAULT_ALPHAS",
    "TrialParams",
    "CheckDefinition",
    "CheckResult",
    "CellStats",
    "Campaign",
    "TrialReport",
    "registry",
    "registry_ids",
    "get_check",
    "evaluate_check",
    "prepare_trial",
    "run_single_trial",
    "run_cell",
    "run_trials",
]

#: Effective-tolerance parameters absorbing the documented quadrature and
#: eigensolver error budgets of the computational modules.
HARNESS_TOL = Tolerances(atol=1e-9, rtol=1e-7)

DEFAULT_DIMS = (2, 3, 5, 8)
DEFAULT_ALPHAS = (0.0, 0.1, 0.3, 0.6, 0.9, 1.2)
DEFAULT_TRIALS = 200
DEFAULT_CONDITION_CAP = 100.0

#: Discrete values mixed with uniform draws when sampling t and weights.
_PARAM_GRID = np.array([0.1, 0.25, 0.5, 0.75, 0.9])
_PARAM_LO, _PARAM_HI = 0.05, 0.95


@dataclass(frozen=True)
class TrialParams:
    """Sampled per-trial parameters (None when a check does not use them)."""

    t: float | None = None
    lam: float | None = None
    rep: MonotoneRep | None = None

    @property
    def rep_name(self) -> str | None:
        return None if self.rep is None else self.rep.name


@dataclass(frozen=True)
class CheckDefinition:
    """One verifiable inequality.

    ``evaluate`` maps (matrices, alpha, params) to (lhs, rhs, margin).
    ``t_style`` selects the exponent range: "unit" for (0, 1), "signed"
    for (-1, 1) excluding 0, "negative" for (-1, 0). Checks flagged
    ``positive_inputs`` state lemmas about positive matrices and ignore
    the cell's alpha.
    """

    id: str
    statement: str
    arity: int
    evaluate: Callable[[tuple, float, TrialParams], tuple[float, float, float]]
    needs_f: bool = False
    needs_t: bool = False
    needs_lam: bool = False
    t_style: str = "unit"
    positive_inputs: bool = False


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one trial of one check."""

    check_id: str
    passed: bool
    lhs: float
    rhs: float
    margin: float
    tol_effective: float
    digest: dict


@dataclass(frozen=True)
class CellStats:
    """Aggregate of all trials of one (check, dim, alpha) cell."""

    check: str
    dim: int
    alpha: float
    trials: int
    passes: int
    errors: int
    worst_margin: float | None
    worst_trial: int | None
    worst_seed: int | None


@dataclass(frozen=True)
class Campaign:
    """Full specification of a verification run."""

    checks: tuple[str, ...]
    dims: tuple[int, ...] = DEFAULT_DIMS
    alphas: tuple[float, ...] = DEFAULT_ALPHAS
    trials_per_cell: int = DEFAULT_TRIALS
    seed: int = 1
    mode: str = "certified"
    condition_cap: float = DEFAULT_CONDITION_CAP
    atol: float = HARNESS_TOL.atol
    rtol: float = HARNESS_TOL.rtol

    def __post_init__(self):
        if self.mode not in ("certified", "tight"):
            raise ValueError(f"mode must be 'certified' or 'tight', got {self.mode!r}")
        unknown = [c for c in self.checks if c not in registry_ids()]
        if unknown:
            raise ValueError(f"unknown check ids: {unknown}")

    @property
    def tolerances(self) -> Tolerances:
        return Tolerances(self.atol, self.rtol)


@dataclass(frozen=True)
class TrialReport:
    """Deterministic aggregate of a campaign."""

    campaign: Campaign
    cells: tuple[CellStats, ...]
    verdict: str
    flags: tuple[str, ...]

    @property
    def violations(self) -> int:
        return sum(c.trials - c.passes - c.errors for c in self.cells)

    @property
    def errors(self) -> int:
        return sum(c.errors for c in self.cells)

    def to_json_dict(self) -> dict:
        return {
            "campaign": {
                "checks": list(self.campaign.checks),
                "dims": list(self.campaign.dims),
                "alphas": list(self.campaign.alphas),
                "trials_per_cell": self.campaign.trials_per_cell,
                "condition_cap": self.campaign.condition_cap,
                "atol": self.campaign.atol,
                "rtol": self.campaign.rtol,
            },
            "mode": self.campaign.mode,
            "seed": self.campaign.seed,
            "cells": [
                {
                    "check": c.check,
                    "dim": c.dim,
                    "alpha": c.alpha,
                    "trials": c.trials,
                    "passes": c.passes,
                    "errors": c.errors,
                    "worst_margin": c.worst_margin,
                    "worst_trial": c.worst_trial,
                    "worst_seed": c.worst_seed,
                }
                for c in self.cells
            ],
            "verdict": self.verdict,
            "flags": list(self.flags),
        }


# ---------------------------------------------------------------------------
# margin helpers


def _sec(alpha: float) -> float:
    return 1.0 / math.cos(alpha)


def _two_sided(lo: float, x: float, hi: float) -> tuple[float, float, float]:
    """Binding side of a chain lo <= x <= hi."""
    if x - lo <= hi - x:
        return lo, x, x - lo
    return x, hi, hi - x


def _lmin(h: np.ndarray) -> float:
    sym = 0.5 * (h + h.conj().T)
    if sym.shape[0] <= 3:
        return float(lambda_min(sym))
    return float(np.linalg.eigvalsh(sym)[0])


def _loewner_stats(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """(||X||, ||Y||, lambda_min(Y - X)) for a Loewner claim X <= Y."""
    return spectral_norm(x), spectral_norm(y), _lmin(y - x)


def _equality(lhs: float, rhs: float) -> tuple[float, float, float]:
    return lhs, rhs, -abs(lhs - rhs)


# ---------------------------------------------------------------------------
# check evaluators


def _ck_e1(mats, alpha, p):
    (a,) = mats
    nm = spectral_norm(a)
    return _two_sided(0.5 * nm, numerical_radius(a), nm)


def _ck_t1(mats, alpha, p):
    (a,) = mats
    nm = spectral_norm(a)
    return _two_sided(math.cos(alpha) * nm, numerical_radius(a), nm)


def _ck_t2(mats, alpha, p):
    (a,) = mats
    at = fractional_power(a, p.t)
    nm = spectral_norm(at)
    return _two_sided(math.cos(p.t * alpha) * nm, numerical_radius(at), nm)


def _ck_t3(mats, alpha, p):
    (a,) = mats
    lhs = numerical_radius(a)
    rhs = _sec(alpha) * numerical_radius(real_part(a))
    return lhs, rhs, rhs - lhs


def _ck_t4(mats, alpha, p):
    (a,) = mats
    t = p.t
    wt = numerical_radius(a) ** t
    x = numerical_radius(fractional_power(a, t))
    lo = math.cos(t * alpha) * math.cos(alpha) ** t * wt
    hi = _sec(t * alpha) * _sec(alpha) ** (2.0 * t) * wt
    return _two_sided(lo, x, hi)


def _ck_t5(mats, alpha, p):
    (a,) = mats
    t = p.t
    lhs = math.cos(t * alpha) * math.cos(alpha) ** (2.0 * t) * numerical_radius(a) ** (-t)
    rhs = numerical_radius(fractional_power(a, -t))
    return lhs, rhs, rhs - lhs


def _ck_t6(mats, alpha, p):
    (a,) = mats
    lhs = math.cos(alpha) ** 3 / numerical_radius(a)
    rhs = numerical_radius(inverse(a))
    return lhs, rhs, rhs - lhs


def _ck_t7(mats, alpha, p):
    a, b = mats
    lhs = numerical_radius(a @ b)
    rhs = _sec(alpha) ** 2 * numerical_radius(a) * numerical_radius(b)
    return lhs, rhs, rhs - lhs


def _ck_t8(mats, alpha, p):
    a, b = mats
    lhs = sectorial_index(sigma_mean(p.rep, a, b))
    return lhs, alpha, alpha - lhs


def _ck_t8a(mats, alpha, p):
    (a,) = mats
    lhs = sectorial_index(apply_monotone(p.rep, a))
    return lhs, alpha, alpha - lhs


def _ck_t9(mats, alpha, p):
    (a,) = mats
    fw = p.rep(numerical_radius(a))
    x = numerical_radius(apply_monotone(p.rep, a))
    return _two_sided(math.cos(alpha) * fw, x, _sec(alpha) ** 3 * fw)


def _ck_t10(mats, alpha, p):
    a, b = mats
    lam = p.lam
    mix = (1.0 - lam) * apply_monotone(p.rep, a) + lam * apply_monotone(p.rep, b)
    lhs = numerical_radius(mix)
    rhs = _sec(alpha) ** 3 * p.rep(
        (1.0 - lam) * numerical_radius(a) + lam * numerical_radius(b)
    )
    return lhs, rhs, rhs - lhs


def _ck_t10a(mats, alpha, p):
    a, b = mats
    t = p.t
    lhs = numerical_radius(fractional_power(a, t) + fractional_power(b, t))
    rhs = 2.0 ** (1.0 - t) * _sec(alpha) ** 3 * (
        numerical_radius(a) + numerical_radius(b)
    ) ** t
    return lhs, rhs, rhs - lhs


def _ck_t11(mats, alpha, p):
    a, b = mats
    lhs = numerical_radius(apply_monotone(p.rep, a + b))
    rhs = _sec(alpha) ** 3 * (
        numerical_radius(apply_monotone(p.rep, a))
        + numerical_radius(apply_monotone(p.rep, b))
    )
    return lhs, rhs, rhs - lhs


def _ck_t11a(mats, alpha, p):
    a, b = mats
    t = p.t
    lhs = numerical_radius(fractional_power(a + b, t))
    rhs = _sec(alpha) ** 3 * numerical_radius(
        fractional_power(a, t) + fractional_power(b, t)
    )
    return lhs, rhs, rhs - lhs


def _ck_t11b(mats, alpha, p):
    a, b = mats
    t = p.t
    x = numerical_radius(fractional_power(a, t) + fractional_power(b, t))
    lo = math.cos(alpha) ** 3 * numerical_radius(fractional_power(a + b, t))
    hi = 2.0 ** (1.0 - t) * _sec(alpha) ** 3 * (
        numerical_radius(a) + numerical_radius(b)
    ) ** t
    return _two_sided(lo, x, hi)


def _ck_t12(mats, alpha, p):
    a, b = mats
    lhs = math.cos(alpha) ** 2 * max(numerical_radius(a), numerical_radius(b))
    rhs = numerical_radius(a + b)
    return lhs, rhs, rhs - lhs


def _ck_t13(mats, alpha, p):
    a, b = mats
    lhs = numerical_radius(sigma_mean(p.rep, a, b))
    rhs = _sec(alpha) ** 3 * p.rep.scalar_sigma(
        numerical_radius(a), numerical_radius(b)
    )
    return lhs, rhs, rhs - lhs


def _ck_t13a(mats, alpha, p):
    a, b = mats
    t = p.t
    lhs = numerical_radius(geometric_mean(a, b, t))
    rhs = _sec(alpha) ** 3 * numerical_radius(a) ** (1.0 - t) * numerical_radius(b) ** t
    return lhs, rhs, rhs - lhs


def _ck_t14(mats, alpha, p):
    a, b = mats
    lhs = numerical_radius(logarithmic_mean(a, b))
    rhs = _sec(alpha) ** 3 * scalar_log_mean(numerical_radius(a), numerical_radius(b))
    return lhs, rhs, rhs - lhs


def _ck_t15(mats, alpha, p):
    a, b = mats
    lhs = numerical_radius(heinz_mean(a, b, p.t))
    rhs = _sec(alpha) ** 3 * scalar_heinz(
        numerical_radius(a), numerical_radius(b), p.t
    )
    return lhs, rhs, rhs - lhs


def _ck_t16(mats, alpha, p):
    a, b = mats
    x = numerical_radius(heinz_mean(a, b, p.t))
    lo = math.cos(alpha) ** 4 * numerical_radius(geometric_mean(a, b, 0.5))
    hi = 0.5 * _sec(alpha) ** 4 * numerical_radius(a + b)
    return _two_sided(lo, x, hi)


def _ck_t17(mats, alpha, p):
    a, b = mats
    t = p.t
    wa = numerical_radius(a)
    wb = numerical_radius(b)
    lhs = math.cos(alpha) * math.sqrt(numerical_radius(a @ b))
    rhs = 0.5 * (wa ** (1.0 - t) * wb**t + wa**t * wb ** (1.0 - t))
    return lhs, rhs, rhs - lhs


def _ck_l1(mats, alpha, p):
    a, b = mats
    x = real_part(sigma_mean(p.rep, a, b))
    y = _sec(alpha) ** 2 * kubo_mean_hermitian(
        p.rep.scalar_eval, real_part(a), real_part(b)
    )
    return _loewner_stats(x, y)


def _ck_l2(mats, alpha, p):
    a, b = mats
    lhs = spectral_norm(apply_monotone(p.rep, a + b))
    rhs = spectral_norm(apply_monotone(p.rep, a) + apply_monotone(p.rep, b))
    return lhs, rhs, rhs - lhs


def _ck_l3(mats, alpha, p):
    a, b = mats
    lhs = spectral_norm(sigma_mean(p.rep, a, b))
    rhs = p.rep.scalar_sigma(spectral_norm(a), spectral_norm(b))
    return lhs, rhs, rhs - lhs


def _ck_l4(mats, alpha, p):
    (a,) = mats
    fre = hermitian_apply(p.rep.scalar_eval, real_part(a))
    ref = real_part(apply_monotone(p.rep, a))
    m1 = _lmin(ref - fre)
    m2 = _lmin(_sec(alpha) ** 2 * fre - ref)
    return spectral_norm(fre), spectral_norm(ref), min(m1, m2)


def _ck_l5(mats, alpha, p):
    (a,) = mats
    fw = p.rep(spectral_norm(real_part(a)))
    x = spectral_norm(real_part(apply_monotone(p.rep, a)))
    return _two_sided(fw, x, _sec(alpha) ** 2 * fw)


def _ck_l6(mats, alpha, p):
    (a,) = mats
    t = p.t
    x = real_part(fractional_power(a, t))
    y = hermitian_apply(lambda lam: lam**t, real_part(a))
    m1 = _lmin(y - x)
    m2 = _lmin(math.cos(alpha) ** (2.0 * t) * x - y)
    return spectral_norm(x), spectral_norm(y), min(m1, m2)


def _ck_l7(mats, alpha, p):
    (a,) = mats
    t = p.t
    x = real_part(fractional_power(a, t))
    y = hermitian_apply(lambda lam: lam**t, real_part(a))
    m1 = _lmin(y - math.cos(alpha) ** (2.0 * t) * x)
    m2 = _lmin(x - y)
    return spectral_norm(x), spectral_norm(y), min(m1, m2)


def _ck_l8(mats, alpha, p):
    (a,) = mats
    nm = spectral_norm(a)
    return _two_sided(math.cos(alpha) * nm, spectral_norm(real_part(a)), nm)


def _ck_l9(mats, alpha, p):
    (a,) = mats
    lhs = numerical_radius(real_part(a))
    rhs = numerical_radius(a)
    return lhs, rhs, rhs - lhs


def _ck_l10(mats, alpha, p):
    a, b = mats
    g = spectral_norm(geometric_mean(a, b, 0.5))
    x = spectral_norm(heinz_mean(a, b, p.t))
    lo = math.cos(alpha) ** 3 * g
    hi = 0.5 * _sec(alpha) ** 3 * spectral_norm(a + b)
    return _two_sided(lo, x, hi)


def _ck_l11(mats, alpha, p):
    (a,) = mats
    t = p.t
    i_pos = sectorial_index(fractional_power(a, t))
    i_neg = sectorial_index(fractional_power(a, -t))
    rhs = t * alpha
    lhs = max(i_pos, i_neg)
    return lhs, rhs, rhs - lhs


def _ck_l12(mats, alpha, p):
    a, b = mats
    lhs = numerical_radius(block_antidiagonal(a, b))
    rhs = 0.5 * spectral_norm(a + b)
    return _equality(lhs, rhs)


def _ck_l13(mats, alpha, p):
    a, b = mats
    lhs = spectral_norm(block_antidiagonal(a, b))
    rhs = max(spectral_norm(a), spectral_norm(b))
    return _equality(lhs, rhs)


def _ck_l14(mats, alpha, p):
    (a,) = mats
    lhs = 1.0 / spectral_norm(a)
    rhs = spectral_norm(inverse(a))
    return lhs, rhs, rhs - lhs


def _ck_l15(mats, alpha, p):
    a, b, pinc, qinc = mats
    small = sigma_mean(p.rep, a, b)
    large = sigma_mean(p.rep, a + pinc, b + qinc)
    return _loewner_stats(small, large)


# ---------------------------------------------------------------------------
# registry


def _defs() -> list[CheckDefinition]:
    c = CheckDefinition
    return [
        c("E1", "||A||/2 <= w(A) <= ||A||", 1, _ck_e1),
        c("T1", "cos(a)||A|| <= w(A) <= ||A||", 1, _ck_t1),
        c("T2", "cos(ta)||A^t|| <= w(A^t) <= ||A^t||, 0<|t|<1", 1, _ck_t2,
          needs_t=True, t_style="signed"),
        c("T3", "w(A) <= sec(a) w(Re A)", 1, _ck_t3),
        c("T4", "cos(ta)cos^t(a) w^t(A) <= w(A^t) <= sec(ta)sec^2t(a) w^t(A)", 1,
          _ck_t4, needs_t=True),
        c("T5", "cos(ta)cos^2t(a) w^-t(A) <= w(A^-t)", 1, _ck_t5, needs_t=True),
        c("T6", "cos^3(a)/w(A) <= w(A^-1)", 1, _ck_t6),
        c("T7", "w(AB) <= sec^2(a) w(A)w(B)", 2, _ck_t7),
        c("T8", "index(A sigma_f B) <= a", 2, _ck_t8, needs_f=True),
        c("T8a", "index(f(A)) <= a", 1, _ck_t8a, needs_f=True),
        c("T9", "cos(a) f(w(A)) <= w(f(A)) <= sec^3(a) f(w(A))", 1, _ck_t9,
          needs_f=True),
        c("T10", "w((1-l)f(A)+l f(B)) <= sec^3(a) f((1-l)w(A)+l w(B))", 2,
          _ck_t10, needs_f=True, needs_lam=True),
        c("T10a", "w(A^t+B^t) <= 2^(1-t) sec^3(a) (w(A)+w(B))^t", 2, _ck_t10a,
          needs_t=True),
        c("T11", "w(f(A+B)) <= sec^3(a) (w(f(A))+w(f(B)))", 2, _ck_t11,
          needs_f=True),
        c("T11a", "w((A+B)^t) <= sec^3(a) w(A^t+B^t)", 2, _ck_t11a, needs_t=True),
        c("T11b", "cos^3(a) w((A+B)^t) <= w(A^t+B^t) <= 2^(1-t) sec^3(a) (w(A)+w(B))^t",
          2, _ck_t11b, needs_t=True),
        c("T12", "cos^2(a) max(w(A),w(B)) <= w(A+B)", 2, _ck_t12),
        c("T13", "w(A sigma_f B) <= sec^3(a) (w(A) sigma_f w(B))", 2, _ck_t13,
          needs_f=True),
        c("T13a", "w(A #_t B) <= sec^3(a) w^(1-t)(A) w^t(B)", 2, _ck_t13a,
          needs_t=True),
        c("T14", "w(L(A,B)) <= sec^3(a) L(w(A),w(B))", 2, _ck_t14),
        c("T15", "w(H_t(A,B)) <= sec^3(a) H_t(w(A),w(B))", 2, _ck_t15,
          needs_t=True),
        c("T16", "cos^4(a) w(A#B) <= w(H_t(A,B)) <= sec^4(a)/2 w(A+B)", 2,
          _ck_t16, needs_t=True),
        c("T17", "cos(a) w(AB)^(1/2) <= H_t(w(A),w(B))", 2, _ck_t17, needs_t=True),
        c("L1", "Re(A sigma_f B) <= sec^2(a) (Re A sigma_f Re B)", 2, _ck_l1,
          needs_f=True),
        c("L2", "||f(A+B)|| <= ||f(A)+f(B)||, A,B > 0", 2, _ck_l2, needs_f=True,
          positive_inputs=True),
        c("L3", "||A sigma_f B|| <= ||A|| sigma_f ||B||, A,B > 0", 2, _ck_l3,
          needs_f=True, positive_inputs=True),
        c("L4", "f(Re A) <= Re f(A) <= sec^2(a) f(Re A)", 1, _ck_l4, needs_f=True),
        c("L5", "f(||Re A||) <= ||Re f(A)|| <= sec^2(a) f(||Re A||)", 1, _ck_l5,
          needs_f=True),
        c("L6", "Re(A^t) <= (Re A)^t <= cos^2t(a) Re(A^t), -1<t<0", 1, _ck_l6,
          needs_t=True, t_style="negative"),
        c("L7", "cos^2t(a) Re(A^t) <= (Re A)^t <= Re(A^t), 0<t<1", 1, _ck_l7,
          needs_t=True),
        c("L8", "cos(a)||A|| <= ||Re A|| <= ||A||", 1, _ck_l8),
        c("L9", "w(Re A) <= w(A)", 1, _ck_l9),
        c("L10", "cos^3(a)||A#B|| <= ||H_t(A,B)|| <= sec^3(a)/2 ||A+B||", 2,
          _ck_l10, needs_t=True),
        c("L11", "index(A^t), index(A^-t) <= t a", 1, _ck_l11, needs_t=True),
        c("L12", "w([[0,A],[B,0]]) = ||A+B||/2, A,B > 0", 2, _ck_l12,
          positive_inputs=True),
        c("L13", "||[[0,A],[B,0]]|| = max(||A||,||B||)", 2, _ck_l13),
        c("L14", "1/||A|| <= ||A^-1||", 1, _ck_l14),
        c("L15", "A<=C, B<=D imply A sigma_f B <= C sigma_f D, positives", 2,
          _ck_l15, needs_f=True, positive_inputs=True),
    ]


_REGISTRY: list[CheckDefinition] = _defs()
_BY_ID: dict[str, CheckDefinition] = {d.id: d for d in _REGISTRY}
if len(_BY_ID) != len(_REGISTRY):
    raise AssertionError("duplicate check ids in registry")


def registry() -> list[CheckDefinition]:
    """All checks, in stable order."""
    return list(_REGISTRY)


def registry_ids() -> tuple[str, ...]:
    return tuple(d.id for d in _REGISTRY)


def get_check(check_id: str) -> CheckDefinition:
    try:
        return _BY_ID[check_id]
    except KeyError:
        raise KeyError(f"unknown check id {check_id!r}") from None


def default_campaign(**overrides) -> Campaign:
    """The campaign run by the acceptance suite unless overridden."""
    kwargs = dict(
        checks=registry_ids(),
        dims=DEFAULT_DIMS,
        alphas=DEFAULT_ALPHAS,
        trials_per_cell=DEFAULT_TRIALS,
        seed=1,
        mode="certified",
    )
    kwargs.update(overrides)
    return Campaign(**kwargs)


# ---------------------------------------------------------------------------
# trial machinery


def _philox(key: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=key & (2**64 - 1)))


def _sample_unit(rng: np.random.Generator) -> float:
    """Draw from the discrete grid half the time, else uniform away from
    the endpoints (open-interval statements)."""
    if rng.random() < 0.5:
        return float(_PARAM_GRID[int(rng.integers(len(_PARAM_GRID)))])
    return float(rng.uniform(_PARAM_LO, _PARAM_HI))


def _sample_params(defn: CheckDefinition, rng: np.random.Generator,
                   reps: list[MonotoneRep]) -> TrialParams:
    t = None
    lam = None
    rep = None
    if defn.needs_t:
        t = _sample_unit(rng)
        if defn.t_style == "signed" and rng.random() < 0.5:
            t = -t
        elif defn.t_style == "negative":
            t = -t
    if defn.needs_lam:
        lam = _sample_unit(rng)
    if defn.needs_f:
        rep = reps[int(rng.integers(len(reps)))]
    return TrialParams(t=t, lam=lam, rep=rep)


def prepare_trial(defn: CheckDefinition, seed: int, dim: int, alpha: float,
                  trial: int, condition_cap: float = DEFAULT_CONDITION_CAP):
    """Regenerate the deterministic inputs and parameters of one trial.

    Returns (inputs, params, key). The same coordinates always produce
    bit-identical matrices and parameters.
    """
    key = derive_seed(seed, defn.id, dim, float(alpha), trial)
    rng = _philox(key)
    params = _sample_params(defn, rng, builtin_reps())
    alpha_target = 0.0 if defn.positive_inputs else float(alpha)
    mats = [
        random_sectorial(
            GenSpec(dim, alpha_target, derive_seed(key, tag), condition_cap)
        )
        for tag in ("A", "B")[: defn.arity]
    ]
    if defn.id == "L15":
        mats += [
            random_positive_definite(
                GenSpec(dim, 0.0, derive_seed(key, tag), condition_cap)
            )
            for tag in ("P", "Q")
        ]
    return tuple(mats), params, key


def evaluate_check(defn: CheckDefinition, inputs: tuple, alpha: float,
                   params: TrialParams, tol: Tolerances = HARNESS_TOL,
                   digest: dict | None = None) -> CheckResult:
    """Evaluate one check on explicit inputs.

    Domain violations (non-accretive inputs, singular solves) propagate
    as exceptions: they are trial-level errors, never silent passes.
    """
    lhs, rhs, margin = defn.evaluate(inputs, alpha, params)
    if not (math.isfinite(lhs) and math.isfinite(rhs) and math.isfinite(margin)):
        raise ArithmeticError(
            f"{defn.id}: non-finite evaluation lhs={lhs} rhs={rhs} margin={margin}"
        )
    tol_eff = tol.atol + tol.rtol * max(abs(lhs), abs(rhs))
    return CheckResult(
        check_id=defn.id,
        passed=margin >= -tol_eff,
        lhs=float(lhs),
        rhs=float(rhs),
        margin=float(margin),
        tol_effective=tol_eff,
        digest=digest or {},
    )


def run_single_trial(defn: CheckDefinition, campaign: Campaign, dim: int,
                     alpha: float, trial: int) -> CheckResult:
    """Generate and evaluate one trial of one cell."""
    inputs, params, key = prepare_trial(
        defn, campaign.seed, dim, alpha, trial, campaign.condition_cap
    )
    if defn.positive_inputs:
        alpha_used = 0.0
    elif campaign.mode == "tight":
        alpha_used = max(sectorial_index(m) for m in inputs[: defn.arity])
    else:
        alpha_used = float(alpha)
    digest = {
        "seed": campaign.seed,
        "check": defn.id,
        "dim": dim,
        "alpha": float(alpha),
        "trial": trial,
        "key": key,
        "alpha_used": alpha_used,
        "t": params.t,
        "lam": params.lam,
        "rep": params.rep_name,
    }
    return evaluate_check(defn, inputs, alpha_used, params,
                          campaign.tolerances, digest)


def run_cell(campaign: Campaign, check_id: str, dim: int, alpha: float) -> CellStats:
    """All trials of one (check, dim, alpha) cell, aggregated."""
    defn = get_check(check_id)
    passes = 0
    errors = 0
    worst_margin = None
    worst_trial = None
    worst_seed = None
    for trial in range(campaign.trials_per_cell):
        try:
            result = run_single_trial(defn, campaign, dim, alpha, trial)
        except (MatrixDomainError, ArithmeticError, np.linalg.LinAlgError):
            errors += 1
            continue
        if result.passed:
            passes += 1
        if worst_margin is None or result.margin < worst_margin:
            worst_margin = result.margin
            worst_trial = trial
            worst_seed = result.digest["key"]
    return CellStats(
        check=check_id,
        dim=dim,
        alpha=float(alpha),
        trials=campaign.trials_per_cell,
        passes=passes,
        errors=errors,
        worst_margin=worst_margin,
        worst_trial=worst_trial,
        worst_seed=worst_seed,
    )


def _run_cell_args(args) -> CellStats:
    return run_cell(*args)


def run_trials(campaign: Campaign, jobs: int | None = None) -> TrialReport:
    """Run the whole campaign.

    Cells are independent; with jobs > 1 they are distributed over a
    process pool. Aggregation is keyed by (check, dim, alpha) in campaign
    order, so the report is identical to a sequential run.
    """
    order = [
        (campaign, check, dim, alpha)
        for check in campaign.checks
        for dim in campaign.dims
        for alpha in campaign.alphas
    ]
    if jobs and jobs > 1 and len(order) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            cells = list(pool.map(_run_cell_args, order, chunksize=4))
    else:
        cells = [run_cell(*args) for args in order]
    flags = []
    total_trials = sum(c.trials for c in cells)
    if total_trials == 0:
        flags.append("no data")
    clean = all(c.passes == c.trials for c in cells)
    verdict = "pass" if clean else "fail"
    return TrialReport(
        campaign=campaign,
        cells=tuple(cells),
        verdict=verdict,
        flags=tuple(flags),
    )
