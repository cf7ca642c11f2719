"""Numerical radii, sectorial indices, operator monotone functions and
Kubo-Ando means of accretive complex matrices, with a randomized
verification harness for the inequalities relating them."""

from .errors import (
    DimensionMismatchError,
    DomainError,
    MatrixDomainError,
    NoConvergenceError,
    NotAccretiveError,
    NotHermitianError,
    SingularMatrixError,
)
from .genprop import GenSpec, block_antidiagonal, derive_seed, random_positive_definite, random_sectorial
from .harness import (
    Campaign,
    CheckDefinition,
    CheckResult,
    CellStats,
    TrialReport,
    default_campaign,
    evaluate_check,
    get_check,
    registry,
    registry_ids,
    run_trials,
)
from .linalg import (
    DEFAULT_TOL,
    HermitianEigen,
    Tolerances,
    hermitian_eigen,
    inverse,
    loewner_leq,
    loewner_margin,
    real_part,
    imag_part,
    spectral_norm,
)
from .matfun import (
    MonotoneRep,
    apply_monotone,
    builtin_reps,
    fractional_power,
    hermitian_apply,
    kubo_mean_hermitian,
    power_rep,
    single_atom_rep,
)
from .means import (
    geometric_mean,
    harmonic_mean,
    heinz_mean,
    logarithmic_mean,
    scalar_heinz,
    scalar_log_mean,
    sigma_mean,
)
from .numrange import (
    BoundaryPoint,
    SectorProfile,
    boundary_scan,
    is_accretive,
    numerical_radius,
    sector_profile,
    sectorial_index,
)

__version__ = "0.1.0"
