import math

import numpy as np
import pytest

from sectorial.errors import DimensionMismatchError, DomainError
from sectorial.genprop import (
    GenSpec,
    block_antidiagonal,
    derive_seed,
    random_positive_definite,
    random_sectorial,
)
from sectorial.linalg import inverse, real_part, spectral_norm
from sectorial.numrange import is_accretive, numerical_radius, sectorial_index


def test_genspec_validation():
    with pytest.raises(DomainError):
        GenSpec(0)
    with pytest.raises(DomainError):
        GenSpec(2, alpha_target=math.pi / 2.0)
    with pytest.raises(DomainError):
        GenSpec(2, condition_cap=0.5)


def test_derive_seed_is_stable_and_injective_enough():
    assert derive_seed(1, "A", 2, 0.1) == derive_seed(1, "A", 2, 0.1)
    seen = {derive_seed(seed, tag, d) for seed in range(8) for tag in "AB" for d in (2, 3)}
    assert len(seen) == 8 * 2 * 2
    with pytest.raises(DomainError):
        derive_seed(True)


def test_positive_definite_properties():
    spec = GenSpec(6, seed=123, condition_cap=80.0)
    h = random_positive_definite(spec)
    assert np.array_equal(h, h.conj().T)
    eigs = np.linalg.eigvalsh(h)
    assert eigs[0] > 0.0
    assert eigs[-1] / eigs[0] <= 80.0 * (1.0 + 1e-10)
    np.testing.assert_array_equal(h, random_positive_definite(spec))


def test_positive_definite_unit_condition_is_identity():
    h = random_positive_definite(GenSpec(4, seed=5, condition_cap=1.0))
    np.testing.assert_allclose(h, np.eye(4), atol=1e-12)


def test_sectorial_zero_alpha_is_positive():
    a = random_sectorial(GenSpec(5, 0.0, seed=9))
    assert np.array_equal(a, a.conj().T)
    assert np.linalg.eigvalsh(a)[0] > 0.0


def test_sectorial_accretive_and_certified():
    for alpha in (0.1, 0.6, 1.2):
        for seed in range(5):
            a = random_sectorial(GenSpec(4, alpha, seed=seed))
            assert is_accretive(a)
            assert sectorial_index(a) <= alpha + 1e-8


def test_sectorial_determinism():
    spec = GenSpec(3, 0.8, seed=77)
    np.testing.assert_array_equal(random_sectorial(spec), random_sectorial(spec))


def test_block_antidiagonal_examples():
    out = block_antidiagonal([[1.0]], [[1.0]])
    np.testing.assert_array_equal(out, [[0.0, 1.0], [1.0, 0.0]])
    assert numerical_radius(out) == pytest.approx(1.0, abs=1e-10)


def test_block_antidiagonal_norm_is_max():
    a = random_positive_definite(GenSpec(3, seed=31, condition_cap=20.0))
    b = random_positive_definite(GenSpec(3, seed=32, condition_cap=20.0))
    blk = block_antidiagonal(a, b)
    assert spectral_norm(blk) == pytest.approx(
        max(spectral_norm(a), spectral_norm(b)), abs=1e-10
    )


def test_block_antidiagonal_radius_identity():
    a = random_positive_definite(GenSpec(3, seed=33, condition_cap=20.0))
    b = random_positive_definite(GenSpec(3, seed=34, condition_cap=20.0))
    blk = block_antidiagonal(a, b)
    assert numerical_radius(blk) == pytest.approx(
        0.5 * spectral_norm(a + b), rel=1e-9
    )


def test_block_antidiagonal_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        block_antidiagonal(np.eye(2), np.eye(3))


def test_inverse_norm_relation_on_generated_matrices():
    for seed in range(10):
        a = random_sectorial(GenSpec(4, 0.9, seed=seed))
        assert 1.0 / spectral_norm(a) <= spectral_norm(inverse(a)) + 1e-12


def test_real_part_of_sectorial_is_positive_factor():
    # Re(H^(1/2)(I + iT)H^(1/2)) = H exactly, up to rounding
    spec = GenSpec(4, 1.2, seed=55)
    a = random_sectorial(spec)
    h = random_positive_definite(spec)
    assert spectral_norm(real_part(a) - h) <= 1e-10 * spectral_norm(h)
