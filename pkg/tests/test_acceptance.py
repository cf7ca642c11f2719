"""Acceptance suite.

Each test prints one PASS/FAIL line. Criterion 1 runs the full default
campaign (every check, dims 2/3/5/8, six sector half-angles, 200 trials
per cell, seed 1); criterion 8 runs it a second time and compares the
serialized reports byte for byte. SECTORIAL_ACCEPT_TRIALS overrides the
trial count for quick local iteration; the default is the real thing.
"""

import json
import math
import os

import numpy as np
import pytest

from sectorial.cli import write_report
from sectorial.genprop import GenSpec, block_antidiagonal, derive_seed, random_positive_definite, random_sectorial
from sectorial.harness import default_campaign, run_trials
from sectorial.linalg import spectral_norm
from sectorial.matfun import apply_monotone, builtin_reps, fractional_power, power_rep
from sectorial.means import geometric_mean, heinz_mean, logarithmic_mean
from sectorial.numrange import numerical_radius, sectorial_index

from oracles import classical_geometric, dense_radius, random_complex

TRIALS = int(os.environ.get("SECTORIAL_ACCEPT_TRIALS", "200"))


def _report_line(number, name, failures, detail=""):
    status = "PASS" if not failures else f"FAIL ({len(failures)} violations)"
    suffix = f" [{detail}]" if detail else ""
    print(f"ACCEPTANCE {number} {name}: {status}{suffix}")
    assert not failures, f"criterion {number}: " + "; ".join(failures[:10])


@pytest.fixture(scope="session")
def campaign():
    return default_campaign(trials_per_cell=TRIALS)


@pytest.fixture(scope="session")
def campaign_report(campaign):
    return run_trials(campaign)


def test_criterion_1_default_campaign(campaign_report):
    failures = []
    for cell in campaign_report.cells:
        if cell.passes != cell.trials or cell.errors:
            failures.append(
                f"{cell.check} dim={cell.dim} alpha={cell.alpha}: "
                f"{cell.passes}/{cell.trials} passes, {cell.errors} errors, "
                f"worst={cell.worst_margin}"
            )
    detail = (
        f"{len(campaign_report.cells)} cells x {TRIALS} trials, "
        f"verdict={campaign_report.verdict}"
    )
    _report_line(1, "default campaign", failures, detail)
    assert campaign_report.verdict == "pass"


def test_criterion_2_positive_collapse():
    failures = []
    reps = builtin_reps()
    for i in range(100):
        dim = (2, 3, 4, 5, 6)[i % 5]
        rng = np.random.Generator(np.random.Philox(key=derive_seed(2, "collapse", i)))
        a = random_positive_definite(GenSpec(dim, seed=derive_seed(2, "A", i)))
        b = random_positive_definite(GenSpec(dim, seed=derive_seed(2, "B", i)))
        t = float(rng.uniform(0.05, 0.95))
        rep = reps[i % len(reps)]

        lhs = spectral_norm(fractional_power(a, t))
        rhs = spectral_norm(a) ** t
        if abs(lhs - rhs) > 1e-7 * rhs:
            failures.append(f"trial {i}: ||A^t|| vs ||A||^t off by {abs(lhs-rhs):.2e}")

        wab = numerical_radius(a @ b)
        bound = numerical_radius(a) * numerical_radius(b)
        if wab > bound * (1.0 + 1e-7):
            failures.append(f"trial {i}: w(AB) exceeds w(A)w(B) by {wab-bound:.2e}")

        fa = spectral_norm(apply_monotone(rep, a))
        fscalar = float(rep.scalar_eval(spectral_norm(a)))
        if abs(fa - fscalar) > 1e-7 * fscalar:
            failures.append(f"trial {i}: ||f(A)|| vs f(||A||) off by {abs(fa-fscalar):.2e}")

        sum_pow = spectral_norm(fractional_power(a + b, t))
        pow_sum = spectral_norm(fractional_power(a, t) + fractional_power(b, t))
        if sum_pow > pow_sum * (1.0 + 1e-7):
            failures.append(f"trial {i}: ||(A+B)^t|| exceeds ||A^t+B^t||")
    _report_line(2, "positive-matrix collapse", failures, "100 trials x 4 identities")


def test_criterion_3_radius_oracle_agreement():
    failures = []
    count = 0
    for dim in (2, 3, 4, 5, 6):
        for k in range(20):
            rng = np.random.Generator(
                np.random.Philox(key=derive_seed(3, "radius", dim, k))
            )
            m = random_complex(rng, dim)
            w = numerical_radius(m)
            ref = dense_radius(m, 100_000)
            count += 1
            if abs(w - ref) > 1e-8 * max(ref, 1e-300):
                failures.append(
                    f"dim={dim} k={k}: w={w!r} oracle={ref!r} rel={abs(w-ref)/ref:.2e}"
                )
    _report_line(3, "numerical-radius oracle equivalence", failures, f"{count} matrices")


def test_criterion_4_mean_oracle_agreement():
    failures = []
    count = 0
    for dim in (2, 3, 4, 5, 6):
        for k in range(20):
            a = random_positive_definite(
                GenSpec(dim, seed=derive_seed(4, "A", dim, k), condition_cap=50.0)
            )
            b = random_positive_definite(
                GenSpec(dim, seed=derive_seed(4, "B", dim, k), condition_cap=50.0)
            )
            count += 1
            for t in (0.25, 0.5, 0.75):
                got = geometric_mean(a, b, t)
                want = classical_geometric(a, b, t)
                if spectral_norm(got - want) > 1e-7:
                    failures.append(
                        f"dim={dim} k={k} t={t}: deviation "
                        f"{spectral_norm(got - want):.2e}"
                    )
    _report_line(4, "geometric-mean oracle equivalence", failures, f"{count} pairs x 3 weights")


def test_criterion_5_sector_certificates():
    failures = []
    alphas = (0.1, 0.3, 0.6, 0.9, 1.2)
    dims = (2, 3, 4, 5, 6, 7, 8)
    for i in range(1000):
        alpha = alphas[i % len(alphas)]
        dim = dims[(i // len(alphas)) % len(dims)]
        seed = derive_seed(5, "cert", i)
        a = random_sectorial(GenSpec(dim, alpha, seed=seed))
        idx = sectorial_index(a)
        if idx > alpha + 1e-8:
            failures.append(f"draw {i}: index {idx} exceeds target {alpha}")
        rng = np.random.Generator(np.random.Philox(key=derive_seed(5, "t", i)))
        t = float(rng.uniform(0.05, 0.95))
        idx_pow = sectorial_index(fractional_power(a, t))
        if idx_pow > t * alpha + 1e-6:
            failures.append(
                f"draw {i}: index(A^{t:.3f}) = {idx_pow} exceeds {t * alpha}"
            )
    _report_line(5, "generator sector certificates", failures, "1000 draws")


def test_criterion_6_block_lemmas():
    failures = []
    for i in range(100):
        dim = (2, 3, 4, 5, 6, 7, 8)[i % 7]
        a = random_positive_definite(
            GenSpec(dim, seed=derive_seed(6, "A", i), condition_cap=20.0)
        )
        b = random_positive_definite(
            GenSpec(dim, seed=derive_seed(6, "B", i), condition_cap=20.0)
        )
        blk = block_antidiagonal(a, b)
        w = numerical_radius(blk)
        half_norm = 0.5 * spectral_norm(a + b)
        if abs(w - half_norm) > 1e-7 * half_norm:
            failures.append(f"trial {i}: w(block) off by {abs(w-half_norm):.2e}")
        nm = spectral_norm(blk)
        mx = max(spectral_norm(a), spectral_norm(b))
        if abs(nm - mx) > 1e-9:
            failures.append(f"trial {i}: ||block|| off by {abs(nm-mx):.2e}")
    _report_line(6, "block antidiagonal lemmas", failures, "100 positive pairs")


def test_criterion_7_quadrature_convergence_gates():
    failures = []
    dims = (2, 3, 5)
    alphas = (0.1, 0.6, 1.2)
    exponents = (0.25, 0.5, 0.75, -0.4, 0.9)
    for i in range(50):
        dim = dims[i % 3]
        alpha = alphas[(i // 3) % 3]
        t = exponents[i % 5]
        # unit spectral norm (scaling preserves the sector certificate):
        # the gate is absolute, so the suite pins the scale
        a = random_sectorial(
            GenSpec(dim, alpha, seed=derive_seed(7, "A", i), condition_cap=20.0)
        )
        a = a / spectral_norm(a)
        b = random_sectorial(
            GenSpec(dim, alpha, seed=derive_seed(7, "B", i), condition_cap=20.0)
        )
        b = b / spectral_norm(b)
        op = i % 4
        if op == 0:
            coarse = fractional_power(a, t, 96)
            fine = fractional_power(a, t, 192)
        elif op == 1:
            u = abs(t)
            coarse = geometric_mean(a, b, u, 96)
            fine = geometric_mean(a, b, u, 192)
        elif op == 2:
            coarse = logarithmic_mean(a, b, 32, 96)
            fine = logarithmic_mean(a, b, 64, 192)
        else:
            u = abs(t)
            coarse = heinz_mean(a, b, u, 96)
            fine = heinz_mean(a, b, u, 192)
        delta = spectral_norm(coarse - fine)
        if delta >= 1e-8:
            failures.append(f"case {i} (op {op}, t={t}): doubling moved {delta:.2e}")
    _report_line(7, "quadrature convergence gates", failures, "50 fixed cases")


def test_criterion_8_determinism(campaign, campaign_report, tmp_path):
    rerun = run_trials(campaign)
    first = tmp_path / "first.json"
    second = tmp_path / "second.json"
    write_report(campaign_report, str(first))
    write_report(rerun, str(second))
    identical_files = first.read_bytes() == second.read_bytes()
    identical_json = json.dumps(campaign_report.to_json_dict()) == json.dumps(
        rerun.to_json_dict()
    )
    failures = []
    if not identical_files:
        failures.append("report files differ between identically seeded runs")
    if not identical_json:
        failures.append("serialized reports differ between identically seeded runs")
    _report_line(8, "byte-identical reruns", failures, f"{TRIALS} trials/cell")
