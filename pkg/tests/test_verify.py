import subprocess
import sys
from dataclasses import replace

import numpy as np
import pytest
from conftest import random_hermitian

from picolsd import generators
from picolsd.decomposition import CaseTag, LsdDecomposition
from picolsd.errors import WrongCase
from picolsd.lsd import decompose
from picolsd.qubits import PSI_MINUS, canonical_gamma_vector, pauli_product, projector
from picolsd.verify import (
    WkReport,
    certify,
    check_slackness_and_z3,
    check_validity,
    check_witness,
    check_wk_full,
    check_wk_rank3,
    check_wk_rank3_product,
)

ZERO = np.zeros((4, 4), dtype=complex)


def werner_by_hand(p=0.8):
    s = 1.5 * (1.0 - p)
    return LsdDecomposition(
        case=CaseTag.FULL_RANK,
        separability=s,
        rho_sep=s * generators.werner_state(1.0 / 3.0),
        rho_pure=(1.0 - s) * projector(PSI_MINUS),
        pure_vector=PSI_MINUS,
        z1=ZERO,
        z2=ZERO,
        z3=ZERO,
        support=np.eye(4, dtype=complex),
    )


def test_validity_of_hand_built_werner():
    fields = check_validity(generators.werner_state(0.8), werner_by_hand())
    assert fields["sum_residual"] == pytest.approx(0.0, abs=1e-15)
    assert fields["s_trace_residual"] == pytest.approx(0.0, abs=1e-15)
    assert fields["sep_min_eig"] > 0.0
    assert fields["sep_pt_min_eig"] == pytest.approx(0.0, abs=1e-14)
    assert fields["pure_second_eig"] == pytest.approx(0.0, abs=1e-14)


def test_validity_detects_perturbed_sum():
    dec = werner_by_hand()
    bumped = replace(dec, rho_sep=dec.rho_sep + 0.01 * pauli_product(3, 3))
    fields = check_validity(generators.werner_state(0.8), bumped)
    assert fields["sum_residual"] == pytest.approx(0.02, abs=1e-12)
    assert "sum_residual" in WkReport(**fields).failures(CaseTag.FULL_RANK)


def test_validity_rejects_wrong_dimension():
    dec = replace(werner_by_hand(), rho_sep=np.eye(3) / 3)
    with pytest.raises(WrongCase):
        check_validity(generators.werner_state(0.8), dec)


def test_solver_decomposition_certifies(werner_08_decomposition):
    res = werner_08_decomposition.residuals
    assert res.passed
    assert res.failures(CaseTag.FULL_RANK) == []
    assert res.n_samples == 10000
    slack, z3 = check_slackness_and_z3(
        generators.werner_state(0.8), werner_08_decomposition
    )
    assert slack <= 1e-6
    assert z3 <= 1e-6


def test_swapped_dual_blocks_fail(werner_08_decomposition):
    dec = werner_08_decomposition
    swapped = replace(dec, z1=dec.z2, z2=dec.z1, witness=None)
    report = certify(generators.werner_state(0.8), swapped, n_samples=500)
    assert not report.passed
    assert "slackness_residual" in report.failures(dec.case)


def test_inflated_separability_fails(werner_08_decomposition):
    dec = werner_08_decomposition
    inflated = replace(dec, separability=dec.S + 1e-3)
    report = certify(generators.werner_state(0.8), inflated, n_samples=500)
    failures = report.failures(dec.case)
    assert "s_trace_residual" in failures
    assert "witness_trace_residual" in failures


def test_wk_checks_reject_wrong_case(werner_08_decomposition):
    rho = generators.werner_state(0.8)
    check_wk_full(rho, werner_08_decomposition)
    with pytest.raises(WrongCase):
        check_wk_rank3(rho, werner_08_decomposition)
    with pytest.raises(WrongCase):
        check_wk_rank3_product(rho, werner_08_decomposition)
    with pytest.raises(WrongCase):
        check_wk_full(rho, replace(werner_08_decomposition, case=CaseTag.SEPARABLE))


def test_product_gamma_wk_residuals():
    rho = generators.random_rank3_product_gamma(3)
    dec = decompose(rho, samples=500)
    wk1, wk2, ab = check_wk_rank3_product(rho, dec)
    assert wk1 <= 1e-6
    assert wk2 <= 1e-6
    if dec.case is CaseTag.RANK3_ANALYTIC:
        assert ab <= 1e-9


def test_analytic_witness_with_nonzero_dual_blocks_fails():
    rho = generators.rank3_product_gamma_state(0.6, 1.0)
    dec = decompose(rho, samples=500)
    assert dec.case is CaseTag.RANK3_ANALYTIC
    _, wk2, _ = check_wk_rank3_product(rho, replace(dec, z1=0.1 * dec.support))
    assert wk2 > 1e-6


def test_identity_witness():
    rho = generators.werner_state(0.8)
    low, trace = check_witness(np.eye(4), rho, 0.3, 100, 0)
    assert low == pytest.approx(1.0)
    assert trace == pytest.approx(1.0)
    low, trace = check_witness(-np.eye(4), rho, 0.3, 100, 0)
    assert low == pytest.approx(-1.0)
    assert trace == pytest.approx(-1.0)


def test_entangled_projector_is_negative_somewhere():
    w = projector(PSI_MINUS) - 0.5 * np.eye(4)
    low, _ = check_witness(w, np.eye(4) / 4, 1.0, 2000, 0)
    assert low == pytest.approx(-0.5, abs=1e-3)


def test_sampling_is_prefix_consistent():
    w = random_hermitian(np.random.default_rng(5), 4)
    rho = np.eye(4) / 4
    lows = [check_witness(w, rho, 1.0, n, 42)[0] for n in (10, 100, 1000)]
    assert lows[0] >= lows[1] >= lows[2]
    assert check_witness(w, rho, 1.0, 100, 42) == check_witness(w, rho, 1.0, 100, 42)


def test_restricted_sampling_stays_orthogonal_to_gamma():
    gamma = canonical_gamma_vector(0.5)
    w = -projector(gamma)
    rho = np.eye(4) / 4
    full, _ = check_witness(w, rho, 1.0, 500, 0)
    restricted, _ = check_witness(w, rho, 1.0, 500, 0, gamma=gamma)
    assert full < -0.1
    assert restricted == pytest.approx(0.0, abs=1e-12)


def test_witness_needs_samples():
    with pytest.raises(ValueError):
        check_witness(np.eye(4), np.eye(4) / 4, 1.0, 0, 0)


def test_separable_report_skips_dual_checks():
    rho = generators.random_separable(3, 1)
    report = decompose(rho).residuals
    assert report.passed
    assert report.witness_min_over_samples is None
    assert report.failures(CaseTag.SEPARABLE) == []
    assert report.to_dict()["passed"] is True


def test_verifier_does_not_import_the_decomposer():
    code = "import sys, picolsd.verify; print('picolsd.lsd' in sys.modules)"
    out = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, check=True
    )
    assert out.stdout.strip() == "False"
