import numpy as np
import pytest
import scipy.linalg as sla
from numpy.testing import assert_allclose

from decaycert import (
    InvalidParams,
    NoValidCertificate,
    NotAccretiveDamping,
    NotPositiveDefinite,
    OperatorPair,
    SearchConfig,
    Theorem1Params,
    Theorem2Params,
    Variant,
    VerificationFailed,
    block_matrix,
    block_matrix_inverse,
    build_gram,
    contraction_factors,
    decompose,
    envelope_constant,
    gen_damped_wave,
    gen_random_valid,
    gen_scalar,
    make_certificate_t1,
    make_certificate_t2,
    optimize_rate,
    verify_accretivity,
    verify_norm_equivalence,
)

from test_decomposition import random_pair


class TestBlockMatrix:
    def test_layout(self):
        pair = random_pair(0, n=3)
        dec = decompose(pair)
        M = block_matrix(dec)
        n = 3
        assert_allclose(M[:n, :n], -pair.D)
        assert_allclose(M[:n, n:], -pair.A)
        assert_allclose(M[n:, :n], np.eye(n))
        assert_allclose(M[n:, n:], np.zeros((n, n)))

    def test_inverse_is_inverse(self):
        dec = decompose(random_pair(1, n=4))
        M = block_matrix(dec)
        Minv = block_matrix_inverse(dec)
        assert_allclose(M @ Minv, np.eye(8), atol=1e-10)

    def test_inverse_worked_example(self):
        dec = decompose(gen_scalar(1 + 1j, 2))
        expected = np.array([[0.0, 1.0], [-(1 - 1j) / 2, -(1 - 1j)]])
        assert_allclose(block_matrix_inverse(dec), expected, atol=1e-14)


class TestGram:
    def test_worked_example(self):
        # scalar A=1, D=2, k=1: G = [[1, 1], [1, 3]]
        dec = decompose(gen_scalar(1, 2))
        gram = build_gram(dec, 1.0)
        assert_allclose(gram.G, np.array([[1.0, 1.0], [1.0, 3.0]]), atol=1e-14)
        lower, upper = verify_norm_equivalence(dec, 1.0)
        assert_allclose(lower, 2.0 - np.sqrt(2.0), rtol=1e-12)
        assert_allclose(upper, 2.0 + np.sqrt(2.0), rtol=1e-12)

    def test_oracle_eigenvalues(self):
        dec = decompose(random_pair(2))
        k = 0.5 * dec.beta
        gram = build_gram(dec, k)
        n = dec.n
        G0 = np.zeros((2 * n, 2 * n), dtype=complex)
        G0[:n, :n] = np.eye(n)
        G0[n:, n:] = dec.T
        vals = sla.eigh(gram.G, G0, eigvals_only=True)
        lower, upper = verify_norm_equivalence(dec, k)
        assert_allclose(lower, vals[0], rtol=1e-10)
        assert_allclose(upper, vals[-1], rtol=1e-10)
        assert lower >= 1.0 - k / dec.beta - 1e-10

    def test_nonpositive_k(self):
        dec = decompose(gen_scalar(1, 2))
        with pytest.raises(InvalidParams):
            build_gram(dec, 0.0)

    def test_indefinite_gram_rejected(self):
        # far beyond beta the Schur complement goes indefinite
        dec = decompose(gen_scalar(1, 0.1))
        with pytest.raises(NotPositiveDefinite):
            build_gram(dec, 50.0)


class TestCertificates:
    def test_worked_t1(self):
        dec = decompose(gen_scalar(1, 2))
        cert = make_certificate_t1(dec, Theorem1Params(k=1.0, m=0.5))
        assert cert.valid
        assert abs(cert.omega1_value - 1.0) < 1e-12
        assert abs(cert.omega2_value - 4.0) < 1e-12
        assert abs(cert.theta - 0.125) < 1e-12
        assert abs(cert.rate - 0.125) < 1e-12
        assert cert.equivalence_lower == pytest.approx(0.5)

    def test_invalid_has_zero_rate(self):
        # heavy skew stiffness at modest damping: omega1 < 0 at these params
        dec = decompose(gen_random_valid(6, 2.0, 0.5, seed=3))
        cert = make_certificate_t1(dec, Theorem1Params(k=0.4 * dec.beta, m=1.0))
        assert not cert.valid
        assert cert.theta == 0.0 and cert.rate == 0.0

    def test_t2_worked(self):
        dec = decompose(gen_scalar(1 + 1j, 2))
        cert = make_certificate_t2(dec, Theorem2Params(k=1.0, p=0.5, q=0.5))
        assert cert.valid
        assert abs(cert.omega1_value - 1.5) < 1e-12
        # theta' = min((1.5-1)/2, (1-1)/omega2) = 0
        assert cert.theta == 0.0

    def test_refuses_non_accretive(self):
        A = np.eye(2)
        D = np.diag([1.0, -0.5])
        dec = decompose(OperatorPair(A=A, D=D))
        with pytest.raises(NotAccretiveDamping):
            make_certificate_t1(dec, Theorem1Params(k=0.1, m=0.5))


class TestVerification:
    def test_accretivity_margin(self):
        dec = decompose(gen_scalar(1, 2))
        cert = make_certificate_t1(dec, Theorem1Params(k=1.0, m=0.5))
        vr = verify_accretivity(dec, cert)
        assert vr.lambda_max <= -cert.rate + 1e-8
        assert vr.margin >= -1e-8

    def test_tampered_rate_fails(self):
        dec = decompose(gen_scalar(1, 2))
        cert = make_certificate_t1(dec, Theorem1Params(k=1.0, m=0.5))
        cert.rate = 1.5  # beyond the abscissa, unprovable
        with pytest.raises(VerificationFailed):
            verify_accretivity(dec, cert)

    def test_invalid_cert_rejected(self):
        dec = decompose(gen_random_valid(6, 2.0, 0.5, seed=3))
        cert = make_certificate_t1(dec, Theorem1Params(k=0.4 * dec.beta, m=1.0))
        assert not cert.valid
        with pytest.raises(InvalidParams):
            verify_accretivity(dec, cert)

    def test_contraction_factors(self):
        dec = decompose(gen_scalar(1 + 1j, 2))
        cert = make_certificate_t1(dec, Theorem1Params(k=1.0, m=0.5))
        assert cert.valid
        times = (0.1, 0.5, 1.0, 2.0, 5.0, 10.0)
        factors = contraction_factors(dec, cert, times)
        bounds = np.exp(-cert.rate * np.asarray(times)) * (1 + 1e-6)
        assert np.all(factors <= bounds)

    def test_envelope_constant_vs_oracle(self):
        dec = decompose(random_pair(4))
        k = 0.6 * dec.beta
        cert = make_certificate_t1(dec, Theorem1Params(k=k, m=0.5))
        C = envelope_constant(dec, cert)
        n = dec.n
        G0 = np.zeros((2 * n, 2 * n), dtype=complex)
        G0[:n, :n] = np.eye(n)
        G0[n:, n:] = dec.T
        vals = sla.eigh(build_gram(dec, k).G, G0, eigvals_only=True)
        assert_allclose(C, vals[-1] / vals[0], rtol=1e-10)
        assert C >= 1.0


class TestOptimize:
    def test_scalar_supremum(self):
        # A=1, D=2: rate k*theta has supremum 1/4 at k=1, m -> 0
        dec = decompose(gen_scalar(1, 2))
        cert = optimize_rate(dec, Variant.THEOREM1)
        assert cert.valid
        assert cert.rate == pytest.approx(0.25, abs=2e-3)
        assert cert.rate <= 0.25 + 1e-12

    def test_deterministic(self):
        dec = decompose(gen_random_valid(8, 0.3, 2.0, seed=17))
        c1 = optimize_rate(dec, Variant.THEOREM1)
        c2 = optimize_rate(dec, Variant.THEOREM1)
        assert (c1.k, c1.m, c1.rate) == (c2.k, c2.m, c2.rate)

    def test_refinement_not_worse_than_grid(self):
        dec = decompose(gen_random_valid(5, 0.2, 1.0, seed=23))
        coarse = optimize_rate(dec, Variant.THEOREM1, SearchConfig(grid=8))
        fine = optimize_rate(dec, Variant.THEOREM1, SearchConfig(grid=64))
        assert fine.rate >= coarse.rate - 1e-9

    def test_rate_below_abscissa(self):
        from decaycert import pencil_spectrum

        for seed in (1, 2, 3):
            dec = decompose(gen_random_valid(6, 0.2, 2.0, seed=seed))
            cert = optimize_rate(dec, Variant.THEOREM1)
            absc = pencil_spectrum(dec).spectral_abscissa
            assert cert.rate <= -absc + 1e-8

    def test_no_valid_certificate(self):
        # sector tangent far beyond what the damping can absorb
        dec = decompose(gen_random_valid(10, 2.0, 0.5, seed=7))
        with pytest.raises(NoValidCertificate):
            optimize_rate(dec, Variant.THEOREM1)

    def test_t2_wave_nonvacuous(self):
        # gamma=0 wave must certify under both variants
        dec = decompose(gen_damped_wave(3, 0.0, 1.0))
        c1 = optimize_rate(dec, Variant.THEOREM1)
        c2 = optimize_rate(dec, Variant.THEOREM2)
        assert c1.valid and c1.rate > 0
        assert c2.valid and c2.rate > 0

    def test_tiny_beta_still_certifies_t2(self):
        # in finite dimensions delta > 0 exactly when beta > 0, so even a
        # nearly singular damping admits a (minuscule) t2 certificate
        A = np.eye(2)
        D = np.diag([1.0, 1e-6])
        dec = decompose(OperatorPair(A=A, D=D))
        cert = optimize_rate(dec, Variant.THEOREM2)
        assert cert.valid and 0 < cert.rate < 1e-6

    def test_t2_refused_without_accretivity(self):
        A = np.eye(2)
        D = np.diag([1.0, 0.0])  # beta = 0: delta = 0 too
        dec = decompose(OperatorPair(A=A, D=D))
        assert not dec.holds_C
        with pytest.raises(NotAccretiveDamping):
            optimize_rate(dec, Variant.THEOREM2)

    def test_config_validation(self):
        with pytest.raises(InvalidParams):
            SearchConfig(grid=1)
        with pytest.raises(InvalidParams):
            SearchConfig(m_min=0.0)
        with pytest.raises(InvalidParams):
            SearchConfig(k_margin=0.7)
