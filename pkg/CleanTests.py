#!/usr/bin/env python

import math
import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

from pyclean.Constants import CleanConstants
from pyclean.Errors import AmbiguousSplitError, InputError, PreconditionError
from pyclean.Matrix.Core import identity, operator_norm
from pyclean.Matrix.Projections import OrthoProjection
from pyclean.Clean.Certificate import CleanCertificate, make_certificate, verify_certificate
from pyclean.Halmos.Form import halmos_form
from pyclean.Clean.Pipelines import (almost_star_clean_decompose, build_alignment, choose_cut, clean_decompose,
                                     halmos_form_with_retry, scalar_plus_small_decompose, star_clean_closed_range)
from pyclean.Host.Corpus import RunConfig, corpus_members
import Matrices.TestData as TestData


GOLDEN_RATIO = (1 + math.sqrt(5)) / 2


def rank_deficient(seed, n, rank):
    B = TestData.random_basis(seed, n, rank)
    C = TestData.random_basis(seed + 1, n, rank)
    return B.dot(np.diag(np.linspace(0.5, 2.0, rank))).dot(C.conj().T)


class CleanTests(unittest.TestCase):

    def test_zero(self):
        cert = clean_decompose(TestData.zero2)
        self.assertTrue(cert.passed)
        self.assertEqual(cert.details['branch'], 'small')
        self.assertAlmostEqual(cert.inverse_norm, 1.0, places=14)
        np.testing.assert_array_equal(cert.P.matrix, identity(2))

    def test_smallNorm(self):
        cert = clean_decompose(0.4 * TestData.e12)
        self.assertEqual(cert.details['branch'], 'small')
        self.assertLessEqual(cert.inverse_norm, 2.0)

    def test_matrixUnit(self):
        cert = clean_decompose(TestData.e12)
        self.assertTrue(cert.passed)
        self.assertEqual(cert.details['branch'], 'halmos')
        self.assertEqual(cert.details['halmos_dims'], [0, 1, 0, 0, 0])
        self.assertAlmostEqual(cert.inverse_norm, GOLDEN_RATIO, places=9)
        self.assertLess(cert.residual_idempotent, 1e-12)

    def test_cutMovesOffSingularValue(self):
        (cut, bound) = choose_cut(TestData.half_diagonal)
        self.assertNotEqual(cut, 0.5)
        self.assertTrue(0.45 <= cut <= 0.55)
        self.assertAlmostEqual(bound, 2.0 / min(cut, 1 - cut))
        cert = clean_decompose(TestData.half_diagonal)
        self.assertTrue(cert.passed)
        self.assertTrue(cert.details['adjusted_cut'])
        self.assertLessEqual(cert.inverse_norm, bound * (1 + 1e-6))

    def test_cutAtHalf(self):
        self.assertEqual(choose_cut(TestData.split_spectrum), (0.5, CleanConstants.CLEAN_BOUND))

    def test_alignmentPairsCorners(self):
        E = OrthoProjection(np.diag([1, 0]).astype(np.complex128))
        F = OrthoProjection(np.diag([0, 1]).astype(np.complex128))
        A = build_alignment(halmos_form(E, F), E, F)
        self.assertAlmostEqual(operator_norm(A), 1.0, places=12)
        self.assertAlmostEqual(abs(A[1, 0]), 1.0, places=12)
        self.assertLess(operator_norm(A - (identity(2) - E.matrix).dot(A).dot(E.matrix)), 1e-12)

    def test_alignmentNeedsPairedCorners(self):
        E = OrthoProjection(np.diag([1, 1, 0]).astype(np.complex128))
        F = OrthoProjection(np.diag([0, 0, 1]).astype(np.complex128))
        with self.assertRaises(AmbiguousSplitError):
            build_alignment(halmos_form(E, F), E, F)

    def test_largeJordanBlocks(self):
        T = TestData.jordan_sum((0.1, 0.9), 8)
        cert = clean_decompose(T)
        self.assertTrue(cert.passed)
        self.assertLessEqual(cert.inverse_norm, cert.claimed_bound * (1 + CleanConstants.CERTIFY_SLACK))
        self.assertTrue(verify_certificate(T, cert).passed)

    def test_nearlyEqualSplitPairs(self):
        (E, F) = TestData.nearly_equal_pair(3e-6)
        form = halmos_form_with_retry(OrthoProjection(E), OrthoProjection(F))
        self.assertEqual(form.delta, CleanConstants.HALMOS_DELTA)
        self.assertEqual(form.d3, 1)

    def test_jordanLargeCorpus(self):
        for member in corpus_members(RunConfig(seed=3, count=6, min_n=8, max_n=24, families=('jordan-large',))):
            cert = clean_decompose(member.matrix)
            self.assertTrue(cert.passed, member.name)
            self.assertLessEqual(cert.inverse_norm, cert.claimed_bound * (1 + CleanConstants.CERTIFY_SLACK),
                                 member.name)

    def test_idempotentNormLimit(self):
        cert = clean_decompose(TestData.nilpotent3)
        self.assertLessEqual(cert.details['p_norm'], cert.details['p_norm_limit'] + 1e-8)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 32 - 1), st.integers(min_value=1, max_value=12),
           st.sampled_from((0.5, 1.0, 2.0, 4.0)))
    def test_randomMatrices(self, seed, n, scale):
        T = TestData.random_matrix(seed, n, scale)
        cert = clean_decompose(T)
        self.assertTrue(cert.passed)
        self.assertLessEqual(cert.inverse_norm, cert.claimed_bound * (1 + 1e-6))
        if not cert.details.get('adjusted_cut'):
            self.assertLessEqual(cert.inverse_norm, 4.0 * (1 + 1e-6))
        P = cert.P.matrix
        self.assertLess(operator_norm(P.dot(P) - P), 1e-8)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 32 - 1), st.integers(min_value=1, max_value=12),
           st.sampled_from((1.0, 2.0, 4.0)))
    def test_couplingAtMostInverseRootTwo(self, seed, n, scale):
        cert = clean_decompose(TestData.random_matrix(seed, n, scale))
        if cert.details['branch'] == 'halmos':
            self.assertLessEqual(cert.details['coupling'], 1 / math.sqrt(2) + 1e-9)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 32 - 1), st.integers(min_value=2, max_value=10),
           st.integers(min_value=0, max_value=9))
    def test_rankDeficient(self, seed, n, rank):
        cert = clean_decompose(rank_deficient(seed, n, min(rank, n - 1)))
        self.assertTrue(cert.passed)
        self.assertLessEqual(cert.inverse_norm, cert.claimed_bound * (1 + 1e-6))


class ScalarPlusSmallTests(unittest.TestCase):

    def block(self, basis):
        return OrthoProjection.from_basis(basis, n=basis.shape[0])

    def test_smallScalar(self):
        (z, A, basis, T) = TestData.scalar_block_case(z=0.3)
        cert = scalar_plus_small_decompose(z, A, self.block(basis), T)
        self.assertTrue(cert.passed)
        self.assertEqual(cert.details['branch'], 'extend-complement')
        self.assertLessEqual(cert.inverse_norm, 8.0)
        self.assertEqual(cert.shift, 0.3)

    def test_largeScalar(self):
        (z, A, basis, T) = TestData.scalar_block_case(seed=3, z=0.7j)
        cert = scalar_plus_small_decompose(z, A, self.block(basis), T)
        self.assertTrue(cert.passed)
        self.assertEqual(cert.details['branch'], 'extend-zero')
        self.assertLessEqual(cert.inverse_norm, 8.0)

    def test_emptyBlock(self):
        n = 4
        D = TestData.random_matrix(5, n)
        D *= 0.1 / operator_norm(D)
        cert = scalar_plus_small_decompose(0.2, np.zeros((n, n)), OrthoProjection.zero(n), D)
        self.assertTrue(cert.passed)
        self.assertEqual(cert.details['block_rank'], 0)

    def test_perturbationTooLarge(self):
        (z, A, basis, T) = TestData.scalar_block_case()
        with self.assertRaises(PreconditionError):
            scalar_plus_small_decompose(z, A, self.block(basis), A + 0.2 * identity(A.shape[0]))

    def test_notSupportedOnBlock(self):
        (z, A, basis, T) = TestData.scalar_block_case()
        full = TestData.random_matrix(1, A.shape[0])
        with self.assertRaises(PreconditionError):
            scalar_plus_small_decompose(z, full, self.block(basis), full)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 32 - 1),
           st.sampled_from((0.0, 0.2, 0.45, 0.55, 1.0, 3.0)),
           st.floats(min_value=0, max_value=2 * math.pi))
    def test_scalars(self, seed, modulus, angle):
        z = modulus * complex(math.cos(angle), math.sin(angle))
        (z, A, basis, T) = TestData.scalar_block_case(seed=seed, z=z)
        cert = scalar_plus_small_decompose(z, A, self.block(basis), T)
        self.assertTrue(cert.passed)
        self.assertLessEqual(cert.inverse_norm, cert.claimed_bound * (1 + 1e-6))


class StarTests(unittest.TestCase):

    def test_almostStarInjective(self):
        cert = almost_star_clean_decompose(2 * TestData.identity2)
        self.assertTrue(cert.passed)
        self.assertEqual(cert.details['branch'], 'injective')
        np.testing.assert_array_equal(cert.P.matrix, np.zeros((2, 2)))

    def test_almostStarMatrixUnit(self):
        cert = almost_star_clean_decompose(TestData.e12)
        self.assertTrue(cert.passed)
        P = cert.P.matrix
        self.assertLess(operator_norm(P - P.conj().T), 1e-12)
        self.assertAlmostEqual(abs(np.linalg.det(TestData.e12 - P)), 0.5, places=9)

    def test_starMatrixUnit(self):
        cert = star_clean_closed_range(TestData.e12)
        self.assertTrue(cert.passed)
        self.assertAlmostEqual(abs(np.linalg.det(TestData.e12 - cert.P.matrix)), 0.5, places=9)
        self.assertLess(cert.residual_selfadjoint, 1e-12)

    def test_starZero(self):
        cert = star_clean_closed_range(TestData.zero2)
        self.assertTrue(cert.passed)
        self.assertEqual(cert.details['rank'], 0)
        self.assertAlmostEqual(cert.inverse_norm, 1.0, places=12)

    def test_starWitness(self):
        cert = star_clean_closed_range(TestData.star_witness)
        self.assertTrue(cert.passed)
        self.assertGreater(abs(np.linalg.det(TestData.star_witness - cert.P.matrix)), 1e-6)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 32 - 1), st.integers(min_value=1, max_value=10),
           st.integers(min_value=0, max_value=10))
    def test_randomRankDeficient(self, seed, n, rank):
        rank = min(rank, n)
        T = rank_deficient(seed, n, rank) if rank else np.zeros((n, n), dtype=np.complex128)
        for decompose in (almost_star_clean_decompose, star_clean_closed_range):
            cert = decompose(T)
            self.assertTrue(cert.passed)
            P = cert.P.matrix
            self.assertLess(operator_norm(P - P.conj().T), 1e-8)
            self.assertLess(operator_norm(P.dot(P) - P), 1e-8)


class CertificateTests(unittest.TestCase):

    def test_unknownMode(self):
        with self.assertRaises(InputError):
            CleanCertificate('dirty', TestData.identity2, 1.0)

    def test_roundTrip(self):
        cert = clean_decompose(TestData.e12)
        copy = CleanCertificate.from_dict(cert.to_dict())
        self.assertEqual(copy.mode, CleanConstants.MODE_CLEAN)
        self.assertEqual(copy.details['branch'], 'halmos')
        self.assertTrue(verify_certificate(TestData.e12, copy).passed)

    def test_infinityIsWritten(self):
        cert = make_certificate(CleanConstants.MODE_ALMOST_STAR, TestData.zero2, np.zeros((2, 2)))
        doc = cert.to_dict()
        self.assertEqual(doc['inverse_norm'], 'inf')
        self.assertFalse(doc['passed'])
        self.assertEqual(CleanCertificate.from_dict(doc).inverse_norm, np.inf)

    def test_malformed(self):
        with self.assertRaises(InputError):
            CleanCertificate.from_dict({'mode': 'clean'})
        with self.assertRaises(InputError):
            CleanCertificate.from_dict([])

    def test_tamperedIdempotent(self):
        doc = clean_decompose(TestData.e12).to_dict()
        doc['P']['data'][0] = [5.0, 0.0]
        report = verify_certificate(TestData.e12, CleanCertificate.from_dict(doc))
        self.assertFalse(report.passed)
        self.assertIn('idempotent', [check.name for check in report.failures()])

    def test_tamperedBound(self):
        cert = clean_decompose(TestData.e12)
        cert.claimed_bound = 1.0
        report = verify_certificate(TestData.e12, cert)
        self.assertFalse(report.check('bound').passed)
        self.assertTrue(report.check('idempotent').passed)

    def test_tamperedInverseNorm(self):
        cert = clean_decompose(TestData.e12)
        cert.inverse_norm = 1.0
        report = verify_certificate(TestData.e12, cert)
        self.assertFalse(report.check('recorded_inverse_norm').passed)

    def test_strongNeedsLogBound(self):
        cert = make_certificate(CleanConstants.MODE_STRONG, 2 * TestData.identity2, np.zeros((2, 2)))
        self.assertFalse(cert.passed)
        cert = make_certificate(CleanConstants.MODE_STRONG, 2 * TestData.identity2, np.zeros((2, 2)),
                                log_bound=0.0)
        self.assertTrue(cert.passed)

    def test_nonCommuting(self):
        P = np.diag([1, 0]).astype(np.complex128)
        cert = make_certificate(CleanConstants.MODE_STRONG, TestData.e12, P, log_bound=10.0)
        self.assertFalse(cert.passed)
        report = verify_certificate(TestData.e12, cert)
        self.assertFalse(report.check('commute').passed)

    def test_starNotInjective(self):
        cert = star_clean_closed_range(TestData.e12)
        cert.P = CleanCertificate('star', np.zeros((2, 2)), 0.0).P
        report = verify_certificate(TestData.e12, cert)
        self.assertFalse(report.check('injective').passed)
        self.assertEqual(report.to_dict()['passed'], False)

    def test_toleranceArgument(self):
        cert = clean_decompose(TestData.e12)
        cert.P = CleanCertificate('clean', cert.P.matrix + 1e-7, 0.0).P
        self.assertFalse(verify_certificate(TestData.e12, cert).check('idempotent').passed)
        self.assertTrue(verify_certificate(TestData.e12, cert, tol=1e-4).check('idempotent').passed)


def main():
    unittest.main(module=__name__)


if __name__ == "__main__":
    main()
