"""
Invertibility criteria built on projection pairs.
"""

import logging
import math

import numpy as np

from ..Constants import CleanConstants
from ..Errors import PreconditionError
from ..Matrix.Core import (as_matrix, adjoint, check_same_dimension, identity,
                           operator_norm, rank_tolerance, singular_values)
from ..Matrix.Projections import (Idempotent, OrthoProjection, bounded_below_constant,
                                  image_projection, join)


logger = logging.getLogger(__name__)


__all__ = (
        'DifferenceReport',
        'SumInvertibilityReport',
        'DualityReport',
        'difference_invertibility',
        'graph_idempotent',
        'graph_range_projection',
        'sum_invertibility_check',
        'conjugate_duality_check',
    )


# Relative slack for the norm identity and the sandwich inequalities
IDENTITY_SLACK = 1e-8


class DifferenceReport(object):

    def __init__(self, invertible_on_join, norm_of_inverse, ef_norm, identity_holds, join_rank):
        self.invertible_on_join = invertible_on_join
        self.norm_of_inverse = norm_of_inverse
        self.ef_norm = ef_norm
        self.identity_holds = identity_holds
        self.join_rank = join_rank

    def __repr__(self):
        return "<{}(invertible_on_join={}, norm_of_inverse={!r}, ef_norm={:.6g})>".format(
                    self.__class__.__name__, self.invertible_on_join, self.norm_of_inverse, self.ef_norm)

    @property
    def expected_norm(self):
        """
        (1 - |EF|^2)^(-1/2)
        """
        gap = 1 - self.ef_norm ** 2
        if gap <= 0:
            return np.inf
        return 1.0 / math.sqrt(gap)


def difference_invertibility(E, F, tol=CleanConstants.CONSTRUCTION_TOL):
    """
    Whether E - F is invertible as an operator on the range of E v F.

    When it is, the norm of the inverse is compared with (1 - |EF|^2)^(-1/2). A zero
    join is reported as invertible, with an inverse of norm 0.

    @param E:   OrthoProjection
    @param F:   OrthoProjection
    @param tol: smallest singular value accepted as invertible

    @return: DifferenceReport
    """
    check_same_dimension(E.matrix, F.matrix)
    J = join(E, F)
    ef_norm = operator_norm(E.matrix.dot(F.matrix))
    if J.rank == 0:
        return DifferenceReport(True, 0.0, ef_norm, True, 0)

    B = J.basis
    smin = float(singular_values(adjoint(B).dot(E.matrix - F.matrix).dot(B)).min())
    if smin <= tol:
        return DifferenceReport(False, None, ef_norm, False, J.rank)

    report = DifferenceReport(True, 1.0 / smin, ef_norm, False, J.rank)
    report.identity_holds = abs(report.norm_of_inverse - report.expected_norm) <= IDENTITY_SLACK * report.norm_of_inverse
    if not report.identity_holds:
        logger.warning("Difference inverse norm %.12g differs from (1 - |EF|^2)^(-1/2) = %.12g",
                       report.norm_of_inverse, report.expected_norm)
    return report


def graph_idempotent(T, E, A, tol=CleanConstants.CONSTRUCTION_TOL):
    """
    The idempotent P = E + (I-E)TE - A(ETE - E).

    P has kernel I - E, and (T - P)E = (I + A)(ETE - E), so the range of (T - P)E is
    the graph of A over the range of E.

    @param T:   square matrix
    @param E:   OrthoProjection with ETE - E invertible on its range
    @param A:   square matrix; only its (I-E) A E part is used

    @return: Idempotent
    """
    T = as_matrix(T)
    A = as_matrix(A, name='A')
    n = check_same_dimension(T, A, E.matrix)
    Em = E.matrix
    Ec = identity(n) - Em
    A = Ec.dot(A).dot(Em)
    if E.rank:
        B = E.basis
        restricted = adjoint(B).dot(T).dot(B) - identity(E.rank)
        smin = float(singular_values(restricted).min())
        if smin <= tol:
            raise PreconditionError("ETE - E is not invertible on the range of E (sigma_min %.3g)" % (smin,))
    P = Em + Ec.dot(T).dot(Em) - A.dot(Em.dot(T).dot(Em) - Em)
    return Idempotent(P, tolerance=tol)


def graph_range_projection(E, A):
    """
    Projection onto {xi + A xi : xi in the range of E}.
    """
    n = E.n
    if E.rank == 0:
        return OrthoProjection.zero(n)
    B = E.basis
    (Q, _) = np.linalg.qr(B + A.dot(B))
    return OrthoProjection.from_basis(Q, n=n)


class SumInvertibilityReport(object):

    def __init__(self, invertible, a1, a2, coupling, sandwich_ok=None, lower=None, middle=None, upper=None):
        self.invertible = invertible
        self.a1 = a1
        self.a2 = a2
        self.coupling = coupling
        self.sandwich_ok = sandwich_ok
        self.lower = lower
        self.middle = middle
        self.upper = upper

    def __repr__(self):
        return "<{}(invertible={}, a1={:.6g}, a2={:.6g}, coupling={:.6g}, sandwich_ok={})>".format(
                    self.__class__.__name__, self.invertible, self.a1, self.a2, self.coupling, self.sandwich_ok)


def sum_invertibility_check(T, E, tol=CleanConstants.DEFAULT_TOL):
    """
    Invertibility of T from its behaviour on the ranges of E and I - E.

    T is invertible when it is bounded below on both ranges (a1, a2 > 0) and the
    ranges R(TE), R(T(I-E)) meet only in 0 (coupling |R(TE) R(T(I-E))| < 1).
    For invertible T:

        1/|T| <= sqrt(1 - coupling) |T^-1| <= 1 / min(a1, a2)

    @param T:   square matrix
    @param E:   OrthoProjection
    @param tol: threshold below which constants are treated as zero

    @return: SumInvertibilityReport
    """
    T = as_matrix(T)
    n = check_same_dimension(T, E.matrix)
    Ec = E.complement()
    a1 = bounded_below_constant(T, E)
    a2 = bounded_below_constant(T, Ec)
    R1 = image_projection(T, E)
    R2 = image_projection(T, Ec)
    coupling = operator_norm(R1.matrix.dot(R2.matrix))
    invertible = bool(a1 > tol and a2 > tol and coupling < 1 - tol and R1.rank + R2.rank == n)
    report = SumInvertibilityReport(invertible, a1, a2, coupling)

    s = singular_values(T)
    if s[-1] > rank_tolerance(n) * s[0]:
        report.lower = 1.0 / s[0]
        report.middle = math.sqrt(max(1 - coupling, 0.0)) / s[-1]
        report.upper = 1.0 / min(a1, a2)
        report.sandwich_ok = bool(report.lower <= report.middle * (1 + IDENTITY_SLACK)
                                  and report.middle <= report.upper * (1 + IDENTITY_SLACK))
    return report


def _complement_range(E):
    """
    Orthogonal projection onto the range of I - E for an idempotent E.
    """
    if isinstance(E, OrthoProjection):
        return E.complement()
    n = E.n
    # Non-zero singular values of an idempotent are at least 1
    (U, s, _) = np.linalg.svd(identity(n) - E.matrix)
    return OrthoProjection.from_basis(U[:, s > 0.5], n=n)


class DualityReport(object):

    def __init__(self, F, dual_ok, tf_norm, lower):
        self.F = F
        self.dual_ok = dual_ok
        self.tf_norm = tf_norm
        self.lower = lower

    def __repr__(self):
        return "<{}(F={!r}, dual_ok={})>".format(self.__class__.__name__, self.F, self.dual_ok)


def conjugate_duality_check(T, E, a, c, tol=CleanConstants.DEFAULT_TOL):
    """
    Transfer the bounds |TE| <= a and |T xi| >= c |xi| on the range of I - E to T*.

    With F = I - R(T(I-E)), the adjoint satisfies |T*F| <= a and is bounded below
    by c on the range of I - F.

    @param T:   square matrix
    @param E:   Idempotent (or OrthoProjection)
    @param a:   bound on |TE|
    @param c:   lower bound of T on the range of I - E
    @param tol: relative slack on both bounds

    @return: DualityReport
    """
    T = as_matrix(T)
    Em = E.matrix
    check_same_dimension(T, Em)
    slack = tol * max(1.0, operator_norm(T))

    te_norm = operator_norm(T.dot(Em))
    if te_norm > a * (1 + tol) + slack:
        raise PreconditionError("|TE| = %.6g exceeds a = %.6g" % (te_norm, a))
    complement = _complement_range(E)
    if bounded_below_constant(T, complement) < c * (1 - tol) - slack:
        raise PreconditionError("T is not bounded below by c = %.6g on the range of I - E" % (c,))

    F = image_projection(T, complement).complement()
    Tstar = adjoint(T)
    tf_norm = operator_norm(Tstar.dot(F.matrix))
    lower = bounded_below_constant(Tstar, F.complement())
    dual_ok = bool(tf_norm <= a * (1 + tol) + slack and lower >= c * (1 - tol) - slack)
    return DualityReport(F, dual_ok, tf_norm, lower)
