"""
Complex Schur triangularisation and the nilpotent perturbation bound.
"""

import logging

import numpy as np
import scipy.linalg

from ..Constants import CleanConstants
from ..Errors import NumericalFailure, PreconditionError
from ..Matrix.Core import (as_matrix, adjoint, check_same_dimension, identity,
                           inverse_norm, operator_norm, rank_tolerance, singular_values)


logger = logging.getLogger(__name__)


__all__ = (
        'SchurForm',
        'schur',
        'nilpotent_perturbation_bound',
    )


class SchurForm(object):
    """
    A = Q U Q*, with Q unitary and U upper triangular.

    When the form was computed with a sort, the first `sdim` diagonal entries of
    U are the eigenvalues selected by it.
    """

    def __init__(self, Q, U, residual, sdim=None):
        self.Q = Q
        self.U = U
        self.residual = residual
        self.sdim = sdim

    def __repr__(self):
        return "<{}(n={}, residual={:.3g})>".format(self.__class__.__name__, self.U.shape[0], self.residual)

    @property
    def eigenvalues(self):
        return np.diag(self.U).copy()

    @property
    def residual_unitary(self):
        n = self.Q.shape[0]
        return operator_norm(self.Q.dot(adjoint(self.Q)) - identity(n))


def schur(A, sort=None, tol=CleanConstants.CONSTRUCTION_TOL):
    """
    Complex Schur form of a square matrix.

    @param A:       square matrix
    @param sort:    optional callable selecting eigenvalues to lead the diagonal
    @param tol:     relative reconstruction tolerance

    @return: SchurForm
    """
    A = as_matrix(A)
    n = A.shape[0]
    try:
        if sort is None:
            (U, Q) = scipy.linalg.schur(A, output='complex')
            sdim = None
        else:
            (U, Q, sdim) = scipy.linalg.schur(A, output='complex', sort=sort)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalFailure("Schur decomposition failed: %s" % (exc,))

    # Only the upper triangle is meaningful
    U = np.triu(U)
    scale = max(operator_norm(A), 1.0)
    residual = operator_norm(A - Q.dot(U).dot(adjoint(Q)))
    form = SchurForm(Q, U, residual, sdim=sdim)
    if residual > tol * scale * n or form.residual_unitary > tol * n:
        raise NumericalFailure("Schur decomposition residual %.3g is too large" % (residual,))
    return form


def nilpotent_perturbation_bound(A, B, tol=CleanConstants.DEFAULT_TOL):
    """
    Bound the inverse of A - B when A is invertible and (A^-1 B)^n = 0.

    The bound is |A^-1| * sum_{k<n} |A^-1 B|^k; the actual inverse norm is
    computed and checked against it.

    @param A:   invertible square matrix
    @param B:   square matrix with A^-1 B nilpotent
    @param tol: tolerance for the nilpotency check

    @return: bound on |(A - B)^-1|
    """
    A = as_matrix(A, name='A')
    B = as_matrix(B, name='B')
    n = check_same_dimension(A, B)

    s = singular_values(A)
    if s[-1] <= rank_tolerance(n) * s[0] or s[-1] == 0:
        raise PreconditionError("A is singular")
    Ainv = np.linalg.inv(A)
    C = Ainv.dot(B)
    c = operator_norm(C)
    power = operator_norm(np.linalg.matrix_power(C, n))
    if power > tol * (c ** n + 1):
        raise PreconditionError("A^-1 B is not nilpotent (|(A^-1 B)^n| = %.3g)" % (power,))

    bound = operator_norm(Ainv) * sum(c ** k for k in range(n))
    measured = inverse_norm(A - B)
    logger.debug("Nilpotent perturbation bound %.6g, measured %.6g", bound, measured)
    if measured > bound * (1 + CleanConstants.CERTIFY_SLACK):
        raise NumericalFailure("Inverse norm %.6g exceeds the nilpotent perturbation bound %.6g" % (measured, bound))
    return bound
