"""
Projections and idempotents, and the lattice operations on them.

An `OrthoProjection` is a Hermitian idempotent. It is normalised on
construction: the matrix is re-symmetrised, and when the idempotency residual
is larger than a tenth of the tolerance its eigenvalues are rounded to 0 and 1.
The orthonormal basis of the range is kept, as most consumers want to work on
the range rather than with the projection matrix itself.

An `Idempotent` is any P with P*P = P; it need not be Hermitian.
"""

import logging

import numpy as np

from ..Constants import CleanConstants
from ..Errors import AmbiguousCutError, InputError
from .Core import (as_matrix, adjoint, check_same_dimension, identity,
                   operator_norm, rank_tolerance)


logger = logging.getLogger(__name__)


__all__ = (
        'OrthoProjection',
        'Idempotent',
        'kernel_projection',
        'range_projection',
        'meet',
        'join',
        'spectral_projection_abs',
        'spectral_pair',
        'compare_projections',
        'bounded_below_constant',
        'image_projection',
    )


def _hermitian_eigenbasis(M):
    if M.shape[0] == 0:
        return np.zeros(0), np.zeros((0, 0), dtype=np.complex128)
    return np.linalg.eigh(M)


class OrthoProjection(object):
    """
    Orthogonal projection, held with its rank and an orthonormal basis of its range.
    """

    def __init__(self, matrix, tolerance=CleanConstants.CONSTRUCTION_TOL, basis=None):
        matrix = as_matrix(matrix, name='projection')
        self.tolerance = tolerance
        if basis is not None:
            self._basis = np.asarray(basis, dtype=np.complex128).reshape(matrix.shape[0], -1)
            self.matrix = self._basis.dot(adjoint(self._basis))
        else:
            matrix = (matrix + adjoint(matrix)) / 2
            self._basis = None
            if operator_norm(matrix.dot(matrix) - matrix) > tolerance / 10:
                values, vectors = _hermitian_eigenbasis(matrix)
                self._basis = vectors[:, values > 0.5]
                matrix = self._basis.dot(adjoint(self._basis))
            self.matrix = matrix
        self.rank = int(round(np.trace(self.matrix).real))

    def __repr__(self):
        return "<{}(n={}, rank={})>".format(self.__class__.__name__, self.n, self.rank)

    @classmethod
    def from_basis(cls, basis, n=None, tolerance=CleanConstants.CONSTRUCTION_TOL):
        """
        Build the projection onto the span of orthonormal columns.

        @param basis:   n x k matrix with orthonormal columns (k may be 0)
        @param n:       dimension, needed when the basis has no columns
        """
        basis = np.asarray(basis, dtype=np.complex128)
        if basis.ndim != 2:
            basis = basis.reshape(n, -1)
        if n is None:
            n = basis.shape[0]
        if basis.shape[0] != n:
            raise InputError("Basis has %i rows for a %i dimensional projection" % (basis.shape[0], n))
        return cls(np.zeros((n, n)), tolerance=tolerance, basis=basis)

    @classmethod
    def zero(cls, n):
        return cls.from_basis(np.zeros((n, 0)), n=n)

    @classmethod
    def identity(cls, n):
        return cls.from_basis(identity(n), n=n)

    @property
    def n(self):
        return self.matrix.shape[0]

    @property
    def basis(self):
        """
        Orthonormal basis of the range, as an n x rank matrix.
        """
        if self._basis is None:
            values, vectors = _hermitian_eigenbasis(self.matrix)
            self._basis = vectors[:, values > 0.5]
        return self._basis

    def complement(self):
        """
        The complementary projection I - P.
        """
        values, vectors = _hermitian_eigenbasis(self.matrix)
        return OrthoProjection.from_basis(vectors[:, values <= 0.5], n=self.n, tolerance=self.tolerance)

    @property
    def residual_idempotent(self):
        return operator_norm(self.matrix.dot(self.matrix) - self.matrix)

    @property
    def residual_selfadjoint(self):
        return operator_norm(self.matrix - adjoint(self.matrix))


class Idempotent(object):
    """
    Idempotent matrix P, P*P = P; not necessarily Hermitian.
    """

    def __init__(self, matrix, tolerance=CleanConstants.CONSTRUCTION_TOL):
        self.matrix = as_matrix(matrix, name='idempotent')
        self.tolerance = tolerance

    def __repr__(self):
        return "<{}(n={}, residual={:.3g})>".format(self.__class__.__name__, self.n, self.residual)

    @property
    def n(self):
        return self.matrix.shape[0]

    @property
    def residual(self):
        return operator_norm(self.matrix.dot(self.matrix) - self.matrix)

    @property
    def norm(self):
        return operator_norm(self.matrix)

    def is_valid(self):
        return self.residual <= self.tolerance


def _svd_split(M, tol, scale=0.0):
    """
    SVD of a matrix together with the numerical rank under a relative cutoff.

    @param scale:   smallest sigma_max the cutoff is taken relative to

    @return: tuple of (U, s, Vh, cutoff)
    """
    U, s, Vh = np.linalg.svd(M)
    smax = s[0] if s.size else 0.0
    return (U, s, Vh, tol * max(smax, scale))


def kernel_projection(M, tol=None):
    """
    Projection onto the kernel: right singular vectors with sigma <= tol * sigma_max.

    @param M:   square matrix
    @param tol: relative rank cutoff; defaults to n * 2^-44

    @return: OrthoProjection
    """
    M = as_matrix(M)
    n = M.shape[0]
    if tol is None:
        tol = rank_tolerance(n)
    (U, s, Vh, cutoff) = _svd_split(M, tol)
    return OrthoProjection.from_basis(adjoint(Vh[s <= cutoff]), n=n)


def range_projection(M, tol=None):
    """
    Projection onto the range: left singular vectors with sigma > tol * sigma_max.

    @param M:   matrix with n rows; need not be square
    @param tol: relative rank cutoff; defaults to n * 2^-44

    @return: OrthoProjection
    """
    M = as_matrix(M, square=False)
    n = M.shape[0]
    if tol is None:
        tol = rank_tolerance(n)
    (U, s, Vh, cutoff) = _svd_split(M, tol)
    rank = int(np.count_nonzero(s > cutoff))
    return OrthoProjection.from_basis(U[:, :rank], n=n)


def meet(E, F, tol=None):
    """
    E ^ F: the kernel of the stacked pair [(I - E); (I - F)].

    The cutoff is relative to max(sigma_max, 1), so a stack which is only
    rounding noise has a full kernel.
    """
    n = check_same_dimension(E.matrix, F.matrix)
    if tol is None:
        tol = rank_tolerance(n)
    stack = np.vstack([identity(n) - E.matrix, identity(n) - F.matrix])
    (U, s, Vh, cutoff) = _svd_split(stack, tol, scale=1.0)
    return OrthoProjection.from_basis(adjoint(Vh[s <= cutoff]), n=n)


def join(E, F, tol=None):
    """
    E v F: the range of the concatenated pair [E F], with the cutoff taken as in `meet`.
    """
    n = check_same_dimension(E.matrix, F.matrix)
    if tol is None:
        tol = rank_tolerance(n)
    (U, s, Vh, cutoff) = _svd_split(np.hstack([E.matrix, F.matrix]), tol, scale=1.0)
    rank = int(np.count_nonzero(s > cutoff))
    return OrthoProjection.from_basis(U[:, :rank], n=n)


def spectral_pair(T, c, tol=CleanConstants.CONSTRUCTION_TOL):
    """
    Spectral projections of |T| and |T*| on [0, c], from a single SVD.

    The second projection is also I - R(T(I - E)) for the first projection E.

    @param T:   square matrix
    @param c:   cut, c >= 0
    @param tol: singular values within this distance of c are ambiguous

    @return: tuple of (E, F) OrthoProjections
    """
    T = as_matrix(T)
    if c < 0:
        raise InputError("Spectral cut must be non-negative, not %r" % (c,))
    n = T.shape[0]
    U, s, Vh = np.linalg.svd(T)
    close = np.abs(s - c) <= tol
    if np.any(close):
        logger.debug("Cut %r is ambiguous; singular values %r", c, s[close])
        raise AmbiguousCutError(c, float(s[close][0]))
    below = s <= c
    return (OrthoProjection.from_basis(adjoint(Vh[below]), n=n),
            OrthoProjection.from_basis(U[:, below], n=n))


def spectral_projection_abs(T, c, tol=CleanConstants.CONSTRUCTION_TOL):
    """
    Spectral projection of |T| associated with [0, c].

    @param T:   square matrix
    @param c:   cut, c >= 0
    @param tol: singular values within this distance of c raise AmbiguousCutError

    @return: OrthoProjection E with |TE| <= c and |T xi| >= c |xi| on the range of I - E
    """
    return spectral_pair(T, c, tol=tol)[0]


def compare_projections(E, F):
    """
    Murray-von Neumann comparison, which for matrices is rank comparison.
    """
    check_same_dimension(E.matrix, F.matrix)
    if E.rank == F.rank:
        return CleanConstants.ORDER_EQUIVALENT
    if E.rank < F.rank:
        return CleanConstants.ORDER_E_BELOW_F
    return CleanConstants.ORDER_F_BELOW_E


def bounded_below_constant(T, E):
    """
    The largest c with |T xi| >= c |xi| for every xi in the range of E.

    @param T:   square matrix
    @param E:   OrthoProjection

    @return: smallest singular value of T restricted to the range of E;
             infinity when E is zero
    """
    T = as_matrix(T)
    check_same_dimension(T, E.matrix)
    if E.rank == 0:
        return np.inf
    return float(np.linalg.svd(T.dot(E.basis), compute_uv=False).min())


def image_projection(T, E, tol=None):
    """
    Projection onto T applied to the range of E, R(TE).

    Works from the basis of E, so a complement built as I - E carries no rounding
    noise into the rank decision.

    @param T:   square matrix
    @param E:   OrthoProjection
    @param tol: relative rank cutoff

    @return: OrthoProjection
    """
    T = as_matrix(T)
    n = check_same_dimension(T, E.matrix)
    if E.rank == 0:
        return OrthoProjection.zero(n)
    return range_projection(T.dot(E.basis), tol=tol)
