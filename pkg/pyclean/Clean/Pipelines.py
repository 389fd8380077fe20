"""
Decomposition pipelines.

* `clean_decompose`: T = (T - P) + P with |(T - P)^-1| <= 4.
* `scalar_plus_small_decompose`: zI + T = U + P with |U^-1| <= 8 when T is within
  1/8 of a matrix supported on a block.
* `almost_star_clean_decompose`: P an orthogonal projection with T - P injective.
* `star_clean_closed_range`: P an orthogonal projection with T - P invertible.

The clean pipeline for |T| > 1/2 takes the spectral projection E of |T| on
[0, 1/2] and F = I - R(T(I - E)). In the canonical form of (E, F) it aligns the
range of (T - P)E against R(T(I - E)): paired corners map a -> b and generic
vectors map x -> i y. The graph idempotent of that alignment gives ranges
whose coupling is exactly 1/sqrt(2) on every block, so that

    |(T - P)^-1| <= 1 / (sqrt(1 - 1/sqrt(2)) min(c, 1 - c)) < 3.7   at c = 1/2
"""

import logging

import numpy as np

from ..Constants import CleanConstants
from ..Errors import (AmbiguousCutError, AmbiguousSplitError, NumericalFailure,
                      PreconditionError)
from ..Matrix.Core import (as_matrix, adjoint, check_same_dimension, identity,
                           operator_norm, singular_values)
from ..Matrix.Projections import OrthoProjection, kernel_projection, spectral_pair
from ..Halmos.Form import halmos_form
from ..Halmos.Criteria import graph_idempotent, graph_range_projection
from .Certificate import make_certificate


logger = logging.getLogger(__name__)


__all__ = (
        'clean_decompose',
        'build_alignment',
        'scalar_plus_small_decompose',
        'almost_star_clean_decompose',
        'star_clean_closed_range',
        'choose_cut',
        'halmos_form_with_retry',
    )


# Blocks of the projections assembled in the canonical basis
HALF_PAIR = [[0.5, 0.5], [0.5, 0.5]]
ALMOST_STAR_GENERIC = [[0.5, -0.5j], [0.5j, 0.5]]
STAR_GENERIC = [[0.5, 0.5j], [-0.5j, 0.5]]

# Alignment blocks: a -> b on paired corners, x -> i y on the generic part
ALIGN_PAIR = [[0, 0], [1, 0]]
ALIGN_GENERIC = [[0, 0], [1j, 0]]


def choose_cut(T, tol=CleanConstants.CONSTRUCTION_TOL):
    """
    The spectral cut for the clean pipeline.

    1/2 is used unless a singular value is within tol of it; then the point of
    [0.45, 0.55] furthest from every singular value is used.

    @return: tuple of (cut, claimed bound)
    """
    cut = CleanConstants.CLEAN_CUT
    s = singular_values(T)
    if np.all(np.abs(s - cut) > tol):
        return (cut, CleanConstants.CLEAN_BOUND)
    grid = np.linspace(CleanConstants.CLEAN_CUT_LOW, CleanConstants.CLEAN_CUT_HIGH, CleanConstants.CLEAN_CUT_STEPS)
    gaps = np.array([np.min(np.abs(s - c)) for c in grid])
    best = int(np.argmax(gaps))
    if gaps[best] <= tol:
        raise NumericalFailure("No spectral cut in [%.2f, %.2f] avoids the singular values"
                               % (CleanConstants.CLEAN_CUT_LOW, CleanConstants.CLEAN_CUT_HIGH))
    cut = float(grid[best])
    bound = max(CleanConstants.CLEAN_BOUND, 2.0 / min(cut, 1 - cut))
    logger.warning("Singular values crowd 1/2; using cut %.3f with bound %.6g", cut, bound)
    return (cut, bound)


def halmos_form_with_retry(E, F, require_paired=True):
    """
    Canonical form, retrying the split tolerances until the form is usable.

    @param require_paired:  True to reject forms with unpaired corner vectors

    @return: HalmosForm
    """
    failure = None
    for delta in CleanConstants.HALMOS_DELTA_RETRIES:
        try:
            form = halmos_form(E, F, delta=delta)
        except (AmbiguousSplitError, NumericalFailure) as exc:
            logger.debug("Halmos split at delta %.0e failed: %s", delta, exc)
            failure = exc
            continue
        if require_paired and form.d_extra:
            logger.debug("Halmos split at delta %.0e leaves %i unpaired vectors", delta, form.d_extra)
            failure = AmbiguousSplitError("Corner ranks do not pair (%i unpaired)" % (form.d_extra,))
            continue
        if delta != CleanConstants.HALMOS_DELTA:
            logger.warning("Halmos split needed delta %.0e", delta)
        return form
    raise NumericalFailure("Halmos form failed at every split tolerance: %s" % (failure,))


def build_alignment(form, E, F):
    """
    The alignment map A = (I - E) A E of the clean pipeline.

    It is 0 on E^F, sends each paired E^(I-F) vector a to its (I-E)^F partner b,
    and each generic vector x to i y. |A| <= 1.

    @param form:    HalmosForm of (E, F)
    @param E:       OrthoProjection
    @param F:       OrthoProjection

    @return: matrix A
    """
    n = check_same_dimension(E.matrix, F.matrix, form.W)
    if form.d_extra:
        raise AmbiguousSplitError("Cannot align %i unpaired corner vectors" % (form.d_extra,))
    A = form.block_operator(pair=ALIGN_PAIR, generic=ALIGN_GENERIC)
    Ec = identity(n) - E.matrix
    return Ec.dot(A).dot(E.matrix)


def clean_decompose(T, tol=CleanConstants.DEFAULT_TOL):
    """
    Clean decomposition with |(T - P)^-1| <= 4.

    @param T:   square matrix
    @param tol: verification tolerance

    @return: CleanCertificate in 'clean' mode
    """
    T = as_matrix(T)
    n = T.shape[0]
    t_norm = operator_norm(T)
    if t_norm <= CleanConstants.CLEAN_CUT:
        cert = make_certificate(CleanConstants.MODE_CLEAN, T, identity(n),
                                claimed_bound=CleanConstants.CLEAN_BOUND,
                                details={'branch': 'small', 'te_norm': t_norm}, tol=tol)
    else:
        (cut, bound) = choose_cut(T)
        try:
            (E, F) = spectral_pair(T, cut)
        except AmbiguousCutError as exc:
            raise NumericalFailure("Spectral cut failed: %s" % (exc,))
        form = halmos_form_with_retry(E, F)
        A = build_alignment(form, E, F)
        P = graph_idempotent(T, E, A)

        Em = E.matrix
        te_norm = operator_norm(T.dot(Em))
        p_norm = P.norm
        R1 = graph_range_projection(E, A)
        coupling = operator_norm(R1.matrix.dot(identity(n) - F.matrix))
        if E.rank:
            B = E.basis
            restricted = float(singular_values(adjoint(B).dot(T).dot(B) - identity(E.rank)).min())
            restricted_bound = 2.0 / min(restricted, cut)
        else:
            restricted_bound = 2.0 / cut
        details = {
                'branch': 'halmos',
                'cut': cut,
                'adjusted_cut': cut != CleanConstants.CLEAN_CUT,
                'halmos_dims': list(form.dims),
                'halmos_delta': form.delta,
                'halmos_band': form.band,
                'te_norm': te_norm,
                'p_norm': p_norm,
                'p_norm_limit': 2 + 2 * te_norm,
                'coupling': coupling,
                'restricted_bound': restricted_bound,
            }
        if p_norm > 2 + 2 * te_norm + CleanConstants.DEFAULT_TOL:
            raise NumericalFailure("|P| = %.6g exceeds 2 + 2|TE| = %.6g" % (p_norm, 2 + 2 * te_norm))
        cert = make_certificate(CleanConstants.MODE_CLEAN, T, P.matrix, claimed_bound=bound,
                                details=details, tol=tol)

    if not cert.passed:
        raise NumericalFailure("Clean decomposition failed verification (inverse norm %.6g)" % (cert.inverse_norm,))
    logger.debug("Clean decomposition n=%i inverse norm %.6g", n, cert.inverse_norm)
    return cert


def scalar_plus_small_decompose(z, A, blockE, Tfull, tol=CleanConstants.DEFAULT_TOL):
    """
    Clean decomposition of zI + T with |U^-1| <= 8, for T within 1/8 of a block matrix.

    The compression z + A to the block is decomposed with bound 4; P is extended
    by 0 off the block when |z| >= 1/2 and by I - E when |z| < 1/2.

    @param z:       scalar
    @param A:       matrix supported on the block, A = EAE
    @param blockE:  OrthoProjection onto the block
    @param Tfull:   matrix with |Tfull - A| <= 1/8
    @param tol:     verification tolerance

    @return: CleanCertificate in 'scalar-plus-small' mode, for Tfull with shift z
    """
    z = complex(z)
    A = as_matrix(A, name='A')
    Tfull = as_matrix(Tfull, name='T')
    n = check_same_dimension(A, Tfull, blockE.matrix)
    Em = blockE.matrix
    a_scale = max(1.0, operator_norm(A))
    if operator_norm(A - Em.dot(A).dot(Em)) > tol * a_scale:
        raise PreconditionError("A is not supported on the block")
    perturbation = operator_norm(Tfull - A)
    if perturbation > CleanConstants.SCALAR_PERTURBATION * (1 + tol):
        raise PreconditionError("|T - A| = %.6g exceeds 1/8" % (perturbation,))

    k = blockE.rank
    P = np.zeros((n, n), dtype=np.complex128)
    block_inverse_norm = None
    block_bound = 2.0
    if k:
        B = blockE.basis
        inner = clean_decompose(z * identity(k) + adjoint(B).dot(A).dot(B), tol=tol)
        P = B.dot(inner.P.matrix).dot(adjoint(B))
        block_inverse_norm = inner.inverse_norm
        block_bound = max(block_bound, inner.claimed_bound)
    # Neumann series: the unperturbed element has inverse at most block_bound
    bound = max(CleanConstants.SCALAR_BOUND,
                block_bound / (1 - block_bound * CleanConstants.SCALAR_PERTURBATION))
    if abs(z) < 0.5:
        P = P + identity(n) - Em
        branch = 'extend-complement'
    else:
        branch = 'extend-zero'

    details = {
            'branch': branch,
            'block_rank': k,
            'block_inverse_norm': block_inverse_norm,
            'perturbation': perturbation,
        }
    cert = make_certificate(CleanConstants.MODE_SCALAR_PLUS_SMALL, Tfull, P, shift=z,
                            claimed_bound=bound, details=details, tol=tol)
    if not cert.passed:
        raise NumericalFailure("Scalar-plus-small decomposition failed verification (inverse norm %.6g)"
                               % (cert.inverse_norm,))
    return cert


def almost_star_clean_decompose(T, tol=CleanConstants.DEFAULT_TOL):
    """
    Orthogonal projection P with T - P injective.

    @param T:   square matrix
    @param tol: verification tolerance

    @return: CleanCertificate in 'almost-star' mode
    """
    T = as_matrix(T)
    n = T.shape[0]
    K = kernel_projection(T)
    if K.rank == 0:
        P = np.zeros((n, n), dtype=np.complex128)
        details = {'branch': 'injective'}
    else:
        Kstar = kernel_projection(adjoint(T))
        form = halmos_form_with_retry(K, Kstar)
        P = form.block_operator(ef=1, pair=HALF_PAIR, generic=ALMOST_STAR_GENERIC, complement=0)
        P = OrthoProjection(P).matrix
        details = {'branch': 'halmos', 'kernel_rank': K.rank, 'halmos_dims': list(form.dims)}
    cert = make_certificate(CleanConstants.MODE_ALMOST_STAR, T, P, details=details, tol=tol)
    if not cert.passed:
        raise NumericalFailure("Almost *-clean decomposition failed verification")
    return cert


def star_clean_closed_range(T, tol=CleanConstants.DEFAULT_TOL):
    """
    Orthogonal projection P with T - P invertible, from E = I - K(T) and F = R(T).

    @param T:   square matrix
    @param tol: verification tolerance

    @return: CleanCertificate in 'star' mode
    """
    T = as_matrix(T)
    n = T.shape[0]
    (U, s, Vh) = np.linalg.svd(T)
    rank = int(np.count_nonzero(s > s[0] * n * CleanConstants.RANK_EPS))
    E = OrthoProjection.from_basis(adjoint(Vh[:rank]), n=n)
    F = OrthoProjection.from_basis(U[:, :rank], n=n)
    form = halmos_form_with_retry(E, F)
    P = form.block_operator(ef=0, pair=HALF_PAIR, generic=STAR_GENERIC, complement=1)
    P = OrthoProjection(P).matrix
    details = {'rank': rank, 'halmos_dims': list(form.dims)}
    cert = make_certificate(CleanConstants.MODE_STAR, T, P, details=details, tol=tol)
    if not cert.passed:
        raise NumericalFailure("*-clean decomposition failed verification")
    return cert
