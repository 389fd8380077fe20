"""
Counterexamples and rank checks at matrix scale.

* `strong_star_clean_counterexample`: T = E_1 + e_12 in M_2 commutes with no
  projection except 0 and I, and T - 0, T - I are both singular, so T has no
  strongly *-clean decomposition.
* `small_finite_rank_check`: a projection on which T + A is smaller than
  c - |A| is no larger than the spectral projection of |T| on [0, c].
* `spectral_duality_check`: for E the spectral projection of |T| on [0, c],
  I - R(T(I - E)) is the spectral projection of |T*| on [0, c].
* `complement_rank_check`: the spectral projection of |I - T| on [0, b] meets
  E trivially and is no larger than I - E, for b < 1 - c.
* `range_co_finite_check`: when the range of I - E lies in the range of T,
  the spectral projection of |T*| on a small enough [0, c] meets I - E
  trivially and is no larger than E.
"""

import logging
import math

import numpy as np
import sympy

from ..Constants import CleanConstants
from ..Errors import AmbiguousCutError, NumericalFailure, PreconditionError
from ..Matrix.Core import as_matrix, adjoint, check_same_dimension, identity, operator_norm
from ..Matrix.Projections import (bounded_below_constant, compare_projections, meet, image_projection,
                                  range_projection, spectral_projection_abs)


logger = logging.getLogger(__name__)


__all__ = (
        'CounterexampleReport',
        'SpectralDualityReport',
        'ComplementRankReport',
        'commuting_projections_symbolic',
        'commuting_projections_grid',
        'strong_star_clean_counterexample',
        'small_finite_rank_check',
        'spectral_duality_check',
        'complement_rank_check',
        'RangeCoFiniteReport',
        'range_co_finite_check',
    )


WITNESS_T = [[1, 1], [0, 0]]

# Grid over the rank one projections v v*, v = (cos theta, e^(i phi) sin theta)
GRID_STEP = 1e-2
GRID_THRESHOLD = 0.1

# Cuts tried by range_co_finite_check, as fractions of the lower bound of T*
CO_FINITE_FRACTIONS = (0.5, 1.0 / 3, 2.0 / 3, 0.25, 0.75)

CONCLUSION_NOT_STRONG_STAR = "M2 is not strongly *-clean at this witness"


def commuting_projections_symbolic(T):
    """
    Solve P^2 = P, P = P*, TP = PT exactly for a 2x2 matrix T.

    P is written [[a, x + i y], [x - i y, d]] over real symbols.

    @param T:   2x2 matrix of exact (integer or rational) entries

    @return: list of sympy Matrix solutions
    """
    (a, d, x, y) = sympy.symbols('a d x y', real=True)
    P = sympy.Matrix([[a, x + sympy.I * y], [x - sympy.I * y, d]])
    T = sympy.Matrix(T)
    equations = []
    for entry in list(P * P - P) + list(T * P - P * T):
        (re, im) = sympy.expand(entry).as_real_imag()
        for part in (re, im):
            if part != 0:
                equations.append(part)
    solutions = sympy.solve(equations, [a, d, x, y], dict=True)
    return [P.subs(solution) for solution in solutions]


def commuting_projections_grid(T, step=GRID_STEP, threshold=GRID_THRESHOLD):
    """
    Search the projections of M_2 for those commuting with T.

    The projections are 0, I and the rank one v v* with v on a grid of step
    `step` in (theta, phi). A projection is reported when |TP - PT| < threshold.

    @return: tuple of (list of matrices found, smallest rank one residual)
    """
    T = as_matrix(T)
    found = []
    for P in (np.zeros((2, 2), dtype=np.complex128), identity(2)):
        if operator_norm(T.dot(P) - P.dot(T)) < threshold:
            found.append(P)

    theta = np.arange(0, math.pi / 2 + step, step)
    phi = np.arange(0, 2 * math.pi, step)
    (tt, pp) = np.meshgrid(theta, phi, indexing='ij')
    v = np.stack([np.cos(tt).astype(np.complex128), np.exp(1j * pp) * np.sin(tt)], axis=-1).reshape(-1, 2)
    P = v[:, :, None] * v.conj()[:, None, :]
    commutator = np.einsum('ij,kjl->kil', T, P) - np.einsum('kij,jl->kil', P, T)
    residual = np.linalg.norm(commutator, ord=2, axis=(1, 2))
    for index in np.flatnonzero(residual < threshold):
        found.append(P[index])
    return (found, float(residual.min()))


def _as_numeric(P):
    return np.array(P.evalf(), dtype=np.complex128)


def _same_set(first, second, tol=1e-9):
    if len(first) != len(second):
        return False
    return all(any(operator_norm(P - Q) <= tol for Q in second) for P in first)


class CounterexampleReport(object):
    """
    Outcome of the strongly *-clean counterexample.

    @ivar T:                    the witness matrix
    @ivar symbolic:             commuting projections from the exact solve
    @ivar grid:                 commuting projections from the grid search
    @ivar grid_min_residual:    smallest |TP - PT| over the rank one grid
    @ivar determinants:         det(T - P) for each symbolic projection, exact
    @ivar methods_agree:        whether both searches found the same projections
    @ivar conclusion:           text of the conclusion, or None when it failed
    """

    def __init__(self, T, symbolic, grid, grid_min_residual, determinants, methods_agree, conclusion):
        self.T = T
        self.symbolic = symbolic
        self.grid = grid
        self.grid_min_residual = grid_min_residual
        self.determinants = determinants
        self.methods_agree = methods_agree
        self.conclusion = conclusion

    def __repr__(self):
        return "<{}(projections={}, methods_agree={}, conclusion={!r})>".format(self.__class__.__name__,
                                                                              len(self.symbolic),
                                                                              self.methods_agree,
                                                                              self.conclusion)

    @property
    def passed(self):
        return self.conclusion is not None

    def to_dict(self):
        return {
                'T': [[str(value) for value in row] for row in self.T.tolist()],
                'projections': [[[str(value) for value in row] for row in P.tolist()] for P in self.symbolic],
                'grid_projections': len(self.grid),
                'grid_min_residual': self.grid_min_residual,
                'determinants': [str(det) for det in self.determinants],
                'methods_agree': self.methods_agree,
                'conclusion': self.conclusion,
                'passed': self.passed,
            }


def strong_star_clean_counterexample():
    """
    Show that T = [[1, 1], [0, 0]] has no strongly *-clean decomposition in M_2.

    @return: CounterexampleReport
    """
    T = sympy.Matrix(WITNESS_T)
    symbolic = commuting_projections_symbolic(T)
    (grid, grid_min_residual) = commuting_projections_grid(WITNESS_T)
    methods_agree = _same_set([_as_numeric(P) for P in symbolic], grid)
    determinants = [sympy.simplify((T - P).det()) for P in symbolic]
    expected = [sympy.zeros(2, 2), sympy.eye(2)]

    only_trivial = (len(symbolic) == 2 and all(any(P == Q for P in symbolic) for Q in expected))
    conclusion = None
    if only_trivial and methods_agree and all(det == 0 for det in determinants):
        conclusion = CONCLUSION_NOT_STRONG_STAR
    else:
        logger.warning("Counterexample did not hold: %i projections, agree=%s, determinants %s",
                       len(symbolic), methods_agree, determinants)
    return CounterexampleReport(T, symbolic, grid, grid_min_residual, determinants, methods_agree, conclusion)


def small_finite_rank_check(T, A, c, F):
    """
    Check that F is no larger than E, the spectral projection of |T| on [0, c],
    whenever |(T + A)F| < c - |A|.

    @param T:   square matrix
    @param A:   square matrix with |A| < c
    @param c:   positive cut
    @param F:   OrthoProjection

    @return: whether the hypothesis |(T + A)F| < c - |A| holds
    """
    T = as_matrix(T)
    A = as_matrix(A, name='A')
    a_norm = operator_norm(A)
    if a_norm >= c:
        raise PreconditionError("|A| = %.6g is not below c = %.6g" % (a_norm, c))
    E = spectral_projection_abs(T, c)
    hypothesis = operator_norm((T + A).dot(F.matrix)) < c - a_norm
    if hypothesis and compare_projections(F, E) == CleanConstants.ORDER_F_BELOW_E:
        raise NumericalFailure("Rank violation: rank F = %i exceeds rank E = %i" % (F.rank, E.rank))
    return hypothesis


class SpectralDualityReport(object):

    def __init__(self, E, F, f_difference, complement_difference, passed):
        self.E = E
        self.F = F
        self.f_difference = f_difference
        self.complement_difference = complement_difference
        self.passed = passed

    def __repr__(self):
        return "<{}(f_difference={:.3g}, complement_difference={:.3g}, passed={})>".format(
                    self.__class__.__name__, self.f_difference, self.complement_difference, self.passed)


def spectral_duality_check(T, c, tol=CleanConstants.DEFAULT_TOL):
    """
    Compare F = I - R(T(I - E)) with the spectral projection of |T*| on [0, c],
    and I - E with R(T*(I - F)).

    @param T:   square matrix
    @param c:   cut, c > 0
    @param tol: largest difference accepted, in operator norm

    @return: SpectralDualityReport
    """
    T = as_matrix(T)
    E = spectral_projection_abs(T, c)
    F = image_projection(T, E.complement()).complement()
    F_spectral = spectral_projection_abs(adjoint(T), c)
    f_difference = operator_norm(F.matrix - F_spectral.matrix)
    back = image_projection(adjoint(T), F.complement())
    complement_difference = operator_norm(back.matrix - E.complement().matrix)
    passed = f_difference <= tol and complement_difference <= tol
    return SpectralDualityReport(E, F, f_difference, complement_difference, passed)


class ComplementRankReport(object):

    def __init__(self, meet_rank, g_rank, complement_rank):
        self.meet_rank = meet_rank
        self.g_rank = g_rank
        self.complement_rank = complement_rank

    def __repr__(self):
        return "<{}(meet_rank={}, g_rank={}, complement_rank={})>".format(self.__class__.__name__,
                                                                         self.meet_rank, self.g_rank,
                                                                         self.complement_rank)

    @property
    def passed(self):
        return self.meet_rank == 0 and self.g_rank <= self.complement_rank


def complement_rank_check(T, c, b):
    """
    For E the spectral projection of |T| on [0, c] and G that of |I - T| on
    [0, b], with c in (0, 1) and 0 <= b < 1 - c: E ^ G = 0 and rank G <= rank (I - E).

    @return: ComplementRankReport
    """
    T = as_matrix(T)
    if not 0 < c < 1:
        raise PreconditionError("Cut c = %r must lie in (0, 1)" % (c,))
    if not 0 <= b < 1 - c:
        raise PreconditionError("Cut b = %r must lie in [0, 1 - c)" % (b,))
    n = T.shape[0]
    E = spectral_projection_abs(T, c)
    G = spectral_projection_abs(identity(n) - T, b)
    report = ComplementRankReport(meet(E, G).rank, G.rank, E.complement().rank)
    if not report.passed:
        logger.warning("Complement rank check failed: %r", report)
    return report


class RangeCoFiniteReport(object):
    """
    Outcome of `range_co_finite_check`.

    @ivar hypothesis:   whether the range of I - E lies in the range of T
    @ivar cut:          cut c used for F, or None when the hypothesis fails
    @ivar f_rank:       rank of F, the spectral projection of |T*| on [0, c]
    @ivar e_rank:       rank of E
    @ivar meet_rank:    rank of F ^ (I - E)
    @ivar range_ok:     whether the range of I - F lies in the range of T
    """

    def __init__(self, hypothesis, cut=None, f_rank=None, e_rank=None, meet_rank=None, range_ok=None):
        self.hypothesis = hypothesis
        self.cut = cut
        self.f_rank = f_rank
        self.e_rank = e_rank
        self.meet_rank = meet_rank
        self.range_ok = range_ok

    def __repr__(self):
        return "<{}(hypothesis={}, cut={!r}, f_rank={}, e_rank={}, passed={})>".format(
                    self.__class__.__name__, self.hypothesis, self.cut, self.f_rank, self.e_rank, self.passed)

    @property
    def passed(self):
        if not self.hypothesis:
            return True
        return self.meet_rank == 0 and self.f_rank <= self.e_rank and self.range_ok


def _within_range(R, E, tol):
    return operator_norm(R.complement().matrix.dot(E.matrix)) <= tol


def range_co_finite_check(T, E, tol=CleanConstants.DEFAULT_TOL):
    """
    When the range of I - E lies in the range of T, find a cut c with F, the
    spectral projection of |T*| on [0, c], meeting I - E trivially and no
    larger than E; and check that the range of I - F lies in the range of T.

    The cut is a fraction of the lower bound of T* on the range of I - E.

    @param T:   square matrix
    @param E:   OrthoProjection
    @param tol: largest |(I - R(T))(I - E)| accepted as containment

    @return: RangeCoFiniteReport
    """
    T = as_matrix(T)
    n = check_same_dimension(T, E.matrix)
    Tstar = adjoint(T)
    R = range_projection(T)
    complement = E.complement()
    lower = bounded_below_constant(Tstar, complement)
    floor = CleanConstants.SIGMA_FLOOR * max(1.0, operator_norm(T))
    if not (_within_range(R, complement, tol) and lower > floor):
        return RangeCoFiniteReport(False, e_rank=E.rank)

    if math.isinf(lower):
        cuts = [operator_norm(T) + 1.0]
    else:
        cuts = [lower * fraction for fraction in CO_FINITE_FRACTIONS]
    for cut in cuts:
        try:
            F = spectral_projection_abs(Tstar, cut)
        except AmbiguousCutError:
            continue
        report = RangeCoFiniteReport(True, cut, F.rank, E.rank, meet(F, complement).rank,
                                     _within_range(R, F.complement(), tol))
        if not report.passed:
            logger.warning("Range co-finite check failed in dimension %i: %r", n, report)
        return report
    raise NumericalFailure("Every cut below %.6g is ambiguous" % (lower,))
