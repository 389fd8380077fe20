"""
Riesz spectral projections onto the eigenvalues inside a centred circle.

Two methods are provided:

* `schur-subspace`: order the Schur form so that the inner eigenvalues lead,
  solve the Sylvester equation T11 Y - Y T22 = T12, and take
  P = Z [[I, Y], [0, 0]] Z*.
* `quadrature`: the trapezoid rule for (1/2 pi i) integral (zI - A)^-1 dz on the
  circle |z| = r. It converges geometrically with ratio equal to the worst
  eigenvalue-to-radius modulus ratio, which sets the number of nodes. Its result
  is checked against the Schur-subspace projector.

The separation constants C1 and C2 grow like (8 n |A|)^(n^2), so they are held
and compared in log space.
"""

import logging
import math

import numpy as np
import scipy.linalg
from scipy.special import logsumexp

from ..Constants import CleanConstants
from ..Errors import InputError, NumericalFailure, PreconditionError
from ..Matrix.Core import as_matrix, adjoint, identity, operator_norm
from ..Matrix.Projections import Idempotent
from .Schur import schur


logger = logging.getLogger(__name__)


__all__ = (
        'SeparationConstants',
        'RieszResult',
        'log_geometric_sum',
        'separation_constants',
        'resolvent_log_bound',
        'uniform_resolvent_log_bound',
        'choose_separating_radius',
        'radius_distance',
        'riesz_projection',
        'quadrature_nodes',
    )


def log_geometric_sum(log_ratio, n):
    """
    log(sum_{k=0}^{n-1} x^k) where log_ratio = log(x); x may be 0 (log_ratio = -inf).
    """
    if n < 1:
        raise InputError("Geometric sum needs at least one term")
    if log_ratio == -np.inf or n == 1:
        return 0.0
    return float(logsumexp(np.arange(n) * log_ratio))


def _log(value):
    if value <= 0:
        return -np.inf
    return math.log(value)


def _exp(value):
    try:
        return math.exp(value)
    except OverflowError:
        return np.inf


class SeparationConstants(object):
    """
    The constants of the separating-radius construction, in log space:

        C1 = 3n sum_{k<n} (8n |A|)^k
        C2 = 4 sum_{k<n} (8|A| + 4 C1)^k
    """

    def __init__(self, n, norm, logC1, logC2):
        self.n = n
        self.norm = norm
        self.logC1 = logC1
        self.logC2 = logC2

    def __repr__(self):
        return "<{}(n={}, norm={:.6g}, logC1={:.6g}, logC2={:.6g})>".format(self.__class__.__name__,
                                                                           self.n, self.norm,
                                                                           self.logC1, self.logC2)

    @property
    def C1(self):
        return _exp(self.logC1)

    @property
    def C2(self):
        return _exp(self.logC2)


def separation_constants(norm, n):
    """
    Compute C1, the bound on |P| for the Riesz projection P at a separating
    radius, and C2, the bound on |(A - P)^-1| that strongly clean certificates
    record as log C2.

    @param norm:    operator norm |A| >= 0
    @param n:       dimension >= 1

    @return: SeparationConstants
    """
    if norm < 0 or not np.isfinite(norm):
        raise InputError("Norm must be finite and non-negative, not %r" % (norm,))
    if n < 1:
        raise InputError("Dimension must be at least 1, not %r" % (n,))
    logC1 = math.log(3 * n) + log_geometric_sum(_log(8 * n * norm), n)
    log_ratio2 = float(np.logaddexp(_log(8 * norm), math.log(4) + logC1))
    logC2 = math.log(4) + log_geometric_sum(log_ratio2, n)
    return SeparationConstants(n, norm, logC1, logC2)


def resolvent_log_bound(norm, n, distance):
    """
    log of (1/d) sum_{k<n} (2|A|/d)^k, which bounds |(zI - A)^-1| when every
    eigenvalue of A is at least d from z.
    """
    if distance <= 0:
        return np.inf
    return -math.log(distance) + log_geometric_sum(_log(2 * norm / distance), n)


def uniform_resolvent_log_bound(norm, n):
    """
    log of 4n sum_{k<n} (8n |A|)^k, the resolvent bound at distance 1/(4n).
    """
    return math.log(4 * n) + log_geometric_sum(_log(8 * n * norm), n)


def radius_distance(moduli, r):
    moduli = np.asarray(moduli, dtype=float)
    if moduli.size == 0:
        return np.inf
    return float(np.min(np.abs(moduli - r)))


def choose_separating_radius(eigenvalues, n=None):
    """
    Choose a radius in [1/4, 3/4] as far as possible from every eigenvalue modulus.

    The distance to the nearest modulus is piecewise linear in r, so its maximum
    is at an end of the window or a midpoint between consecutive moduli; these
    candidates are scanned in increasing order and the first best wins.

    @param eigenvalues: eigenvalues of the matrix
    @param n:           dimension; defaults to the number of eigenvalues

    @return: radius r with every |lambda| at least 1/(4n) from r
    """
    moduli = np.sort(np.abs(np.asarray(eigenvalues, dtype=np.complex128)))
    if n is None:
        n = moduli.size
    low = CleanConstants.RADIUS_LOW
    high = CleanConstants.RADIUS_HIGH
    if moduli.size == 0 or not (moduli[0] < low and moduli[-1] > high):
        raise PreconditionError("A separating radius needs an eigenvalue inside |z| < 1/4 and one outside |z| > 3/4")

    candidates = [low, high]
    for (a, b) in zip(moduli[:-1], moduli[1:]):
        mid = (a + b) / 2
        if low <= mid <= high:
            candidates.append(mid)
    candidates.sort()

    best = None
    best_distance = -1
    for r in candidates:
        distance = radius_distance(moduli, r)
        if distance > best_distance:
            best = r
            best_distance = distance

    if best_distance < 1.0 / (4 * n):
        raise PreconditionError("No radius is 1/(4n) from the spectrum (best %.6g at r=%.6g)" % (best_distance, best))
    logger.debug("Separating radius %.6g at distance %.6g", best, best_distance)
    return float(best)


class RieszResult(object):
    """
    A Riesz projection for the eigenvalues inside |z| < radius.
    """

    def __init__(self, radius, projector, inside_count, resolvent_bound, method,
                 nodes=0, distance=None, residual_commute=None):
        self.radius = radius
        self.projector = projector
        self.inside_count = inside_count
        self.resolvent_bound = resolvent_bound
        self.method = method
        self.nodes = nodes
        self.distance = distance
        self.residual_commute = residual_commute

    def __repr__(self):
        return "<{}(radius={:.6g}, inside={}, method={})>".format(self.__class__.__name__,
                                                                  self.radius, self.inside_count, self.method)

    @property
    def norm(self):
        return self.projector.norm


def quadrature_nodes(eigenvalues, r, n):
    """
    Number of trapezoid nodes for the circle |z| = r.

    @return: max(64, 16n), raised until q^N reaches the quadrature target for the
             worst modulus ratio q, and capped
    """
    base = max(CleanConstants.QUADRATURE_MIN_NODES, CleanConstants.QUADRATURE_NODES_PER_DIM * n)
    moduli = np.abs(np.asarray(eigenvalues))
    ratios = np.where(moduli < r, moduli / r, r / np.maximum(moduli, r))
    q = float(ratios.max()) if ratios.size else 0.0
    if q <= 0:
        return base
    if q >= 1:
        return CleanConstants.QUADRATURE_MAX_NODES
    needed = int(math.ceil(math.log(CleanConstants.QUADRATURE_TARGET) / math.log(q)))
    return int(min(max(base, needed), CleanConstants.QUADRATURE_MAX_NODES))


def _resolvents(A, points, chunk=256):
    """
    Yield (points, stacked zI - A) in chunks.
    """
    n = A.shape[0]
    eye = identity(n)
    for start in range(0, len(points), chunk):
        z = points[start:start + chunk]
        yield z, z[:, None, None] * eye[None, :, :] - A[None, :, :]


def _resolvent_maximum(A, points):
    """
    max over the points of |(zI - A)^-1|, from batched singular values.
    """
    smallest = np.inf
    for z, shifted in _resolvents(A, points):
        s = np.linalg.svd(shifted, compute_uv=False)
        smallest = min(smallest, float(s[:, -1].min()))
    if smallest == 0:
        return np.inf
    return 1.0 / smallest


def _schur_projector(A, r):
    form = schur(A, sort=lambda value: abs(value) < r)
    n = A.shape[0]
    k = form.sdim
    if k == 0:
        return np.zeros((n, n), dtype=np.complex128), 0
    if k == n:
        return identity(n), n
    T = form.U
    Y = scipy.linalg.solve_sylvester(T[:k, :k], -T[k:, k:], T[:k, k:])
    M = np.zeros((n, n), dtype=np.complex128)
    M[:k, :k] = identity(k)
    M[:k, k:] = Y
    return form.Q.dot(M).dot(adjoint(form.Q)), k


def _quadrature_projector(A, points):
    n = A.shape[0]
    total = np.zeros((n, n), dtype=np.complex128)
    for z, shifted in _resolvents(A, points):
        total += np.einsum('k,kij->ij', z, np.linalg.inv(shifted))
    return total / len(points)


def riesz_projection(A, r, method=CleanConstants.METHOD_SCHUR, min_distance=None,
                     tol=CleanConstants.DEFAULT_TOL):
    """
    Spectral idempotent of A for the eigenvalues inside |z| < r.

    @param A:               square matrix
    @param r:               radius in [1/4, 3/4]
    @param method:          'schur-subspace' or 'quadrature'
    @param min_distance:    required distance of every eigenvalue modulus from r;
                            defaults to 1/(8n)
    @param tol:             tolerance for the idempotency and commutation checks

    @return: RieszResult
    """
    A = as_matrix(A)
    n = A.shape[0]
    if method not in (CleanConstants.METHOD_SCHUR, CleanConstants.METHOD_QUADRATURE):
        raise InputError("Unknown Riesz method '%s'" % (method,))
    if not (CleanConstants.RADIUS_LOW <= r <= CleanConstants.RADIUS_HIGH):
        raise PreconditionError("Radius %r is outside [1/4, 3/4]" % (r,))
    if min_distance is None:
        min_distance = 1.0 / (8 * n)

    eigenvalues = schur(A).eigenvalues
    distance = radius_distance(np.abs(eigenvalues), r)
    if distance < min_distance:
        raise PreconditionError("An eigenvalue is %.3g from the circle |z| = %.6g" % (distance, r))

    nodes = quadrature_nodes(eigenvalues, r, n)
    points = r * np.exp(2j * np.pi * np.arange(nodes) / nodes)

    P, inside = _schur_projector(A, r)
    if method == CleanConstants.METHOD_QUADRATURE:
        Pq = _quadrature_projector(A, points)
        disagreement = operator_norm(Pq - P)
        logger.debug("Quadrature with %i nodes differs from the Schur projector by %.3g", nodes, disagreement)
        if disagreement > CleanConstants.METHOD_AGREEMENT:
            raise NumericalFailure("Quadrature projector differs from the Schur projector by %.3g" % (disagreement,))
        P = Pq

    projector = Idempotent(P, tolerance=tol)
    norm = operator_norm(A)
    residual_commute = operator_norm(P.dot(A) - A.dot(P))
    if not projector.is_valid():
        raise NumericalFailure("Riesz projector idempotency residual %.3g" % (projector.residual,))
    if residual_commute > tol * norm * (1 + projector.norm):
        raise NumericalFailure("Riesz projector commutation residual %.3g" % (residual_commute,))
    trace = np.trace(P).real
    if abs(trace - inside) > 0.5:
        raise NumericalFailure("Riesz projector trace %.6g does not match %i inner eigenvalues" % (trace, inside))

    return RieszResult(r, projector, inside, _resolvent_maximum(A, points), method,
                       nodes=nodes, distance=distance, residual_commute=residual_commute)
