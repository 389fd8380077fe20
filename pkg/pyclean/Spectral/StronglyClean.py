"""
Strongly clean decompositions A = (A - P) + P with P an idempotent commuting with A.

The branch is chosen from the spectrum:

* every |lambda| >= 1/4: A is invertible, P = 0.
* every |lambda| <= 3/4: A - I is invertible, P = I.
* otherwise: P is the Riesz projection for a radius in [1/4, 3/4] separating
  the spectrum.

A finitely-valued matrix field is decomposed cell by cell: members closer than
1/(2 C2) to every member of a cell share that cell's branch and radius.
"""

import logging
import math

import numpy as np

from ..Constants import CleanConstants
from ..Errors import CleanError, InputError
from ..Matrix.Core import as_matrix, identity, operator_norm
from ..Clean.Certificate import make_certificate
from .Riesz import (choose_separating_radius, log_geometric_sum, riesz_projection,
                    separation_constants)
from .Schur import schur


logger = logging.getLogger(__name__)


__all__ = (
        'MatrixField',
        'FieldCertificate',
        'decide_branch',
        'strongly_clean_decompose',
        'strongly_clean_field',
    )


# Smallest distance from the contour accepted for members sharing a cell radius.
FIELD_MIN_DISTANCE = CleanConstants.CONSTRUCTION_TOL


class MatrixField(object):
    """
    A finite, ordered family of n x n matrices.
    """

    def __init__(self, points):
        points = [as_matrix(point, name='field member') for point in points]
        if not points:
            raise InputError("A matrix field needs at least one member")
        sizes = set(point.shape[0] for point in points)
        if len(sizes) != 1:
            raise InputError("Field members have differing sizes %s" % (sorted(sizes),))
        self.points = points
        self.n = points[0].shape[0]

    def __repr__(self):
        return "<{}(n={}, members={})>".format(self.__class__.__name__, self.n, len(self.points))

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


class FieldCertificate(object):
    """
    Certificates for every member of a field, in member order, with the cells used.
    """

    def __init__(self, certificates, cells, log_threshold, cellwise_uniform):
        self.certificates = certificates
        self.cells = cells
        self.log_threshold = log_threshold
        self.cellwise_uniform = cellwise_uniform

    def __repr__(self):
        return "<{}(members={}, cells={}, cellwise_uniform={})>".format(self.__class__.__name__,
                                                                       len(self.certificates),
                                                                       len(self.cells),
                                                                       self.cellwise_uniform)

    @property
    def passed(self):
        return all(cert.passed for cert in self.certificates)

    def to_dict(self):
        return {
                'cells': self.cells,
                'log_threshold': self.log_threshold,
                'cellwise_uniform': self.cellwise_uniform,
                'certificates': [cert.to_dict() for cert in self.certificates],
            }


def decide_branch(eigenvalues, n):
    """
    Choose the strongly clean branch from the spectrum.

    @return: tuple of (branch, radius); radius is None except for the Riesz branch
    """
    moduli = np.abs(np.asarray(eigenvalues))
    if moduli.min() >= CleanConstants.RADIUS_LOW:
        return (CleanConstants.BRANCH_ZERO, None)
    if moduli.max() <= CleanConstants.RADIUS_HIGH:
        return (CleanConstants.BRANCH_IDENTITY, None)
    return (CleanConstants.BRANCH_RIESZ, choose_separating_radius(eigenvalues, n))


def _endpoint_log_bound(norm, n):
    """
    log(4 sum_{k<n} (8|A|)^k): the inverse bound when the spectrum keeps 1/4 from the point removed.
    """
    if norm <= 0:
        return math.log(4)
    return math.log(4) + log_geometric_sum(math.log(8 * norm), n)


def _decompose_on_branch(A, branch, radius, min_distance=None, tol=CleanConstants.DEFAULT_TOL, details=None):
    n = A.shape[0]
    norm = operator_norm(A)
    details = dict(details or {})
    details['branch'] = branch
    if branch == CleanConstants.BRANCH_ZERO:
        P = np.zeros((n, n), dtype=np.complex128)
        log_bound = _endpoint_log_bound(norm, n)
    elif branch == CleanConstants.BRANCH_IDENTITY:
        P = identity(n)
        log_bound = _endpoint_log_bound(norm, n)
    else:
        result = riesz_projection(A, radius, min_distance=min_distance, tol=tol)
        P = result.projector.matrix
        constants = separation_constants(norm, n)
        log_bound = constants.logC2
        details['radius'] = radius
        details['inside_count'] = result.inside_count
        details['contour_distance'] = result.distance
        details['log_resolvent_bound'] = math.log(result.resolvent_bound)
        details['log_norm_P'] = math.log(max(result.norm, 1e-300))
        details['logC1'] = constants.logC1
    cert = make_certificate(CleanConstants.MODE_STRONG, A, P, log_bound=log_bound, details=details, tol=tol)
    return cert


def strongly_clean_decompose(A, tol=CleanConstants.DEFAULT_TOL):
    """
    Strongly clean decomposition of a square matrix.

    @param A:   square matrix
    @param tol: verification tolerance

    @return: CleanCertificate in 'strong' mode
    """
    A = as_matrix(A)
    n = A.shape[0]
    (branch, radius) = decide_branch(schur(A).eigenvalues, n)
    logger.debug("Strongly clean branch %s (radius %r) for n=%i", branch, radius, n)
    return _decompose_on_branch(A, branch, radius, tol=tol)


def _within(point, other, log_threshold):
    distance = operator_norm(point - other)
    return distance == 0 or math.log(distance) <= log_threshold


def _cluster(points, log_threshold):
    """
    Greedy clustering in member order; a member joins the first cell whose every
    member is within the threshold.
    """
    cells = []
    for index, point in enumerate(points):
        for cell in cells:
            if all(_within(point, points[other], log_threshold) for other in cell):
                cell.append(index)
                break
        else:
            cells.append([index])
    return cells


def strongly_clean_field(field, tol=CleanConstants.DEFAULT_TOL):
    """
    Strongly clean decomposition of every member of a finitely-valued matrix field.

    @param field:   MatrixField, or a list of matrices
    @param tol:     verification tolerance

    @return: FieldCertificate
    """
    if not isinstance(field, MatrixField):
        field = MatrixField(field)
    n = field.n
    points = field.points
    norm = max(operator_norm(point) for point in points)
    constants = separation_constants(norm, n)
    log_threshold = -math.log(2) - constants.logC2

    if log_threshold < math.log(np.finfo(float).tiny):
        logger.warning("Cell diameter 1/(2 C2) underflows (log %.6g); decomposing members independently",
                       log_threshold)
        certificates = []
        for index, point in enumerate(points):
            cert = strongly_clean_decompose(point, tol=tol)
            cert.details.update({'cell': index, 'anchor': index, 'cellwise_uniform': False})
            certificates.append(cert)
        return FieldCertificate(certificates, [[index] for index in range(len(points))], log_threshold, False)

    cells = _cluster(points, log_threshold)
    logger.debug("Field of %i members forms %i cells", len(points), len(cells))

    certificates = [None] * len(points)
    for cell_index, cell in enumerate(cells):
        anchor = cell[0]
        (branch, radius) = decide_branch(schur(points[anchor]).eigenvalues, n)
        for index in cell:
            details = {'cell': cell_index, 'anchor': anchor, 'cellwise_uniform': True}
            min_distance = None if index == anchor else FIELD_MIN_DISTANCE
            try:
                cert = _decompose_on_branch(points[index], branch, radius,
                                            min_distance=min_distance, tol=tol, details=details)
            except CleanError as exc:
                logger.warning("Member %i cannot use the radius of cell %i (%s); decomposing alone",
                               index, cell_index, exc)
                cert = None
            if cert is None or not cert.passed:
                cert = strongly_clean_decompose(points[index], tol=tol)
                cert.details.update({'cell': cell_index, 'anchor': anchor, 'cellwise_uniform': False})
            certificates[index] = cert

    uniform = all(cert.details.get('cellwise_uniform') for cert in certificates)
    return FieldCertificate(certificates, cells, log_threshold, uniform)
