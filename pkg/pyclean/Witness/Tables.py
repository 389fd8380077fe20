"""
Sharpness tables built from shift matrices.

The upper shift V_n is nilpotent, so V_n - I is invertible, but the norm of its
inverse grows at least like sqrt(n): the vector (V_n - I)(e_1 + ... + e_n)/sqrt(n)
has norm 1/sqrt(n) and is mapped back to a vector of norm 1. A uniform bound on
inverses of strongly clean decompositions therefore fails across all sizes.

The truncated unilateral shift demonstration tracks the smallest singular value
of S - P, with P = E + (I-E)(S + S*)E, as the size grows. The invertibility of
S - P is a statement about the infinite shift; the finite truncations only show
how the smallest singular value behaves, and no threshold is asserted.
"""

import logging
import math

import numpy as np
import scipy.linalg

from ..Errors import InputError
from ..Matrix.Core import adjoint, identity, operator_norm


logger = logging.getLogger(__name__)


__all__ = (
        'WitnessRow',
        'WitnessTable',
        'TruncatedShiftRecord',
        'ShiftTrajectory',
        'shift_matrix',
        'shift_inverse_lowerbound_table',
        'truncated_shift_demo',
        'truncated_shift_trajectory',
    )


# Absolute slack on the sqrt(n) comparison
SHIFT_TABLE_SLACK = 1e-9


class WitnessRow(object):

    def __init__(self, n, measured, reference, passed):
        self.n = n
        self.measured = measured
        self.reference = reference
        self.passed = passed

    def __repr__(self):
        return "<{}(n={}, measured={:.6g}, reference={:.6g}, passed={})>".format(self.__class__.__name__,
                                                                               self.n, self.measured,
                                                                               self.reference, self.passed)


class WitnessTable(object):
    """
    Rows of measured values against their reference, sorted by n.
    """

    def __init__(self, rows=None, title=None):
        self.rows = sorted(rows or [], key=lambda row: row.n)
        self.title = title

    def __repr__(self):
        return "<{}(title={!r}, rows={}, passed={})>".format(self.__class__.__name__, self.title,
                                                            len(self.rows), self.passed)

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def add(self, row):
        self.rows.append(row)
        self.rows.sort(key=lambda row: row.n)

    @property
    def passed(self):
        return all(row.passed for row in self.rows)


def shift_matrix(n):
    """
    The upper shift V_n, with V_n e_i = e_(i-1): ones on the superdiagonal.

    @param n:   dimension, at least 1

    @return: n x n complex matrix
    """
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
        raise InputError("Shift dimension must be a positive integer, not %r" % (n,))
    return np.eye(int(n), k=1, dtype=np.complex128)


def shift_inverse_lowerbound_table(n_max):
    """
    Measure |(V_n - I)^-1| by SVD for every n up to n_max, against sqrt(n).

    @param n_max:   largest dimension, at least 1

    @return: WitnessTable
    """
    if not isinstance(n_max, (int, np.integer)) or isinstance(n_max, bool) or n_max < 1:
        raise InputError("Largest shift dimension must be a positive integer, not %r" % (n_max,))
    table = WitnessTable(title='shift-inverse-lowerbound')
    for n in range(1, int(n_max) + 1):
        element = shift_matrix(n) - identity(n)
        # Entries are real; the real SVD is the same and cheaper
        smin = float(scipy.linalg.svdvals(element.real).min())
        measured = 1.0 / smin
        reference = math.sqrt(n)
        row = WitnessRow(n, measured, reference, measured >= reference - SHIFT_TABLE_SLACK)
        if not row.passed:
            logger.warning("Shift table row n=%i measured %.12g below sqrt(n) = %.12g", n, measured, reference)
        table.rows.append(row)
    return table


class TruncatedShiftRecord(object):

    def __init__(self, n, sigma_min, p_norm, residual_idempotent):
        self.n = n
        self.sigma_min = sigma_min
        self.p_norm = p_norm
        self.residual_idempotent = residual_idempotent

    def __repr__(self):
        return "<{}(n={}, sigma_min={:.6g}, p_norm={:.6g})>".format(self.__class__.__name__, self.n,
                                                                   self.sigma_min, self.p_norm)

    def to_dict(self):
        return {
                'n': self.n,
                'sigma_min': self.sigma_min,
                'p_norm': self.p_norm,
                'residual_idempotent': self.residual_idempotent,
            }


def truncated_shift_demo(n):
    """
    Truncation to n dimensions of S - P, with S the unilateral shift and
    P = E + (I-E)(S + S*)E for E the projection onto the even-numbered basis
    vectors e_2, e_4, ...

    @param n:   even dimension, at least 2

    @return: TruncatedShiftRecord
    """
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 2 or n % 2:
        raise InputError("Truncated shift dimension must be even and at least 2, not %r" % (n,))
    n = int(n)
    S = np.eye(n, k=-1, dtype=np.complex128)
    # Zero-based positions 1, 3, 5, ... hold e_2, e_4, e_6, ...
    E = np.diag((np.arange(n) % 2 == 1).astype(np.complex128))
    Ec = identity(n) - E
    P = E + Ec.dot(S + adjoint(S)).dot(E)
    sigma_min = float(scipy.linalg.svdvals(S - P).min())
    return TruncatedShiftRecord(n, sigma_min, operator_norm(P), operator_norm(P.dot(P) - P))


class ShiftTrajectory(object):
    """
    Truncated shift records across sizes.

    @ivar records:  TruncatedShiftRecords in ascending n
    @ivar trend:    'non-increasing', 'non-decreasing', 'constant' or 'mixed'
    """

    def __init__(self, records, trend):
        self.records = records
        self.trend = trend

    def __repr__(self):
        return "<{}(sizes={}, trend={})>".format(self.__class__.__name__, len(self.records), self.trend)

    @property
    def sigma_min(self):
        return [record.sigma_min for record in self.records]


def _trend(values, tol=1e-12):
    steps = np.diff(np.asarray(values, dtype=float))
    if steps.size == 0 or np.all(np.abs(steps) <= tol):
        return 'constant'
    if np.all(steps <= tol):
        return 'non-increasing'
    if np.all(steps >= -tol):
        return 'non-decreasing'
    return 'mixed'


def truncated_shift_trajectory(ns=None):
    """
    Run the truncated shift demonstration over a list of even sizes.

    @param ns:  iterable of even sizes; defaults to 2, 4, ..., 256

    @return: ShiftTrajectory
    """
    if ns is None:
        ns = range(2, 257, 2)
    records = [truncated_shift_demo(n) for n in sorted(ns)]
    if not records:
        raise InputError("Truncated shift trajectory needs at least one size")
    trajectory = ShiftTrajectory(records, _trend([record.sigma_min for record in records]))
    logger.debug("Truncated shift sigma_min over %i sizes is %s", len(records), trajectory.trend)
    return trajectory
