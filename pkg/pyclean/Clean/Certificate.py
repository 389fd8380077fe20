"""
Decomposition certificates and their independent verification.

A certificate records T = U + P for an element T (plus `shift` times the
identity for the scalar-plus-small mode): the idempotent P, the measured
|U^-1|, the bound the constructing pipeline claims, and the residuals of the
properties its mode promises.

`verify_certificate` recomputes everything from T and P through scipy's
singular values, independently of the numpy decompositions the pipelines use.
Failed checks are entries in the report, never exceptions.
"""

import logging
import math

import numpy as np
import scipy.linalg

from ..Constants import CleanConstants, default_tolerance
from ..Errors import InputError
from ..Matrix.Core import (as_matrix, adjoint, check_same_dimension, document_to_matrix,
                           identity, inverse_norm, matrix_to_document, operator_norm)
from ..Matrix.Projections import Idempotent


logger = logging.getLogger(__name__)


__all__ = (
        'CleanCertificate',
        'VerificationCheck',
        'VerificationReport',
        'make_certificate',
        'verify_certificate',
    )


def _float_or_none(value):
    if value is None:
        return None
    return float(value)


def _json_float(value):
    """
    JSON has no infinities; they are written as strings.
    """
    if value is None:
        return None
    value = float(value)
    if math.isinf(value):
        return 'inf' if value > 0 else '-inf'
    return value


class CleanCertificate(object):
    """
    Record of a decomposition T + shift*I = U + P.

    @ivar mode:                 one of CleanConstants.MODES
    @ivar P:                    Idempotent
    @ivar inverse_norm:         measured |(T + shift I - P)^-1|
    @ivar claimed_bound:        bound on inverse_norm claimed by the pipeline, or None
    @ivar log_bound:            log of the claimed bound, for bounds which overflow
    @ivar residual_idempotent:  |P^2 - P|
    @ivar residual_commute:     |PT - TP| for strong decompositions, else None
    @ivar residual_selfadjoint: |P - P*| for the star modes, else None
    @ivar shift:                scalar added to T
    @ivar details:              dictionary of pipeline-specific values
    @ivar passed:               whether verification passed when the certificate was made
    """

    def __init__(self, mode, P, inverse_norm, claimed_bound=None, log_bound=None,
                 residual_idempotent=0.0, residual_commute=None, residual_selfadjoint=None,
                 shift=0j, details=None, passed=None):
        if mode not in CleanConstants.MODES:
            raise InputError("Unknown decomposition mode '%s'" % (mode,))
        if not isinstance(P, Idempotent):
            P = Idempotent(P)
        self.mode = mode
        self.P = P
        self.inverse_norm = inverse_norm
        self.claimed_bound = claimed_bound
        self.log_bound = log_bound
        self.residual_idempotent = residual_idempotent
        self.residual_commute = residual_commute
        self.residual_selfadjoint = residual_selfadjoint
        self.shift = complex(shift)
        self.details = details or {}
        self.passed = passed

    def __repr__(self):
        return "<{}(mode={}, n={}, inverse_norm={:.6g}, passed={})>".format(self.__class__.__name__,
                                                                           self.mode, self.n,
                                                                           self.inverse_norm, self.passed)

    @property
    def n(self):
        return self.P.n

    def to_dict(self):
        details = {}
        for key, value in self.details.items():
            if isinstance(value, (float, np.floating)):
                value = _json_float(value)
            elif isinstance(value, np.integer):
                value = int(value)
            elif isinstance(value, np.bool_):
                value = bool(value)
            details[key] = value
        return {
                'mode': self.mode,
                'P': matrix_to_document(self.P.matrix),
                'inverse_norm': _json_float(self.inverse_norm),
                'claimed_bound': _json_float(self.claimed_bound),
                'log_bound': _json_float(self.log_bound),
                'residual_idempotent': _json_float(self.residual_idempotent),
                'residual_commute': _json_float(self.residual_commute),
                'residual_selfadjoint': _json_float(self.residual_selfadjoint),
                'shift': [self.shift.real, self.shift.imag],
                'details': details,
                'passed': self.passed,
            }

    @classmethod
    def from_dict(cls, doc):
        if not isinstance(doc, dict):
            raise InputError("Certificate must be a document")
        try:
            mode = doc['mode']
            P = document_to_matrix(doc['P'], name='P')
            shift = doc.get('shift', [0, 0])
            return cls(mode, P,
                       _float_or_none(doc.get('inverse_norm')),
                       claimed_bound=_float_or_none(doc.get('claimed_bound')),
                       log_bound=_float_or_none(doc.get('log_bound')),
                       residual_idempotent=_float_or_none(doc.get('residual_idempotent')) or 0.0,
                       residual_commute=_float_or_none(doc.get('residual_commute')),
                       residual_selfadjoint=_float_or_none(doc.get('residual_selfadjoint')),
                       shift=complex(float(shift[0]), float(shift[1])),
                       details=doc.get('details') or {},
                       passed=doc.get('passed'))
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise InputError("Malformed certificate: %s" % (exc,))


class VerificationCheck(object):

    def __init__(self, name, passed, measured, limit):
        self.name = name
        self.passed = bool(passed)
        self.measured = measured
        self.limit = limit

    def __repr__(self):
        return "<{}({}: {} measured={!r} limit={!r})>".format(self.__class__.__name__, self.name,
                                                              'pass' if self.passed else 'FAIL',
                                                              self.measured, self.limit)


class VerificationReport(object):
    """
    List of checks made on a certificate.
    """

    def __init__(self, mode, checks=None, inverse_norm=None):
        self.mode = mode
        self.checks = checks or []
        self.inverse_norm = inverse_norm

    def __repr__(self):
        return "<{}(mode={}, passed={}, failures={})>".format(self.__class__.__name__, self.mode, self.passed,
                                                              [check.name for check in self.failures()])

    def add(self, name, passed, measured, limit):
        self.checks.append(VerificationCheck(name, passed, measured, limit))

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    def failures(self):
        return [check for check in self.checks if not check.passed]

    def check(self, name):
        for check in self.checks:
            if check.name == name:
                return check
        return None

    def to_dict(self):
        return {
                'mode': self.mode,
                'passed': self.passed,
                'inverse_norm': _json_float(self.inverse_norm),
                'checks': [{'name': check.name,
                            'passed': check.passed,
                            'measured': _json_float(check.measured),
                            'limit': _json_float(check.limit)} for check in self.checks],
            }


def verify_certificate(T, cert, tol=None):
    """
    Recompute and check every property a certificate claims.

    @param T:       the element the certificate was made for
    @param cert:    CleanCertificate
    @param tol:     tolerance; defaults to the configured default tolerance

    @return: VerificationReport
    """
    if tol is None:
        tol = default_tolerance()
    T = as_matrix(T)
    P = cert.P.matrix
    n = check_same_dimension(T, P)
    report = VerificationReport(cert.mode)

    finite = bool(np.all(np.isfinite(P)))
    report.add('finite', finite, None, None)
    if not finite:
        return report

    element = T + cert.shift * identity(n) - P
    s = scipy.linalg.svdvals(element)
    smin = float(s.min())
    measured = np.inf if smin == 0 else 1.0 / smin
    report.inverse_norm = measured
    p_norm = float(scipy.linalg.svdvals(P).max())
    t_norm = float(scipy.linalg.svdvals(T).max())

    residual = float(scipy.linalg.svdvals(P.dot(P) - P).max())
    report.add('idempotent', residual <= tol, residual, tol)

    if cert.mode == CleanConstants.MODE_STRONG:
        residual = float(scipy.linalg.svdvals(P.dot(T) - T.dot(P)).max())
        limit = tol * t_norm * (1 + p_norm)
        report.add('commute', residual <= limit, residual, limit)

    if cert.mode in (CleanConstants.MODE_STAR, CleanConstants.MODE_ALMOST_STAR):
        residual = float(scipy.linalg.svdvals(P - adjoint(P)).max())
        report.add('selfadjoint', residual <= tol, residual, tol)

    if cert.mode in (CleanConstants.MODE_CLEAN, CleanConstants.MODE_SCALAR_PLUS_SMALL):
        bound = cert.claimed_bound
        if bound is None:
            report.add('bound', False, measured, None)
        else:
            limit = bound * (1 + CleanConstants.CERTIFY_SLACK)
            report.add('bound', measured <= limit, measured, limit)
        recorded = cert.inverse_norm
        agrees = (recorded is not None and np.isfinite(measured)
                  and abs(recorded - measured) <= CleanConstants.CERTIFY_SLACK * measured)
        report.add('recorded_inverse_norm', agrees, recorded, measured)

    elif cert.mode == CleanConstants.MODE_STRONG:
        if cert.log_bound is None:
            report.add('log_bound', False, measured, None)
        else:
            log_measured = math.log(measured) if smin > 0 else np.inf
            limit = cert.log_bound + math.log1p(CleanConstants.CERTIFY_SLACK)
            report.add('log_bound', smin > 0 and log_measured <= limit, log_measured, limit)

    else:
        floor = CleanConstants.SIGMA_FLOOR * max(1.0, t_norm)
        report.add('injective', smin > floor, smin, floor)

    if not report.passed:
        logger.debug("Verification of %s certificate failed: %r", cert.mode, report.failures())
    return report


def make_certificate(mode, T, P, shift=0j, claimed_bound=None, log_bound=None, details=None, tol=None):
    """
    Measure a decomposition and verify it.

    @param mode:            decomposition mode
    @param T:               the element decomposed
    @param P:               idempotent matrix
    @param shift:           scalar added to T
    @param claimed_bound:   claimed bound on the inverse norm
    @param log_bound:       claimed bound in log space
    @param details:         pipeline-specific values to record

    @return: CleanCertificate, with `passed` set from verification
    """
    T = as_matrix(T)
    P = Idempotent(P)
    n = check_same_dimension(T, P.matrix)
    residual_commute = None
    residual_selfadjoint = None
    if mode == CleanConstants.MODE_STRONG:
        residual_commute = operator_norm(P.matrix.dot(T) - T.dot(P.matrix))
    if mode in (CleanConstants.MODE_STAR, CleanConstants.MODE_ALMOST_STAR):
        residual_selfadjoint = operator_norm(P.matrix - adjoint(P.matrix))
    cert = CleanCertificate(mode, P,
                            inverse_norm(T + shift * identity(n) - P.matrix),
                            claimed_bound=claimed_bound,
                            log_bound=log_bound,
                            residual_idempotent=P.residual,
                            residual_commute=residual_commute,
                            residual_selfadjoint=residual_selfadjoint,
                            shift=shift,
                            details=details)
    report = verify_certificate(T, cert, tol=tol)
    cert.passed = report.passed
    return cert
