"""
CSV and markdown reports over certificates and witness tables.
"""

import csv
import io

from ..Errors import InputError
from .MatrixFile import format_decimal


__all__ = (
        'REPORT_COLUMNS',
        'report_rows',
        'emit_report',
        'emit_witness_table',
    )


REPORT_COLUMNS = ('kind', 'mode', 'n', 'inverse_norm', 'claimed_bound', 'log_bound',
                  'residual_idempotent', 'residual_commute', 'residual_selfadjoint', 'passed')

WITNESS_COLUMNS = ('n', 'measured', 'reference', 'pass')

REPORT_FORMATS = ('csv', 'markdown')


def _cell(value):
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'pass' if value else 'FAIL'
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_decimal(value)
    return str(value)


def report_rows(certs):
    """
    One row per certificate, followed by a summary row per mode holding the
    largest inverse norm of that mode.

    @param certs:   list of CleanCertificate

    @return: list of dictionaries keyed by REPORT_COLUMNS
    """
    rows = []
    worst = {}
    passed = {}
    for cert in certs:
        inverse_norm = None if cert.inverse_norm is None else float(cert.inverse_norm)
        rows.append({
                'kind': 'certificate',
                'mode': cert.mode,
                'n': cert.n,
                'inverse_norm': inverse_norm,
                'claimed_bound': None if cert.claimed_bound is None else float(cert.claimed_bound),
                'log_bound': None if cert.log_bound is None else float(cert.log_bound),
                'residual_idempotent': cert.residual_idempotent,
                'residual_commute': cert.residual_commute,
                'residual_selfadjoint': cert.residual_selfadjoint,
                'passed': bool(cert.passed),
            })
        if inverse_norm is not None:
            worst[cert.mode] = max(worst.get(cert.mode, inverse_norm), inverse_norm)
        passed[cert.mode] = passed.get(cert.mode, True) and bool(cert.passed)

    # Summary rows follow the order in which modes first appear
    for mode in dict.fromkeys(cert.mode for cert in certs):
        rows.append({'kind': 'summary', 'mode': mode, 'inverse_norm': worst.get(mode),
                     'passed': passed[mode]})
    return rows


def emit_report(certs, format='csv'):
    """
    Produce a report over a list of certificates.

    @param certs:   list of CleanCertificate
    @param format:  'csv' or 'markdown'

    @return: report text; an empty list gives the header alone
    """
    if format not in REPORT_FORMATS:
        raise InputError("Unknown report format '%s'" % (format,))
    rows = [[_cell(row.get(column)) for column in REPORT_COLUMNS] for row in report_rows(certs)]
    if format == 'csv':
        return _csv_text(REPORT_COLUMNS, rows)
    return _markdown_text(REPORT_COLUMNS, rows)


def emit_witness_table(table, format='csv'):
    """
    Produce a witness table report with columns n, measured, reference, pass.
    """
    if format not in REPORT_FORMATS:
        raise InputError("Unknown report format '%s'" % (format,))
    rows = [[str(row.n), format_decimal(row.measured), format_decimal(row.reference),
             'pass' if row.passed else 'FAIL'] for row in table.rows]
    if format == 'csv':
        return _csv_text(WITNESS_COLUMNS, rows)
    return _markdown_text(WITNESS_COLUMNS, rows)


def _csv_text(columns, rows):
    fh = io.StringIO()
    writer = csv.writer(fh, lineterminator='\n')
    writer.writerow(columns)
    writer.writerows(rows)
    return fh.getvalue()


def _markdown_text(columns, rows):
    lines = ['| ' + ' | '.join(columns) + ' |',
             '|' + '|'.join('---' for _ in columns) + '|']
    for row in rows:
        lines.append('| ' + ' | '.join(row) + ' |')
    return '\n'.join(lines) + '\n'
