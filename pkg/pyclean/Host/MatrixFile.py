"""
Matrix files.

Two formats are understood:

* plain-text: a header line "rows cols", then rows * cols lines of "re im",
  in row-major order. Files are UTF-8 with LF line endings.
* structured: a JSON document {"rows": r, "cols": c, "data": [[re, im], ...]}.

Plain-text numbers are written as the shortest decimal which reads back to the
same double, with a trailing ".0" dropped, so parse and emit round-trip
byte for byte.

Certificates are stored as structured JSON documents.
"""

import json
import logging
import os

import numpy as np

from ..Errors import InputError, MatrixFileError
from ..Matrix.Core import as_matrix, document_to_matrix, matrix_to_document
from ..Clean.Certificate import CleanCertificate


logger = logging.getLogger(__name__)


__all__ = (
        'MatrixFile',
        'format_decimal',
        'parse_text',
        'emit_text',
        'parse_matrix',
        'emit_matrix',
        'load_certificate',
        'save_certificate',
        'document_text',
        'save_document',
        'read_matrix_directory',
    )


class MatrixFile(object):
    FORMAT_TEXT = 'plain-text'
    FORMAT_STRUCTURED = 'structured'
    FORMATS = (FORMAT_TEXT, FORMAT_STRUCTURED)

    def __init__(self, path, format=None):
        """
        @param path:    filename
        @param format:  'plain-text' or 'structured'; None to choose from the extension
        """
        if format is None:
            format = self.FORMAT_STRUCTURED if path.lower().endswith('.json') else self.FORMAT_TEXT
        if format not in self.FORMATS:
            raise InputError("Unknown matrix file format '%s'" % (format,))
        self.path = path
        self.format = format

    def __repr__(self):
        return "<{}(path={!r}, format={})>".format(self.__class__.__name__, self.path, self.format)


def format_decimal(value):
    """
    Shortest round-trip decimal for a float, without a trailing '.0'.
    """
    text = repr(float(value))
    if text.endswith('.0'):
        text = text[:-2]
    return text


def _parse_float(token, lineno, filename):
    try:
        value = float(token)
    except ValueError:
        raise MatrixFileError("'%s' is not a number" % (token,), lineno=lineno, filename=filename)
    if not np.isfinite(value):
        raise MatrixFileError("'%s' is not finite" % (token,), lineno=lineno, filename=filename)
    return value


def parse_text(text, filename=None):
    """
    Parse the plain-text matrix format.

    @param text:        file contents
    @param filename:    name used in error messages

    @return: complex128 matrix
    """
    lines = text.split('\n')
    if lines and lines[-1] == '':
        lines.pop()
    if not lines:
        raise MatrixFileError("Missing 'rows cols' header", lineno=1, filename=filename)

    header = lines[0].split()
    if len(header) != 2:
        raise MatrixFileError("Header must be 'rows cols'", lineno=1, filename=filename)
    try:
        rows = int(header[0])
        cols = int(header[1])
    except ValueError:
        raise MatrixFileError("Header dimensions must be integers", lineno=1, filename=filename)
    if rows < 1 or cols < 1:
        raise MatrixFileError("Header dimensions must be positive", lineno=1, filename=filename)

    expected = rows * cols
    found = len(lines) - 1
    if found != expected:
        # Report the first missing line, or the first surplus one
        lineno = found + 2 if found < expected else expected + 2
        raise MatrixFileError("Expected %i entries, found %i" % (expected, found),
                              lineno=lineno, filename=filename)

    values = np.zeros(expected, dtype=np.complex128)
    for index, line in enumerate(lines[1:]):
        lineno = index + 2
        tokens = line.split()
        if len(tokens) != 2:
            raise MatrixFileError("Entry must be 're im'", lineno=lineno, filename=filename)
        values[index] = complex(_parse_float(tokens[0], lineno, filename),
                                _parse_float(tokens[1], lineno, filename))
    return values.reshape(rows, cols)


def emit_text(M):
    """
    Write a matrix in the plain-text format.

    @return: text, ending with a newline
    """
    M = as_matrix(M, square=False)
    lines = ['%i %i' % M.shape]
    for value in M.reshape(-1):
        lines.append('%s %s' % (format_decimal(value.real), format_decimal(value.imag)))
    return '\n'.join(lines) + '\n'


def _as_file(source, format=None):
    if isinstance(source, MatrixFile):
        return source
    return MatrixFile(source, format=format)


def parse_matrix(source, format=None):
    """
    Read a matrix file.

    @param source:  MatrixFile or filename
    @param format:  format to use when a filename is given

    @return: complex128 matrix
    """
    mfile = _as_file(source, format)
    try:
        with open(mfile.path, 'r', encoding='utf-8', newline='') as fh:
            text = fh.read()
    except (IOError, OSError) as exc:
        raise InputError("Cannot read matrix file '%s': %s" % (mfile.path, exc))

    if mfile.format == MatrixFile.FORMAT_TEXT:
        matrix = parse_text(text, filename=mfile.path)
    else:
        try:
            doc = json.loads(text)
        except ValueError as exc:
            raise MatrixFileError("Not a JSON document: %s" % (exc,), filename=mfile.path)
        matrix = document_to_matrix(doc, name=mfile.path)
    logger.debug("Read %ix%i matrix from %s", matrix.shape[0], matrix.shape[1], mfile.path)
    return matrix


def emit_matrix(M, target=None, format=None):
    """
    Write a matrix file, or produce its text.

    @param M:       matrix
    @param target:  MatrixFile or filename, or None to return the text only
    @param format:  format, when target is a filename or None

    @return: the text written
    """
    if target is None:
        mfile = None
        format = format or MatrixFile.FORMAT_TEXT
    else:
        mfile = _as_file(target, format)
        format = mfile.format

    if format == MatrixFile.FORMAT_TEXT:
        text = emit_text(M)
    else:
        text = json.dumps(matrix_to_document(as_matrix(M, square=False))) + '\n'

    if mfile is not None:
        with open(mfile.path, 'w', encoding='utf-8', newline='\n') as fh:
            fh.write(text)
    return text


def document_text(doc):
    return json.dumps(doc, indent=2, sort_keys=True) + '\n'


def save_document(doc, path):
    """
    Write a JSON document to a file, creating its directory.
    """
    text = document_text(doc)
    directory = os.path.dirname(path)
    if directory and not os.path.isdir(directory):
        os.makedirs(directory)
    with open(path, 'w', encoding='utf-8', newline='\n') as fh:
        fh.write(text)
    return text


def save_certificate(cert, path):
    return save_document(cert.to_dict(), path)


def load_certificate(path):
    """
    Read a certificate document.

    @return: CleanCertificate
    """
    try:
        with open(path, 'r', encoding='utf-8') as fh:
            doc = json.load(fh)
    except (IOError, OSError) as exc:
        raise InputError("Cannot read certificate '%s': %s" % (path, exc))
    except ValueError as exc:
        raise MatrixFileError("Certificate is not a JSON document: %s" % (exc,), filename=path)
    return CleanCertificate.from_dict(doc)


def read_matrix_directory(directory):
    """
    Read every matrix file in a directory, in filename order.

    Files ending '.txt' are plain-text and files ending '.json' are structured;
    anything else is ignored.

    @return: list of (filename, matrix) tuples
    """
    if not os.path.isdir(directory):
        raise InputError("'%s' is not a directory" % (directory,))
    matrices = []
    for leafname in sorted(os.listdir(directory)):
        if not leafname.lower().endswith(('.txt', '.json')):
            continue
        path = os.path.join(directory, leafname)
        matrices.append((leafname, parse_matrix(path)))
    if not matrices:
        raise InputError("No matrix files in '%s'" % (directory,))
    return matrices
