"""
Dense complex matrix helpers.

Matrices are held as two-dimensional numpy arrays of complex128. `as_matrix`
validates anything array-like into that form; the rest of the library assumes
its inputs have been through it.
"""

import numpy as np

from ..Constants import CleanConstants
from ..Errors import InputError


__all__ = (
        'as_matrix',
        'check_same_dimension',
        'adjoint',
        'identity',
        'operator_norm',
        'singular_values',
        'smallest_singular_value',
        'inverse_norm',
        'rank_tolerance',
        'matrix_to_document',
        'document_to_matrix',
    )


def as_matrix(M, square=True, name='matrix'):
    """
    Validate a matrix and convert it to a complex128 array.

    @param M:       array-like, 2 dimensional
    @param square:  True to require a square matrix
    @param name:    name used in error messages

    @return: numpy array of complex128
    """
    try:
        array = np.array(M, dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise InputError("%s is not numeric: %s" % (name, exc))
    if array.ndim != 2:
        raise InputError("%s must be 2 dimensional, not %i dimensional" % (name, array.ndim))
    if array.shape[0] < 1 or array.shape[1] < 1:
        raise InputError("%s must have positive dimensions, not %ix%i" % ((name,) + array.shape))
    if square and array.shape[0] != array.shape[1]:
        raise InputError("%s must be square, not %ix%i" % ((name,) + array.shape))
    if not np.all(np.isfinite(array)):
        raise InputError("%s has non-finite entries" % (name,))
    return array


def check_same_dimension(*matrices):
    shapes = set(m.shape for m in matrices)
    if len(shapes) != 1:
        raise InputError("Dimension mismatch: %s" % (', '.join('%ix%i' % shape for shape in sorted(shapes)),))
    return matrices[0].shape[0]


def adjoint(M):
    return M.conj().T


def identity(n):
    return np.eye(n, dtype=np.complex128)


def singular_values(M):
    """
    Singular values in descending order; empty matrices have none.
    """
    if M.size == 0:
        return np.zeros(0)
    return np.linalg.svd(M, compute_uv=False)


def operator_norm(M):
    """
    Operator (spectral) norm, the largest singular value.

    @param M: matrix

    @return: sigma_max(M), or 0 for an empty matrix
    """
    M = np.asarray(M, dtype=np.complex128)
    if not np.all(np.isfinite(M)):
        raise InputError("matrix has non-finite entries")
    s = singular_values(M)
    if s.size == 0:
        return 0.0
    return float(s[0])


def smallest_singular_value(M):
    """
    Smallest singular value; infinite for an empty matrix.
    """
    if M.size == 0:
        return np.inf
    return float(singular_values(M).min())


def inverse_norm(M):
    """
    Norm of the inverse of a square matrix, infinite when singular.
    """
    smin = smallest_singular_value(M)
    if smin == 0:
        return np.inf
    return 1.0 / smin


def rank_tolerance(n):
    """
    Default relative cutoff for numerical rank decisions on an n-dimensional matrix.
    """
    return max(n, 1) * CleanConstants.RANK_EPS


def matrix_to_document(M):
    """
    Convert a matrix to the structured document form, {rows, cols, data}.
    """
    M = np.asarray(M, dtype=np.complex128)
    flat = M.reshape(-1)
    return {
            'rows': int(M.shape[0]),
            'cols': int(M.shape[1]),
            'data': [[float(value.real), float(value.imag)] for value in flat],
        }


def document_to_matrix(doc, name='matrix'):
    """
    Convert a structured document back to a matrix.

    @param doc:  dictionary with integer 'rows', 'cols' and a 'data' list of [re, im]
    @param name: name used in error messages

    @return: complex128 array
    """
    try:
        rows = doc['rows']
        cols = doc['cols']
        data = doc['data']
    except (KeyError, TypeError):
        raise InputError("%s document must have rows, cols and data" % (name,))
    if not isinstance(rows, int) or not isinstance(cols, int) or rows < 1 or cols < 1:
        raise InputError("%s document has bad dimensions %r x %r" % (name, rows, cols))
    if not isinstance(data, list) or len(data) != rows * cols:
        raise InputError("%s document needs %i entries" % (name, rows * cols))
    values = []
    for index, pair in enumerate(data):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise InputError("%s entry %i is not a [re, im] pair" % (name, index))
        try:
            values.append(complex(float(pair[0]), float(pair[1])))
        except (TypeError, ValueError):
            raise InputError("%s entry %i is not numeric" % (name, index))
    return as_matrix(np.array(values).reshape(rows, cols), square=False, name=name)
