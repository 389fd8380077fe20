"""
Canonical form of a pair of orthogonal projections (E, F).

The space splits into E^F, E^(I-F), (I-E)^F, (I-E)^(I-F) and a generic part.
On the generic part, E and F take the forms

    E = [[I, 0], [0, 0]]     F = [[H, sqrt(H(I-H))], [sqrt(H(I-H)), I-H]]

for a positive contraction H with no eigenvalue 0 or 1.

The parts are found from the compressions of F to the ranges of E and of I - E.
Their eigenvalues fall in three bands: below a band edge b, above 1 - b and in
between. In the middle band the generic E-vectors x are eigenvectors of the
compression, and y = (I-E) F x / sqrt(h(1-h)). The outer bands are paired
across (low on E with high on I-E, and high on E with low on I-E) through the
SVD of the coupling block y* F x. A singular value sigma gives h as the root of
h(1-h) = sigma^2, to full relative precision however small h is. Pairs with h
within delta of 0 or 1 are corners, the rest are generic.

The canonical basis is ordered:

    E^F | paired E^(I-F) | paired (I-E)^F | generic x | generic y | (I-E)^(I-F)
        | unpaired E^(I-F) | unpaired (I-E)^F

and W maps original coordinates to canonical ones, so E = W* (canonical E) W.
"""

import logging

import numpy as np
import scipy.linalg

from ..Constants import CleanConstants
from ..Errors import AmbiguousSplitError, InputError, NumericalFailure
from ..Matrix.Core import adjoint, check_same_dimension, identity, operator_norm


logger = logging.getLogger(__name__)


__all__ = (
        'HalmosForm',
        'halmos_form',
        'fix_phase',
    )


def _eigh(M):
    if M.shape[0] == 0:
        return np.zeros(0), np.zeros((0, 0), dtype=np.complex128)
    return np.linalg.eigh(M)


def _svd(M):
    (rows, cols) = M.shape
    if min(rows, cols) == 0:
        return (np.eye(rows, dtype=np.complex128), np.zeros(0), np.eye(cols, dtype=np.complex128))
    return np.linalg.svd(M)


def _phases(vectors, tol=1e-8):
    """
    Unit factors which make the first non-negligible coordinate of each column real and positive.
    """
    phases = np.ones(vectors.shape[1], dtype=np.complex128)
    for index in range(vectors.shape[1]):
        magnitudes = np.abs(vectors[:, index])
        if magnitudes.size == 0 or magnitudes.max() == 0:
            continue
        first = np.argmax(magnitudes > tol * magnitudes.max())
        phases[index] = np.conj(vectors[first, index]) / magnitudes[first]
    return phases


def fix_phase(vectors, tol=1e-8):
    """
    Rotate each column so that its first non-negligible coordinate is real and positive.
    """
    vectors = np.array(vectors, dtype=np.complex128)
    return vectors * _phases(vectors, tol)


def _block2(block, m):
    """
    Expand a 2x2 block of scalars or length-m vectors into a 2m x 2m matrix of diagonal blocks.
    """
    out = np.zeros((2 * m, 2 * m), dtype=np.complex128)
    if m == 0:
        return out
    for row in range(2):
        for col in range(2):
            values = np.broadcast_to(np.asarray(block[row][col], dtype=np.complex128), (m,))
            out[row * m:(row + 1) * m, col * m:(col + 1) * m] = np.diag(values)
    return out


class HalmosForm(object):
    """
    Canonical form of a projection pair.

    @ivar W:            unitary; canonical coordinates are W x
    @ivar d1:           dim E^F
    @ivar d2:           number of paired E^(I-F) / (I-E)^F vectors
    @ivar d3:           generic half-dimension
    @ivar d4:           dim (I-E)^(I-F)
    @ivar extra_e:      unpaired E^(I-F) vectors
    @ivar extra_f:      unpaired (I-E)^F vectors
    @ivar H:            generic eigenvalues, ascending
    @ivar delta:        split tolerance used; generic h lie in [delta, 1 - delta]
    @ivar band:         band edge used to pair the outer compression eigenvalues
    """

    def __init__(self, W, d1, d2, d3, d4, extra_e, extra_f, H, delta):
        self.W = W
        self.d1 = d1
        self.d2 = d2
        self.d3 = d3
        self.d4 = d4
        self.extra_e = extra_e
        self.extra_f = extra_f
        self.H = H
        self.delta = delta
        self.band = None
        self.residual_unitary = None
        self.residual_E = None
        self.residual_F = None

    def __repr__(self):
        return "<{}(dims={}, H={})>".format(self.__class__.__name__, self.dims, np.round(self.H, 6).tolist())

    @property
    def n(self):
        return self.W.shape[0]

    @property
    def d_extra(self):
        return self.extra_e + self.extra_f

    @property
    def dims(self):
        return (self.d1, self.d2, self.d3, self.d4, self.d_extra)

    def canonical(self, ef=0, pair=None, generic=None, complement=0, extra_e=0, extra_f=0):
        """
        Assemble a matrix in canonical coordinates.

        @param ef:          scalar on E^F
        @param pair:        2x2 block on the paired corners (a's then b's)
        @param generic:     2x2 block on the generic part (x's then y's); entries
                            may be scalars or vectors of length d3
        @param complement:  scalar on (I-E)^(I-F)
        @param extra_e:     scalar on the unpaired E^(I-F) vectors
        @param extra_f:     scalar on the unpaired (I-E)^F vectors
        """
        zero2 = [[0, 0], [0, 0]]
        blocks = [np.eye(self.d1) * ef,
                  _block2(pair if pair is not None else zero2, self.d2),
                  _block2(generic if generic is not None else zero2, self.d3),
                  np.eye(self.d4) * complement,
                  np.eye(self.extra_e) * extra_e,
                  np.eye(self.extra_f) * extra_f]
        M = np.zeros((self.n, self.n), dtype=np.complex128)
        offset = 0
        for block in blocks:
            size = block.shape[0]
            M[offset:offset + size, offset:offset + size] = block
            offset += size
        return M

    def block_operator(self, **kwargs):
        """
        A matrix given in canonical coordinates, mapped back to the original ones.
        """
        M = self.canonical(**kwargs)
        return adjoint(self.W).dot(M).dot(self.W)

    def canonical_E(self):
        return self.canonical(ef=1, pair=[[1, 0], [0, 0]], generic=[[1, 0], [0, 0]], extra_e=1)

    def canonical_F(self):
        s = np.sqrt(self.H * (1 - self.H))
        return self.canonical(ef=1, pair=[[0, 0], [0, 1]], generic=[[self.H, s], [s, 1 - self.H]], extra_f=1)


def _choose_band(values, delta):
    """
    First band edge b above delta with no compression eigenvalue near b or 1 - b.
    """
    bands = [band for band in CleanConstants.HALMOS_BANDS if band > delta] or [(delta + 0.5) / 2]
    margin = CleanConstants.HALMOS_BAND_MARGIN
    for band in bands:
        if all(np.all(np.abs(values - edge) > margin) for edge in (band, 1 - band)):
            return band
    raise AmbiguousSplitError("Compression eigenvalues sit at every band edge %r" % (bands,))


def _coupling_to_h(sigma):
    """
    The root of h(1 - h) = sigma^2 below 1/2.
    """
    return 2 * sigma ** 2 / (1 + np.sqrt(np.clip(1 - 4 * sigma ** 2, 0, None)))


def _coupled_pairs(Fm, X, Y, delta, tol, what):
    """
    Generic pairs and corner vectors of two bands coupled through F.

    @param Fm:      F as a matrix
    @param X:       orthonormal basis of a band in the range of E
    @param Y:       orthonormal basis of the partner band in the range of I - E

    @return: (x, y, h, x_corner, y_corner), with y* F x = sqrt(h(1-h)) on each
             pair and h the root below 1/2
    """
    (U, s, Vh) = _svd(adjoint(Y).dot(Fm).dot(X))
    h = _coupling_to_h(s)
    close = np.abs(h - delta) <= tol
    if np.any(close):
        raise AmbiguousSplitError("%s value %.17g is at the split boundary %.3g" % (what, h[close][0], delta),
                                  value=float(h[close][0]))
    count = int(np.count_nonzero(h > delta))
    V = adjoint(Vh)
    x = X.dot(V[:, :count])
    y = Y.dot(U[:, :count])
    phases = _phases(x)
    return (x * phases, y * phases, h[:count],
            fix_phase(X.dot(V[:, count:])), fix_phase(Y.dot(U[:, count:])))


def halmos_form(E, F, delta=CleanConstants.HALMOS_DELTA, tol=None, check_tol=CleanConstants.DEFAULT_TOL):
    """
    Compute the canonical form of a projection pair.

    @param E:           OrthoProjection
    @param F:           OrthoProjection
    @param delta:       values of h within delta of 0 or 1 are corner parts
    @param tol:         values within this of delta or 1 - delta are ambiguous;
                        defaults to delta / 100
    @param check_tol:   largest reconstruction residual accepted

    @return: HalmosForm
    """
    n = check_same_dimension(E.matrix, F.matrix)
    if not (0 < delta < 0.5):
        raise InputError("Split tolerance must be in (0, 1/2), not %r" % (delta,))
    if tol is None:
        tol = delta / 100
    Fm = F.matrix
    BE = E.basis
    BEc = E.complement().basis

    (w, V) = _eigh(adjoint(BE).dot(Fm).dot(BE))
    (wc, Vc) = _eigh(adjoint(BEc).dot(Fm).dot(BEc))
    band = _choose_band(np.concatenate([w, wc]), delta)
    low = w < band
    high = w > 1 - band
    middle = ~(low | high)
    clow = wc < band
    chigh = wc > 1 - band
    if int(np.count_nonzero(middle)) != int(np.count_nonzero(~(clow | chigh))):
        raise AmbiguousSplitError("Middle band has %i dimensions in E but %i in I-E"
                                  % (np.count_nonzero(middle), np.count_nonzero(~(clow | chigh))))

    H_mid = w[middle]
    X_mid = fix_phase(BE.dot(V[:, middle]))
    Ec = identity(n) - E.matrix
    if H_mid.size:
        Y_mid = Ec.dot(Fm).dot(X_mid) / np.sqrt(H_mid * (1 - H_mid))
    else:
        Y_mid = np.zeros((n, 0), dtype=np.complex128)

    (X_low, Y_low, h_low, X_a, Y_b) = _coupled_pairs(Fm, BE.dot(V[:, low]), BEc.dot(Vc[:, chigh]),
                                                     delta, tol, "Low band")
    (X_high, Y_high, h_high, X_ef, Y_d) = _coupled_pairs(Fm, BE.dot(V[:, high]), BEc.dot(Vc[:, clow]),
                                                         delta, tol, "High band")

    # Generic pairs ordered by ascending h, that is by descending principal angle
    H = np.concatenate([h_low, H_mid, 1 - h_high])
    order = np.argsort(H, kind='stable')
    H = H[order]
    X_gen = np.hstack([X_low, X_mid, X_high]).reshape(n, -1)[:, order]
    Y_gen = np.hstack([Y_low, Y_mid, Y_high]).reshape(n, -1)[:, order]

    paired = min(X_a.shape[1], Y_b.shape[1])
    basis = np.hstack([X_ef, X_a[:, :paired], Y_b[:, :paired], X_gen, Y_gen, Y_d,
                       X_a[:, paired:], Y_b[:, paired:]]).reshape(n, -1)
    if basis.shape[1] != n:
        raise NumericalFailure("Canonical basis has %i vectors in dimension %i" % (basis.shape[1], n))

    W = adjoint(basis)
    form = HalmosForm(W, X_ef.shape[1], paired, H.size, Y_d.shape[1],
                      X_a.shape[1] - paired, Y_b.shape[1] - paired, H, delta)
    form.band = band
    form.residual_unitary = operator_norm(W.dot(adjoint(W)) - identity(n))
    if form.residual_unitary > CleanConstants.CONSTRUCTION_TOL:
        # Re-unitarise; the vectors are already orthonormal up to rounding
        (W, _) = scipy.linalg.polar(W)
        form.W = W
        form.residual_unitary = operator_norm(W.dot(adjoint(W)) - identity(n))

    form.residual_E = operator_norm(adjoint(W).dot(form.canonical_E()).dot(W) - E.matrix)
    form.residual_F = operator_norm(adjoint(W).dot(form.canonical_F()).dot(W) - Fm)
    logger.debug("Halmos form dims %r at band %g, residuals %.3g/%.3g", form.dims, band,
                 form.residual_E, form.residual_F)
    if max(form.residual_E, form.residual_F, form.residual_unitary) > check_tol:
        raise NumericalFailure("Halmos form reconstruction residual %.3g exceeds %.3g"
                               % (max(form.residual_E, form.residual_F, form.residual_unitary), check_tol))
    return form
