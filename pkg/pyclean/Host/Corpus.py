"""
Seeded corpora of test matrices.

Member i of a corpus is drawn from numpy's PCG64 generator seeded with
[seed, i] (`numpy.random.default_rng`), so every member depends only on the
seed and its own index, and the same seed always gives the same corpus.
Families are assigned in turn: member i belongs to families[i % len(families)].

Families:

* gaussian:         complex Gaussian entries, scaled to norm about 1.
* jordan:           Jordan blocks of size at most 4 with eigenvalue moduli
                    either side of 1/4, 1/2 and 3/4, conjugated by a random
                    unitary. Every fourth jordan member is a single nilpotent block.
* unitary:          Haar-distributed unitary matrices.
* rank-deficient:   rank below n, singular values in [0.1, 2].
* cluster-half:     at least half the singular values within 1e-3 of 1/2;
                    every other member has a singular value of exactly 1/2.
* shift:            scaled upper shift matrices.

The jordan-large family is left out of the default list. Its blocks run up to
n/2, where the eigenvalues of a block are only resolved to about eps^(1/size),
so it is meant for the clean mode rather than the strong mode.
"""

import logging
import os

import numpy as np

from ..Constants import CleanConstants, default_tolerance
from ..Errors import InputError
from ..Matrix.Core import adjoint
from ..Witness.Tables import shift_matrix
from .MatrixFile import emit_matrix


logger = logging.getLogger(__name__)


__all__ = (
        'RunConfig',
        'CorpusMember',
        'random_unitary',
        'corpus_members',
        'generate_corpus',
        'write_corpus',
    )


# Eigenvalue moduli for the jordan family, either side of 1/4, 1/2 and 3/4
JORDAN_MODULI = (0.1, 0.2, 0.3, 0.45, 0.55, 0.7, 0.8, 1.1)
JORDAN_MAX_BLOCK = 4
SHIFT_SCALES = (0.25, 1.0, 3.0)
CLUSTER_WIDTH = 1e-3


class RunConfig(object):
    """
    Settings for a run, built from the command line.

    @ivar mode:         decomposition mode
    @ivar tolerance:    verification tolerance
    @ivar seed:         corpus seed, a non-negative integer
    @ivar output:       output path, or None for stdout
    @ivar count:        number of corpus members
    @ivar min_n:        smallest member dimension
    @ivar max_n:        largest member dimension
    @ivar families:     families to draw from, in turn
    """

    def __init__(self, mode=CleanConstants.MODE_CLEAN, tolerance=None, seed=0, output=None,
                 count=100, min_n=1, max_n=64, families=None):
        self.mode = mode
        self.tolerance = default_tolerance() if tolerance is None else tolerance
        self.seed = seed
        self.output = output
        self.count = count
        self.min_n = min_n
        self.max_n = max_n
        self.families = tuple(families) if families else CleanConstants.FAMILIES

    def __repr__(self):
        return "<{}(mode={}, seed={}, count={}, n={}..{}, families={})>".format(self.__class__.__name__,
                                                                              self.mode, self.seed,
                                                                              self.count, self.min_n,
                                                                              self.max_n,
                                                                              ','.join(self.families))

    def validate(self):
        """
        Check the settings, raising InputError for the first problem found.
        """
        if self.mode not in CleanConstants.MODES:
            raise InputError("Unknown mode '%s'" % (self.mode,))
        if not self.tolerance > 0:
            raise InputError("Tolerance must be positive, not %r" % (self.tolerance,))
        if not isinstance(self.seed, int) or self.seed < 0:
            raise InputError("Seed must be a non-negative integer, not %r" % (self.seed,))
        if not isinstance(self.count, int) or self.count < 0:
            raise InputError("Corpus count must be a non-negative integer, not %r" % (self.count,))
        if not (CleanConstants.CORPUS_MIN_N <= self.min_n <= self.max_n <= CleanConstants.CORPUS_MAX_N):
            raise InputError("Dimension range %r..%r must lie within %i..%i" % (self.min_n, self.max_n,
                                                                               CleanConstants.CORPUS_MIN_N,
                                                                               CleanConstants.CORPUS_MAX_N))
        for family in self.families:
            if family not in CleanConstants.FAMILIES + CleanConstants.EXTRA_FAMILIES:
                raise InputError("Unknown corpus family '%s'" % (family,))
        if not self.families:
            raise InputError("At least one corpus family is needed")
        return self


class CorpusMember(object):

    def __init__(self, index, family, matrix, nilpotent=False):
        self.index = index
        self.family = family
        self.matrix = matrix
        self.nilpotent = nilpotent

    def __repr__(self):
        return "<{}(index={}, family={}, n={})>".format(self.__class__.__name__, self.index, self.family, self.n)

    @property
    def n(self):
        return self.matrix.shape[0]

    @property
    def name(self):
        return 'member-%05i-%s-n%i' % (self.index, self.family, self.n)


def _gaussian(rng, n):
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)


def random_unitary(rng, n):
    """
    Haar-distributed unitary: QR of a complex Gaussian matrix with the phases of R removed.
    """
    (Q, R) = np.linalg.qr(_gaussian(rng, n))
    phases = np.diag(R) / np.abs(np.diag(R))
    return Q * phases


def _with_singular_values(rng, s):
    n = len(s)
    return (random_unitary(rng, n) * np.asarray(s, dtype=float)).dot(adjoint(random_unitary(rng, n)))


def _family_gaussian(rng, n, ordinal):
    scale = rng.uniform(0.5, 2.0)
    return _gaussian(rng, n) * (scale / (2 * np.sqrt(n))), False


def _jordan_sum(rng, n, max_block):
    J = np.zeros((n, n), dtype=np.complex128)
    start = 0
    while start < n:
        size = min(int(rng.integers(1, max_block + 1)), n - start)
        modulus = JORDAN_MODULI[int(rng.integers(len(JORDAN_MODULI)))]
        value = modulus * np.exp(2j * np.pi * rng.uniform())
        block = slice(start, start + size)
        J[block, block] = value * np.eye(size) + np.eye(size, k=1)
        start += size
    U = random_unitary(rng, n)
    return U.dot(J).dot(adjoint(U))


def _family_jordan(rng, n, ordinal):
    if ordinal % 4 == 0:
        U = random_unitary(rng, n)
        return U.dot(np.eye(n, k=1)).dot(adjoint(U)), True
    return _jordan_sum(rng, n, JORDAN_MAX_BLOCK), False


def _family_jordan_large(rng, n, ordinal):
    return _jordan_sum(rng, n, max(1, n // 2)), False


def _family_unitary(rng, n, ordinal):
    return random_unitary(rng, n), False


def _family_rank_deficient(rng, n, ordinal):
    rank = int(rng.integers(0, n))
    s = np.zeros(n)
    s[:rank] = rng.uniform(0.1, 2.0, size=rank)
    return _with_singular_values(rng, s), False


def _family_cluster_half(rng, n, ordinal):
    clustered = max(1, (n + 1) // 2)
    s = rng.uniform(0.0, 2.0, size=n)
    s[:clustered] = 0.5 + rng.uniform(-CLUSTER_WIDTH, CLUSTER_WIDTH, size=clustered)
    if ordinal % 2 == 0:
        s[0] = 0.5
    return _with_singular_values(rng, s), False


def _family_shift(rng, n, ordinal):
    scale = SHIFT_SCALES[int(rng.integers(len(SHIFT_SCALES)))]
    return shift_matrix(n) * scale, True


FAMILY_BUILDERS = {
        'gaussian': _family_gaussian,
        'jordan': _family_jordan,
        'jordan-large': _family_jordan_large,
        'unitary': _family_unitary,
        'rank-deficient': _family_rank_deficient,
        'cluster-half': _family_cluster_half,
        'shift': _family_shift,
    }


def corpus_members(config):
    """
    Generate the members of a corpus with their families.

    @param config:  RunConfig

    @return: list of CorpusMember
    """
    config.validate()
    members = []
    families = config.families
    for index in range(config.count):
        family = families[index % len(families)]
        ordinal = index // len(families)
        rng = np.random.default_rng([config.seed, index])
        n = int(rng.integers(config.min_n, config.max_n + 1))
        (matrix, nilpotent) = FAMILY_BUILDERS[family](rng, n, ordinal)
        members.append(CorpusMember(index, family, np.asarray(matrix, dtype=np.complex128), nilpotent))
    logger.debug("Generated %i corpus members with seed %i", len(members), config.seed)
    return members


def generate_corpus(config):
    """
    Generate the matrices of a corpus.

    @param config:  RunConfig

    @return: list of complex128 matrices
    """
    return [member.matrix for member in corpus_members(config)]


def write_corpus(config, directory):
    """
    Write each member of a corpus as a plain-text matrix file.

    @return: list of the filenames written
    """
    if not os.path.isdir(directory):
        os.makedirs(directory)
    paths = []
    for member in corpus_members(config):
        path = os.path.join(directory, member.name + '.txt')
        emit_matrix(member.matrix, path)
        paths.append(path)
    return paths
