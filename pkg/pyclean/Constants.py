"""
Constants shared by the decomposition library and its command line.
"""

import os


class CleanConstants(object):
    # Decomposition modes
    MODE_CLEAN = 'clean'
    MODE_STRONG = 'strong'
    MODE_STAR = 'star'
    MODE_ALMOST_STAR = 'almost-star'
    MODE_SCALAR_PLUS_SMALL = 'scalar-plus-small'
    MODES = (MODE_CLEAN, MODE_STRONG, MODE_STAR, MODE_ALMOST_STAR, MODE_SCALAR_PLUS_SMALL)

    # Riesz projector methods
    METHOD_SCHUR = 'schur-subspace'
    METHOD_QUADRATURE = 'quadrature'

    # Strongly clean branches
    BRANCH_ZERO = 'zero'
    BRANCH_IDENTITY = 'identity'
    BRANCH_RIESZ = 'riesz'

    # Projection ordering
    ORDER_E_BELOW_F = 'E<=F'
    ORDER_F_BELOW_E = 'F<=E'
    ORDER_EQUIVALENT = 'equivalent'

    # Process exit codes
    EXIT_OK = 0
    EXIT_VERIFY_FAILED = 1
    EXIT_BAD_INPUT = 2
    EXIT_NUMERICAL = 3

    # Numerical rank cutoff is RANK_EPS * n * sigma_max
    RANK_EPS = 2.0 ** -44
    CONSTRUCTION_TOL = 1e-10
    CERTIFY_SLACK = 1e-6
    DEFAULT_TOL = 1e-8
    SIGMA_FLOOR = 1e-12
    # Halmos h within HALMOS_DELTA of 0 or 1 is a corner part; sqrt(delta) bounds the error
    HALMOS_DELTA = 1e-20
    HALMOS_DELTA_RETRIES = (1e-20, 1e-22, 1e-18, 1e-24)
    # Compression eigenvalues below the band or above 1 - band are paired by SVD
    HALMOS_BANDS = (0.01, 0.02, 0.005, 0.05)
    HALMOS_BAND_MARGIN = 1e-9

    # Clean pipeline cut and its retry window
    CLEAN_CUT = 0.5
    CLEAN_CUT_LOW = 0.45
    CLEAN_CUT_HIGH = 0.55
    CLEAN_CUT_STEPS = 21
    CLEAN_BOUND = 4.0
    SCALAR_BOUND = 8.0
    SCALAR_PERTURBATION = 0.125

    # Separating radius window
    RADIUS_LOW = 0.25
    RADIUS_HIGH = 0.75
    QUADRATURE_MIN_NODES = 64
    QUADRATURE_NODES_PER_DIM = 16
    QUADRATURE_MAX_NODES = 8192
    QUADRATURE_TARGET = 1e-14
    METHOD_AGREEMENT = 1e-6

    # Corpus limits
    CORPUS_MIN_N = 1
    CORPUS_MAX_N = 512
    FAMILIES = ('gaussian', 'jordan', 'unitary', 'rank-deficient', 'cluster-half', 'shift')
    # Opt-in families, left out of the default corpus
    EXTRA_FAMILIES = ('jordan-large',)

    TOLERANCE_ENVIRONMENT = 'PYCLEAN_TOLERANCE'


def default_tolerance():
    """
    Read the verification tolerance, which may be overridden from the environment.

    @return: tolerance as a positive float
    """
    value = os.environ.get(CleanConstants.TOLERANCE_ENVIRONMENT, None)
    if value:
        try:
            tol = float(value)
            if tol > 0:
                return tol
        except ValueError:
            pass
    return CleanConstants.DEFAULT_TOL
