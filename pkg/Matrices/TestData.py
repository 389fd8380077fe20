"""
Fixed and seeded matrices used by the test suites.
"""

import numpy as np


zero2 = np.zeros((2, 2), dtype=np.complex128)

identity2 = np.eye(2, dtype=np.complex128)

# Matrix unit e_12
e12 = np.array([[0, 1],
                [0, 0]], dtype=np.complex128)

# E_1 + e_12: commutes with no projection but 0 and I
star_witness = np.array([[1, 1],
                         [0, 0]], dtype=np.complex128)

# Rank one, nilpotent and with a clustered singular value
nilpotent3 = np.array([[0, 2, 0],
                       [0, 0, 3],
                       [0, 0, 0]], dtype=np.complex128)

rank_one3 = np.outer([1, 2j, -1], [0.5, 0, 1j]).astype(np.complex128)

half_diagonal = np.diag([0.5, 0.25, 2.0]).astype(np.complex128)

# Eigenvalues 0.1 and 0.9 with a coupling entry
split_spectrum = np.array([[0.1, 0.7],
                           [0.0, 0.9]], dtype=np.complex128)

# Plain-text matrix files
identity2_text = "2 2\n1 0\n0 0\n0 0\n1 0\n"
zero1_text = "1 1\n0 0\n"


def two_projection_pair(h_values=(0.5,)):
    """
    The pair
        E = [[H, sqrt(H(I-H))], [sqrt(H(I-H)), I-H]]
        F = 1/2 [[I, -iI], [iI, I]]
    for H = diag(h_values), whose join is everything with |EF| = 1/sqrt(2).

    @return: tuple of (E, F) matrices of dimension 2 * len(h_values)
    """
    h = np.asarray(h_values, dtype=float)
    k = h.size
    H = np.diag(h)
    S = np.diag(np.sqrt(h * (1 - h)))
    I = np.eye(k)
    E = np.block([[H, S], [S, I - H]]).astype(np.complex128)
    F = 0.5 * np.block([[I, -1j * I], [1j * I, I]])
    return (E, F)


def random_matrix(seed, n, scale=1.0):
    rng = np.random.default_rng(seed)
    M = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return M * (scale / np.sqrt(2 * n))


def random_basis(seed, n, k):
    """
    n x k matrix of orthonormal columns.
    """
    rng = np.random.default_rng(seed)
    M = rng.standard_normal((n, max(k, 1))) + 1j * rng.standard_normal((n, max(k, 1)))
    (Q, _) = np.linalg.qr(M)
    return Q[:, :k]


def random_projection(seed, n, k):
    B = random_basis(seed, n, k)
    return B.dot(B.conj().T)


def scalar_block_case(seed=7, n=8, k=2, z=0.3):
    """
    A matrix supported on the leading k coordinates and a full perturbation of it with norm 1/16.

    @return: tuple of (z, A, block basis, T)
    """
    rng = np.random.default_rng(seed)
    A = np.zeros((n, n), dtype=np.complex128)
    A[:k, :k] = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
    D = random_matrix(seed + 1, n)
    D *= (1.0 / 16) / np.linalg.norm(D, 2)
    return (z, A, np.eye(n, dtype=np.complex128)[:, :k], A + D)


def jordan_sum(values, size):
    """
    Direct sum of size x size Jordan blocks, one for each eigenvalue.
    """
    blocks = [value * np.eye(size) + np.eye(size, k=1) for value in values]
    n = size * len(blocks)
    T = np.zeros((n, n), dtype=np.complex128)
    for (index, block) in enumerate(blocks):
        T[index * size:(index + 1) * size, index * size:(index + 1) * size] = block
    return T


def nearly_equal_pair(eps):
    """
    E = proj(e1) and the projection onto (sqrt(1 - eps^2), eps).
    """
    v = np.array([np.sqrt(1 - eps ** 2), eps], dtype=np.complex128)
    return (np.diag([1, 0]).astype(np.complex128), np.outer(v, v.conj()))


def subspace_pair(seed, n, k, l, shared=0, start=0):
    """
    Projections of rank k and rank l sharing `shared` directions.

    E is spanned by the first k columns of a random unitary B. F is spanned by
    columns start..start+shared of B and l - shared random vectors, so with
    start = k the shared directions lie in the range of I - E.

    @return: tuple of (E, F) matrices
    """
    B = random_basis(seed, n, n)
    shared = max(0, min(shared, l, n - start))
    C = np.hstack([B[:, start:start + shared], random_basis(seed + 1, n, l - shared)])
    if C.shape[1]:
        (C, _) = np.linalg.qr(C)
    return (B[:, :k].dot(B[:, :k].conj().T), C.dot(C.conj().T))
