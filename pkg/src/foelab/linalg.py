"""Small shared linear-algebra helpers with the package's solver policies.

Policy: dense symmetric eigensolvers below DENSE_CUTOFF, iterative extremal
solver above; kernel extraction by SVD with a relative singular-value
threshold.
"""

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as sla

DENSE_CUTOFF = 4096
KERNEL_REL_TOL = 1e-8


def to_dense(m):
    return m.toarray() if sp.issparse(m) else np.asarray(m, dtype=float)


def max_abs(m):
    if sp.issparse(m):
        return 0.0 if m.nnz == 0 else float(np.max(np.abs(m.data)))
    m = np.asarray(m)
    return float(np.max(np.abs(m))) if m.size else 0.0


def max_asymmetry(m):
    """Largest entry of |M - M^T|."""
    if sp.issparse(m):
        return max_abs(m - m.T)
    m = np.asarray(m)
    return max_abs(m - m.T)


def commutator_maxabs(a, b):
    """Largest entry of |AB - BA| (sparse-aware)."""
    return max_abs(a @ b - b @ a)


def eigvalsh_full(m):
    """All eigenvalues of a symmetric matrix (dense path)."""
    return la.eigvalsh(to_dense(m))


def min_eigenvalue(m, residual_tol=1e-10):
    """Smallest eigenvalue; dense below DENSE_CUTOFF, Lanczos above."""
    n = m.shape[0]
    if n == 1:
        return float(to_dense(m)[0, 0])
    if n < DENSE_CUTOFF:
        return float(eigvalsh_full(m)[0])
    msp = sp.csr_matrix(m)
    vals = sla.eigsh(msp, k=1, which="SA", tol=residual_tol,
                     return_eigenvectors=False)
    return float(vals[0])


def extremal_eigenvalues(m, residual_tol=1e-10):
    """(smallest, largest) eigenvalue under the dense/iterative policy."""
    n = m.shape[0]
    if n == 1:
        v = float(to_dense(m)[0, 0])
        return v, v
    if n < DENSE_CUTOFF:
        w = eigvalsh_full(m)
        return float(w[0]), float(w[-1])
    msp = sp.csr_matrix(m)
    lo = sla.eigsh(msp, k=1, which="SA", tol=residual_tol, return_eigenvectors=False)
    hi = sla.eigsh(msp, k=1, which="LA", tol=residual_tol, return_eigenvectors=False)
    return float(lo[0]), float(hi[0])


def kernel_basis(block, rel_tol=KERNEL_REL_TOL):
    """Orthonormal basis (columns) of the kernel of a rectangular matrix.

    Singular values below rel_tol times the largest count as zero.  An empty
    row space (0 rows) makes the whole column space the kernel.
    """
    block = to_dense(block)
    rows, cols = block.shape
    if cols == 0:
        return np.zeros((0, 0))
    if rows == 0 or max_abs(block) == 0.0:
        return np.eye(cols)
    _, svals, vt = la.svd(block, full_matrices=True)
    cutoff = rel_tol * svals[0]
    rank = int(np.sum(svals > cutoff))
    return vt[rank:].T.copy()


def restrict(m, idx):
    """Dense principal submatrix on the given indices."""
    idx = np.asarray(idx, dtype=int)
    if sp.issparse(m):
        return m.tocsr()[idx][:, idx].toarray()
    return np.asarray(m)[np.ix_(idx, idx)]
