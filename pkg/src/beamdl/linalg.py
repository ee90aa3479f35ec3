# Complex dense linear-algebra kernels shared by every module.
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Relative singular-value cutoff for pseudo-inverse solves. Values below
# RCOND * sigma_max are treated as zero so near-degenerate sub-dictionaries
# inside OMP do not blow up the coefficients.
RCOND = 1e-12


@dataclass
class SVDResult:
    """Thin SVD A = left @ diag(singular_values) @ right^H."""

    left_vectors: np.ndarray       # (rows, r)
    singular_values: np.ndarray    # (r,), real, descending
    right_vectors: np.ndarray      # (cols, r)

    def reconstruct(self, rank: int | None = None) -> np.ndarray:
        r = self.singular_values.size if rank is None else rank
        return (self.left_vectors[:, :r] * self.singular_values[:r]) @ self.right_vectors[:, :r].conj().T


def svd(a: np.ndarray) -> SVDResult:
    """Thin SVD of a dense complex matrix.

    Singular values come out sorted descending and nonnegative; truncating to
    rank 1 gives the best rank-1 approximation in Frobenius norm. LAPACK
    non-convergence surfaces as np.linalg.LinAlgError.
    """
    a = np.asarray(a)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains NaN/Inf")
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    return SVDResult(left_vectors=u, singular_values=s, right_vectors=vh.conj().T)


def least_squares(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Minimum-norm least-squares solution of a @ x = b.

    SVD-based pseudo-inverse; singular values below RCOND * sigma_max are
    treated as zero. The residual b - a @ x is orthogonal to the column space
    of a (up to roundoff).
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {a.shape}")
    if b.shape[0] != a.shape[0]:
        raise ValueError(f"dimension mismatch: a is {a.shape}, b has leading dim {b.shape[0]}")
    x, _, _, _ = np.linalg.lstsq(a, b, rcond=RCOND)
    return x
