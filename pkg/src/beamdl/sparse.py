# Greedy sparse coding (complex-valued OMP) and sparse-code synthesis.
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import least_squares


@dataclass
class SparseCode:
    """Support indices with aligned complex coefficients over a dictionary."""

    support: list[int]
    values: np.ndarray
    ambient_dim: int
    residual_norms: list[float] = field(default_factory=list)

    def to_dense(self) -> np.ndarray:
        w = np.zeros(self.ambient_dim, dtype=complex)
        w[self.support] = self.values
        return w


def omp(y: np.ndarray, a: np.ndarray, s_max: int, eps: float = 0.0) -> SparseCode:
    """Orthogonal matching pursuit over the columns of a.

    Repeatedly selects the unselected atom with the largest conjugate inner
    product against the residual (ties to the lower index), refits all
    selected coefficients by least squares, and stops once s_max atoms are
    chosen or ||r||^2 <= eps * ||y||^2. Columns are normalized internally
    when needed and the coefficients rescaled back. A newly selected atom
    that makes the sub-dictionary rank deficient is dropped and excluded
    from later selection.
    """
    y = np.asarray(y, dtype=complex).ravel()
    a = np.asarray(a, dtype=complex)
    if a.shape[0] != y.size:
        raise ValueError(f"dictionary is {a.shape}, signal has length {y.size}")
    if s_max < 1:
        raise ValueError("s_max must be >= 1")
    if eps < 0:
        raise ValueError("eps must be >= 0")
    n_atoms = a.shape[1]

    norms = np.linalg.norm(a, axis=0)
    dead = norms < 1e-300
    safe = np.where(dead, 1.0, norms)
    an = a / safe if not np.allclose(norms[~dead], 1.0, atol=1e-12) else a

    y_energy = float(np.linalg.norm(y) ** 2)
    code = SparseCode(support=[], values=np.zeros(0, dtype=complex), ambient_dim=n_atoms,
                      residual_norms=[np.sqrt(y_energy)])
    if y_energy == 0.0:
        return code

    y_norm = np.sqrt(y_energy)
    residual = y.copy()
    blocked = dead.copy()
    coeffs = np.zeros(0, dtype=complex)
    while len(code.support) < s_max:
        r_norm = np.linalg.norm(residual)
        # eps is the caller's relative tolerance; the 1e-12 floor stops the
        # pursuit once the residual falls below float resolution of y
        if r_norm ** 2 <= eps * y_energy or r_norm <= 1e-12 * y_norm:
            break
        corr = np.abs(an.conj().T @ residual)
        corr[code.support] = -1.0
        corr[blocked] = -1.0
        j = int(np.argmax(corr))
        if corr[j] <= 1e-13 * y_norm:
            break
        trial = code.support + [j]
        sub = an[:, trial]
        if np.linalg.matrix_rank(sub, tol=1e-10 * max(1.0, np.linalg.norm(sub))) < len(trial):
            blocked[j] = True
            continue
        coeffs = least_squares(sub, y)
        code.support = trial
        residual = y - sub @ coeffs
        code.residual_norms.append(float(np.linalg.norm(residual)))

    code.values = coeffs / safe[code.support] if len(code.support) else coeffs
    return code


def reconstruct(a: np.ndarray, code: SparseCode) -> np.ndarray:
    """Synthesize sum_j a[:, j] * w_j over the code support."""
    a = np.asarray(a)
    if code.support and (min(code.support) < 0 or max(code.support) >= a.shape[1]):
        raise IndexError("support index out of range for dictionary")
    out = np.zeros(a.shape[0], dtype=complex)
    for j, w in zip(code.support, code.values):
        out += a[:, j] * w
    return out
