# Beamspace transform operators (lens-style DFT grid and learned-dictionary
# kind), channel transformation, and power-leakage measures.
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import ArrayGeometry, ChannelRealization, spatial_to_angle, steering_vector

KIND_DFT = "DFT"
KIND_LEARNED = "Learned"


@dataclass
class TransformOperator:
    """Spatial-to-beamspace operator.

    DFT kind: N x N, row n is the conjugated steering vector at grid
    direction (n - (N+1)/2)/N; unitary for a uniform half-wavelength array.
    Learned kind wraps a redundant unit-column dictionary.
    """

    matrix: np.ndarray
    kind: str = KIND_DFT


@dataclass
class BeamspaceChannel:
    H_tilde: np.ndarray            # (n_beams, K)
    operator_kind: str


def grid_directions(n: int) -> np.ndarray:
    """Beam grid spatial directions (n - (N+1)/2)/N for n = 1..N."""
    return (np.arange(1, n + 1) - (n + 1) / 2.0) / n


def build_dft_operator(geometry: ArrayGeometry) -> TransformOperator:
    """Lens operator: stacked conjugate steering vectors on the beam grid.

    For a perturbed array the grid directions stay nominal while the
    steering vectors use the actual element positions, which models a lens
    designed for the nominal array mounted on imperfect hardware.
    """
    n = geometry.n_antennas
    rows = np.empty((n, n), dtype=complex)
    for i, psi in enumerate(grid_directions(n)):
        rows[i, :] = steering_vector(geometry, spatial_to_angle(psi)).conj()
    return TransformOperator(matrix=rows, kind=KIND_DFT)


def to_beamspace(realization: ChannelRealization, op: TransformOperator) -> BeamspaceChannel:
    """Apply a DFT-kind operator: H_tilde = U @ H.

    Learned-kind transformation is sparse coding, not a matrix product; it
    lives with the channel-representation stage (see estimation.represent_channel).
    """
    if op.kind != KIND_DFT:
        raise ValueError("learned-kind transformation goes through represent_channel")
    if op.matrix.shape[1] != realization.H.shape[0]:
        raise ValueError(f"operator is {op.matrix.shape}, channel has {realization.H.shape[0]} antennas")
    return BeamspaceChannel(H_tilde=op.matrix @ realization.H, operator_kind=op.kind)


def power_leakage_worst_ula(n: int) -> float:
    """Worst-case single-path power leakage of the uniform-array beam grid.

    eta = 1 - 1 / (2 sum_{i=1..N/2} sin^2(pi/2N) / sin^2((2i-1) pi/2N));
    approaches ~0.595 for large even N.
    """
    if n < 2 or n % 2 != 0:
        raise ValueError("defined for even n >= 2")
    i = np.arange(1, n // 2 + 1)
    total = np.sum(np.sin(np.pi / (2 * n)) ** 2 / np.sin((2 * i - 1) * np.pi / (2 * n)) ** 2)
    return float(1.0 - 1.0 / (2.0 * total))


def empirical_leakage(h_tilde_col: np.ndarray, s: int) -> float:
    """Fraction of energy outside the s strongest beamspace entries.

    Ties in magnitude break toward the lower index; an all-zero vector has
    zero leakage by convention.
    """
    v = np.asarray(h_tilde_col).ravel()
    if s > v.size:
        raise ValueError("s exceeds vector length")
    energy = np.abs(v) ** 2
    total = energy.sum()
    if total == 0.0:
        return 0.0
    order = np.argsort(-energy, kind="stable")
    captured = energy[order[:s]].sum()
    return float(1.0 - captured / total)
