# Pilot transmission, compressed measurement, and the beamspace
# channel-estimation scenarios (OMP / support-detection estimators crossed
# with grid and learned dictionaries).
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .beamspace import KIND_LEARNED, BeamspaceChannel, TransformOperator
from .channels import ChannelRealization, crandn
from .dictlearn import Dictionary
from .linalg import least_squares
from .sparse import SparseCode, omp


@dataclass(frozen=True)
class ScenarioSpec:
    """One estimation scenario: estimator crossed with dictionary choices."""

    label: str
    estimator: str                 # "OMP" | "SD"
    representation_op: str         # "DFT" | "LearnedD_H"
    estimation_dict: str           # "DFT" | "LearnedD_U"


SCENARIOS = {
    s.label: s
    for s in (
        ScenarioSpec("OMP-DFT", "OMP", "DFT", "DFT"),
        ScenarioSpec("SD-DFT", "SD", "DFT", "DFT"),
        ScenarioSpec("Scenario1", "OMP", "DFT", "LearnedD_U"),
        ScenarioSpec("SD-DL", "SD", "DFT", "LearnedD_U"),
        ScenarioSpec("Scenario2", "OMP", "LearnedD_H", "DFT"),
        ScenarioSpec("Scenario3", "OMP", "LearnedD_H", "LearnedD_U"),
    )
}


@dataclass
class PilotConfig:
    """Orthogonal pilots: Q = n_blocks * n_users instants, DFT pilot matrix."""

    n_users: int
    n_blocks: int
    pilot_matrix: np.ndarray       # (K, K), Psi @ Psi^H = K I

    @property
    def total_instants(self) -> int:
        return self.n_blocks * self.n_users


@dataclass
class SensingMatrix:
    """Per-instant combining weights applied to the beamspace snapshot."""

    W: np.ndarray                  # (Q, n_beams)
    entry_law: str = "bernoulli"


def gen_pilot_config(k: int, m: int) -> PilotConfig:
    """K-point DFT pilots; rows are mutually orthogonal with Psi Psi^H = K I."""
    if k < 1 or m < 1:
        raise ValueError("need k >= 1 and m >= 1")
    grid = np.outer(np.arange(k), np.arange(k))
    psi = np.exp(-2j * np.pi * grid / k)
    return PilotConfig(n_users=k, n_blocks=m, pilot_matrix=psi)


def gen_sensing_matrix(q: int, n_beams: int, rng: np.random.Generator) -> SensingMatrix:
    """Random +-1/sqrt(Q) combining, the RIP-friendly selecting-network model."""
    w = rng.choice([-1.0, 1.0], size=(q, n_beams)) / np.sqrt(q)
    return SensingMatrix(W=w, entry_law="bernoulli")


def identity_sensing(n_beams: int) -> SensingMatrix:
    """Full sampling (Q = n_beams); used by tests and noiseless checks."""
    return SensingMatrix(W=np.eye(n_beams), entry_law="identity")


def simulate_pilot_rx(h_tilde: BeamspaceChannel, cfg: PilotConfig, w: SensingMatrix,
                      noise_var: float, rng: np.random.Generator) -> np.ndarray:
    """Simulate uplink pilot blocks and return per-user measurements (Q x K).

    Per block, Y_m = H_tilde @ Psi + N_m with i.i.d. CN(0, noise_var) noise;
    decorrelating by Psi^H / K isolates per-user beamspace snapshots whose
    effective noise variance is noise_var / K, and block m contributes the
    rows m K .. (m+1) K - 1 of y_k = W h_k + n_eff.
    """
    hmat = h_tilde.H_tilde
    n_beams, k = hmat.shape
    if w.W.shape[1] != n_beams:
        raise ValueError(f"sensing matrix is {w.W.shape}, beamspace has {n_beams} beams")
    if w.W.shape[0] != cfg.total_instants:
        raise ValueError("sensing rows must equal Q = n_blocks * n_users")
    psi = cfg.pilot_matrix
    out = np.empty((cfg.total_instants, k), dtype=complex)
    for m in range(cfg.n_blocks):
        block_noise = crandn(rng, (n_beams, k), noise_var)
        snapshots = (hmat @ psi + block_noise) @ psi.conj().T / k
        out[m * k:(m + 1) * k, :] = w.W[m * k:(m + 1) * k, :] @ snapshots
    return out


def _effective_matrix(w: SensingMatrix, d) -> tuple[np.ndarray, np.ndarray | None]:
    """Compose the OMP/SD operating matrix; returns (A, synthesis or None)."""
    if d is None or isinstance(d, TransformOperator):
        # grid estimation: the beamspace channel is its own sparse unknown
        return w.W, None
    if isinstance(d, Dictionary):
        return w.W @ d.atoms, d.atoms
    raise TypeError(f"unsupported estimation dictionary: {type(d)!r}")


def estimate_omp(y: np.ndarray, w: SensingMatrix, d, s: int) -> np.ndarray:
    """Greedy sparse estimate of one user's beamspace channel.

    Solves y ~ (W D) w_hat with OMP and returns D @ w_hat; with a grid
    operator (or None) the unknown beamspace vector is treated as sparse in
    itself, so the atoms are the identity columns and the estimate is the
    embedded coefficient vector.
    """
    a, synthesis = _effective_matrix(w, d)
    code = omp(y, a, s_max=s)
    dense = code.to_dense()
    return dense if synthesis is None else synthesis @ dense


def estimate_sd(y: np.ndarray, w: SensingMatrix, n_components: int, v: int,
                d=None, grouping: str = "window") -> np.ndarray:
    """Support-detection estimate: one path component per outer iteration.

    Each iteration detects the strongest column by correlation with the
    residual and admits a group of v columns: the cyclic index window
    centered on the peak (grouping="window", the beam-grid layout) or the v
    strongest correlations (grouping="correlated", meaningful for learned
    atoms with no index adjacency). Overlapping groups are merged, admitted
    entries are refit jointly by least squares, and the final estimate is
    synthesized from the union support.
    """
    a, synthesis = _effective_matrix(w, d)
    n_cols = a.shape[1]
    if v < 1 or n_components < 1:
        raise ValueError("need v >= 1 and n_components >= 1")
    if v * n_components > n_cols:
        raise ValueError("v * n_components exceeds the number of columns")
    if grouping not in ("window", "correlated"):
        raise ValueError(f"unknown grouping {grouping!r}")

    support: list[int] = []
    coeffs = np.zeros(0, dtype=complex)
    residual = np.asarray(y, dtype=complex).ravel().copy()
    for _ in range(n_components):
        corr = np.abs(a.conj().T @ residual)
        if support:
            corr[support] = -1.0
        if grouping == "window":
            peak = int(np.argmax(corr))
            group = [(peak + off) % n_cols for off in range(-((v - 1) // 2), v - (v - 1) // 2)]
        else:
            group = [int(j) for j in np.argsort(-corr, kind="stable")[:v]]
        support = sorted(set(support) | set(group))
        coeffs = least_squares(a[:, support], y)
        residual = y - a[:, support] @ coeffs

    dense = np.zeros(n_cols, dtype=complex)
    dense[support] = coeffs
    return dense if synthesis is None else synthesis @ dense


def represent_channel(realization: ChannelRealization, d_h: Dictionary,
                      s_c: int) -> tuple[list[SparseCode], BeamspaceChannel]:
    """Sparse-code each user channel over the representation dictionary.

    The beamspace channel column for user k is the code vector embedded in
    atom-index space; the synthesized spatial channel used downstream is
    D_H @ w_k.
    """
    if d_h.signal_dim != realization.H.shape[0]:
        raise ValueError("dictionary signal_dim must match the antenna count")
    codes = []
    embedded = np.zeros((d_h.n_atoms, realization.H.shape[1]), dtype=complex)
    for k in range(realization.H.shape[1]):
        code = omp(realization.H[:, k], d_h.atoms, s_c)
        codes.append(code)
        embedded[:, k] = code.to_dense()
    return codes, BeamspaceChannel(H_tilde=embedded, operator_kind=KIND_LEARNED)


def nmse(h_hat: np.ndarray, h_ref: np.ndarray) -> float:
    """||H_hat - H_ref||_F^2 / ||H_ref||_F^2."""
    h_hat = np.asarray(h_hat)
    h_ref = np.asarray(h_ref)
    if h_hat.shape != h_ref.shape:
        raise ValueError(f"shape mismatch: {h_hat.shape} vs {h_ref.shape}")
    denom = np.linalg.norm(h_ref) ** 2
    if denom == 0.0:
        raise ValueError("reference channel is identically zero")
    return float(np.linalg.norm(h_hat - h_ref) ** 2 / denom)
