# K-SVD training of sparsifying dictionaries for channel representation and
# for precoding/estimation, plus training-set builders and file persistence.
from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .beamspace import TransformOperator, build_dft_operator
from .channels import ArrayGeometry, GSCMParams, SVParams, gen_gscm_channel, gen_sv_channel
from .linalg import svd
from .sparse import omp, reconstruct

PURPOSE_CHANNEL = "ChannelRepresentation"
PURPOSE_PRECODING = "Precoding"

TAG_CHANNELS = "ChannelRealizations"
TAG_PRECODING = "DFTPrecodingMatrices"

MAGIC = b"BDL1"
_PURPOSE_BYTE = {PURPOSE_CHANNEL: 0, PURPOSE_PRECODING: 1}
_BYTE_PURPOSE = {v: k for k, v in _PURPOSE_BYTE.items()}


@dataclass
class TrainingMeta:
    n_signals: int = 0
    sparsity: int = 0
    iterations: int = 0
    seed: int = 0


@dataclass
class Dictionary:
    """Unit-column sparsifying dictionary (signal_dim x n_atoms)."""

    atoms: np.ndarray
    purpose_tag: str = PURPOSE_CHANNEL
    training_meta: TrainingMeta = field(default_factory=TrainingMeta)
    error_curve: np.ndarray | None = None

    @property
    def signal_dim(self) -> int:
        return self.atoms.shape[0]

    @property
    def n_atoms(self) -> int:
        return self.atoms.shape[1]


@dataclass
class TrainingSet:
    signals: np.ndarray            # (signal_dim, M)
    source_tag: str = TAG_CHANNELS


def _code_columns(x: np.ndarray, d: np.ndarray, s: int) -> np.ndarray:
    w = np.zeros((d.shape[1], x.shape[1]), dtype=complex)
    for i in range(x.shape[1]):
        w[:, i] = omp(x[:, i], d, s).to_dense()
    return w


def ksvd_train(training: TrainingSet, n_atoms: int, s: int, num_iters: int,
               rng: np.random.Generator) -> Dictionary:
    """Alternating sparse coding / rank-1 atom updates (K-SVD).

    Each iteration codes every training column with OMP at sparsity s (a
    fresh code is kept only when it does not raise that column's residual,
    which makes the full-iteration representation error non-increasing),
    then updates every atom together with its coefficient row by the rank-1
    truncation of the restricted residual. An atom used by no signal is
    replaced by the currently worst-represented training column, normalized.
    """
    x = np.asarray(training.signals, dtype=complex)
    m = x.shape[1]
    if m < 1 or not np.any(np.abs(x) > 0):
        raise ValueError("degenerate training set")
    if s < 1:
        raise ValueError("sparsity must be >= 1")
    if n_atoms > m:
        raise ValueError("need at least one training signal per atom")

    col_norms = np.linalg.norm(x, axis=0)
    usable = np.flatnonzero(col_norms > 1e-12)
    picks = rng.choice(usable, size=n_atoms, replace=n_atoms > usable.size)
    d = x[:, picks] / col_norms[picks]

    w = np.zeros((n_atoms, m), dtype=complex)
    errors = np.empty(num_iters)
    for it in range(num_iters):
        # sparse coding, monotone per column
        for i in range(m):
            fresh = omp(x[:, i], d, s).to_dense()
            if np.linalg.norm(x[:, i] - d @ fresh) <= np.linalg.norm(x[:, i] - d @ w[:, i]):
                w[:, i] = fresh

        # atom-by-atom rank-1 updates
        for a in range(n_atoms):
            used = np.flatnonzero(np.abs(w[a, :]) > 0)
            if used.size == 0:
                resid = x - d @ w
                worst = int(np.argmax(np.linalg.norm(resid, axis=0)))
                col = x[:, worst]
                norm = np.linalg.norm(col)
                if norm > 1e-12:
                    d[:, a] = col / norm
                else:
                    v = rng.standard_normal(d.shape[0]) + 1j * rng.standard_normal(d.shape[0])
                    d[:, a] = v / np.linalg.norm(v)
                continue
            partial = x[:, used] - d @ w[:, used] + np.outer(d[:, a], w[a, used])
            res = svd(partial)
            d[:, a] = res.left_vectors[:, 0]
            w[a, used] = res.singular_values[0] * res.right_vectors[:, 0].conj()
        errors[it] = np.linalg.norm(x - d @ w)

    return Dictionary(atoms=d, error_curve=errors,
                      training_meta=TrainingMeta(n_signals=m, sparsity=s, iterations=num_iters))


def _draw_channel(model, geometry: ArrayGeometry, rng: np.random.Generator):
    if isinstance(model, SVParams):
        return gen_sv_channel(model, geometry, rng)
    if isinstance(model, GSCMParams):
        return gen_gscm_channel(model, geometry, rng)
    raise TypeError(f"unsupported channel model params: {type(model)!r}")


def build_channel_training_set(model, geometry: ArrayGeometry, m: int,
                               rng: np.random.Generator) -> TrainingSet:
    """Collect m per-user spatial channel vectors drawn from the generator."""
    if m < 1:
        raise ValueError("need at least one training signal")
    cols = []
    while len(cols) < m:
        realization = _draw_channel(model, geometry, rng)
        cols.extend(realization.H.T)
    signals = np.array(cols[:m]).T
    return TrainingSet(signals=signals, source_tag=TAG_CHANNELS)


def build_precoding_training_set(geometry: ArrayGeometry, m: int, rng: np.random.Generator,
                                 representation: Dictionary | None = None,
                                 sparsity: int = 8) -> TrainingSet:
    """Direction-primitive training set for the precoding/estimation dictionary.

    Columns are beamspace images of single-path channel draws: with the
    default DFT transform each column is U @ h (a leaky beam-grid response);
    given a learned representation dictionary, each column is instead the
    sparse code of h over it, so the trained dictionary lives in the matching
    coefficient domain. Zero draws are rejected and redrawn.
    """
    if m < 1:
        raise ValueError("need at least one training signal")
    params = SVParams(n_antennas=geometry.n_antennas, n_users=1, n_nlos=0)
    op = build_dft_operator(geometry) if representation is None else None
    cols = []
    while len(cols) < m:
        h = gen_sv_channel(params, geometry, rng).H[:, 0]
        if op is not None:
            col = op.matrix @ h
        else:
            col = omp(h, representation.atoms, sparsity).to_dense()
        if np.linalg.norm(col) < 1e-12:
            continue
        cols.append(col)
    return TrainingSet(signals=np.array(cols).T, source_tag=TAG_PRECODING)


def sparse_representation_gain(d: Dictionary, f: TransformOperator, holdout: TrainingSet,
                               s: int) -> tuple[float, float]:
    """Mean relative s-sparse coding residuals over (learned atoms, F^H atoms)."""
    atoms_f = f.matrix.conj().T
    x = holdout.signals
    res_d = np.empty(x.shape[1])
    res_f = np.empty(x.shape[1])
    for i in range(x.shape[1]):
        col = x[:, i]
        norm = np.linalg.norm(col)
        if norm == 0.0:
            res_d[i] = res_f[i] = 0.0
            continue
        res_d[i] = np.linalg.norm(col - reconstruct(d.atoms, omp(col, d.atoms, s))) / norm
        res_f[i] = np.linalg.norm(col - reconstruct(atoms_f, omp(col, atoms_f, s))) / norm
    return float(res_d.mean()), float(res_f.mean())


def save_dictionary(d: Dictionary, path) -> None:
    """Write the flat binary format: magic, u32 dims, purpose byte, u64 seed,
    then column-major interleaved little-endian float64 re/im entries."""
    atoms = np.asarray(d.atoms, dtype=complex)
    header = MAGIC + struct.pack(
        "<IIBQ", atoms.shape[0], atoms.shape[1],
        _PURPOSE_BYTE[d.purpose_tag], d.training_meta.seed & 0xFFFFFFFFFFFFFFFF,
    )
    interleaved = np.empty(2 * atoms.size, dtype="<f8")
    flat = atoms.T.ravel()          # column-major over the matrix
    interleaved[0::2] = flat.real
    interleaved[1::2] = flat.imag
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(interleaved.tobytes())


def load_dictionary(path) -> Dictionary:
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != MAGIC:
        raise ValueError(f"{path}: not a dictionary file (bad magic)")
    rows, cols, purpose, seed = struct.unpack("<IIBQ", blob[4:21])
    data = np.frombuffer(blob[21:], dtype="<f8")
    if data.size != 2 * rows * cols:
        raise ValueError(f"{path}: truncated payload")
    atoms = (data[0::2] + 1j * data[1::2]).reshape(cols, rows).T
    return Dictionary(atoms=atoms, purpose_tag=_BYTE_PURPOSE[purpose],
                      training_meta=TrainingMeta(seed=seed))
