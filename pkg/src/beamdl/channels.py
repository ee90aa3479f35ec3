# Spatial-domain mmWave massive-MIMO channel generators (clustered low-rank
# model and geometry-based stochastic model) for uniform and perturbed
# linear arrays.
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

HALF_WAVELENGTH = 0.5

# Geometry-based model constants: a cell keeps a fixed population of far
# scattering clusters; each user combines the nearest few plus one local
# cluster at its own position.
N_CLUSTERS_TOTAL = 7


def crandn(rng: np.random.Generator, shape, var: float = 1.0) -> np.ndarray:
    """Circularly-symmetric complex Gaussian, CN(0, var) per entry."""
    return np.sqrt(var / 2.0) * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


@dataclass
class ArrayGeometry:
    """Linear array described by per-element spacings in wavelength units.

    spacings[i] is the gap between elements i-1 and i; the first entry is a
    nominal placeholder (element 0 sits at the origin). Uniform arrays carry
    all entries equal to 0.5.
    """

    n_antennas: int
    spacings: np.ndarray

    def __post_init__(self):
        self.spacings = np.asarray(self.spacings, dtype=float)
        if self.n_antennas < 1:
            raise ValueError("need at least one antenna")
        if self.spacings.shape != (self.n_antennas,):
            raise ValueError("spacings must hold one entry per element")

    @property
    def positions(self) -> np.ndarray:
        """Cumulative element positions in wavelengths, first element at 0."""
        p = np.cumsum(self.spacings)
        return p - p[0]

    @property
    def is_uniform(self) -> bool:
        return bool(np.all(self.spacings == self.spacings[0]))


def uniform_geometry(n: int) -> ArrayGeometry:
    """Half-wavelength uniform linear array."""
    return ArrayGeometry(n, np.full(n, HALF_WAVELENGTH))


def gen_nula_geometry(n: int, rng: np.random.Generator) -> ArrayGeometry:
    """Perturbed array: spacings i.i.d. uniform on [0.45, 0.55] wavelengths."""
    if n < 2:
        raise ValueError("need at least two antennas")
    return ArrayGeometry(n, rng.uniform(0.45, 0.55, size=n))


def angle_to_spatial(theta: float) -> float:
    """Spatial direction psi = (d/lambda) sin(theta) at nominal half-wavelength spacing."""
    return HALF_WAVELENGTH * np.sin(theta)


def spatial_to_angle(psi: float) -> float:
    """Inverse of angle_to_spatial; psi must lie in [-0.5, 0.5]."""
    return np.arcsin(psi / HALF_WAVELENGTH)


def steering_vector(geometry: ArrayGeometry, theta: float) -> np.ndarray:
    """Unit-norm array response to a plane wave from physical angle theta.

    Entry n is exp(-j 2 pi p_n sin(theta)) / sqrt(N) with p_n the cumulative
    element position in wavelengths, which reduces to the classical uniform
    form exp(-j 2 pi psi n) for half-wavelength spacing.
    """
    phase = -2j * np.pi * geometry.positions * np.sin(theta)
    return np.exp(phase) / np.sqrt(geometry.n_antennas)


@dataclass
class PathComponent:
    gain: complex
    physical_angle: float
    spatial_direction: float


@dataclass
class SVParams:
    """Clustered low-rank channel: one LoS plus n_nlos NLoS components."""

    n_antennas: int
    n_users: int
    n_nlos: int = 2
    los_gain_variance: float = 1.0
    nlos_gain_variance: float = 10 ** -0.5

    def __post_init__(self):
        if self.n_nlos < 0:
            raise ValueError("n_nlos must be >= 0")
        if self.los_gain_variance <= 0 or self.nlos_gain_variance <= 0:
            raise ValueError("gain variances must be positive")


@dataclass
class GSCMParams:
    """Geometry-based stochastic model, single-cell urban layout."""

    n_users: int
    cell_radius_m: float = 1200.0
    n_clusters_used: int = 4
    subpaths_per_cluster: int = 20
    angular_spread_deg: float = 4.0
    cluster_distance_range_m: tuple[float, float] = (300.0, 800.0)
    ue_distance_range_m: tuple[float, float] = (500.0, 1200.0)

    def __post_init__(self):
        if self.n_clusters_used < 1 or self.subpaths_per_cluster < 1:
            raise ValueError("need at least one cluster and one subpath")
        if self.angular_spread_deg <= 0:
            raise ValueError("angular spread must be positive")
        if self.n_clusters_used > N_CLUSTERS_TOTAL:
            raise ValueError(f"at most {N_CLUSTERS_TOTAL} clusters available")


@dataclass
class ChannelRealization:
    """Multiuser spatial channel H (N x K) plus the paths that generated it."""

    H: np.ndarray
    per_user_paths: list[list[PathComponent]]
    model_tag: str                 # "SV" | "GSCM"
    geometry: ArrayGeometry

    def rebuild_column(self, k: int) -> np.ndarray:
        """Recompute column k from its stored path parameters."""
        paths = self.per_user_paths[k]
        h = np.zeros(self.geometry.n_antennas, dtype=complex)
        for p in paths:
            h += p.gain * steering_vector(self.geometry, p.physical_angle)
        if self.model_tag == "SV":
            h *= np.sqrt(self.geometry.n_antennas / len(paths))
        return h


def gen_sv_channel(params: SVParams, geometry: ArrayGeometry,
                   rng: np.random.Generator) -> ChannelRealization:
    """Draw a multiuser channel h_k = sqrt(N/(L+1)) sum_i beta_i a(psi_i).

    The LoS gain is CN(0, los_gain_variance) and each NLoS gain is
    CN(0, nlos_gain_variance); spatial directions are i.i.d. uniform on
    [-0.5, 0.5] and mapped to physical angles before steering.
    """
    n, k, L = params.n_antennas, params.n_users, params.n_nlos
    if geometry.n_antennas != n:
        raise ValueError("geometry does not match params.n_antennas")
    H = np.zeros((n, k), dtype=complex)
    per_user = []
    scale = np.sqrt(n / (L + 1))
    for u in range(k):
        gains = np.concatenate([
            crandn(rng, 1, params.los_gain_variance),
            crandn(rng, L, params.nlos_gain_variance),
        ])
        psis = rng.uniform(-0.5, 0.5, size=L + 1)
        paths = []
        h = np.zeros(n, dtype=complex)
        for g, psi in zip(gains, psis):
            theta = spatial_to_angle(psi)
            h += g * steering_vector(geometry, theta)
            paths.append(PathComponent(gain=complex(g), physical_angle=float(theta),
                                       spatial_direction=float(psi)))
        H[:, u] = scale * h
        per_user.append(paths)
    return ChannelRealization(H=H, per_user_paths=per_user, model_tag="SV", geometry=geometry)


def gen_gscm_channel(params: GSCMParams, geometry: ArrayGeometry,
                     rng: np.random.Generator) -> ChannelRealization:
    """Draw a multiuser channel h_k = sum_clusters sum_subpaths beta a(theta).

    Seven far clusters are placed once per realization (azimuth uniform in
    [-pi/2, pi/2], distance in cluster_distance_range_m) and shared by all
    users; each user combines the cluster at its own position with the three
    nearest far clusters. Subpath angles sit within +/- spread/2 of the
    cluster centroid; subpath gains are CN(0, 1/(N_c*N_s)).
    """
    n, k = geometry.n_antennas, params.n_users
    d_lo, d_hi = params.cluster_distance_range_m
    u_lo, u_hi = params.ue_distance_range_m
    half_spread = np.deg2rad(params.angular_spread_deg) / 2.0

    cl_angles = rng.uniform(-np.pi / 2, np.pi / 2, size=N_CLUSTERS_TOTAL)
    cl_dists = rng.uniform(d_lo, d_hi, size=N_CLUSTERS_TOTAL)
    cl_xy = np.stack([cl_dists * np.cos(cl_angles), cl_dists * np.sin(cl_angles)], axis=1)

    gain_var = 1.0 / (params.n_clusters_used * params.subpaths_per_cluster)
    H = np.zeros((n, k), dtype=complex)
    per_user = []
    for u in range(k):
        ue_angle = rng.uniform(-np.pi / 2, np.pi / 2)
        ue_dist = rng.uniform(u_lo, u_hi)
        ue_xy = np.array([ue_dist * np.cos(ue_angle), ue_dist * np.sin(ue_angle)])
        nearest = np.argsort(np.linalg.norm(cl_xy - ue_xy, axis=1))[: params.n_clusters_used - 1]
        centroid_angles = np.concatenate([[ue_angle], cl_angles[nearest]])

        paths = []
        h = np.zeros(n, dtype=complex)
        for centroid in centroid_angles:
            offsets = rng.uniform(-half_spread, half_spread, size=params.subpaths_per_cluster)
            thetas = np.clip(centroid + offsets, -np.pi / 2, np.pi / 2)
            gains = crandn(rng, params.subpaths_per_cluster, gain_var)
            for g, theta in zip(gains, thetas):
                h += g * steering_vector(geometry, theta)
                paths.append(PathComponent(gain=complex(g), physical_angle=float(theta),
                                           spatial_direction=float(angle_to_spatial(theta))))
        H[:, u] = h
        per_user.append(paths)
    return ChannelRealization(H=H, per_user_paths=per_user, model_tag="GSCM", geometry=geometry)
