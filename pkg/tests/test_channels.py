import numpy as np
import pytest

from beamdl.channels import (
    ArrayGeometry,
    GSCMParams,
    SVParams,
    gen_gscm_channel,
    gen_nula_geometry,
    gen_sv_channel,
    steering_vector,
    uniform_geometry,
)


class TestGeometry:
    def test_uniform_positions(self):
        g = uniform_geometry(4)
        assert np.allclose(g.positions, [0.0, 0.5, 1.0, 1.5])
        assert g.is_uniform

    def test_nula_spacings_in_range(self):
        rng = np.random.default_rng(0)
        g = gen_nula_geometry(64, rng)
        assert np.all(g.spacings >= 0.45) and np.all(g.spacings <= 0.55)

    def test_nula_mean_spacing(self):
        # uniform-distribution mean oracle: E[spacing] = 0.5, sd = 0.1/sqrt(12)
        rng = np.random.default_rng(1)
        draws = np.concatenate([gen_nula_geometry(100, rng).spacings for _ in range(1000)])
        se = (0.1 / np.sqrt(12.0)) / np.sqrt(draws.size)
        assert abs(draws.mean() - 0.5) < 3 * se

    def test_degenerate_rng_gives_uniform(self):
        class Midpoint:
            def uniform(self, lo, hi, size=None):
                return np.full(size, (lo + hi) / 2.0)

        g = gen_nula_geometry(8, Midpoint())
        assert np.allclose(g.spacings, 0.5)
        assert g.is_uniform


class TestSteeringVector:
    def test_zero_angle_all_ones(self):
        g = uniform_geometry(5)
        assert np.allclose(steering_vector(g, 0.0), np.ones(5) / np.sqrt(5))

    def test_unit_norm_100_random_angles(self):
        rng = np.random.default_rng(2)
        g = gen_nula_geometry(32, rng)
        for theta in rng.uniform(-np.pi / 2, np.pi / 2, size=100):
            assert abs(np.linalg.norm(steering_vector(g, theta)) - 1.0) < 1e-12

    def test_two_element_endfire_hand_value(self):
        # N=2, spacing 0.5, theta = pi/2: entries (1, e^{-j pi}) / sqrt(2)
        g = uniform_geometry(2)
        v = steering_vector(g, np.pi / 2)
        expected = np.array([1.0, np.exp(-1j * np.pi)]) / np.sqrt(2)
        assert np.allclose(v, expected, atol=1e-12)


class TestSVChannel:
    def test_single_forced_path_is_all_ones(self):
        # L=0, beta=1, psi=0: h = sqrt(N) * (1/sqrt(N)) * ones
        class Forced:
            def __init__(self):
                self._n = np.random.default_rng(0)

            def uniform(self, lo, hi, size=None):
                return np.zeros(size)

            def standard_normal(self, size=None):
                # CN(0, var) helper draws re and im; force beta = 1 + 0j
                arr = np.zeros(size)
                if not self._im:
                    arr[...] = np.sqrt(2.0)
                self._im = not self._im
                return arr

            _im = False

        g = uniform_geometry(8)
        ch = gen_sv_channel(SVParams(8, 1, n_nlos=0), g, Forced())
        assert np.allclose(ch.H[:, 0], np.ones(8), atol=1e-12)

    def test_spatial_directions_within_bounds(self):
        rng = np.random.default_rng(3)
        ch = gen_sv_channel(SVParams(16, 4), uniform_geometry(16), rng)
        for paths in ch.per_user_paths:
            assert len(paths) == 3
            for p in paths:
                assert -0.5 <= p.spatial_direction <= 0.5

    def test_columns_rebuild_from_paths(self):
        rng = np.random.default_rng(4)
        g = gen_nula_geometry(16, rng)
        ch = gen_sv_channel(SVParams(16, 4), g, rng)
        for k in range(4):
            assert np.linalg.norm(ch.rebuild_column(k) - ch.H[:, k]) < 1e-10

    def test_mean_energy_matches_analytic_expectation(self):
        # E||h||^2 = N (1 + L * 10^-0.5) / (L + 1) from the generating sum
        rng = np.random.default_rng(5)
        n, L, draws = 16, 2, 10_000
        params = SVParams(n, 1)
        energies = np.empty(draws)
        for i in range(draws):
            energies[i] = np.linalg.norm(gen_sv_channel(params, uniform_geometry(n), rng).H) ** 2
        expected = n * (1 + L * 10 ** -0.5) / (L + 1)
        se = energies.std(ddof=1) / np.sqrt(draws)
        assert abs(energies.mean() - expected) < 3 * se

    def test_default_gain_variances(self):
        p = SVParams(8, 2)
        assert p.los_gain_variance == 1.0
        assert np.isclose(p.nlos_gain_variance, 10 ** -0.5)
        assert p.n_nlos == 2


class TestGSCMChannel:
    def test_single_forced_subpath(self):
        class Forced:
            def uniform(self, lo, hi, size=None):
                if size is None:
                    return 0.0
                return np.zeros(size)

            def standard_normal(self, size=None):
                arr = np.zeros(size)
                if not self._im:
                    arr[...] = np.sqrt(2.0)  # beta = 1 (CN helper: re/2 + im/2 halves)
                self._im = not self._im
                return arr

            _im = False

        g = uniform_geometry(8)
        params = GSCMParams(n_users=1, n_clusters_used=1, subpaths_per_cluster=1)
        ch = gen_gscm_channel(params, g, Forced())
        assert np.allclose(ch.H[:, 0], np.ones(8) / np.sqrt(8), atol=1e-12)

    def test_subpath_angles_within_spread(self):
        rng = np.random.default_rng(6)
        params = GSCMParams(n_users=2)
        half = np.deg2rad(params.angular_spread_deg) / 2
        for _ in range(50):
            ch = gen_gscm_channel(params, uniform_geometry(8), rng)
            for paths in ch.per_user_paths:
                angles = np.array([p.physical_angle for p in paths])
                per_cluster = angles.reshape(params.n_clusters_used,
                                             params.subpaths_per_cluster)
                for cluster in per_cluster:
                    # clipping at +-pi/2 only pulls angles toward the centroid
                    assert cluster.max() - cluster.min() <= 2 * half + 1e-12

    def test_columns_rebuild_from_paths(self):
        rng = np.random.default_rng(7)
        ch = gen_gscm_channel(GSCMParams(n_users=3), uniform_geometry(16), rng)
        for k in range(3):
            assert np.linalg.norm(ch.rebuild_column(k) - ch.H[:, k]) < 1e-10

    def test_path_count(self):
        rng = np.random.default_rng(8)
        params = GSCMParams(n_users=2)
        ch = gen_gscm_channel(params, uniform_geometry(8), rng)
        for paths in ch.per_user_paths:
            assert len(paths) == params.n_clusters_used * params.subpaths_per_cluster

    def test_validation(self):
        with pytest.raises(ValueError):
            GSCMParams(n_users=1, n_clusters_used=0)
        with pytest.raises(ValueError):
            GSCMParams(n_users=1, angular_spread_deg=0.0)
        with pytest.raises(ValueError):
            ArrayGeometry(4, np.ones(3))
