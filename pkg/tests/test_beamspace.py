import numpy as np
import pytest

from beamdl.beamspace import (
    build_dft_operator,
    empirical_leakage,
    grid_directions,
    power_leakage_worst_ula,
    to_beamspace,
)
from beamdl.channels import (
    ChannelRealization,
    SVParams,
    gen_nula_geometry,
    gen_sv_channel,
    spatial_to_angle,
    steering_vector,
    uniform_geometry,
)


def on_grid_channel(n, grid_index, gain=1.0):
    """Single path exactly on beam-grid direction: h = sqrt(N) g a(psi_bar)."""
    g = uniform_geometry(n)
    psi = grid_directions(n)[grid_index]
    h = np.sqrt(n) * gain * steering_vector(g, spatial_to_angle(psi))
    return ChannelRealization(H=h[:, None], per_user_paths=[[]], model_tag="SV", geometry=g)


class TestDFTOperator:
    def test_two_antenna_hand_values(self):
        # grid directions for N=2 are -0.25 and +0.25; row n is a(psi_bar_n)^H
        op = build_dft_operator(uniform_geometry(2))
        expected_dirs = np.array([-0.25, 0.25])
        assert np.allclose(grid_directions(2), expected_dirs)
        for i, psi in enumerate(expected_dirs):
            manual = np.array([1.0, np.exp(-2j * np.pi * psi)]) / np.sqrt(2)
            assert np.allclose(op.matrix[i, :], manual.conj(), atol=1e-12)

    @pytest.mark.parametrize("n", [4, 16, 64])
    def test_unitary_for_uniform_array(self, n):
        op = build_dft_operator(uniform_geometry(n))
        gram = op.matrix @ op.matrix.conj().T
        assert np.abs(gram - np.eye(n)).max() < 1e-9

    def test_deterministic(self):
        g = uniform_geometry(8)
        a = build_dft_operator(g).matrix
        b = build_dft_operator(g).matrix
        assert np.array_equal(a, b)

    def test_nula_operator_not_unitary_but_close(self):
        rng = np.random.default_rng(0)
        op = build_dft_operator(gen_nula_geometry(32, rng))
        gram = op.matrix @ op.matrix.conj().T
        off = np.abs(gram - np.eye(32)).max()
        assert off > 1e-9           # perturbed hardware breaks orthogonality
        assert off < 0.5


class TestToBeamspace:
    def test_zero_channel(self):
        g = uniform_geometry(4)
        ch = ChannelRealization(H=np.zeros((4, 2), complex), per_user_paths=[[], []],
                                model_tag="SV", geometry=g)
        bs = to_beamspace(ch, build_dft_operator(g))
        assert np.all(bs.H_tilde == 0)

    def test_on_grid_path_concentrates_energy(self):
        n = 16
        ch = on_grid_channel(n, grid_index=5)
        bs = to_beamspace(ch, build_dft_operator(uniform_geometry(n)))
        col = np.abs(bs.H_tilde[:, 0]) ** 2
        assert col[5] / col.sum() >= 0.99

    def test_frobenius_preserved_when_unitary(self):
        rng = np.random.default_rng(1)
        g = uniform_geometry(32)
        ch = gen_sv_channel(SVParams(32, 4), g, rng)
        bs = to_beamspace(ch, build_dft_operator(g))
        assert abs(np.linalg.norm(bs.H_tilde) - np.linalg.norm(ch.H)) < 1e-9

    def test_dimension_mismatch(self):
        g = uniform_geometry(4)
        ch = gen_sv_channel(SVParams(8, 1), uniform_geometry(8), np.random.default_rng(0))
        with pytest.raises(ValueError):
            to_beamspace(ch, build_dft_operator(g))


class TestWorstCaseLeakage:
    def test_n2_single_term(self):
        # one-term sum: eta = 1 - 1/2
        assert power_leakage_worst_ula(2) == pytest.approx(0.5)

    def test_n256_near_paper_value(self):
        assert power_leakage_worst_ula(256) == pytest.approx(0.60, abs=0.01)

    def test_strictly_increasing_sweep(self):
        vals = [power_leakage_worst_ula(n) for n in range(2, 258, 2)]
        assert all(b > a for a, b in zip(vals, vals[1:]))
        assert all(0.0 < v < 1.0 for v in vals)

    def test_odd_n_rejected(self):
        with pytest.raises(ValueError):
            power_leakage_worst_ula(5)


class TestEmpiricalLeakage:
    def test_one_sparse_vector(self):
        v = np.zeros(8, complex)
        v[3] = 2.0 - 1.0j
        assert empirical_leakage(v, 1) == 0.0

    def test_uniform_vector_half_budget(self):
        v = np.exp(1j * np.arange(8))
        assert empirical_leakage(v, 4) == pytest.approx(0.5)

    def test_zero_vector(self):
        assert empirical_leakage(np.zeros(4), 2) == 0.0

    def test_on_grid_column_tiny_leakage(self):
        n = 32
        ch = on_grid_channel(n, grid_index=10)
        bs = to_beamspace(ch, build_dft_operator(uniform_geometry(n)))
        assert empirical_leakage(bs.H_tilde[:, 0], 1) < 0.01

    def test_bounds_and_tie_break(self):
        v = np.array([1.0, 1.0, 0.0, 0.0])
        # ties resolve toward lower indices: s=1 keeps index 0
        assert empirical_leakage(v, 1) == pytest.approx(0.5)
        rng = np.random.default_rng(2)
        for _ in range(50):
            x = rng.standard_normal(16) + 1j * rng.standard_normal(16)
            s = int(rng.integers(1, 16))
            val = empirical_leakage(x, s)
            assert 0.0 <= val <= 1.0
