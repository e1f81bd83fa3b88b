"""Tests for sector-resolved diagonalization and dense diagnostics."""

import itertools

import numpy as np
import pytest

from iprep import ed, models, pauli, rg

import oracles


class TestSectorBasis:
    def test_half_filling_count(self):
        assert ed.sector_basis(4, 0).states.size == 6

    @pytest.mark.parametrize("n", [2, 5, 8])
    def test_sector_dimensions_tile_full_space(self, n):
        total = sum(
            ed.sector_basis(n, m).states.size for m in range(-n, n + 1, 2)
        )
        assert total == 2**n

    def test_fixed_popcount_and_order(self):
        basis = ed.sector_basis(6, 2)
        counts = np.bitwise_count(basis.states)
        assert (counts == 4).all()
        assert (np.diff(basis.states) > 0).all()

    def test_infeasible_rejected(self):
        with pytest.raises(ValueError):
            ed.sector_basis(4, 1)
        with pytest.raises(ValueError):
            ed.sector_basis(4, 6)
        with pytest.raises(ValueError):
            ed.sector_basis(0, 0)
        with pytest.raises(ValueError):
            ed.sector_basis(30, 0)


class TestDenseEmbedding:
    def test_positions_are_bit_complements(self):
        basis = ed.sector_basis(3, 1)
        np.testing.assert_array_equal(
            ed.dense_index_map(basis), 7 ^ basis.states
        )

    def test_embedding_preserves_quadratic_form(self):
        rng = np.random.default_rng(3)
        n, m, delta = 5, 1, 0.6
        basis = ed.sector_basis(n, m)
        vector = rng.standard_normal(basis.states.size)
        vector /= np.linalg.norm(vector)
        full = ed.embed_sector_vector(basis, vector)
        dense = pauli.to_dense(models.build_xxz(n, delta))
        block = ed.sector_hamiltonian(basis, delta)
        assert np.vdot(full, dense @ full).real == pytest.approx(
            vector @ block @ vector, abs=1e-12
        )
        assert np.linalg.norm(full) == pytest.approx(1.0, abs=1e-12)

    def test_wrong_length_rejected(self):
        basis = ed.sector_basis(4, 0)
        with pytest.raises(ValueError):
            ed.embed_sector_vector(basis, np.ones(5))


class TestSectorHamiltonian:
    def test_blocks_rebuild_dense_operator(self):
        n, delta = 5, 0.7
        dense = pauli.to_dense(models.build_xxz(n, delta))
        covered = np.zeros(dense.shape, dtype=bool)
        for m in range(-n, n + 1, 2):
            basis = ed.sector_basis(n, m)
            idx = ed.dense_index_map(basis)
            block = ed.sector_hamiltonian(basis, delta)
            np.testing.assert_allclose(
                dense[np.ix_(idx, idx)].real, block, atol=1e-14
            )
            covered[np.ix_(idx, idx)] = True
        assert np.abs(dense[~covered]).max() == 0.0

    def test_two_site_ring_doubles_the_bond(self):
        block = ed.sector_hamiltonian(ed.sector_basis(2, 0), 0.8)
        np.testing.assert_allclose(block, [[0.4, -1.0], [-1.0, 0.4]])

    def test_symmetric(self):
        block = ed.sector_hamiltonian(ed.sector_basis(6, 0), 1.3)
        np.testing.assert_array_equal(block, block.T)


class TestXXZSectorGap:
    def test_free_fermion_oracle(self):
        for n in range(3, 10):
            for n_down in range(1, n):
                m = n - 2 * n_down
                record = ed.xxz_sector_gap(n, m, 0.0)
                assert record.gap == pytest.approx(
                    oracles.xx_sector_gap(n, n_down), abs=1e-9
                )

    def test_sector_ground_state_nondegenerate(self):
        # The hopping graph within a sector is connected with negative
        # off-diagonal entries, so the lowest level is always simple.
        for delta in (0.0, 0.5, 1.0):
            record = ed.xxz_sector_gap(8, 4, delta)
            assert record.gap > 1e-6
            assert not record.degenerate

    def test_rejections(self):
        with pytest.raises(ValueError):
            ed.xxz_sector_gap(4, 4, 0.5)
        with pytest.raises(ValueError):
            ed.xxz_sector_gap(4, 1, 0.5)
        with pytest.raises(ValueError):
            ed.xxz_sector_gap(20, 10, 0.5, dense_limit=100)

    @pytest.mark.parametrize(
        "delta, target, window", [(0.5, -1.0, 0.15), (1.0, -2.0, 0.3)]
    )
    def test_quarter_filling_gap_scaling(self, delta, target, window):
        sizes = [8, 12, 16]
        gaps = [
            ed.xxz_sector_gap(n, n - 2 * (n // 4), delta).gap for n in sizes
        ]
        slope, _ = ed.loglog_slope(sizes, gaps)
        assert abs(slope - target) < window


class TestJointChargeSpectrum:
    def test_binary_vectors_at_zero_coupling(self):
        table = ed.joint_charge_spectrum(models.central_spin(5), 0.0)
        expected = np.array(list(itertools.product([0.0, 1.0], repeat=5)))
        np.testing.assert_allclose(table, expected, atol=1e-12)

    def test_matches_continuation(self):
        spec = models.central_spin(5)
        g = 0.3
        scan = rg.continuation_scan(spec, g_target=g)
        roots = np.asarray(scan.final.roots, dtype=float)
        table = ed.joint_charge_spectrum(spec, g)
        order = np.lexsort(roots[:, ::-1].T)
        np.testing.assert_allclose(roots[order], table, atol=1e-8)

    def test_vectors_solve_charge_equations(self):
        spec = models.constant_spacing(4)
        g = 0.2
        for q in ed.joint_charge_spectrum(spec, g):
            residual = rg.qbe_residual(q, g, spec, round(q.sum()))
            assert np.abs(residual).max() < 1e-9

    def test_deterministic_and_probe_independent(self):
        spec = models.central_spin(4)
        first = ed.joint_charge_spectrum(spec, 0.25)
        np.testing.assert_array_equal(
            first, ed.joint_charge_spectrum(spec, 0.25)
        )
        np.testing.assert_allclose(
            first, ed.joint_charge_spectrum(spec, 0.25, seed=97), atol=1e-9
        )

    def test_site_limit(self):
        with pytest.raises(ValueError):
            ed.joint_charge_spectrum(models.central_spin(11), 0.1)


class TestEntanglementEntropy:
    def test_product_state(self):
        state = np.zeros(16)
        state[5] = 1.0
        assert ed.entanglement_entropy(state, 2) == 0.0

    def test_pair_across_cut(self):
        state = np.zeros(16)
        state[0] = state[5] = 2**-0.5
        assert ed.entanglement_entropy(state, 2) == pytest.approx(np.log(2))

    def test_maximally_entangled_half_cut(self):
        state = np.zeros(16)
        state[[0, 5, 10, 15]] = 0.5
        assert ed.entanglement_entropy(state, 2) == pytest.approx(
            2 * np.log(2)
        )

    def test_half_cut_bound(self):
        rng = np.random.default_rng(7)
        for _ in range(5):
            state = rng.standard_normal(64) + 1j * rng.standard_normal(64)
            state /= np.linalg.norm(state)
            entropy = ed.entanglement_entropy(state, 3)
            assert 0.0 <= entropy <= 3 * np.log(2) + 1e-12

    def test_both_sides_agree(self):
        rng = np.random.default_rng(11)
        state = rng.standard_normal(32)
        state /= np.linalg.norm(state)
        swapped = state.reshape(4, 8).T.reshape(-1)
        assert ed.entanglement_entropy(state, 2) == pytest.approx(
            ed.entanglement_entropy(swapped, 3), abs=1e-12
        )

    def test_rejections(self):
        with pytest.raises(ValueError):
            ed.entanglement_entropy(np.ones(4), 1)
        with pytest.raises(ValueError):
            ed.entanglement_entropy(np.array([1.0, 0.0, 0.0]), 1)
        state = np.zeros(8)
        state[0] = 1.0
        with pytest.raises(ValueError):
            ed.entanglement_entropy(state, 0)
        with pytest.raises(ValueError):
            ed.entanglement_entropy(state, 3)


class TestLoglogSlope:
    def test_exact_power_laws(self):
        xs = np.array([4.0, 8.0, 16.0, 32.0])
        slope, stderr = ed.loglog_slope(xs, 3.0 / xs)
        assert slope == pytest.approx(-1.0, abs=1e-12)
        assert stderr == pytest.approx(0.0, abs=1e-12)
        slope, _ = ed.loglog_slope(xs, 5.0 / xs**2)
        assert slope == pytest.approx(-2.0, abs=1e-12)

    def test_noise_produces_positive_stderr(self):
        rng = np.random.default_rng(5)
        xs = np.array([4.0, 6.0, 8.0, 12.0, 16.0])
        ys = (2.0 / xs) * np.exp(rng.normal(0.0, 0.05, xs.size))
        slope, stderr = ed.loglog_slope(xs, ys)
        assert stderr > 0.0
        assert slope == pytest.approx(-1.0, abs=0.3)

    def test_rejections(self):
        with pytest.raises(ValueError):
            ed.loglog_slope([1.0, 2.0], [1.0, 2.0])
        with pytest.raises(ValueError):
            ed.loglog_slope([1.0, 2.0, 3.0], [1.0, -2.0, 3.0])
        with pytest.raises(ValueError):
            ed.loglog_slope([1.0, 2.0, 3.0], [1.0, 2.0])
