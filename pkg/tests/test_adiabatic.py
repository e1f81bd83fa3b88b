"""Tests for product-formula evolution and the analytic scaling estimates."""

import numpy as np
import pytest
from scipy.linalg import eigh

from iprep import adiabatic, ed, models, pauli, rg

import oracles


def parent_ground(family, g):
    """Dense ground vector of the family operator at one coupling."""
    matrix = pauli.to_dense(family(g))
    _, vectors = eigh(matrix)
    return vectors[:, 0].astype(complex)


class TestSchedule:
    def test_linear_interpolation(self):
        schedule = adiabatic.Schedule(g_start=0.2, g_end=1.0, total_time=4.0)
        assert schedule.coupling(0.0) == pytest.approx(0.2)
        assert schedule.coupling(2.0) == pytest.approx(0.6)
        assert schedule.coupling(4.0) == pytest.approx(1.0)

    def test_nonpositive_time_rejected(self):
        with pytest.raises(ValueError):
            adiabatic.Schedule(0.0, 1.0, 0.0)


class TestEvolve:
    def test_stationary_state_survives_constant_schedule(self):
        family = adiabatic.RGParentFamily(models.central_spin(4), 5)
        g = 0.5
        ground = parent_ground(family, g)
        steps = 400
        schedule = adiabatic.Schedule(g, g, total_time=2.0)
        report = adiabatic.evolve(
            ground, family, schedule, steps, target=ground, checkpoint_every=100
        )
        bound = adiabatic.trotter_bound(
            pauli.one_norm(family(g)), schedule.total_time, steps
        )
        floor = 1.0 - 10.0 * bound
        assert report.final_fidelity >= max(floor, 0.999)
        assert (report.checkpoint_fidelities >= max(floor, 0.999)).all()
        assert (report.checkpoint_fidelities <= 1.0).all()

    def test_first_order_convergence(self):
        rng = np.random.default_rng(2)
        state = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        state /= np.linalg.norm(state)
        family = lambda delta: models.build_xxz(3, delta)
        schedule = adiabatic.Schedule(0.3, 1.2, total_time=3.0)
        reference = adiabatic.evolve(state, family, schedule, 1600).final_state
        errors = [
            np.linalg.norm(
                adiabatic.evolve(state, family, schedule, steps).final_state
                - reference
            )
            for steps in (50, 100, 200)
        ]
        ratios = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
        assert ((ratios > 0.8) & (ratios < 1.2)).all()

    def test_norm_preserved(self):
        family = adiabatic.RGParentFamily(models.central_spin(3), 2)
        state = np.zeros(8, dtype=complex)
        state[(~2) & 0x7] = 1.0
        report = adiabatic.evolve(
            state, family, adiabatic.Schedule(0.0, 1.0, 4.0), 500
        )
        assert report.norm_drift < 1e-10
        assert np.linalg.norm(report.final_state) == pytest.approx(
            1.0, abs=1e-10
        )

    def test_magnetization_sector_preserved(self):
        n = 4
        basis = ed.sector_basis(n, 0)
        block = ed.sector_hamiltonian(basis, 0.3)
        _, vectors = eigh(block)
        state = ed.embed_sector_vector(basis, vectors[:, 0]).astype(complex)
        family = lambda delta: models.build_xxz(n, delta)
        report = adiabatic.evolve(
            state, family, adiabatic.Schedule(0.3, 1.2, 4.0), 600
        )
        total_z = pauli.to_dense(
            pauli.collect(n, [("Z" + "I" * 3, 1.0), ("IZII", 1.0),
                              ("IIZI", 1.0), ("IIIZ", 1.0)])
        )
        final = report.final_state
        drift = abs(np.vdot(final, total_z @ final).real)
        assert drift < 1e-10

    def test_checkpoint_bookkeeping(self):
        family = lambda delta: models.build_xxz(3, delta)
        state = np.zeros(8, dtype=complex)
        state[0] = 1.0
        schedule = adiabatic.Schedule(0.0, 1.0, 1.0)
        report = adiabatic.evolve(
            state, family, schedule, 10, checkpoint_every=3
        )
        np.testing.assert_allclose(report.checkpoint_times, [0.3, 0.6, 0.9])
        assert report.checkpoint_fidelities is None
        assert report.final_fidelity is None
        assert report.dt == pytest.approx(0.1)
        assert report.steps == 10

    def test_input_validation(self):
        family = lambda delta: models.build_xxz(3, delta)
        good = np.zeros(8, dtype=complex)
        good[0] = 1.0
        schedule = adiabatic.Schedule(0.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            adiabatic.evolve(2.0 * good, family, schedule, 10)
        with pytest.raises(ValueError):
            adiabatic.evolve(good, family, schedule, 0)
        with pytest.raises(ValueError):
            adiabatic.evolve(np.ones(6) / np.sqrt(6), family, schedule, 10)
        with pytest.raises(ValueError):
            adiabatic.evolve(good, family, schedule, 10, target=np.ones(4))
        with pytest.raises(ValueError):
            adiabatic.evolve(
                np.ones(16, dtype=complex) / 4.0, family, schedule, 10
            )
        big = np.zeros(2**13, dtype=complex)
        big[0] = 1.0
        with pytest.raises(ValueError):
            adiabatic.evolve(big, family, schedule, 1)

    def test_slower_sweeps_improve_fidelity(self):
        family = adiabatic.RGParentFamily(models.central_spin(3), 3)
        state = np.zeros(8, dtype=complex)
        state[(~3) & 0x7] = 1.0
        target = parent_ground(family, 1.0)
        infidelities = []
        for total_time in (1.0, 2.0, 4.0, 8.0):
            report = adiabatic.evolve(
                state,
                family,
                adiabatic.Schedule(0.0, 1.0, total_time),
                steps=max(64, int(64 * total_time)),
                target=target,
            )
            infidelities.append(1.0 - report.final_fidelity)
        for earlier, later in zip(infidelities, infidelities[1:]):
            assert later < earlier * 1.05


class TestTrotterBound:
    def test_value(self):
        assert adiabatic.trotter_bound(3.0, 2.0, 8) == pytest.approx(
            0.5 * 2.0 * 0.25 * 9.0
        )

    def test_validation(self):
        with pytest.raises(ValueError):
            adiabatic.trotter_bound(-1.0, 1.0, 4)
        with pytest.raises(ValueError):
            adiabatic.trotter_bound(1.0, 1.0, 0)


class TestAdiabaticTime:
    def test_unit_inputs(self):
        assert adiabatic.adiabatic_time(1.0, 1.0, 1.0, 1.0) == pytest.approx(3.0)

    def test_cubic_regime_scaling(self):
        gap = 1e-3
        base = adiabatic.adiabatic_time(1.0, 0.0, gap, 1.0)
        halved = adiabatic.adiabatic_time(1.0, 0.0, gap / 2.0, 1.0)
        assert halved / base == pytest.approx(8.0, rel=1e-2)

    def test_error_budget_inverse(self):
        base = adiabatic.adiabatic_time(1.5, 0.7, 0.3, 1.0)
        assert adiabatic.adiabatic_time(1.5, 0.7, 0.3, 2.0) == pytest.approx(
            base / 2.0
        )

    def test_validation(self):
        with pytest.raises(ValueError):
            adiabatic.adiabatic_time(1.0, 1.0, 0.0, 1.0)
        with pytest.raises(ValueError):
            adiabatic.adiabatic_time(1.0, 1.0, 1.0, 0.0)
        with pytest.raises(ValueError):
            adiabatic.adiabatic_time(-1.0, 1.0, 1.0, 1.0)


class TestDepthEstimate:
    def test_unit_inputs(self):
        assert adiabatic.depth_estimate(1, 1.0, 1.0, 1.0, 1.0) == 1.0

    def test_support_quadratic(self):
        base = adiabatic.depth_estimate(5, 2.0, 3.0, 0.7, 0.1)
        assert adiabatic.depth_estimate(5, 4.0, 3.0, 0.7, 0.1) == pytest.approx(
            4.0 * base
        )

    def test_validation(self):
        with pytest.raises(ValueError):
            adiabatic.depth_estimate(0, 1.0, 1.0, 1.0, 1.0)


class TestRGParentFamily:
    def test_matches_direct_parent_build(self):
        spec = models.central_spin(4)
        family = adiabatic.RGParentFamily(spec, 9)
        for g in (0.0, 0.25, 0.8):
            roots = family.roots_at(g)
            direct = pauli.to_dense(models.build_parent(spec, g, roots))
            np.testing.assert_allclose(
                pauli.to_dense(family(g)), direct, atol=1e-12
            )

    def test_seed_roots_at_zero_coupling(self):
        spec = models.constant_spacing(4)
        family = adiabatic.RGParentFamily(spec, 6)
        np.testing.assert_array_equal(
            family.roots_at(0.0), rg.seed_roots(4)[6]
        )

    def test_branch_stable_under_jump_sequence(self):
        # A single uncapped Newton jump between distant couplings can land
        # on a neighboring root; the capped walk must return to the seed.
        spec = models.central_spin(4)
        family = adiabatic.RGParentFamily(spec, 5)
        for g in (1.0, 0.5, 0.0):
            family(g)
        state = np.zeros(16, dtype=complex)
        state[(~5) & 0xF] = 1.0
        dense = pauli.to_dense(family(0.0))
        assert np.abs(dense @ state).max() < 1e-10

    def test_continued_state_stays_zero_mode(self):
        spec = models.central_spin(4)
        family = adiabatic.RGParentFamily(spec, 11)
        dense = pauli.to_dense(family(0.7)).real
        values = np.linalg.eigvalsh(dense)
        assert abs(values[0]) < 1e-9

    def test_target_index_validated(self):
        with pytest.raises(ValueError):
            adiabatic.RGParentFamily(models.central_spin(3), 8)
        with pytest.raises(ValueError):
            adiabatic.RGParentFamily(models.central_spin(3), -1)
