"""Tests for root continuation: equations, predictor, scan, and bounds."""

import numpy as np
import pytest

from iprep import models, pauli, rg

import oracles


@pytest.fixture(scope="module")
def short_scan():
    """A quick scan of the 4-site central-spin model to a moderate coupling."""
    spec = models.central_spin(4)
    g_target = 0.8 * models.max_level_spacing(spec)
    snaps = np.linspace(0.0, g_target, 6)[1:]
    return rg.continuation_scan(spec, g_target, snapshot_couplings=snaps)


class TestRootEquations:
    def test_residual_matches_independent_transcription(self):
        rng = np.random.default_rng(3)
        spec = models.random_uniform(5, seed=8)
        for _ in range(5):
            q = rng.normal(size=5)
            g = float(rng.uniform(0.1, 2.0))
            m = int(rng.integers(0, 6))
            expected = oracles.quadratic_root_equations(q, g, spec.epsilon, m)
            np.testing.assert_allclose(
                rg.qbe_residual(q, g, spec, m), expected, atol=1e-12
            )

    def test_seeds_solve_equations_at_zero_coupling(self):
        spec = models.central_spin(4)
        roots = rg.seed_roots(4)
        sectors = rg.sector_magnetizations(4)
        for q, m in zip(roots, sectors):
            res = rg.qbe_residual(q, 0.0, spec, int(m))
            np.testing.assert_allclose(res, 0.0, atol=1e-14)

    def test_seed_order_matches_bit_patterns(self):
        roots = rg.seed_roots(3)
        assert roots.shape == (8, 3)
        np.testing.assert_array_equal(roots[1], [0, 0, 1])
        np.testing.assert_array_equal(roots[4], [1, 0, 0])
        np.testing.assert_array_equal(
            rg.sector_magnetizations(3), [0, 1, 1, 2, 1, 2, 2, 3]
        )

    def test_jacobian_matches_finite_differences(self):
        rng = np.random.default_rng(7)
        spec = models.central_spin(5)
        q = rng.normal(size=5)
        g, m = 0.37, 2
        jac = rg.qbe_jacobian(q, g, spec)
        fd = oracles.fd_gradient(lambda x: rg.qbe_residual(x, g, spec, m), q)
        assert jac.shape == (6, 5)
        np.testing.assert_allclose(jac, fd, atol=1e-7)

    def test_jacobian_off_diagonal_sign(self):
        spec = models.constant_spacing(3)
        q = np.array([0.2, 0.4, 0.9])
        g = 0.5
        jac = rg.qbe_jacobian(q, g, spec)
        # d f_k / d q_l = -(g/2) / (eps_k - eps_l) for k != l
        assert jac[0, 1] == pytest.approx(-0.5 * g / (-1 / 3))
        assert jac[2, 0] == pytest.approx(-0.5 * g / (2 / 3))
        np.testing.assert_allclose(jac[3], 1.0)

    def test_coupling_derivative_matches_finite_differences(self):
        rng = np.random.default_rng(11)
        spec = models.random_uniform(4, seed=5)
        q = rng.normal(size=4)
        fd = oracles.fd_gradient(
            lambda gv: rg.qbe_residual(q, float(gv[0]), spec, 1), np.array([0.6])
        )[:, 0]
        np.testing.assert_allclose(
            rg.qbe_coupling_derivative(q, spec), fd, atol=1e-7
        )


class TestRefineAndPredict:
    def test_refine_recovers_perturbed_root(self):
        spec = models.central_spin(4)
        scan = rg.continuation_scan(spec, 0.3)
        final = scan.final
        rng = np.random.default_rng(0)
        for idx in (3, 7, 11):
            q0 = final.roots[idx] + 1e-4 * rng.normal(size=4)
            state = rg.refine(q0, final.g, spec, int(final.sectors[idx]))
            assert state.residual_sq < rg.RESIDUAL_TOL_SQ
            np.testing.assert_allclose(state.q, final.roots[idx], atol=1e-6)

    def test_refine_raises_when_stalled(self):
        # Constraint m = 9 is unreachable for 3 roots of a weakly coupled
        # model near the unit cube, so refinement cannot converge.
        spec = models.central_spin(3)
        with pytest.raises(RuntimeError, match="stalled"):
            rg.refine(np.array([50.0, -50.0, 9.0]), 1e-9, spec, 9)

    def test_taylor_prediction_is_first_order_accurate(self):
        spec = models.central_spin(4)
        scan = rg.continuation_scan(spec, 0.4)
        final = scan.final
        state = rg.BetheState(
            q=final.roots[5],
            g=final.g,
            m=int(final.sectors[5]),
            residual_sq=float(final.residual_sq[5]),
        )
        errs = []
        for dg in (2e-2, 1e-2, 5e-3):
            pred, cond = rg.taylor_predict(state, spec, dg)
            exact = rg.refine(pred, state.g + dg, spec, state.m)
            errs.append(np.linalg.norm(pred - exact.q))
            assert cond >= 1.0
        # quadratic error decay under step halving
        assert errs[1] < 0.35 * errs[0]
        assert errs[2] < 0.35 * errs[1]

    def test_taylor_rejects_unsupported_order(self):
        spec = models.central_spin(3)
        state = rg.BetheState(q=np.zeros(3), g=0.0, m=0, residual_sq=0.0)
        with pytest.raises(ValueError, match="order"):
            rg.taylor_predict(state, spec, 0.01, order=2)


class TestContinuationScan:
    def test_snapshots_land_on_requested_couplings(self, short_scan):
        req = np.linspace(0.0, short_scan.g_target, 6)[1:]
        stored = [snap.g for snap in short_scan.snapshots]
        np.testing.assert_allclose(stored, req, atol=1e-12)
        assert short_scan.final.g == pytest.approx(short_scan.g_target)

    def test_all_roots_stay_converged(self, short_scan):
        for snap in short_scan.snapshots:
            assert snap.residual_sq.max() < rg.RESIDUAL_TOL_SQ
            assert np.isfinite(snap.condition_numbers).all()

    def test_gap_decreases_along_path(self, short_scan):
        _, gaps = rg.gap_trajectory(short_scan)
        assert gaps[0] < 1.0 + 1e-12
        assert np.all(np.diff(gaps) <= 1e-10)

    def test_cross_sector_margin_never_negative(self, short_scan):
        margins = [rec.cross_sector_margin for rec in short_scan.steps]
        assert min(margins) > -1e-12

    def test_scan_is_deterministic(self):
        spec = models.central_spin(3)
        a = rg.continuation_scan(spec, 0.5)
        b = rg.continuation_scan(spec, 0.5)
        assert len(a.steps) == len(b.steps)
        np.testing.assert_array_equal(a.final.roots, b.final.roots)
        assert [r.g for r in a.steps] == [r.g for r in b.steps]

    def test_roots_are_joint_charge_eigenvalues(self, short_scan):
        # The continued roots must be exact joint eigenvalues: the parent
        # sum of squared charge deviations has a zero ground state.
        spec = short_scan.spec
        final = short_scan.final
        for idx in (0, 5, 9, 15):
            parent = models.build_parent(spec, final.g, final.roots[idx])
            evals = np.linalg.eigvalsh(pauli.to_dense(parent))
            assert abs(evals[0]) < 1e-9
            assert evals[1] > 1e-3

    def test_defaults_and_validation(self):
        spec = models.central_spin(4)
        assert rg.default_g_target(spec) == pytest.approx(
            5 * models.max_level_spacing(spec)
        )
        assert rg.default_step_cap(spec) == pytest.approx(
            models.min_level_spacing(spec) / 80
        )
        with pytest.raises(ValueError):
            rg.continuation_scan(spec, -1.0)
        with pytest.raises(ValueError):
            rg.continuation_scan(spec, 1.0, adapt_factor=1.5)

    def test_minimum_gap_matches_trajectory(self, short_scan):
        g_at, gap = rg.minimum_gap(short_scan)
        gs, gaps = rg.gap_trajectory(short_scan)
        assert gap == pytest.approx(gaps.min())
        assert g_at == pytest.approx(gs[gaps.argmin()])


class TestBounds:
    def test_magnetization_bound_formula(self):
        assert rg.magnetization_gap_bound(2, 5, 6) == pytest.approx(1.5)
        assert rg.magnetization_gap_bound(3, 3, 6) == 0.0

    def test_dicke_witness_equals_large_g_gap(self):
        for n in (3, 5, 8):
            for m in range(n):
                w = rg.dicke_gap_witness(n, m)
                assert abs(w - rg.large_g_gap(n)) < 1e-15 * n
        with pytest.raises(ValueError):
            rg.dicke_gap_witness(4, 4)

    def test_perturbative_certificate_threshold(self):
        spec = models.central_spin(4)
        cert = rg.perturbative_certificate(spec, 1e-5)
        expected = models.min_level_spacing(spec) / (
            2 * (2 + np.sqrt(5)) * 16
        )
        assert cert.threshold == pytest.approx(expected)
        assert cert.certified
        assert not rg.perturbative_certificate(spec, expected * 1.01).certified

    def test_smale_bound_zero_for_singular_jacobian(self):
        spec = models.central_spin(3)
        # At g = 0, q = (1/2, ..., 1/2) zeroes the quadratic rows' diagonal,
        # leaving a rank-one Jacobian.
        assert rg.smale_lower_bound(np.full(3, 0.5), 0.0, spec) == 0.0

    def test_smale_bound_value_at_seed(self):
        spec = models.central_spin(3)
        q = rg.seed_roots(3)[5]
        jac = rg.qbe_jacobian(q, 0.0, spec)
        smin = np.linalg.svd(jac, compute_uv=False)[-1]
        expected = (5 - np.sqrt(17)) / 4 * smin
        assert rg.smale_lower_bound(q, 0.0, spec) == pytest.approx(expected)

    def test_smale_audit_no_violations_on_short_path(self, short_scan):
        audit = rg.smale_audit(short_scan)
        assert audit.violations == 0
        assert audit.n_checked == len(short_scan.snapshots) * 16
        trend = audit.min_bound_trend
        assert trend.shape[1] == 3
        # bounds never exceed the observed distances on record either
        assert (trend[:, 1] <= trend[:, 2] + 1e-12).all()
