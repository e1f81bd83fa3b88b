"""Continuation of quadratic Bethe roots with gap tracking and bounds.

The joint eigenvalues ``q = (q_1, ..., q_N)`` of the commuting charges of an
N-level pairing model satisfy a coupled quadratic system in which each root
obeys ``q_k^2 = q_k - (g/2) sum_{j != k} (q_k - q_j) / (eps_k - eps_j)``
together with the sector constraint ``sum_k q_k = m``.  At ``g = 0`` the
roots are the ``2^N`` bit patterns; this module continues all of them in
lock-step from ``g = 0`` to a target coupling with first-order prediction,
Gauss-Newton/Levenberg-Marquardt refinement, and adaptive step control, while
tracking the minimum pairwise squared distance ("gap") of the root set.

Separation bounds:

* :func:`magnetization_gap_bound` — cross-sector lower bound
  ``(m - m')^2 / N``.
* :func:`smale_lower_bound` — alpha-theory root-separation radius from the
  smallest singular value of the rectangular Jacobian.
* :func:`perturbative_certificate` — coupling threshold below which every
  parent Hamiltonian in the family is guaranteed gapped.
* :func:`large_g_gap` / :func:`dicke_gap_witness` — the ``1/N`` strong
  coupling limit and its closed-form witness from adjacent permutation
  symmetric root vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.spatial.distance import pdist

from .models import RGModelSpec, max_level_spacing, min_level_spacing

__all__ = [
    "BetheState",
    "StepRecord",
    "ScanSnapshot",
    "GapScan",
    "CertificateResult",
    "SmaleAudit",
    "RESIDUAL_TOL_SQ",
    "COLLISION_TOL",
    "SINGULAR_TOL",
    "SMALE_CONSTANT",
    "seed_roots",
    "sector_magnetizations",
    "qbe_residual",
    "qbe_jacobian",
    "qbe_coupling_derivative",
    "refine",
    "taylor_predict",
    "default_g_target",
    "default_step_cap",
    "continuation_scan",
    "minimum_gap",
    "gap_trajectory",
    "magnetization_gap_bound",
    "perturbative_certificate",
    "large_g_gap",
    "dicke_gap_witness",
    "smale_lower_bound",
    "smale_audit",
]

#: A root set is converged when every seed's squared residual is below this.
RESIDUAL_TOL_SQ = 1e-14

#: Steps are rejected when two roots approach within this Euclidean distance.
COLLISION_TOL = 1e-6

#: Smallest singular value treated as nonzero in Jacobian-based bounds.
SINGULAR_TOL = 1e-13

#: Root-separation radius prefactor of the alpha-theory bound.
SMALE_CONSTANT = (5.0 - math.sqrt(17.0)) / 4.0

_ADAPT_FACTOR = 0.9
_STEP_UNDERFLOW = 1e-12
_GN_ITERATIONS = 8
_LM_ITERATIONS = 60
_LM_INIT = 1e-3


@dataclass
class BetheState:
    """One refined root vector at a fixed coupling.

    Attributes:
        q: Root vector, shape (N,).
        g: Coupling at which the roots were refined.
        m: Integer sector constraint ``sum_k q_k``.
        residual_sq: Squared norm of the defining equations at ``q``.
        condition_number: Jacobian condition number, when computed.
    """

    q: np.ndarray
    g: float
    m: int
    residual_sq: float
    condition_number: float | None = None


@dataclass
class StepRecord:
    """Per-accepted-step diagnostics of a continuation scan."""

    g: float
    delta_g: float
    min_gap: float
    pair: tuple[int, int]
    cross_sector_margin: float


@dataclass
class ScanSnapshot:
    """Full root-set state stored at a requested coupling."""

    g: float
    roots: np.ndarray
    residual_sq: np.ndarray
    sectors: np.ndarray
    condition_numbers: np.ndarray


@dataclass
class GapScan:
    """Result of a synchronized continuation of all ``2^N`` seeds."""

    spec: RGModelSpec
    g_target: float
    policy: dict
    steps: list[StepRecord] = field(default_factory=list)
    snapshots: list[ScanSnapshot] = field(default_factory=list)
    n_rejected: int = 0

    @property
    def final(self) -> ScanSnapshot:
        """The snapshot at the target coupling (always recorded)."""
        return self.snapshots[-1]


@dataclass
class CertificateResult:
    """Outcome of the perturbative gap certificate at one coupling."""

    threshold: float
    coupling: float
    certified: bool


@dataclass
class SmaleAudit:
    """Comparison of separation bounds against true root distances."""

    violations: int
    n_checked: int
    records: list[dict]

    @property
    def min_bound_trend(self) -> np.ndarray:
        """Array of (g, min bound, min true distance) rows over the grid."""
        return np.array(
            [[r["g"], r["min_bound"], r["min_distance"]] for r in self.records]
        )


# ---------------------------------------------------------------------------
# Root equations
# ---------------------------------------------------------------------------


def _coupling_matrix(spec: RGModelSpec) -> tuple[np.ndarray, np.ndarray]:
    """Inverse level-difference matrix C[k, j] = 1/(eps_k - eps_j), diag 0."""
    eps = spec.epsilon
    diff = eps[:, None] - eps[None, :]
    np.fill_diagonal(diff, np.inf)
    cmat = 1.0 / diff
    return cmat, cmat.sum(axis=1)


def seed_roots(n_sites: int) -> np.ndarray:
    """All ``2^N`` zero-coupling root vectors (bit patterns), shape (B, N).

    Row ``b`` holds the binary digits of ``b`` with site 1 as the most
    significant bit, matching the computational basis convention.
    """
    b = np.arange(2**n_sites)[:, None]
    return ((b >> np.arange(n_sites - 1, -1, -1)) & 1).astype(float)


def sector_magnetizations(n_sites: int) -> np.ndarray:
    """Integer sector constraint of each seed (its popcount), shape (B,)."""
    return seed_roots(n_sites).sum(axis=1).astype(int)


def _residual_batch(
    roots: np.ndarray,
    g: float,
    cmat: np.ndarray,
    csum: np.ndarray,
    sectors: np.ndarray,
) -> np.ndarray:
    n = roots.shape[1]
    out = np.empty((roots.shape[0], n + 1))
    out[:, :n] = roots * roots - roots + 0.5 * g * (roots * csum - roots @ cmat.T)
    out[:, n] = roots.sum(axis=1) - sectors
    return out


def _jacobian_batch(
    roots: np.ndarray, g: float, cmat: np.ndarray, csum: np.ndarray
) -> np.ndarray:
    b, n = roots.shape
    jac = np.broadcast_to((-0.5 * g * cmat)[None], (b, n, n)).copy()
    idx = np.arange(n)
    jac[:, idx, idx] = 2.0 * roots - 1.0 + 0.5 * g * csum
    return np.concatenate([jac, np.ones((b, 1, n))], axis=1)


def _coupling_derivative_batch(
    roots: np.ndarray, cmat: np.ndarray, csum: np.ndarray
) -> np.ndarray:
    b, n = roots.shape
    out = np.zeros((b, n + 1))
    out[:, :n] = 0.5 * (roots * csum - roots @ cmat.T)
    return out


def qbe_residual(q: np.ndarray, g: float, spec: RGModelSpec, m: int) -> np.ndarray:
    """Defect of the coupled root equations at ``q``.

    Args:
        q: Candidate root vector, shape (N,).
        g: Coupling strength.
        spec: Model levels.
        m: Sector constraint for the final (sum) equation.

    Returns:
        Length N+1 vector: the N quadratic defects followed by
        ``sum(q) - m``.
    """
    cmat, csum = _coupling_matrix(spec)
    q = np.asarray(q, dtype=float)
    return _residual_batch(q[None], g, cmat, csum, np.array([m]))[0]


def qbe_jacobian(q: np.ndarray, g: float, spec: RGModelSpec) -> np.ndarray:
    """Rectangular derivative of :func:`qbe_residual` in the roots.

    Row ``k < N`` differentiates the k-th quadratic defect:
    ``-(g/2) / (eps_k - eps_l)`` off the diagonal and
    ``2 q_k - 1 + (g/2) sum_{j != k} 1/(eps_k - eps_j)`` on it; the last row
    (the sum constraint) is all ones.  Shape (N+1, N).
    """
    cmat, csum = _coupling_matrix(spec)
    q = np.asarray(q, dtype=float)
    return _jacobian_batch(q[None], g, cmat, csum)[0]


def qbe_coupling_derivative(q: np.ndarray, spec: RGModelSpec) -> np.ndarray:
    """Derivative of :func:`qbe_residual` in the coupling, length N+1."""
    cmat, csum = _coupling_matrix(spec)
    q = np.asarray(q, dtype=float)
    return _coupling_derivative_batch(q[None], cmat, csum)[0]


# ---------------------------------------------------------------------------
# Refinement
# ---------------------------------------------------------------------------


def _gauss_newton_batch(
    roots: np.ndarray,
    g: float,
    cmat: np.ndarray,
    csum: np.ndarray,
    sectors: np.ndarray,
    tol_sq: float,
    iterations: int = _GN_ITERATIONS,
) -> tuple[np.ndarray, np.ndarray]:
    """Undamped Gauss-Newton sweep on every seed simultaneously."""
    roots = roots.copy()
    res = _residual_batch(roots, g, cmat, csum, sectors)
    f2 = np.einsum("bi,bi->b", res, res)
    for _ in range(iterations):
        if (f2 < tol_sq).all():
            break
        jac = _jacobian_batch(roots, g, cmat, csum)
        jt = jac.transpose(0, 2, 1)
        hess = jt @ jac
        rhs = -np.einsum("bij,bj->bi", jt, res)
        try:
            delta = np.linalg.solve(hess, rhs[:, :, None])[:, :, 0]
        except np.linalg.LinAlgError:
            return roots, f2
        roots = roots + delta
        res = _residual_batch(roots, g, cmat, csum, sectors)
        f2 = np.einsum("bi,bi->b", res, res)
    return roots, f2


def _levenberg_marquardt_batch(
    roots: np.ndarray,
    g: float,
    cmat: np.ndarray,
    csum: np.ndarray,
    sectors: np.ndarray,
    tol_sq: float,
    iterations: int = _LM_ITERATIONS,
) -> tuple[np.ndarray, np.ndarray]:
    """Damped fallback: halve the damping on accepted steps, double on
    rejected ones."""
    b, n = roots.shape
    lam = np.full(b, _LM_INIT)
    res = _residual_batch(roots, g, cmat, csum, sectors)
    f2 = np.einsum("bi,bi->b", res, res)
    eye = np.eye(n)[None]
    for _ in range(iterations):
        active = f2 > tol_sq
        if not active.any():
            break
        jac = _jacobian_batch(roots, g, cmat, csum)
        jt = jac.transpose(0, 2, 1)
        hess = jt @ jac + lam[:, None, None] * eye
        rhs = -np.einsum("bij,bj->bi", jt, res)
        try:
            delta = np.linalg.solve(hess, rhs[:, :, None])[:, :, 0]
        except np.linalg.LinAlgError:
            lam = np.where(active, lam * 2.0, lam)
            continue
        trial = np.where(active[:, None], roots + delta, roots)
        res_t = _residual_batch(trial, g, cmat, csum, sectors)
        f2_t = np.einsum("bi,bi->b", res_t, res_t)
        better = (f2_t < f2) & active
        roots = np.where(better[:, None], trial, roots)
        f2 = np.where(better, f2_t, f2)
        lam = np.where(better, lam * 0.5, np.where(active, lam * 2.0, lam))
    return roots, f2


def _refine_batch(
    roots: np.ndarray,
    g: float,
    cmat: np.ndarray,
    csum: np.ndarray,
    sectors: np.ndarray,
    tol_sq: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Newton first; Levenberg-Marquardt only when some seed stalls."""
    polished, f2 = _gauss_newton_batch(roots, g, cmat, csum, sectors, tol_sq)
    if (f2 < tol_sq).all():
        return polished, f2
    # Restart the damped solver from the original iterate: a diverged
    # Gauss-Newton sweep is a worse starting point than the predictor.
    return _levenberg_marquardt_batch(roots, g, cmat, csum, sectors, tol_sq)


def refine(
    q: np.ndarray,
    g: float,
    spec: RGModelSpec,
    m: int,
    tol_sq: float = RESIDUAL_TOL_SQ,
) -> BetheState:
    """Polish one root vector at fixed coupling.

    Raises:
        RuntimeError: If the squared residual cannot be brought below
            ``tol_sq``.
    """
    cmat, csum = _coupling_matrix(spec)
    roots, f2 = _refine_batch(
        np.asarray(q, dtype=float)[None], g, cmat, csum, np.array([m]), tol_sq
    )
    if f2[0] >= tol_sq:
        raise RuntimeError(
            f"refinement stalled at residual^2 = {f2[0]:.3e} (g = {g})"
        )
    return BetheState(q=roots[0], g=g, m=m, residual_sq=float(f2[0]))


def taylor_predict(
    state: BetheState,
    spec: RGModelSpec,
    delta_g: float,
    order: int = 1,
) -> tuple[np.ndarray, float]:
    """First-order continuation predictor with conditioning diagnostics.

    Solves the rectangular linearized system ``J dq/dg = -dF/dg`` in the
    least-squares sense via SVD.

    Args:
        state: Converged state at the current coupling.
        spec: Model levels.
        delta_g: Proposed coupling increment.
        order: Taylor order; only first order is implemented.

    Returns:
        Pair ``(q_predicted, condition_number)`` where the condition number
        is ``sigma_max / sigma_min`` of the Jacobian.

    Raises:
        ValueError: For unsupported orders.
        RuntimeError: If the Jacobian is numerically singular.
    """
    if order != 1:
        raise ValueError("only first-order prediction is implemented")
    jac = qbe_jacobian(state.q, state.g, spec)
    dfdg = qbe_coupling_derivative(state.q, spec)
    u, sigma, vt = np.linalg.svd(jac, full_matrices=False)
    if sigma[-1] < SINGULAR_TOL:
        raise RuntimeError(
            f"singular Jacobian at g = {state.g}: sigma_min = {sigma[-1]:.3e}"
        )
    dqdg = -vt.T @ ((u.T @ dfdg) / sigma)
    return state.q + delta_g * dqdg, float(sigma[0] / sigma[-1])


# ---------------------------------------------------------------------------
# Continuation scan
# ---------------------------------------------------------------------------


def default_g_target(spec: RGModelSpec) -> float:
    """Default scan endpoint: five times the largest level separation."""
    return 5.0 * max_level_spacing(spec)


def default_step_cap(spec: RGModelSpec) -> float:
    """Default step-size cap ``min |eps_i - eps_j| / (20 N)``."""
    return min_level_spacing(spec) / (20.0 * spec.n_sites)


def _pair_metadata(sectors: np.ndarray, n_sites: int):
    b = len(sectors)
    ia, ib = np.triu_indices(b, 1)
    dm = sectors[ia] - sectors[ib]
    cross = dm != 0
    penalty = dm.astype(float) ** 2 / n_sites
    return ia, ib, cross, penalty


def _condition_batch(jac: np.ndarray) -> np.ndarray:
    sigma = np.linalg.svd(jac, compute_uv=False)
    smin = sigma[:, -1]
    smax = sigma[:, 0]
    return np.where(smin < SINGULAR_TOL, np.inf, smax / np.maximum(smin, 1e-300))


def continuation_scan(
    spec: RGModelSpec,
    g_target: float | None = None,
    *,
    delta_g_init: float | None = None,
    delta_g_cap: float | None = None,
    snapshot_couplings: Sequence[float] = (),
    collision_tol: float = COLLISION_TOL,
    residual_tol_sq: float = RESIDUAL_TOL_SQ,
    adapt_factor: float = _ADAPT_FACTOR,
) -> GapScan:
    """Continue all ``2^N`` root vectors from ``g = 0`` to ``g_target``.

    Every accepted step advances the whole root set together: a step is
    accepted only if every seed's squared residual converges below
    ``residual_tol_sq`` and no two root vectors approach within
    ``collision_tol``.  On rejection the step shrinks by ``adapt_factor``;
    on acceptance it grows by the inverse factor up to the cap.  Steps are
    clamped so the scan lands exactly on each requested snapshot coupling
    and on the target, where full root sets (with per-seed condition
    numbers) are stored.

    Args:
        spec: Model levels.
        g_target: Endpoint; defaults to :func:`default_g_target`.
        delta_g_init: Initial step; defaults to ``g_target / 100`` clamped
            by the cap.
        delta_g_cap: Largest allowed step; defaults to
            :func:`default_step_cap`.
        snapshot_couplings: Couplings (ascending) at which to store the
            full root set.
        collision_tol: Minimum allowed pairwise root distance.
        residual_tol_sq: Per-seed convergence threshold.
        adapt_factor: Multiplicative step-size adaptation factor in (0, 1).

    Returns:
        The completed :class:`GapScan`.

    Raises:
        RuntimeError: If the step size underflows while the scan cannot
            proceed (e.g. at an actual root collision).
    """
    n = spec.n_sites
    if g_target is None:
        g_target = default_g_target(spec)
    if g_target <= 0:
        raise ValueError("g_target must be positive")
    if not 0.0 < adapt_factor < 1.0:
        raise ValueError("adapt_factor must lie in (0, 1)")
    if delta_g_cap is None:
        delta_g_cap = default_step_cap(spec)
    if delta_g_init is None:
        delta_g_init = min(g_target / 100.0, delta_g_cap)

    cmat, csum = _coupling_matrix(spec)
    roots = seed_roots(n)
    sectors = sector_magnetizations(n)
    ia, ib, cross, penalty = _pair_metadata(sectors, n)
    collision_sq = collision_tol * collision_tol

    pending = sorted({float(s) for s in snapshot_couplings if 0.0 < s <= g_target})
    if not pending or pending[-1] < g_target:
        pending.append(float(g_target))

    scan = GapScan(
        spec=spec,
        g_target=float(g_target),
        policy={
            "delta_g_init": float(delta_g_init),
            "delta_g_cap": float(delta_g_cap),
            "adapt_factor": float(adapt_factor),
            "collision_tol": float(collision_tol),
            "residual_tol_sq": float(residual_tol_sq),
            "refiner": "gauss-newton+levenberg-marquardt",
        },
    )

    def take_snapshot(g: float, roots: np.ndarray, f2: np.ndarray) -> None:
        cond = _condition_batch(_jacobian_batch(roots, g, cmat, csum))
        scan.snapshots.append(
            ScanSnapshot(
                g=g,
                roots=roots.copy(),
                residual_sq=f2.copy(),
                sectors=sectors.copy(),
                condition_numbers=cond,
            )
        )

    g = 0.0
    delta_g = float(delta_g_init)
    while g < g_target - 1e-15 and pending:
        bound = pending[0]
        step = min(delta_g, bound - g)
        g_try = g + step

        # First-order prediction via the batched normal equations.
        jac = _jacobian_batch(roots, g, cmat, csum)
        jt = jac.transpose(0, 2, 1)
        rhs = -np.einsum(
            "bij,bj->bi", jt, _coupling_derivative_batch(roots, cmat, csum)
        )
        try:
            dqdg = np.linalg.solve(jt @ jac, rhs[:, :, None])[:, :, 0]
        except np.linalg.LinAlgError:
            dqdg = np.zeros_like(roots)
        predicted = roots + step * dqdg

        trial, f2 = _refine_batch(
            predicted, g_try, cmat, csum, sectors, residual_tol_sq
        )
        d2 = pdist(trial, "sqeuclidean")
        converged = bool((f2 < residual_tol_sq).all())
        separated = bool(d2.min() > collision_sq)
        if converged and separated:
            roots, g = trial, g_try
            k = int(d2.argmin())
            margin = float((d2[cross] - penalty[cross]).min())
            scan.steps.append(
                StepRecord(
                    g=g,
                    delta_g=step,
                    min_gap=float(d2[k]),
                    pair=(int(ia[k]), int(ib[k])),
                    cross_sector_margin=margin,
                )
            )
            if abs(g - bound) <= 1e-14:
                take_snapshot(g, roots, f2)
                pending.pop(0)
            delta_g = min(step / adapt_factor, delta_g_cap)
        else:
            scan.n_rejected += 1
            delta_g = step * adapt_factor
            if delta_g < _STEP_UNDERFLOW:
                raise RuntimeError(
                    f"step size underflow at g = {g:.6g} "
                    f"(converged={converged}, separated={separated})"
                )
    return scan


def minimum_gap(scan: GapScan) -> tuple[float, float]:
    """Smallest min-pairwise squared distance over the path, with its g."""
    gaps = np.array([rec.min_gap for rec in scan.steps])
    k = int(gaps.argmin())
    return scan.steps[k].g, float(gaps[k])


def gap_trajectory(scan: GapScan) -> tuple[np.ndarray, np.ndarray]:
    """Arrays of coupling and min squared distance per accepted step."""
    g = np.array([rec.g for rec in scan.steps])
    gap = np.array([rec.min_gap for rec in scan.steps])
    return g, gap


# ---------------------------------------------------------------------------
# Bounds and certificates
# ---------------------------------------------------------------------------


def magnetization_gap_bound(m_a: int, m_b: int, n_sites: int) -> float:
    """Cross-sector separation bound ``(m_a - m_b)^2 / N``.

    Root vectors in different sum sectors differ by at least this much in
    squared Euclidean distance (Cauchy-Schwarz on the coordinate sums).
    """
    return (m_a - m_b) ** 2 / n_sites


def perturbative_certificate(spec: RGModelSpec, g: float) -> CertificateResult:
    """Coupling threshold guaranteeing every parent in the family is gapped.

    The threshold is ``min |eps_i - eps_j| / (2 (2 + sqrt 5) N^2)``; below
    it, first-order perturbation theory off the ``g = 0`` bit-pattern
    parents keeps every gap within unity of its unperturbed value.
    """
    threshold = min_level_spacing(spec) / (
        2.0 * (2.0 + math.sqrt(5.0)) * spec.n_sites**2
    )
    return CertificateResult(
        threshold=float(threshold), coupling=float(g), certified=g < threshold
    )


def large_g_gap(n_sites: int) -> float:
    """Strong-coupling limit ``1/N`` of the minimum squared root distance."""
    return 1.0 / n_sites


def dicke_gap_witness(n_sites: int, m: int) -> float:
    """Squared distance between adjacent strong-coupling root vectors.

    In the strong-coupling limit the root vector of sector ``m`` becomes
    permutation symmetric with every entry ``m / N``; the witness builds the
    vectors for sectors ``m`` and ``m + 1`` explicitly and returns their
    squared distance, which equals ``1/N`` identically.
    """
    if not 0 <= m < n_sites:
        raise ValueError("need 0 <= m < n_sites")
    a_m = np.full(n_sites, m / n_sites)
    a_m1 = np.full(n_sites, (m + 1) / n_sites)
    return float(np.sum((a_m - a_m1) ** 2))


def smale_lower_bound(
    q: np.ndarray, g: float, spec: RGModelSpec
) -> float:
    """Alpha-theory separation radius of one root.

    ``(5 - sqrt 17)/4`` times the smallest singular value of the
    rectangular Jacobian; no other root of the same constrained system can
    lie closer (Euclidean distance).  Returns 0.0 when the Jacobian is
    numerically singular, in which case the bound is vacuous.
    """
    sigma = np.linalg.svd(qbe_jacobian(q, g, spec), compute_uv=False)
    if sigma[-1] < SINGULAR_TOL:
        return 0.0
    return float(SMALE_CONSTANT * sigma[-1])


def smale_audit(scan: GapScan) -> SmaleAudit:
    """Check every snapshot root's separation radius against true distances.

    For each stored snapshot, each root's :func:`smale_lower_bound` is
    compared with the Euclidean distance to its nearest neighbor **in the
    same sum sector** (roots of different sectors solve different
    constrained systems; their separation is covered by
    :func:`magnetization_gap_bound`).  A violation is a bound exceeding the
    true distance by more than 1e-12.
    """
    cmat, csum = _coupling_matrix(scan.spec)
    n = scan.spec.n_sites
    violations = 0
    checked = 0
    records: list[dict] = []
    for snap in scan.snapshots:
        roots = snap.roots
        b = roots.shape[0]
        dist = np.sqrt(
            np.maximum(
                np.sum((roots[:, None, :] - roots[None, :, :]) ** 2, axis=2), 0.0
            )
        )
        np.fill_diagonal(dist, np.inf)
        same = snap.sectors[:, None] == snap.sectors[None, :]
        nn_same = np.where(same, dist, np.inf).min(axis=1)
        nn_all = dist.min(axis=1)
        sigma = np.linalg.svd(
            _jacobian_batch(roots, snap.g, cmat, csum), compute_uv=False
        )[:, -1]
        bounds = np.where(sigma < SINGULAR_TOL, 0.0, SMALE_CONSTANT * sigma)
        violations += int((bounds > nn_same + 1e-12).sum())
        checked += b
        records.append(
            {
                "g": snap.g,
                "min_bound": float(bounds.min()),
                "min_distance": float(nn_all.min()),
                "max_bound": float(bounds.max()),
            }
        )
    return SmaleAudit(violations=violations, n_checked=checked, records=records)
