"""Product-formula simulation of slowly varied Hamiltonian families.

A linear parameter schedule ``g(t)`` is discretized into equal time
slices; within each slice the Hamiltonian is frozen at the midpoint
parameter and applied as a first-order splitting, one Pauli-string
rotation at a time.  Because every string squares to the identity, each
factor ``exp(-i theta P)`` acts in closed form ``cos(theta) I - i
sin(theta) P`` — the whole evolution is dense-vector arithmetic with no
matrix exponentials.  The module also provides the analytic runtime and
circuit-depth scaling estimates used to budget such sweeps, and a fast
coefficient-level constructor for the family of squared-charge parent
Hamiltonians along a coupling path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import models, pauli, rg
from .pauli import PauliOperator

__all__ = [
    "Schedule",
    "EvolutionReport",
    "RGParentFamily",
    "evolve",
    "trotter_bound",
    "adiabatic_time",
    "depth_estimate",
    "EVOLVE_SITE_LIMIT",
    "NORM_DRIFT_TOL",
]

# Largest chain length evolved as a dense state vector.
EVOLVE_SITE_LIMIT = 12
# Permitted deviation of the state norm from 1 over a full run.
NORM_DRIFT_TOL = 1e-10

_WALK_STEP = 0.1


@dataclass(frozen=True)
class Schedule:
    """Linear interpolation of the coupling over a fixed total time."""

    g_start: float
    g_end: float
    total_time: float

    def __post_init__(self) -> None:
        if self.total_time <= 0:
            raise ValueError("total time must be positive")

    def coupling(self, t: float) -> float:
        """Parameter value at time ``t`` (linear in ``t``)."""
        return self.g_start + (self.g_end - self.g_start) * t / self.total_time


@dataclass
class EvolutionReport:
    """Outcome of one product-formula run.

    ``checkpoint_fidelities`` (and ``final_fidelity``) are populated only
    when a comparison target was supplied; fidelities are squared overlaps
    in [0, 1].
    """

    final_state: np.ndarray
    steps: int
    dt: float
    norm_drift: float
    checkpoint_times: np.ndarray
    checkpoint_fidelities: np.ndarray | None
    final_fidelity: float | None


def _fidelity(target: np.ndarray, psi: np.ndarray) -> float:
    return min(1.0, float(abs(np.vdot(target, psi)) ** 2))


def evolve(
    initial: np.ndarray,
    hamiltonian_family,
    schedule: Schedule,
    steps: int,
    target: np.ndarray | None = None,
    checkpoint_every: int | None = None,
    site_limit: int = EVOLVE_SITE_LIMIT,
) -> EvolutionReport:
    """First-order split evolution under ``hamiltonian_family(g(t))``.

    Each of the ``steps`` equal slices applies the rotations of the
    operator evaluated at the slice-midpoint parameter, in lexicographic
    string order.  Every rotation is exactly unitary, so the state norm is
    checked against ``NORM_DRIFT_TOL`` at the end of the run.
    """
    psi = np.asarray(initial)
    if psi.ndim != 1 or psi.size & (psi.size - 1):
        raise ValueError("initial state must be a flat vector of length 2^N")
    n = psi.size.bit_length() - 1
    if n > site_limit:
        raise ValueError(
            f"chain length {n} exceeds the dense evolution limit {site_limit}"
        )
    if abs(np.linalg.norm(psi) - 1.0) > 1e-9:
        raise ValueError("initial state must be normalized")
    if steps < 1:
        raise ValueError("need at least one time slice")
    if target is not None:
        target = np.asarray(target)
        if target.shape != psi.shape:
            raise ValueError("target state must match the initial state shape")
    psi = psi.astype(np.complex128)
    dt = schedule.total_time / steps
    times: list[float] = []
    fidelities: list[float] = []
    for index in range(steps):
        operator = hamiltonian_family(schedule.coupling((index + 0.5) * dt))
        if operator.n_sites != n:
            raise ValueError(
                f"family produced an operator on {operator.n_sites} sites "
                f"for a {n}-site state"
            )
        for string in sorted(operator.terms):
            theta = operator.terms[string] * dt
            perm, phase = pauli.string_kernel(string)
            rotated = psi[perm]
            rotated *= (-1j * math.sin(theta)) * phase
            rotated += math.cos(theta) * psi
            psi = rotated
        if checkpoint_every and (index + 1) % checkpoint_every == 0:
            times.append((index + 1) * dt)
            if target is not None:
                fidelities.append(_fidelity(target, psi))
    drift = abs(float(np.linalg.norm(psi)) - 1.0)
    if drift > NORM_DRIFT_TOL:
        raise RuntimeError(f"state norm drifted by {drift:.3e}")
    return EvolutionReport(
        final_state=psi,
        steps=steps,
        dt=dt,
        norm_drift=drift,
        checkpoint_times=np.asarray(times),
        checkpoint_fidelities=(
            np.asarray(fidelities) if target is not None else None
        ),
        final_fidelity=(
            _fidelity(target, psi) if target is not None else None
        ),
    )


def trotter_bound(coefficient_norm: float, total_time: float, steps: int) -> float:
    """First-order splitting error bound ``T dt (sum|c|)^2 / 2``."""
    if coefficient_norm < 0 or total_time < 0:
        raise ValueError("norm and time must be nonnegative")
    if steps < 1:
        raise ValueError("need at least one time slice")
    return 0.5 * total_time * (total_time / steps) * coefficient_norm**2


def adiabatic_time(
    norm_d1: float, norm_d2: float, gap_min: float, error_budget: float
) -> float:
    """Runtime sufficient for an error-``epsilon`` adiabatic sweep.

    Evaluates ``(|d2H| + |d1H|)/(eps gap^2) + |d1H|^2/(eps gap^3)`` at the
    worst-case derivative norms and minimum gap supplied by the caller.
    """
    if gap_min <= 0:
        raise ValueError("minimum gap must be positive")
    if error_budget <= 0:
        raise ValueError("error budget must be positive")
    if norm_d1 < 0 or norm_d2 < 0:
        raise ValueError("derivative norms must be nonnegative")
    return (norm_d2 + norm_d1) / (error_budget * gap_min**2) + norm_d1**2 / (
        error_budget * gap_min**3
    )


def depth_estimate(
    n_sites: int,
    support: float,
    total_time: float,
    max_coefficient: float,
    error_budget: float,
) -> float:
    """Product-formula depth scaling ``N S^2 (T max_b)^2 / eps``."""
    if min(n_sites, support, total_time, max_coefficient, error_budget) <= 0:
        raise ValueError("all scaling inputs must be positive")
    return (
        n_sites * support**2 * (total_time * max_coefficient) ** 2 / error_budget
    )


class RGParentFamily:
    """Squared-charge parent Hamiltonians along a coupling path.

    The charges are linear in the coupling, so every string coefficient of
    the parent ``sum_k (Q_k(g) - q_k(g))^2`` is a polynomial in ``g`` with
    the root vector entering linearly.  The constructor multiplies the
    operators once and stores coefficient tables over the fixed union
    string basis; each call then solves for the target's root vector at
    the requested coupling (warm-started from the previous call) and
    assembles the operator by pure array arithmetic.
    """

    def __init__(self, spec: models.RGModelSpec, target_index: int):
        n = spec.n_sites
        if not 0 <= target_index < (1 << n):
            raise ValueError(
                f"target index {target_index} outside 0..{(1 << n) - 1}"
            )
        self.spec = spec
        self.target_index = target_index
        seed = rg.seed_roots(n)[target_index].astype(float)
        self._state = rg.BetheState(
            q=seed, g=0.0, m=int(round(seed.sum())), residual_sq=0.0
        )

        zero = [models.build_rg_charge(k, spec, 0.0) for k in range(1, n + 1)]
        unit = [models.build_rg_charge(k, spec, 1.0) for k in range(1, n + 1)]
        slope = [pauli.add(u, pauli.scale(z, -1.0)) for u, z in zip(unit, zero)]

        def accumulate(parts: list[PauliOperator]) -> PauliOperator:
            acc = parts[0]
            for part in parts[1:]:
                acc = pauli.add(acc, part)
            return acc

        sq_zero = accumulate([pauli.multiply(z, z) for z in zero])
        sq_slope = accumulate([pauli.multiply(s, s) for s in slope])
        sq_unit = accumulate([pauli.multiply(u, u) for u in unit])
        # Q(1)^2 = Q(0)^2 + cross + Q'(g)^2 termwise, so the Hermitian cross
        # table follows from three Hermitian squares.
        cross = pauli.add(
            sq_unit, pauli.scale(pauli.add(sq_zero, sq_slope), -1.0)
        )

        basis = sorted(
            set().union(
                sq_zero.terms,
                cross.terms,
                sq_slope.terms,
                *(z.terms for z in zero),
                *(s.terms for s in slope),
                {"I" * n},
            )
        )
        index = {string: i for i, string in enumerate(basis)}
        self._basis = basis
        self._identity_row = index["I" * n]

        def vector(op: PauliOperator) -> np.ndarray:
            out = np.zeros(len(basis))
            for string, coeff in op.terms.items():
                out[index[string]] = coeff
            return out

        self._a0 = vector(sq_zero)
        self._a1 = vector(cross)
        self._a2 = vector(sq_slope)
        self._b0 = np.stack([vector(z) for z in zero], axis=1)
        self._b1 = np.stack([vector(s) for s in slope], axis=1)

    def roots_at(self, g: float) -> np.ndarray:
        """Target root vector at the coupling, warm-started and cached.

        Long jumps are taken in increments of at most ``_WALK_STEP`` with a
        first-order predictor before each polish; a single uncapped Newton
        solve can silently converge onto a neighboring root branch.
        """
        state = self._state
        if g != state.g:
            anchor, span = state.g, g - state.g
            pieces = max(1, int(math.ceil(abs(span) / _WALK_STEP)))
            for i in range(1, pieces + 1):
                step_g = anchor + span * i / pieces
                try:
                    guess, _ = rg.taylor_predict(state, self.spec, step_g - state.g)
                except RuntimeError:
                    guess = state.q
                state = rg.refine(guess, step_g, self.spec, state.m)
            self._state = state
        return state.q

    def __call__(self, g: float) -> PauliOperator:
        q = self.roots_at(g)
        coeffs = (
            self._a0
            + g * self._a1
            + g * g * self._a2
            - 2.0 * ((self._b0 + g * self._b1) @ q)
        )
        coeffs[self._identity_row] += float(q @ q)
        return pauli.collect(
            self.spec.n_sites,
            [
                (string, coeff)
                for string, coeff in zip(self._basis, coeffs)
                if abs(coeff) > pauli.PRUNE_TOL
            ],
        )
