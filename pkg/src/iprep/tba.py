"""Thermodynamic-Bethe-ansatz dressing equations for the gapless XXZ chain.

Solves the coupled linear integral equations for the dressed charge ``Z``,
the root density ``rho``, and the dressed energy ``eps`` on a rapidity
interval ``[-Lambda, Lambda]`` by fixed-point iteration with trapezoidal
quadrature.  The Fermi boundary ``Lambda`` is the root of a scalar boundary
condition, located by bisection; at zero field the boundary runs to
infinity and is replaced by an explicit rapidity cutoff.  The observables
are the Fermi velocity ``v_F``, the squared dressed charge at the boundary,
and the magnetization density ``m``, which feed the low-energy excitation
formula ``2 pi v_F (N_M^2/(4 Z^2) + Z^2 d^2 + N+ + N-) / N``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "TBAInput",
    "TBAProfile",
    "ExcitationLabels",
    "gamma_parameter",
    "kernel",
    "solve_dressing",
    "observables",
    "excitation_energy",
]

KERNEL_POLE_TOL = 1e-12
RESIDUAL_TOL = 1e-10
EDGE_DENSITY_TOL = 1e-12
_BISECTION_ITERATIONS = 60
_STALL_LIMIT = 4
# One-sided (backward) and centered six-order first-derivative stencils.
_EDGE_STENCIL = np.array(
    [49.0 / 20.0, -6.0, 15.0 / 2.0, -20.0 / 3.0, 15.0 / 4.0, -6.0 / 5.0, 1.0 / 6.0]
)
_CENTER_STENCIL = np.array(
    [-1.0 / 60.0, 3.0 / 20.0, -3.0 / 4.0, 0.0, 3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0]
)


@dataclass(frozen=True)
class TBAInput:
    """Parameters of one dressing-equation solve.

    Attributes:
        delta: Anisotropy, in the gapless window ``0 <= delta < 1``.
        h: Magnetic field (>= 0).  Zero selects the infinite-boundary
            limit, handled with the rapidity cutoff instead of a root
            search for the Fermi boundary.
        grid_size: Number of rapidity points (>= 64).
        lambda_max: Rapidity cutoff; upper end of the boundary bracket.
        tolerance: Ceiling on the integral-equation residuals of the
            returned profile.
        max_iterations: Fixed-point sweep budget per linear equation.
    """

    delta: float
    h: float
    grid_size: int = 1024
    lambda_max: float = 40.0
    tolerance: float = RESIDUAL_TOL
    max_iterations: int = 2000

    def __post_init__(self) -> None:
        if not 0.0 <= self.delta < 1.0:
            raise ValueError("delta must lie in [0, 1)")
        if self.h < 0.0:
            raise ValueError("field must be non-negative")
        if self.grid_size < 64:
            raise ValueError("grid needs at least 64 points")
        if self.lambda_max <= 0.0:
            raise ValueError("rapidity cutoff must be positive")
        if self.tolerance <= 0.0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("need at least one iteration")


@dataclass
class TBAProfile:
    """Converged dressing functions and derived observables."""

    spec: TBAInput
    rapidity: np.ndarray
    z: np.ndarray
    rho: np.ndarray
    eps: np.ndarray
    boundary: float
    fermi_velocity: float
    dressed_charge_sq: float
    magnetization: float
    residual: float
    iterations: int = field(default=0)


@dataclass(frozen=True)
class ExcitationLabels:
    """Integer labels of a low-energy excitation.

    Attributes:
        magnetization_change: Net change of the magnetization quantum
            number (``N_M``).
        backscattering: Particles moved across the Fermi sea (``d``).
        n_plus: Particle-hole count at the right Fermi point (>= 0).
        n_minus: Particle-hole count at the left Fermi point (>= 0).
    """

    magnetization_change: int
    backscattering: int
    n_plus: int = 0
    n_minus: int = 0

    def __post_init__(self) -> None:
        if self.n_plus < 0 or self.n_minus < 0:
            raise ValueError("particle-hole counts must be non-negative")


def gamma_parameter(delta: float) -> float:
    """Interaction angle ``arccos(-delta)`` of the integral equations.

    Maps the gapless window ``delta in [0, 1)`` onto ``[pi/2, pi)``; the
    free-fermion point ``delta = 0`` gives ``pi/2``, where the kernel
    vanishes identically.
    """
    return float(np.arccos(-delta))


def kernel(lam: np.ndarray, gamma: float) -> np.ndarray:
    """Dressing kernel ``sin(2 gamma) / (cosh(lambda) - cos(2 gamma))``.

    Raises:
        ValueError: If any denominator falls below the pole guard.
    """
    lam = np.asarray(lam, dtype=float)
    denom = np.cosh(lam) - np.cos(2.0 * gamma)
    if np.any(np.abs(denom) < KERNEL_POLE_TOL):
        raise ValueError("rapidity too close to a kernel pole")
    return np.sin(2.0 * gamma) / denom


def _trapezoid_weights(grid: np.ndarray) -> np.ndarray:
    step = grid[1] - grid[0]
    weights = np.full(grid.size, step)
    weights[0] = weights[-1] = step / 2.0
    return weights


def _solve_linear(
    dressing: np.ndarray,
    driving: np.ndarray,
    tolerance: float,
    max_iterations: int,
) -> tuple[np.ndarray, int]:
    """Fixed-point iteration ``f <- d - M f`` from the driving term.

    Stops when the sup-norm update stalls at the roundoff floor or drops
    below ``tolerance``; the caller re-checks the actual residual.
    """
    solution = driving.copy()
    best = np.inf
    stalled = 0
    for iteration in range(1, max_iterations + 1):
        updated = driving - dressing @ solution
        change = float(np.max(np.abs(updated - solution)))
        solution = updated
        if change < tolerance:
            return solution, iteration
        if change < best:
            best = change
            stalled = 0
        else:
            stalled += 1
            if stalled > _STALL_LIMIT:
                return solution, iteration
    return solution, max_iterations


def _dressing_matrix(grid: np.ndarray, gamma: float) -> np.ndarray:
    weights = _trapezoid_weights(grid)
    spread = kernel(grid[:, None] - grid[None, :], gamma)
    return spread * weights[None, :] / (2.0 * np.pi)


def _boundary_condition(boundary: float, delta: float, gamma: float, h: float) -> float:
    """Closed-form edge value the dressed charge must match at ``Lambda``."""
    return (
        np.pi
        * np.sqrt(1.0 - delta * delta)
        / (4.0 * gamma * h * np.cosh(np.pi * boundary / (2.0 * gamma)))
    )


def _charge_edge(
    boundary: float, gamma: float, spec: TBAInput
) -> tuple[np.ndarray, np.ndarray, int]:
    """Solve the dressed-charge equation on ``[-boundary, boundary]``."""
    grid = np.linspace(-boundary, boundary, spec.grid_size)
    dressing = _dressing_matrix(grid, gamma)
    driving = np.ones(spec.grid_size)
    charge, iterations = _solve_linear(
        dressing, driving, spec.tolerance * 1e-3, spec.max_iterations
    )
    return grid, charge, iterations


def _locate_boundary(gamma: float, spec: TBAInput) -> tuple[float, int]:
    """Bisection for the Fermi boundary on the bracket ``[0, lambda_max]``.

    At zero interval length the dressed charge is exactly 1, so the
    bracket ends are evaluated without a grid solve at the lower end.
    """
    total_iterations = 0

    def mismatch(boundary: float) -> float:
        nonlocal total_iterations
        if boundary == 0.0:
            edge = 1.0
        else:
            _, charge, iters = _charge_edge(boundary, gamma, spec)
            total_iterations += iters
            edge = float(charge[-1])
        return edge - _boundary_condition(boundary, spec.delta, gamma, spec.h)

    low, high = 0.0, spec.lambda_max
    low_sign = mismatch(low)
    if low_sign > 0.0:
        raise ValueError(
            "field outside the gapless regime: boundary condition has no root"
        )
    if mismatch(high) < 0.0:
        raise ValueError(
            "Fermi boundary beyond the rapidity cutoff; raise lambda_max or "
            "use h = 0 for the infinite-boundary limit"
        )
    for _ in range(_BISECTION_ITERATIONS):
        mid = 0.5 * (low + high)
        if mismatch(mid) < 0.0:
            low = mid
        else:
            high = mid
    return 0.5 * (low + high), total_iterations


def _edge_derivative(values: np.ndarray, step: float) -> float:
    return float(_EDGE_STENCIL @ values[-1 : -8 : -1]) / step


def _center_derivative(values: np.ndarray, index: int, step: float) -> float:
    return float(_CENTER_STENCIL @ values[index - 3 : index + 4]) / step


def _velocity_index(grid: np.ndarray, spec: TBAInput) -> int:
    """Rapidity index where the velocity derivative is evaluated.

    At finite field this is the Fermi edge.  At zero field the edge sits
    at the artificial cutoff where density and dressed energy both decay
    exponentially and their ratio turns noisy, so the derivative is taken
    at an interior plateau point instead.
    """
    if spec.h > 0.0:
        return grid.size - 1
    return int(np.searchsorted(grid, 0.75 * spec.lambda_max))


def solve_dressing(spec: TBAInput) -> TBAProfile:
    """Solve the three dressing equations and derive the observables.

    Locates the Fermi boundary from the scalar boundary condition (finite
    field) or pins it to the cutoff (zero field), then solves the dressed
    charge, root density, and dressed energy on the final grid and checks
    all three residuals against ``spec.tolerance``.

    Raises:
        ValueError: If the field lies outside the regime where the
            boundary condition has a root inside the cutoff.
        RuntimeError: If iteration fails to reach the residual tolerance,
            or the converged profile turns unphysical (non-positive
            density or charge).
    """
    gamma = gamma_parameter(spec.delta)
    if spec.h > 0.0:
        boundary, boundary_iterations = _locate_boundary(gamma, spec)
    else:
        boundary, boundary_iterations = spec.lambda_max, 0

    grid = np.linspace(-boundary, boundary, spec.grid_size)
    dressing = _dressing_matrix(grid, gamma)
    cosh_term = np.cosh(grid) - np.cos(gamma)
    sin_gamma = np.sin(gamma)
    drivings = {
        "charge": np.ones(spec.grid_size),
        "density": sin_gamma / cosh_term / (2.0 * np.pi),
        "energy": 2.0 * spec.h - sin_gamma**2 / cosh_term,
    }
    solved: dict[str, np.ndarray] = {}
    iterations = boundary_iterations
    residual = 0.0
    for name, driving in drivings.items():
        solution, used = _solve_linear(
            dressing, driving, spec.tolerance * 1e-3, spec.max_iterations
        )
        solved[name] = solution
        iterations += used
        residual = max(
            residual,
            float(np.max(np.abs(solution + dressing @ solution - driving))),
        )
    if residual > spec.tolerance:
        raise RuntimeError(
            f"dressing equations failed to converge: residual {residual:.3e}"
        )
    charge, density, energy = solved["charge"], solved["density"], solved["energy"]
    if charge.min() <= 0.0 or density.min() <= 0.0:
        raise RuntimeError("converged profile is unphysical (non-positive)")

    profile = TBAProfile(
        spec=spec,
        rapidity=grid,
        z=charge,
        rho=density,
        eps=energy,
        boundary=boundary,
        fermi_velocity=0.0,
        dressed_charge_sq=0.0,
        magnetization=0.0,
        residual=residual,
        iterations=iterations,
    )
    velocity, charge_sq, magnetization = observables(profile)
    profile.fermi_velocity = velocity
    profile.dressed_charge_sq = charge_sq
    profile.magnetization = magnetization
    return profile


def observables(profile: TBAProfile) -> tuple[float, float, float]:
    """Fermi velocity, squared dressed charge, and magnetization density.

    The velocity is the rapidity derivative of the dressed energy over
    ``2 pi rho``, taken with a sixth-order stencil at the Fermi edge (one
    sided) or, in the zero-field cutoff mode, at an interior point
    (centered).  The magnetization is the trapezoidal integral of the
    density; the dressed charge is read off at the edge.

    Raises:
        ValueError: If the density at the evaluation point is too small
            to divide by.
    """
    grid = profile.rapidity
    step = float(grid[1] - grid[0])
    index = _velocity_index(grid, profile.spec)
    density_at = float(profile.rho[index])
    guard = EDGE_DENSITY_TOL if profile.spec.h > 0.0 else 1e-250
    if density_at < guard:
        raise ValueError("density vanishes at the velocity evaluation point")
    if index == grid.size - 1:
        slope = _edge_derivative(profile.eps, step)
    else:
        slope = _center_derivative(profile.eps, index, step)
    velocity = slope / (2.0 * np.pi * density_at)
    charge_sq = float(profile.z[-1]) ** 2
    magnetization = float(_trapezoid_weights(grid) @ profile.rho)
    return float(velocity), charge_sq, magnetization


def excitation_energy(
    fermi_velocity: float,
    dressed_charge: float,
    labels: ExcitationLabels,
    n_sites: int,
) -> float:
    """Low-energy excitation ``2 pi v_F (N_M^2/(4 Z^2) + Z^2 d^2 + N+ + N-)/N``."""
    if n_sites < 1:
        raise ValueError("chain length must be positive")
    charge_sq = dressed_charge * dressed_charge
    weight = (
        labels.magnetization_change**2 / (4.0 * charge_sq)
        + charge_sq * labels.backscattering**2
        + labels.n_plus
        + labels.n_minus
    )
    return 2.0 * np.pi * fermi_velocity * weight / n_sites
