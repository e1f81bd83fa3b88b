"""Dense ground-truth diagnostics for the spin-chain constructions.

The XXZ chain conserves total magnetization, so its spectrum splits into
fixed-popcount sectors whose dimensions stay dense-solver friendly well
past the sizes any full 2^N treatment could reach.  This module enumerates
those sector bases, assembles the restricted Hamiltonian blocks directly
from bit operations, and extracts sector gaps with a subset eigensolver.
It also cross-checks the charge-eigenvalue continuation by simultaneous
diagonalization of the commuting charge family (a random linear probe
combination fixes the basis), computes bipartite von Neumann entropies of
dense eigenvectors, and fits log-log scaling slopes for gap-vs-size data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh
from scipy.stats import linregress

from . import models, pauli

__all__ = [
    "SectorBasis",
    "GapRecord",
    "sector_basis",
    "dense_index_map",
    "embed_sector_vector",
    "sector_hamiltonian",
    "xxz_sector_gap",
    "joint_charge_spectrum",
    "entanglement_entropy",
    "loglog_slope",
    "SECTOR_DENSE_LIMIT",
    "JOINT_SITE_LIMIT",
    "LEAKAGE_TOL",
    "DEGENERACY_TOL",
    "ENTROPY_FLOOR",
]

# Largest sector dimension handed to the dense eigensolver.
SECTOR_DENSE_LIMIT = 20_000
# Largest chain length for simultaneous charge diagonalization (full 2^N).
JOINT_SITE_LIMIT = 10
# Maximum off-diagonal magnitude tolerated in the rotated charge matrices.
LEAKAGE_TOL = 1e-9
# Sector gaps below this are reported as degenerate rather than errored.
DEGENERACY_TOL = 1e-12
# Schmidt weights at or below this level contribute no entropy.
ENTROPY_FLOOR = 1e-14

_ENUMERATION_LIMIT = 24
_PROBE_ATTEMPTS = 5


@dataclass(frozen=True, eq=False)
class SectorBasis:
    """All spin configurations with a fixed total magnetization.

    ``states`` holds the configurations as integers in ascending order; bit
    ``n_sites - k`` is set when site ``k`` points up, so a configuration
    has popcount ``(n_sites + magnetization) / 2``.
    """

    n_sites: int
    magnetization: int
    states: np.ndarray


@dataclass(frozen=True)
class GapRecord:
    """Gap between the two lowest levels of one magnetization sector."""

    n_sites: int
    magnetization: int
    delta: float
    gap: float
    degenerate: bool


def sector_basis(n_sites: int, magnetization: int) -> SectorBasis:
    """Enumerate the fixed-magnetization configurations in ascending order."""
    if n_sites < 1:
        raise ValueError("chain length must be positive")
    if n_sites > _ENUMERATION_LIMIT:
        raise ValueError(
            f"chain length {n_sites} exceeds the enumeration limit "
            f"{_ENUMERATION_LIMIT}"
        )
    if abs(magnetization) > n_sites or (n_sites + magnetization) % 2:
        raise ValueError(
            f"magnetization {magnetization} is infeasible for {n_sites} sites"
        )
    n_up = (n_sites + magnetization) // 2
    configurations = np.arange(1 << n_sites, dtype=np.int64)
    states = configurations[np.bitwise_count(configurations) == n_up]
    return SectorBasis(n_sites, magnetization, states)


def dense_index_map(basis: SectorBasis) -> np.ndarray:
    """Computational-basis positions of the sector configurations.

    The dense convention marks down spins with set bits (index 0 is the
    all-up state), so the position of a configuration is its bitwise
    complement.
    """
    mask = (1 << basis.n_sites) - 1
    return mask ^ basis.states


def embed_sector_vector(
    basis: SectorBasis, coefficients: np.ndarray
) -> np.ndarray:
    """Scatter a sector-restricted vector into the full 2^N space."""
    coefficients = np.asarray(coefficients)
    if coefficients.shape != (basis.states.size,):
        raise ValueError(
            f"expected {basis.states.size} coefficients, got "
            f"{coefficients.shape}"
        )
    full = np.zeros(1 << basis.n_sites, dtype=coefficients.dtype)
    full[dense_index_map(basis)] = coefficients
    return full


def sector_hamiltonian(basis: SectorBasis, delta: float) -> np.ndarray:
    """Dense XXZ block ``-1/4 sum (XX + YY) - delta/4 sum ZZ`` (periodic).

    Diagonal entries accumulate the Ising signs per bond; a bond with
    opposite spins additionally hops with amplitude ``-1/2`` to the
    configuration with the two spins swapped.  The two-site ring traverses
    its single pair twice, matching the doubled coefficients of the full
    operator build at that size.
    """
    states = basis.states
    n = basis.n_sites
    matrix = np.zeros((states.size, states.size))
    diagonal = np.zeros(states.size)
    rows = np.arange(states.size)
    for site in range(n):
        bond = (1 << (n - 1 - site)) | (1 << (n - 1 - (site + 1) % n))
        occupancy = states & bond
        flippable = (occupancy != 0) & (occupancy != bond)
        diagonal -= (delta / 4.0) * np.where(flippable, -1.0, 1.0)
        partners = np.searchsorted(states, states[flippable] ^ bond)
        matrix[rows[flippable], partners] -= 0.5
    matrix[rows, rows] = diagonal
    return matrix


def xxz_sector_gap(
    n_sites: int,
    magnetization: int,
    delta: float,
    dense_limit: int = SECTOR_DENSE_LIMIT,
) -> GapRecord:
    """Gap above the sector ground state of the periodic XXZ chain."""
    n_up = (n_sites + magnetization) // 2
    if abs(magnetization) > n_sites or (n_sites + magnetization) % 2:
        raise ValueError(
            f"magnetization {magnetization} is infeasible for {n_sites} sites"
        )
    dimension = math.comb(n_sites, n_up)
    if dimension > dense_limit:
        raise ValueError(
            f"sector dimension {dimension} exceeds the dense limit "
            f"{dense_limit}"
        )
    if dimension < 2:
        raise ValueError("one-dimensional sector has no gap")
    basis = sector_basis(n_sites, magnetization)
    matrix = sector_hamiltonian(basis, delta)
    lowest = eigh(
        matrix,
        subset_by_index=(0, 1),
        eigvals_only=True,
        driver="evr",
        overwrite_a=True,
        check_finite=False,
    )
    gap = float(lowest[1] - lowest[0])
    return GapRecord(
        n_sites=n_sites,
        magnetization=magnetization,
        delta=float(delta),
        gap=gap,
        degenerate=gap < DEGENERACY_TOL,
    )


def _dense_charges(
    spec: models.RGModelSpec, g: float
) -> list[np.ndarray]:
    charges = []
    for k in range(1, spec.n_sites + 1):
        dense = pauli.to_dense(models.build_rg_charge(k, spec, g))
        if np.abs(dense.imag).max() > 1e-12:
            raise RuntimeError("charge matrix has unexpected imaginary part")
        charges.append(np.ascontiguousarray(dense.real))
    return charges


def joint_charge_spectrum(
    spec: models.RGModelSpec,
    g: float,
    site_limit: int = JOINT_SITE_LIMIT,
    seed: int | None = None,
) -> np.ndarray:
    """All 2^N simultaneous eigenvalue vectors of the charge family.

    Diagonalizes a random linear combination of the charges (coefficients
    drawn from a seeded generator: ``seed``, falling back to the model's
    seed, then to 0), reads each charge's expectation values in that
    eigenbasis, and verifies that the rotated matrices are diagonal to
    within ``LEAKAGE_TOL``.  An accidentally degenerate probe combination
    triggers a redraw, at most ``_PROBE_ATTEMPTS`` times.  Rows are
    returned in lexicographic order.
    """
    n = spec.n_sites
    if n > site_limit:
        raise ValueError(
            f"chain length {n} exceeds the dense joint-diagonalization "
            f"limit {site_limit}"
        )
    charges = _dense_charges(spec, g)
    if seed is None:
        seed = spec.seed if spec.seed is not None else 0
    rng = np.random.default_rng(seed)
    for _ in range(_PROBE_ATTEMPTS):
        weights = rng.standard_normal(n)
        probe = np.tensordot(weights, charges, axes=1)
        _, basis = eigh(probe)
        table = np.empty((1 << n, n))
        leakage = 0.0
        for k, charge in enumerate(charges):
            rotated = basis.T @ charge @ basis
            diagonal = np.diag(rotated).copy()
            np.fill_diagonal(rotated, 0.0)
            leakage = max(leakage, float(np.abs(rotated).max()))
            table[:, k] = diagonal
        if leakage < LEAKAGE_TOL:
            order = np.lexsort(table[:, ::-1].T)
            return table[order]
    raise RuntimeError(
        f"probe combinations stayed degenerate after {_PROBE_ATTEMPTS} draws"
    )


def entanglement_entropy(state: np.ndarray, cut: int) -> float:
    """Von Neumann entropy (natural log) across a leading-sites cut.

    ``cut`` counts how many of the leading (most significant) sites form
    the subsystem.  Schmidt weights at or below ``ENTROPY_FLOOR`` are
    treated as exact zeros.
    """
    state = np.asarray(state)
    if state.ndim != 1 or state.size & (state.size - 1):
        raise ValueError("state must be a flat vector of length 2^N")
    n = state.size.bit_length() - 1
    if not 0 < cut < n:
        raise ValueError(f"cut must split {n} sites into two nonempty parts")
    if abs(np.linalg.norm(state) - 1.0) > 1e-9:
        raise ValueError("state must be normalized")
    singular = np.linalg.svd(
        state.reshape(1 << cut, -1), compute_uv=False
    )
    weights = singular**2
    weights = weights[weights > ENTROPY_FLOOR]
    return max(0.0, float(-np.sum(weights * np.log(weights))))


def loglog_slope(xs: np.ndarray, ys: np.ndarray) -> tuple[float, float]:
    """Least-squares slope of log(y) vs log(x) with its standard error."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise ValueError("xs and ys must be equal-length vectors")
    if xs.size < 3:
        raise ValueError("need at least three points for a slope fit")
    if xs.min() <= 0 or ys.min() <= 0:
        raise ValueError("log-log fit requires positive data")
    fit = linregress(np.log(xs), np.log(ys))
    return float(fit.slope), float(fit.stderr)
