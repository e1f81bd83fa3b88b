"""Spin-chain and central-spin model builders.

Provides the periodic XXZ chain, the family of commuting conserved charges
of the interacting central-spin / equal-spacing / random-level models, their
weighted Hamiltonians, and the squared-deviation parent construction used to
isolate a joint eigenstate of the charges.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import pauli
from .pauli import PauliOperator

__all__ = [
    "RGModelSpec",
    "central_spin",
    "constant_spacing",
    "random_uniform",
    "MODEL_FACTORIES",
    "level_spacings",
    "min_level_spacing",
    "max_level_spacing",
    "build_xxz",
    "build_rg_charge",
    "build_rg_hamiltonian",
    "build_parent",
]

#: Minimum tolerated separation between single-particle levels.
LEVEL_SEPARATION_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class RGModelSpec:
    """Defining data of an N-level pairing-type integrable model.

    Attributes:
        name: Model family label.
        n_sites: Number of spin-1/2 sites (= number of charges).
        omega: Weights combining the charges into a Hamiltonian, shape (N,).
        epsilon: Pairwise-distinct single-particle levels, shape (N,).
        seed: RNG seed used to draw the levels, when applicable.
    """

    name: str
    n_sites: int
    omega: np.ndarray
    epsilon: np.ndarray
    seed: int | None = None

    def __post_init__(self) -> None:
        omega = np.asarray(self.omega, dtype=float)
        epsilon = np.asarray(self.epsilon, dtype=float)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "epsilon", epsilon)
        n = self.n_sites
        if omega.shape != (n,) or epsilon.shape != (n,):
            raise ValueError("omega and epsilon must both have shape (n_sites,)")
        diffs = np.abs(epsilon[:, None] - epsilon[None, :])
        np.fill_diagonal(diffs, np.inf)
        if diffs.min() <= LEVEL_SEPARATION_TOL:
            raise ValueError("levels must be pairwise distinct")


def central_spin(n_sites: int) -> RGModelSpec:
    """Central-spin model: one probed spin coupled to an exponential bath.

    The probe (site 1) carries unit weight and level 0; bath site ``i >= 2``
    has weight 0 and level ``-exp((i - 2) / N)``.
    """
    omega = np.zeros(n_sites)
    omega[0] = 1.0
    epsilon = np.zeros(n_sites)
    for i in range(2, n_sites + 1):
        epsilon[i - 1] = -np.exp((i - 2) / n_sites)
    return RGModelSpec("central_spin", n_sites, omega, epsilon)


def constant_spacing(n_sites: int) -> RGModelSpec:
    """Equally spaced levels ``epsilon_k = k / N``; probe weight on site 1."""
    omega = np.zeros(n_sites)
    omega[0] = 1.0
    epsilon = np.arange(1, n_sites + 1) / n_sites
    return RGModelSpec("constant_spacing", n_sites, omega, epsilon)


def random_uniform(n_sites: int, seed: int) -> RGModelSpec:
    """Levels drawn i.i.d. uniform on [0, 1], sorted ascending.

    Draws are repeated until all pairwise separations exceed
    :data:`LEVEL_SEPARATION_TOL`.
    """
    rng = np.random.default_rng(seed)
    for _ in range(100):
        epsilon = np.sort(rng.uniform(0.0, 1.0, n_sites))
        if np.diff(epsilon).min() > LEVEL_SEPARATION_TOL:
            omega = np.zeros(n_sites)
            omega[0] = 1.0
            return RGModelSpec("random_uniform", n_sites, omega, epsilon, seed=seed)
    raise RuntimeError("could not draw distinct levels")


MODEL_FACTORIES = {
    "central_spin": central_spin,
    "constant_spacing": constant_spacing,
    "random_uniform": random_uniform,
}


def level_spacings(spec: RGModelSpec) -> np.ndarray:
    """All pairwise level separations ``|eps_i - eps_j|`` for ``i < j``."""
    eps = spec.epsilon
    n = spec.n_sites
    iu = np.triu_indices(n, 1)
    return np.abs(eps[:, None] - eps[None, :])[iu]


def min_level_spacing(spec: RGModelSpec) -> float:
    return float(level_spacings(spec).min())


def max_level_spacing(spec: RGModelSpec) -> float:
    return float(level_spacings(spec).max())


def build_xxz(n_sites: int, delta: float) -> PauliOperator:
    """Periodic XXZ chain ``-1/4 sum (XX + YY + delta ZZ)`` on nearest bonds.

    Bond ``(j, j+1)`` is taken for ``j = 1..N`` with site ``N+1`` identified
    with site 1.  At ``N = 2`` the two bonds coincide as site pairs, so the
    collected coefficients double.

    Args:
        n_sites: Chain length (>= 2).
        delta: Ising anisotropy of the ZZ coupling.
    """
    if n_sites < 2:
        raise ValueError("chain needs at least two sites")
    terms: list[tuple[str, float]] = []
    for j in range(1, n_sites + 1):
        j2 = j % n_sites + 1
        for char, coeff in (("X", -0.25), ("Y", -0.25), ("Z", -0.25 * delta)):
            terms.append((pauli.embed_string(n_sites, {j: char, j2: char}), coeff))
    return pauli.collect(n_sites, terms)


def build_rg_charge(k: int, spec: RGModelSpec, g: float) -> PauliOperator:
    """Conserved charge ``Q_k`` of the pairing model at coupling ``g``.

    ``Q_k = n_k + (g/4) sum_{j != k} (X_k X_j + Y_k Y_j + Z_k Z_j - 1)
    / (eps_k - eps_j)`` where ``n_k = (Z_k + 1) / 2`` counts the occupation
    of site ``k``.  At ``g = 0`` the charges reduce to the site occupations;
    for any ``g`` they commute pairwise and sum to the total occupation.

    Args:
        k: 1-based site label of the charge.
        spec: Model data (levels enter through the coupling denominators).
        g: Coupling strength.
    """
    n = spec.n_sites
    if not 1 <= k <= n:
        raise ValueError(f"charge index {k} outside 1..{n}")
    eps = spec.epsilon
    terms: list[tuple[str, float]] = [
        (pauli.embed_string(n, {k: "Z"}), 0.5),
        ("I" * n, 0.5),
    ]
    for j in range(1, n + 1):
        if j == k:
            continue
        w = 0.25 * g / (eps[k - 1] - eps[j - 1])
        for char in "XYZ":
            terms.append((pauli.embed_string(n, {k: char, j: char}), w))
        terms.append(("I" * n, -w))
    return pauli.collect(n, terms)


def build_rg_hamiltonian(spec: RGModelSpec, g: float) -> PauliOperator:
    """Weighted charge combination ``H = sum_k omega_k Q_k``."""
    n = spec.n_sites
    acc = PauliOperator(n, {})
    for k in range(1, n + 1):
        w = spec.omega[k - 1]
        if w != 0.0:
            acc = pauli.add(acc, pauli.scale(build_rg_charge(k, spec, g), w))
    return acc


def build_parent(spec: RGModelSpec, g: float, q: np.ndarray) -> PauliOperator:
    """Squared-deviation parent ``H = sum_k (Q_k - q_k)^2``.

    For ``q`` a joint eigenvalue vector of the charges, the corresponding
    joint eigenstate is a zero-energy ground state of this positive
    semi-definite operator.

    Args:
        spec: Model data.
        g: Coupling strength.
        q: Target eigenvalues, shape (N,).
    """
    n = spec.n_sites
    q = np.asarray(q, dtype=float)
    if q.shape != (n,):
        raise ValueError(f"q has shape {q.shape}, expected ({n},)")
    acc = PauliOperator(n, {})
    ident = "I" * n
    for k in range(1, n + 1):
        charge = build_rg_charge(k, spec, g)
        shifted = pauli.add(charge, PauliOperator(n, {ident: -float(q[k - 1])}))
        acc = pauli.add(acc, pauli.multiply(shifted, shifted))
    return acc
