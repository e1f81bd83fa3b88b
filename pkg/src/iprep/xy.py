"""Closed-form analytics of the anisotropic XY chain in a transverse field.

The chain ``H = -1/2 sum_j [ (1+gamma)/2 X_j X_{j+1} + (1-gamma)/2 Y_j Y_{j+1}
+ h Z_j ]`` (periodic) splits into two parity sectors, each diagonalized by
free fermions with dispersion ``eps(p) = sqrt((cos p - h)^2 + gamma^2 sin^2
p)`` on sector-dependent momentum grids: half-integer multiples of ``2 pi/N``
in the even sector and integer multiples in the odd sector.  This module
builds the quasiparticle number operators as explicit Pauli sums, assembles
parity-projected parent Hamiltonians whose unique ground state is any chosen
quasiparticle occupation pattern, provides the Bogoliubov-phase parameter
derivatives used in sensitivity analysis, and constructs the cosine-weighted
translation-invariant charge family together with its parent-gap bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import pauli
from .pauli import PauliOperator

__all__ = [
    "XYModelSpec",
    "OccupationPattern",
    "build_xy",
    "momentum_grid",
    "dispersion",
    "min_dispersion_sq",
    "bogoliubov_phase",
    "phase_derivative",
    "number_operator",
    "sector_hamiltonian",
    "parity_string",
    "quasiparticle_vacuum_parity",
    "pattern_is_valid",
    "random_valid_pattern",
    "build_xy_parent",
    "liom_matrix",
    "liom_charge",
    "build_liom_parent",
    "dense_spectrum_summary",
    "parity_block_indices",
    "liom_parent_gap",
    "liom_gap_bound",
]


@dataclass(frozen=True, eq=False)
class XYModelSpec:
    """Anisotropic XY chain parameters.

    Attributes:
        n_sites: Chain length (>= 2).
        gamma: Anisotropy (>= 0); ``gamma = 1`` is the transverse-field
            Ising limit, ``gamma = 0`` the isotropic XX chain.
        h: Transverse field (>= 0).  ``h = 1`` (and ``gamma = 0`` with
            ``h < 1``) are critical manifolds where the dispersion closes.
    """

    n_sites: int
    gamma: float
    h: float

    def __post_init__(self) -> None:
        if self.n_sites < 2:
            raise ValueError("chain needs at least two sites")
        if self.gamma < 0 or self.h < 0:
            raise ValueError("gamma and h must be non-negative")


@dataclass(frozen=True)
class OccupationPattern:
    """Quasiparticle occupations on both sector grids plus a parity label.

    Attributes:
        plus: 0/1 occupations on the even-sector (half-integer) grid.
        minus: 0/1 occupations on the odd-sector (integer) grid.
        parity: Parity eigenvalue (+1 or -1) of the targeted state.
    """

    plus: tuple[int, ...]
    minus: tuple[int, ...]
    parity: int

    def __post_init__(self) -> None:
        if self.parity not in (-1, 1):
            raise ValueError("parity must be +1 or -1")
        if len(self.plus) != len(self.minus):
            raise ValueError("sector patterns must have equal length")
        for occ in (*self.plus, *self.minus):
            if occ not in (0, 1):
                raise ValueError("occupations must be 0 or 1")


def build_xy(spec: XYModelSpec) -> PauliOperator:
    """Periodic XY chain Hamiltonian as a Pauli sum.

    Per bond: ``-(1+gamma)/4 XX - (1-gamma)/4 YY``; per site: ``-h/2 Z``.
    At ``N = 2`` the two bonds coincide, doubling the bond coefficients.
    """
    n = spec.n_sites
    terms: list[tuple[str, float]] = []
    for j in range(1, n + 1):
        j2 = j % n + 1
        terms.append(
            (pauli.embed_string(n, {j: "X", j2: "X"}), -(1 + spec.gamma) / 4)
        )
        terms.append(
            (pauli.embed_string(n, {j: "Y", j2: "Y"}), -(1 - spec.gamma) / 4)
        )
        terms.append((pauli.embed_string(n, {j: "Z"}), -spec.h / 2))
    return pauli.collect(n, terms)


def momentum_grid(n_sites: int, sector: int) -> np.ndarray:
    """Sector momentum grid in [0, 2 pi).

    The even-parity sector (+1) uses half-integer multiples
    ``p = 2 pi (l + 1/2) / N``; the odd sector (-1) integer multiples
    ``p = 2 pi l / N``, for ``l = 0 .. N-1``.
    """
    if sector == 1:
        ls = np.arange(n_sites) + 0.5
    elif sector == -1:
        ls = np.arange(n_sites, dtype=float)
    else:
        raise ValueError("sector must be +1 or -1")
    return 2.0 * np.pi * ls / n_sites


def dispersion(p: np.ndarray, gamma: float, h: float) -> np.ndarray:
    """Quasiparticle energy ``sqrt((cos p - h)^2 + gamma^2 sin^2 p)``."""
    return np.sqrt((np.cos(p) - h) ** 2 + gamma**2 * np.sin(p) ** 2)


def min_dispersion_sq(gamma: float, h: float) -> float:
    """Closed-form minimum of the squared dispersion over all momenta.

    Writing the squared dispersion as a quadratic in ``cos p``, the interior
    stationary point ``cos p = h / (1 - gamma^2)`` is admissible only for
    ``gamma < 1`` and ``gamma^2 + h <= 1``, giving
    ``gamma^2 (1 - gamma^2 - h^2) / (1 - gamma^2)``; otherwise the minimum
    sits at the band edge ``p = 0`` with value ``(1 - h)^2``.
    """
    if gamma < 0 or h < 0:
        raise ValueError("gamma and h must be non-negative")
    if gamma < 1.0 and gamma * gamma + h <= 1.0:
        g2 = gamma * gamma
        return g2 * (1.0 - g2 - h * h) / (1.0 - g2)
    return (1.0 - h) ** 2


def bogoliubov_phase(p: np.ndarray, gamma: float, h: float) -> np.ndarray:
    """Phase factor ``e^{2 i theta(p)} = (h - cos p + i gamma sin p)/eps``."""
    return (h - np.cos(p) + 1j * gamma * np.sin(p)) / dispersion(p, gamma, h)


def phase_derivative(
    p: np.ndarray,
    gamma: float,
    h: float,
    *,
    parameter: str,
    order: int,
    branch: int,
) -> np.ndarray:
    """Parameter derivatives of the Bogoliubov phase factors.

    Args:
        p: Momenta (scalar or array).
        gamma: Anisotropy.
        h: Transverse field.
        parameter: ``"gamma"`` or ``"h"``.
        order: Derivative order, 1 or 2.
        branch: +1 for ``e^{+2 i theta}``, -1 for ``e^{-2 i theta}``.

    Returns:
        The complex derivative values, same shape as ``p``.
    """
    if parameter not in ("gamma", "h"):
        raise ValueError("parameter must be 'gamma' or 'h'")
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    if branch not in (-1, 1):
        raise ValueError("branch must be +1 or -1")
    s = np.sin(p)
    c = np.cos(p)
    eps = dispersion(p, gamma, h)
    g = gamma
    if branch == 1:
        if parameter == "gamma" and order == 1:
            return 1j * s * (h - c) / ((h - 1j * g * s - c) * eps)
        if parameter == "gamma" and order == 2:
            return (
                s**2
                * (c - h)
                * (h + 2j * g * s - c)
                / ((h + 1j * g * s - c) * (-h + 1j * g * s + c) ** 2 * eps)
            )
        if parameter == "h" and order == 1:
            return g * s / ((g * s + 1j * (h - c)) * eps)
        return (
            -1j
            * g
            * s
            * (-2 * h - 1j * g * s + 2 * c)
            / ((h + 1j * g * s - c) * (-h + 1j * g * s + c) ** 2 * eps)
        )
    if parameter == "gamma" and order == 1:
        return 1j * s * (c - h) / ((h + 1j * g * s - c) * eps)
    if parameter == "gamma" and order == 2:
        return (
            s**2
            * (c - h)
            * (h - 2j * g * s - c)
            / ((h - 1j * g * s - c) * (h + 1j * g * s - c) ** 2 * eps)
        )
    if parameter == "h" and order == 1:
        return g * s / ((-1j * h + g * s + 1j * c) * eps)
    return (
        1j
        * g
        * s
        * (-2 * h + 1j * g * s + 2 * c)
        / ((h - 1j * g * s - c) * (h + 1j * g * s - c) ** 2 * eps)
    )


# ---------------------------------------------------------------------------
# Quasiparticle number operators and parent Hamiltonians
# ---------------------------------------------------------------------------


def _finalize_real(
    n_sites: int, acc: dict[str, complex], tol: float = pauli.PRUNE_TOL
) -> PauliOperator:
    out: dict[str, float] = {}
    for string, coeff in acc.items():
        if abs(coeff.imag) > pauli.HERMITICITY_TOL * (1.0 + abs(coeff)):
            raise ValueError(
                f"non-Hermitian accumulation at {string!r}: {coeff}"
            )
        if abs(coeff.real) > tol:
            out[string] = coeff.real
    return PauliOperator(n_sites, out)


def number_operator(
    spec: XYModelSpec, p: float, sector: int | None = None
) -> PauliOperator:
    """Quasiparticle occupation ``n_p`` as an explicit Pauli sum.

    Assembled from the fermion bilinear double sum over sites with the
    string (Z-product) factors of the spin-to-fermion mapping and the
    Bogoliubov mixing matrix ``[[1, i e^{2 i theta}], [-i e^{-2 i theta},
    1]]``; the overall prefactor per site pair is ``e^{-i p (l - j)}/(4N)``.
    The result is a projector (eigenvalues 0 and 1) on the full space.

    Args:
        spec: Chain parameters.
        p: A sector momentum; off-grid values are rejected because the
            double sum is a projector only on the allowed grids.
        sector: When given, restrict the momentum check to that sector's
            grid instead of the union of both grids.

    Raises:
        ValueError: If ``p`` is not a grid momentum (modulo ``2 pi``), or
            if the dispersion vanishes at ``p`` (critical point), where the
            Bogoliubov rotation is undefined.
    """
    n = spec.n_sites
    sectors = (sector,) if sector is not None else (1, -1)
    folded = float(np.mod(p, 2.0 * np.pi))
    on_grid = any(
        bool(np.isclose(momentum_grid(n, s), folded, atol=1e-9).any())
        for s in sectors
    )
    if not on_grid:
        raise ValueError(f"momentum {p} is not on the allowed grid")
    eps = float(dispersion(np.asarray(p), spec.gamma, spec.h))
    if eps < 1e-12:
        raise ValueError(f"dispersion vanishes at p = {p}; phase undefined")
    f = complex(bogoliubov_phase(np.asarray(p), spec.gamma, spec.h))
    mix = ((1.0 + 0j, 1j * f), (-1j * np.conj(f), 1.0 + 0j))
    acc: dict[str, complex] = {}
    for j in range(1, n + 1):
        jw_j = "Z" * (j - 1) + "I" * (n - j + 1)
        for l in range(1, n + 1):
            jw_l = "Z" * (l - 1) + "I" * (n - l + 1)
            pref = np.exp(-1j * p * (l - j)) / (4 * n)
            for ai, a_char in enumerate("XY"):
                s_a = pauli.embed_string(n, {j: a_char})
                for bi, b_char in enumerate("XY"):
                    s_b = pauli.embed_string(n, {l: b_char})
                    phase = 0
                    string = jw_j
                    for factor in (s_a, s_b, jw_l):
                        k, string = pauli._string_product(string, factor)
                        phase += k
                    coeff = pref * mix[ai][bi] * pauli._PHASE[phase & 3]
                    acc[string] = acc.get(string, 0.0) + coeff
    return _finalize_real(n, acc)


def sector_hamiltonian(spec: XYModelSpec, sector: int) -> PauliOperator:
    """Free-quasiparticle form ``sum_p eps(p) (n_p - 1/2)`` of one sector.

    Valid as the Hamiltonian only on the matching parity block; the full
    chain is recovered by parity-projecting each sector's form.
    """
    n = spec.n_sites
    acc = PauliOperator(n, {})
    for p in momentum_grid(n, sector):
        eps = float(dispersion(np.asarray(p), spec.gamma, spec.h))
        term = pauli.scale(number_operator(spec, float(p), sector), eps)
        term = pauli.add(term, PauliOperator(n, {"I" * n: -0.5 * eps}))
        acc = pauli.add(acc, term)
    return acc


def parity_string(n_sites: int) -> PauliOperator:
    """The global parity operator, a Z on every site."""
    return PauliOperator(n_sites, {"Z" * n_sites: 1.0})


def quasiparticle_vacuum_parity(sector: int, h: float) -> int:
    """Bare-fermion parity of a sector's quasiparticle vacuum.

    The even-sector vacuum pairs all modes and is always parity-even.  The
    odd-sector grid contains the unpaired ``p = 0`` mode whose band inverts
    at ``h = 1``: for ``h < 1`` the vacuum holds one bare fermion there
    (parity-odd); for ``h > 1`` it is empty (parity-even).
    """
    if sector == 1:
        return 1
    if sector == -1:
        return -1 if h < 1.0 else 1
    raise ValueError("sector must be +1 or -1")


def pattern_is_valid(pattern: OccupationPattern, spec: XYModelSpec) -> bool:
    """Whether both sector patterns label states of the declared parity.

    A pattern of quasiparticle occupations induces bare-fermion parity
    (vacuum parity) x (-1)^(number of quasiparticles); both sectors' induced
    parities must equal ``pattern.parity`` for the parent construction to
    have a unique zero-energy ground state.
    """
    for sector, occ in ((1, pattern.plus), (-1, pattern.minus)):
        induced = quasiparticle_vacuum_parity(sector, spec.h) * (
            -1 if sum(occ) % 2 else 1
        )
        if induced != pattern.parity:
            return False
    return True


def random_valid_pattern(
    spec: XYModelSpec, rng: np.random.Generator, parity: int | None = None
) -> OccupationPattern:
    """Draw a uniformly random valid occupation pattern.

    Args:
        spec: Chain parameters (the validity rule depends on the field).
        rng: Source of randomness.
        parity: Force the parity label; random when None.
    """
    n = spec.n_sites
    z = int(parity) if parity is not None else int(rng.choice((-1, 1)))

    def draw(sector: int) -> tuple[int, ...]:
        want_odd = quasiparticle_vacuum_parity(sector, spec.h) != z
        while True:
            occ = rng.integers(0, 2, n)
            if occ.sum() % 2 == int(want_odd):
                return tuple(int(x) for x in occ)

    return OccupationPattern(plus=draw(1), minus=draw(-1), parity=z)


def _sector_penalty(
    spec: XYModelSpec, sector: int, occupations: tuple[int, ...]
) -> PauliOperator:
    """``sum_p (n_p - q_p)^2`` of one sector, using ``(n-q)^2 = q^2 + (1-2q) n``."""
    n = spec.n_sites
    grid = momentum_grid(n, sector)
    if len(occupations) != n:
        raise ValueError("pattern length must equal the chain length")
    acc = PauliOperator(n, {})
    const = 0.0
    for p, q in zip(grid, occupations):
        const += float(q) ** 2
        acc = pauli.add(
            acc, pauli.scale(number_operator(spec, float(p), sector), 1.0 - 2.0 * q)
        )
    return pauli.add(acc, PauliOperator(n, {"I" * n: const}))


def build_xy_parent(
    spec: XYModelSpec,
    pattern: OccupationPattern,
    require_valid: bool = True,
) -> PauliOperator:
    """Parity-projected parent Hamiltonian of an occupation pattern.

    Builds ``sum_sector P_sector [ sum_p (n_p - q_p)^2 ] P_sector`` where
    ``P_sector`` projects onto the matching parity block.  Because each
    number operator commutes with the global parity, the projection reduces
    to ``(A + z Pi A) / 2`` per sector with ``Pi`` the parity string.  For a
    valid pattern the spectrum is integer with a unique zero-energy ground
    state and gap exactly 1.

    Args:
        spec: Chain parameters.
        pattern: Target occupations and parity.
        require_valid: When True (default), reject patterns that violate
            the parity-consistency rule (:func:`pattern_is_valid`).

    Raises:
        ValueError: If the pattern is invalid and ``require_valid`` is set.
    """
    if require_valid and not pattern_is_valid(pattern, spec):
        raise ValueError(
            "occupation pattern does not induce the declared parity in both "
            "sectors; no unique ground state"
        )
    n = spec.n_sites
    pi = parity_string(n)
    out = PauliOperator(n, {})
    for sector, occ in ((1, pattern.plus), (-1, pattern.minus)):
        block = _sector_penalty(spec, sector, occ)
        projected = pauli.add(
            block, pauli.scale(pauli.multiply(pi, block), float(sector))
        )
        out = pauli.add(out, pauli.scale(projected, 0.5))
    return out


# ---------------------------------------------------------------------------
# Cosine-weighted charge family
# ---------------------------------------------------------------------------


def liom_matrix(spec: XYModelSpec, sector: int) -> np.ndarray:
    """Coefficient matrix ``A[n, l] = cos((n+1) p_l) eps(p_l)``, shape (N, N).

    Row ``n`` collects the weights of the n-th cosine-modulated conserved
    charge over the sector momenta.  Momenta ``p`` and ``2 pi - p`` give
    identical columns, so the matrix is rank-deficient for N >= 3.
    """
    grid = momentum_grid(spec.n_sites, sector)
    eps = dispersion(grid, spec.gamma, spec.h)
    rows = np.arange(1, spec.n_sites + 1)[:, None]
    return np.cos(rows * grid[None, :]) * eps[None, :]


def _parity_gauge(op: PauliOperator, parity: int) -> PauliOperator:
    """Replace each string by its shorter parity-string product when possible.

    On the parity block with eigenvalue ``parity`` the global parity string
    is the constant ``parity``, so ``S`` and ``parity * (S Z^N)`` act
    identically there; picking whichever has smaller weight folds ring
    hoppings through the boundary instead of the long way around.  Only
    strings commuting with the parity string (real product phase) are
    folded, which keeps the coefficients real.
    """
    n = op.n_sites
    full_z = "Z" * n
    reduced: list[tuple[str, float]] = []
    for string, coeff in op.terms.items():
        k, alt = pauli._string_product(string, full_z)
        phase = pauli._PHASE[k & 3]
        if phase.imag == 0.0 and pauli.pauli_weight(alt) < pauli.pauli_weight(
            string
        ):
            reduced.append((alt, coeff * parity * phase.real))
        else:
            reduced.append((string, coeff))
    return pauli.collect(n, reduced)


def liom_charge(spec: XYModelSpec, sector: int, n: int) -> PauliOperator:
    """The n-th cosine-modulated charge ``sum_l cos((n+1) p_l) eps(p_l) n_{p_l}``.

    Built from row ``n`` (0-based) of :func:`liom_matrix` and reduced to its
    sector-local representative: ring hoppings that wrap the boundary are
    folded with the parity string (a constant on the matching parity block),
    so the result is valid on that block and its bare hopping range ``n + 2``
    caps the Pauli weight at ``min(n + 3, N // 2 + 1)``.
    """
    n_sites = spec.n_sites
    if not 0 <= n < n_sites:
        raise ValueError(f"charge index {n} outside 0..{n_sites - 1}")
    weights = liom_matrix(spec, sector)[n]
    grid = momentum_grid(n_sites, sector)
    acc = PauliOperator(n_sites, {})
    for w, p in zip(weights, grid):
        acc = pauli.add(
            acc, pauli.scale(number_operator(spec, float(p), sector), float(w))
        )
    return _parity_gauge(acc, sector)


def build_liom_parent(
    spec: XYModelSpec,
    pattern: OccupationPattern,
    require_valid: bool = True,
) -> PauliOperator:
    """Parity-projected parent built from the cosine-weighted charges.

    Penalizes ``sum_n (I_n - v_n)^2`` per sector, where ``I_n`` is the n-th
    charge and ``v_n`` its value on the target pattern.  Expanding in the
    number operators gives the Gram-weighted double sum ``sum_{l,l'}
    (A^T A)_{l l'} (n_l - q_l)(n_{l'} - q_{l'})``.  Because the charges
    cannot distinguish momenta ``p`` and ``2 pi - p``, the ground level is
    degenerate; the physically meaningful gap is the first nonzero
    eigenvalue.
    """
    if require_valid and not pattern_is_valid(pattern, spec):
        raise ValueError(
            "occupation pattern does not induce the declared parity in both "
            "sectors; no unique ground state"
        )
    n = spec.n_sites
    pi = parity_string(n)
    ident = "I" * n
    out = PauliOperator(n, {})
    for sector, occ in ((1, pattern.plus), (-1, pattern.minus)):
        gram = liom_matrix(spec, sector)
        gram = gram.T @ gram
        grid = momentum_grid(n, sector)
        shifted = [
            pauli.add(
                number_operator(spec, float(p), sector),
                PauliOperator(n, {ident: -float(q)}),
            )
            for p, q in zip(grid, occ)
        ]
        block = PauliOperator(n, {})
        for a in range(n):
            block = pauli.add(
                block,
                pauli.scale(pauli.multiply(shifted[a], shifted[a]), gram[a, a]),
            )
            for b in range(a + 1, n):
                cross = pauli.multiply(shifted[a], shifted[b])
                block = pauli.add(block, pauli.scale(cross, 2.0 * gram[a, b]))
        projected = pauli.add(
            block, pauli.scale(pauli.multiply(pi, block), float(sector))
        )
        out = pauli.add(out, pauli.scale(projected, 0.5))
    return out


def dense_spectrum_summary(
    op: PauliOperator, zero_tol: float = 1e-9
) -> tuple[float, int, float]:
    """Ground energy, ground-level degeneracy, and gap of a dense spectrum.

    Returns:
        Triple ``(ground, degeneracy, gap)`` where ``degeneracy`` counts
        eigenvalues within ``zero_tol`` of the lowest and ``gap`` is the
        distance from the lowest to the first level beyond them.

    Raises:
        RuntimeError: If every eigenvalue sits at the ground level, so no
            gap exists.
    """
    levels = np.linalg.eigvalsh(pauli.to_dense(op))
    ground = float(levels[0])
    above = levels[levels > ground + zero_tol]
    if above.size == 0:
        raise RuntimeError("spectrum is a single degenerate level; no gap")
    return ground, int(levels.size - above.size), float(above[0] - ground)


def parity_block_indices(n_sites: int, parity: int) -> np.ndarray:
    """Computational-basis indices whose spin parity equals ``parity``.

    The parity of basis state ``b`` is ``(-1)**popcount(b)``, the eigenvalue
    of :func:`parity_string`.  Restricting a dense operator to these indices
    extracts one parity block of any parity-commuting operator.
    """
    if parity not in (1, -1):
        raise ValueError(f"parity must be +1 or -1, got {parity}")
    basis = np.arange(2**n_sites, dtype=np.int64)
    counts = np.zeros(2**n_sites, dtype=np.int64)
    for shift in range(n_sites):
        counts += (basis >> shift) & 1
    return np.nonzero(1 - 2 * (counts % 2) == parity)[0]


def liom_parent_gap(
    spec: XYModelSpec,
    pattern: OccupationPattern,
    zero_tol: float = 1e-9,
) -> float:
    """First nonzero parent eigenvalue within the pattern's parity block.

    The parent commutes with the global parity, and states in the opposite
    block differ from the target in a conserved quantum number; they are
    excluded here because their levels (reachable by an odd number of mode
    flips) can sit as low as ``(N/2) eps^2`` and are certified separately.
    Within the target block every excitation flips an even number of modes
    and costs at least ``N min_p eps^2(p)``, the grid value returned by
    :func:`liom_gap_bound`.
    """
    parent = build_liom_parent(spec, pattern)
    dense = pauli.to_dense(parent)
    keep = parity_block_indices(spec.n_sites, pattern.parity)
    block = dense[np.ix_(keep, keep)]
    levels = np.linalg.eigvalsh(block)
    nonzero = levels[levels > zero_tol]
    if nonzero.size == 0:
        raise RuntimeError("parent has no nonzero level in the target block")
    return float(nonzero[0])


def liom_gap_bound(spec: XYModelSpec) -> tuple[float, float]:
    """Lower bounds on the first nonzero parent eigenvalue.

    Returns:
        Pair ``(grid_bound, continuum_bound)``: ``N`` times the minimum
        squared dispersion over the union of both sector grids, and ``N``
        times the continuum minimum (:func:`min_dispersion_sq`).  The grid
        bound is the operative one; the continuum value never exceeds it.
    """
    n = spec.n_sites
    combined = np.concatenate(
        [momentum_grid(n, 1), momentum_grid(n, -1)]
    )
    eps_sq = dispersion(combined, spec.gamma, spec.h) ** 2
    return n * float(eps_sq.min()), n * min_dispersion_sq(spec.gamma, spec.h)
