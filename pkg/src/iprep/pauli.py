"""Sparse Pauli-string algebra on a chain of spin-1/2 sites.

Operators are stored as real linear combinations of N-site Pauli strings
(words over ``I, X, Y, Z``).  Site 1 is the leftmost character of a string
and corresponds to the most significant bit of a computational basis index,
so for example ``Z`` on site 1 of a two-site chain is ``diag(1, 1, -1, -1)``.

Only Hermitian operators are representable: every stored coefficient is a
real number.  Products of two Hermitian Pauli sums are generally not
Hermitian; :func:`multiply` therefore checks that all imaginary parts cancel
and raises if they do not, which restricts it (by design) to uses where the
result is guaranteed Hermitian, such as squares.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache, reduce
from typing import Iterable, Iterator, Mapping

import numpy as np

__all__ = [
    "PRUNE_TOL",
    "HERMITICITY_TOL",
    "PauliOperator",
    "identity",
    "embed_string",
    "collect",
    "add",
    "scale",
    "multiply",
    "pauli_weight",
    "max_weight",
    "one_norm",
    "to_dense",
    "dense_string",
    "string_kernel",
    "apply_string",
    "apply_to_state",
    "expectation",
    "to_text",
]

#: Coefficients with magnitude at or below this threshold are dropped.
PRUNE_TOL = 1e-14

#: Largest tolerated imaginary residue when a product must be Hermitian.
HERMITICITY_TOL = 1e-12

_CHARS = "IXYZ"

# Single-site product table: (a, b) -> (k, c) meaning a·b = i^k · c.
_PRODUCT: dict[tuple[str, str], tuple[int, str]] = {}
for _a in _CHARS:
    _PRODUCT[("I", _a)] = (0, _a)
    _PRODUCT[(_a, "I")] = (0, _a)
    _PRODUCT[(_a, _a)] = (0, "I")
_PRODUCT[("X", "Y")] = (1, "Z")
_PRODUCT[("Y", "X")] = (3, "Z")
_PRODUCT[("Y", "Z")] = (1, "X")
_PRODUCT[("Z", "Y")] = (3, "X")
_PRODUCT[("Z", "X")] = (1, "Y")
_PRODUCT[("X", "Z")] = (3, "Y")

_PHASE = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)


def _check_string(string: str, n_sites: int) -> None:
    if len(string) != n_sites:
        raise ValueError(
            f"string {string!r} has length {len(string)}, expected {n_sites}"
        )
    bad = set(string) - set(_CHARS)
    if bad:
        raise ValueError(f"string {string!r} contains invalid characters {bad}")


@dataclass
class PauliOperator:
    """A real linear combination of Pauli strings on ``n_sites`` sites.

    Attributes:
        n_sites: Number of spin-1/2 sites.
        terms: Mapping from Pauli string to its real coefficient.  Strings
            are words of length ``n_sites`` over ``I, X, Y, Z``.
    """

    n_sites: int
    terms: dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for string in self.terms:
            _check_string(string, self.n_sites)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[str, float]]:
        return iter(self.terms.items())

    def coefficient(self, string: str) -> float:
        """Return the coefficient of ``string`` (0.0 if absent)."""
        _check_string(string, self.n_sites)
        return self.terms.get(string, 0.0)

    def copy(self) -> "PauliOperator":
        return PauliOperator(self.n_sites, dict(self.terms))


def identity(n_sites: int) -> PauliOperator:
    """The identity operator on ``n_sites`` sites."""
    return PauliOperator(n_sites, {"I" * n_sites: 1.0})


def embed_string(n_sites: int, sites_to_chars: Mapping[int, str]) -> str:
    """Build a Pauli string acting nontrivially on the given 1-based sites.

    Args:
        n_sites: Chain length.
        sites_to_chars: Mapping from 1-based site index to one of ``X, Y, Z``.

    Returns:
        The length-``n_sites`` string with ``I`` everywhere else.
    """
    chars = ["I"] * n_sites
    for site, char in sites_to_chars.items():
        if not 1 <= site <= n_sites:
            raise ValueError(f"site {site} outside 1..{n_sites}")
        if char not in "XYZ":
            raise ValueError(f"invalid Pauli character {char!r}")
        chars[site - 1] = char
    return "".join(chars)


def collect(
    n_sites: int,
    terms: Iterable[tuple[str, float]],
    tol: float = PRUNE_TOL,
) -> PauliOperator:
    """Merge repeated strings of a term list into a pruned operator.

    Args:
        n_sites: Chain length.
        terms: Iterable of ``(string, coefficient)`` pairs; repeated strings
            are summed.
        tol: Coefficients with ``|c| <= tol`` after merging are dropped.

    Returns:
        The collected operator.
    """
    acc: dict[str, float] = {}
    for string, coeff in terms:
        _check_string(string, n_sites)
        acc[string] = acc.get(string, 0.0) + float(coeff)
    return PauliOperator(n_sites, {s: c for s, c in acc.items() if abs(c) > tol})


def add(a: PauliOperator, b: PauliOperator, tol: float = PRUNE_TOL) -> PauliOperator:
    """Return ``a + b`` with near-zero coefficients pruned."""
    if a.n_sites != b.n_sites:
        raise ValueError("operands act on different chain lengths")
    acc = dict(a.terms)
    for string, coeff in b.terms.items():
        acc[string] = acc.get(string, 0.0) + coeff
    return PauliOperator(a.n_sites, {s: c for s, c in acc.items() if abs(c) > tol})


def scale(a: PauliOperator, factor: float) -> PauliOperator:
    """Return ``factor * a`` (dropping everything if ``factor == 0``)."""
    if factor == 0.0:
        return PauliOperator(a.n_sites, {})
    return PauliOperator(a.n_sites, {s: factor * c for s, c in a.terms.items()})


def _string_product(s1: str, s2: str) -> tuple[int, str]:
    """Multiply two Pauli strings: returns ``(k, s)`` with s1·s2 = i^k · s."""
    phase = 0
    out = []
    for a, b in zip(s1, s2):
        k, c = _PRODUCT[(a, b)]
        phase += k
        out.append(c)
    return phase & 3, "".join(out)


def multiply(
    a: PauliOperator, b: PauliOperator, tol: float = PRUNE_TOL
) -> PauliOperator:
    """Return the operator product ``a · b``, which must be Hermitian.

    The term-by-term product is accumulated with its complex phases; the
    imaginary parts must cancel (as they do for squares and for products of
    commuting Hermitian operators).

    Raises:
        ValueError: If a resulting coefficient has an imaginary residue
            exceeding :data:`HERMITICITY_TOL` (relative to its magnitude).
    """
    if a.n_sites != b.n_sites:
        raise ValueError("operands act on different chain lengths")
    acc: dict[str, complex] = {}
    for s1, c1 in a.terms.items():
        for s2, c2 in b.terms.items():
            k, s = _string_product(s1, s2)
            acc[s] = acc.get(s, 0.0) + c1 * c2 * _PHASE[k]
    out: dict[str, float] = {}
    for s, c in acc.items():
        if abs(c.imag) > HERMITICITY_TOL * (1.0 + abs(c)):
            raise ValueError(
                f"product is not Hermitian: string {s!r} has coefficient {c}"
            )
        if abs(c.real) > tol:
            out[s] = c.real
    return PauliOperator(a.n_sites, out)


def pauli_weight(string: str) -> int:
    """Number of non-identity characters of a Pauli string."""
    return sum(1 for ch in string if ch != "I")


def max_weight(a: PauliOperator) -> int:
    """Largest :func:`pauli_weight` over the strings of ``a`` (0 if empty)."""
    return max((pauli_weight(s) for s in a.terms), default=0)


def one_norm(a: PauliOperator) -> float:
    """Sum of absolute coefficients, an upper bound on the spectral norm."""
    return float(sum(abs(c) for c in a.terms.values()))


def _bit_parity(v: np.ndarray) -> np.ndarray:
    """Parity of the popcount of each entry of an integer array."""
    v = v.copy()
    for shift in (32, 16, 8, 4, 2, 1):
        v ^= v >> shift
    return v & 1


def _string_masks(string: str) -> tuple[int, int, int]:
    """Bit masks for one string: (flip mask, phase mask, number of Y's).

    Site ``k`` (1-based, leftmost character) maps to bit ``n - k`` of a basis
    index, i.e. site 1 is the most significant bit.
    """
    n = len(string)
    flip = 0
    phase = 0
    n_y = 0
    for k, ch in enumerate(string):
        bit = 1 << (n - 1 - k)
        if ch in "XY":
            flip |= bit
        if ch in "YZ":
            phase |= bit
        if ch == "Y":
            n_y += 1
    return flip, phase, n_y


def dense_string(string: str) -> np.ndarray:
    """Dense (complex) matrix of a single Pauli string."""
    n = len(string)
    dim = 1 << n
    flip, phase_mask, n_y = _string_masks(string)
    b = np.arange(dim, dtype=np.int64)
    phases = _PHASE[n_y & 3] * np.where(_bit_parity(b & phase_mask) == 1, -1.0, 1.0)
    mat = np.zeros((dim, dim), dtype=np.complex128)
    mat[b ^ flip, b] = phases
    return mat


def to_dense(a: PauliOperator) -> np.ndarray:
    """Dense (complex Hermitian) matrix of the operator."""
    dim = 1 << a.n_sites
    mat = np.zeros((dim, dim), dtype=np.complex128)
    b = np.arange(dim, dtype=np.int64)
    for string, coeff in a.terms.items():
        flip, phase_mask, n_y = _string_masks(string)
        phases = _PHASE[n_y & 3] * np.where(
            _bit_parity(b & phase_mask) == 1, -1.0, 1.0
        )
        mat[b ^ flip, b] += coeff * phases
    return mat


@lru_cache(maxsize=4096)
def string_kernel(string: str) -> tuple[np.ndarray, np.ndarray]:
    """Cached action kernel of one Pauli string.

    Returns:
        A pair ``(perm, phase)`` of length ``2**n`` arrays such that
        ``(P psi)[c] = phase[c] * psi[perm[c]]``.  The returned arrays are
        shared across calls and must not be mutated.
    """
    n = len(string)
    dim = 1 << n
    flip, phase_mask, n_y = _string_masks(string)
    c = np.arange(dim, dtype=np.int64)
    perm = c ^ flip
    phase = _PHASE[n_y & 3] * np.where(
        _bit_parity(perm & phase_mask) == 1, -1.0, 1.0
    )
    perm.setflags(write=False)
    phase.setflags(write=False)
    return perm, phase


def apply_string(string: str, psi: np.ndarray) -> np.ndarray:
    """Apply a single Pauli string to a state vector."""
    perm, phase = string_kernel(string)
    return phase * psi[perm]


def apply_to_state(a: PauliOperator, psi: np.ndarray) -> np.ndarray:
    """Apply the operator to a state vector of length ``2**n_sites``."""
    dim = 1 << a.n_sites
    if psi.shape != (dim,):
        raise ValueError(f"state has shape {psi.shape}, expected ({dim},)")
    out = np.zeros(dim, dtype=np.complex128)
    for string, coeff in a.terms.items():
        perm, phase = string_kernel(string)
        out += coeff * (phase * psi[perm])
    return out


def expectation(a: PauliOperator, psi: np.ndarray) -> float:
    """Real expectation value ``<psi| a |psi>`` of the Hermitian operator."""
    val = np.vdot(psi, apply_to_state(a, psi))
    return float(val.real)


def to_text(a: PauliOperator) -> str:
    """Serialize as one ``coefficient PAULISTRING`` line per term.

    Lines are ordered lexicographically by string; coefficients use the
    shortest round-trippable decimal form.
    """
    lines = [
        f"{format(coeff, '.17g')} {string}"
        for string, coeff in sorted(a.terms.items())
    ]
    return "\n".join(lines)
