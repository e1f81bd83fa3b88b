"""Integrable-parent-Hamiltonian toolkit.

Subpackages cover a sparse Pauli-string algebra (:mod:`iprep.pauli`),
integrable model builders (:mod:`iprep.models`), numerical continuation of
quadratic Bethe roots with gap tracking and separation bounds
(:mod:`iprep.rg`), closed-form XY-chain analytics and parent constructions
(:mod:`iprep.xy`), thermodynamic Bethe-ansatz dressing equations for the XXZ
chain (:mod:`iprep.tba`), sector-resolved exact diagonalization
(:mod:`iprep.ed`), Trotterized adiabatic state preparation
(:mod:`iprep.adiabatic`), and reproducible experiment drivers
(:mod:`iprep.experiments`, :mod:`iprep.cli`).
"""

__version__ = "0.1.0"

__all__ = [
    "pauli",
    "models",
    "rg",
    "xy",
    "tba",
    "ed",
    "adiabatic",
    "experiments",
    "cli",
]
