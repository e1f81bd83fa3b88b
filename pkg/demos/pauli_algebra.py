"""
Sparse Pauli-string algebra
===========================

Operators are dictionaries mapping Pauli strings to real coefficients.
Site 1 is the leftmost character and the most significant bit of the
dense index; products, sums, and state application all stay sparse
until a dense matrix is explicitly requested.
"""

import numpy as np

from iprep import pauli

# Build sum(Z_k) on four sites plus a boundary-wrapping hopping term.
n = 4
total_z = pauli.collect(
    n, [(pauli.embed_string(n, {k: "Z"}), 1.0) for k in range(1, n + 1)]
)
hop = pauli.collect(
    n,
    [
        (pauli.embed_string(n, {1: "X", 4: "X"}), -0.5),
        (pauli.embed_string(n, {1: "Y", 4: "Y"}), -0.5),
    ],
)

print("total Z operator:")
print(pauli.to_text(total_z))
print("boundary hopping:")
print(pauli.to_text(hop))

# Products of Hermitian operators with real string algebra stay Hermitian;
# the coefficients are collected and pruned automatically.
square = pauli.multiply(hop, hop)
print("hopping squared:")
print(pauli.to_text(square))

# Operators act on dense state vectors through index permutations and
# phases, one string at a time, without forming any matrix.
state = np.zeros(2**n, dtype=complex)
state[0b0101] = 1.0  # sites 2 and 4 flipped down
print("<state| sum Z |state> =", pauli.expectation(total_z, state).real)

# The dense route agrees with the sparse one.
dense = pauli.to_dense(total_z)
print("dense agreement:", np.allclose(dense @ state, pauli.apply_to_state(total_z, state)))

# One-norm and maximum Pauli weight feed resource estimates elsewhere.
print("one-norm of hopping^2:", pauli.one_norm(square))
print("max weight of hopping^2:", pauli.max_weight(square))
