"""Shared test helpers: random unitaries and a brute-force gate embedder."""

import numpy as np

from blockzxz.linalg import haar_random


def haar(dim: int, seed: int) -> np.ndarray:
    return haar_random(dim, seed)


def naive_embed(local: np.ndarray, qubits: tuple[int, ...], n: int) -> np.ndarray:
    """Reference embedding of a k-qubit gate into an n-qubit register.

    Walks computational basis states explicitly, with qubit 0 as the most
    significant bit. Deliberately index-based and slow — it shares no code
    with the tensor-contraction path it cross-checks.
    """
    dim = 1 << n
    k = len(qubits)
    out = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        bits = [(col >> (n - 1 - q)) & 1 for q in range(n)]
        sub_col = 0
        for q in qubits:
            sub_col = (sub_col << 1) | bits[q]
        for sub_row in range(1 << k):
            amp = local[sub_row, sub_col]
            if amp == 0:
                continue
            new_bits = list(bits)
            for j, q in enumerate(qubits):
                new_bits[q] = (sub_row >> (k - 1 - j)) & 1
            row = 0
            for b in new_bits:
                row = (row << 1) | b
            out[row, col] += amp
    return out
