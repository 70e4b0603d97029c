"""Multiplexed-Rz synthesis via the binary reflected Gray code.

A uniformly controlled Rz on the first qubit of a (k+1)-qubit block realizes
D ⊕ D† with D = diag(e^{-i α_j / 2}). It lowers to an alternating ladder of
2^k Rz gates on the target and 2^k CNOTs whose controls walk the Gray code:
the l-th CNOT sits on the bit position where the l-th and (l+1)-th Gray-code
words differ, and the final CNOT closes the wrap-around (always position 1,
the most significant control). Each control position is hit an even number
of times, which is what makes the per-branch rotation signs come out as
M_{ij} = (−1)^{b_{i−1}·g_{j−1}}; the ladder angles θ then solve M θ = α,
directly invertible through M Mᵀ = 2^k I.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from . import circuit as cir
from .errors import ResourceError


def gray_code(i: int) -> int:
    return i ^ (i >> 1)


def gray_schedule(k: int) -> list[int]:
    """CNOT control positions (1 = most significant control) for k controls."""
    if not 1 <= k <= 16:
        raise ResourceError(f"control count {k} out of the supported range 1..16")
    n = 1 << k
    positions = []
    for l in range(1, n):
        diff = gray_code(l - 1) ^ gray_code(l)
        positions.append(k - (diff.bit_length() - 1))
    positions.append(1)  # wrap-around g_{2^k - 1} -> g_0 flips the top bit
    return positions


def mk_matrix(k: int) -> np.ndarray:
    """The ±1 matrix M with M_{ij} = (−1)^{popcount(i & gray(j))}."""
    if not 1 <= k <= 12:
        raise ResourceError(f"control count {k} out of the supported range 1..12")
    n = 1 << k
    i = np.arange(n)[:, None]
    g = np.array([gray_code(j) for j in range(n)])[None, :]
    bits = np.zeros((n, n), dtype=int)
    masked = i & g
    while masked.any():
        bits += masked & 1
        masked >>= 1
    return np.where(bits % 2 == 0, 1, -1)


def alphas_from_diagonal(d: Sequence[complex], tol: float = 1e-10) -> np.ndarray:
    """Angles with e^{-i α_j / 2} = d_j, arg on the branch (−π, π]."""
    d = np.asarray(d, dtype=complex).reshape(-1)
    defect = np.max(np.abs(np.abs(d) - 1.0))
    if defect > tol:
        raise ValueError(f"diagonal entries must be unit modulus (defect {defect:.3e})")
    return -2.0 * np.angle(d)


def solve_thetas(alphas: Sequence[float]) -> np.ndarray:
    """Ladder angles θ with M θ = α, via θ = 2^{-k} Mᵀ α."""
    alphas = np.asarray(alphas, dtype=float).reshape(-1)
    size = alphas.shape[0]
    k = size.bit_length() - 1
    if size != 1 << k:
        raise ValueError(f"angle count must be a power of two, got {size}")
    return mk_matrix(k).T @ alphas / size


def synthesize_ucrz(
    alphas: Sequence[float],
    target: int,
    controls: Sequence[int],
    variant: str = cir.STANDARD,
    drop: str = cir.KEEP,
) -> list[cir.Gate]:
    """Elementary gate sequence (time order) for a multiplexed Rz.

    STANDARD emits [Rz(θ_1), CX, ..., Rz(θ_{2^k}), CX]; REVERSED is the exact
    mirror image (the same diagonal unitary, since every component matrix is
    symmetric). DROP_LAST removes the final-in-time CNOT of STANDARD and
    DROP_FIRST the first-in-time CNOT of REVERSED; both omitted CNOTs are the
    wrap-around with control on the most significant control qubit.
    """
    controls = tuple(controls)
    k = len(controls)
    alphas = np.asarray(alphas, dtype=float).reshape(-1)
    if alphas.shape[0] != 1 << k:
        raise ValueError(f"need {1 << k} angles for {k} controls, got {alphas.shape[0]}")
    if variant not in (cir.STANDARD, cir.REVERSED):
        raise ValueError(f"bad variant {variant!r}")
    if drop == cir.DROP_LAST and variant != cir.STANDARD:
        raise ValueError("DROP_LAST is only defined for the STANDARD variant")
    if drop == cir.DROP_FIRST and variant != cir.REVERSED:
        raise ValueError("DROP_FIRST is only defined for the REVERSED variant")
    if drop not in (cir.KEEP, cir.DROP_LAST, cir.DROP_FIRST):
        raise ValueError(f"bad drop mode {drop!r}")

    thetas = solve_thetas(alphas)
    schedule = gray_schedule(k)
    seq: list[cir.Gate] = []
    for l in range(1 << k):
        seq.append(cir.rz(thetas[l], target))
        seq.append(cir.cnot(controls[schedule[l] - 1], target))
    if variant == cir.REVERSED:
        seq.reverse()
    if drop == cir.DROP_LAST:
        seq.pop()
    elif drop == cir.DROP_FIRST:
        seq.pop(0)
    return seq
