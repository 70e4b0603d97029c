"""Closed-form synthesis of one- and two-qubit unitaries.

One-qubit gates go through the ZYZ factorization. Two-qubit gates go through
the magic basis: conjugating U into the basis of maximally entangled states
turns the local/nonlocal split into an orthogonal/symmetric matrix problem,
solved with one real symmetric eigendecomposition. The canonical midpoint
exp(i(a·XX + b·YY + c·ZZ)) is then matched against a fixed CNOT template:
three CNOTs for the general case, or two CNOTs once a diagonal has been
split off (the b coefficient can always be rotated onto a multiple of π/2
for some pairing of the eigenvalues, and that multiple folds into the local
gates as (Y⊗Y)^m).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import circuit as cir
from .circuit import Circuit, Gate
from .errors import FactorizationError
from .linalg import as_complex_matrix, assert_unitary

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]])
_SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)
# magic basis, columns |Φ+>, i|Φ−>, i|Ψ+>, |Ψ−>
_E = np.array(
    [[1, 1j, 0, 0], [0, 0, 1j, 1], [0, 0, 1j, -1], [1, -1j, 0, 0]], dtype=complex
) / math.sqrt(2)
_Ed = _E.conj().T
# Hadamard-like involution exchanging X and Y: G X G = Y, G Z G = −Z
_G = (_X + _Y) / math.sqrt(2)

# F = E Eᵀ is the antidiagonal (1, −1, −1, 1); its outer/inner antidiagonal
# parts drive the trace transform that finds the 2-CNOT-class diagonal.
_F = _E @ _E.T
_F_OUT = np.zeros((4, 4), dtype=complex)
_F_OUT[0, 3], _F_OUT[3, 0] = _F[0, 3], _F[3, 0]
_F_IN = np.zeros((4, 4), dtype=complex)
_F_IN[1, 2], _F_IN[2, 1] = _F[1, 2], _F[2, 1]


class ZYZAngles(NamedTuple):
    phi: float
    alpha: float
    beta: float
    gamma: float


@dataclass(frozen=True)
class TwoQubitSynth:
    """A lowered two-qubit circuit, optionally exact only up to a diagonal.

    When ``residual_diagonal`` is present the relation is
    ``U = C_mat @ diag(residual_diagonal)`` with C_mat the circuit's matrix,
    i.e. the diagonal sits on the earlier-in-time side of the circuit.
    """

    circuit: Circuit
    residual_diagonal: np.ndarray | None = None


def zyz(u) -> ZYZAngles:
    """Angles with U = e^{iφ} · RZ(α) · RY(β) · RZ(γ), β ∈ [0, π]."""
    a = as_complex_matrix(u, "zyz input")
    if a.shape != (2, 2):
        raise ValueError(f"zyz expects a 2x2 matrix, got {a.shape}")
    assert_unitary(a, 1e-8, "zyz input")
    det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    phi = float(np.angle(det)) / 2
    v = a * np.exp(-1j * phi)
    # V = [[cos(β/2) e^{−i(α+γ)/2}, sin(β/2) e^{−i(α−γ)/2}], [...]],
    # so magnitudes give β and the two arguments give α ± γ. np.angle(0) = 0
    # keeps the degenerate branches stable.
    beta = 2.0 * math.atan2(abs(v[1, 0]), abs(v[0, 0]))
    asum = -2.0 * float(np.angle(v[0, 0]))
    adiff = -2.0 * float(np.angle(v[0, 1]))
    return ZYZAngles(phi, (asum + adiff) / 2, beta, (asum - adiff) / 2)


def zyz_gates(u, qubit: int) -> tuple[list[Gate], complex]:
    """Time-ordered elementary gates for a one-qubit unitary, plus its phase."""
    ang = zyz(u)
    gates = [cir.rz(ang.gamma, qubit), cir.ry(ang.beta, qubit), cir.rz(ang.alpha, qubit)]
    return gates, complex(np.exp(1j * ang.phi))


# -- magic-basis core ------------------------------------------------------


def _extract_tensor(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split m = p ⊗ q exactly (any scalar folded into p)."""
    blocks = [(i, j, m[2 * i : 2 * i + 2, 2 * j : 2 * j + 2]) for i in range(2) for j in range(2)]
    _, _, blk = max(blocks, key=lambda t: float(np.linalg.norm(t[2])))
    q = blk / np.sqrt(np.linalg.det(blk))
    p = np.empty((2, 2), dtype=complex)
    qd = q.conj().T
    for k in range(2):
        for l in range(2):
            p[k, l] = np.trace(qd @ m[2 * k : 2 * k + 2, 2 * l : 2 * l + 2]) / 2
    return p, q


def _diag_sym_unitary(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Complex symmetric unitary M = P diag(lam) Pᵀ with P real special orthogonal.

    Real and imaginary parts of M commute, so a weighted sum has the right
    eigenvectors; a few weights guard against accidental degeneracies.
    """
    re, im = m.real, m.imag
    for f in (math.pi, 10.0, 0.123456789):
        _, p = np.linalg.eigh(re / f + f * im)
        lam = np.diag(p.T @ m @ p).copy()
        if np.max(np.abs(p @ np.diag(lam) @ p.T - m)) < 1e-11:
            break
    else:
        raise FactorizationError("could not diagonalize the magic-basis Gram matrix")
    if np.linalg.det(p) < 0:
        p = p.copy()
        p[:, 0] = -p[:, 0]
    return p, lam


def _angles_from_eta(eta: np.ndarray) -> tuple[float, float, float, float]:
    phi = float(eta.sum()) / 4
    a = float(eta[0] - eta[1] + eta[2] - eta[3]) / 4
    b = float(-eta[0] + eta[1] + eta[2] - eta[3]) / 4
    c = float(eta[0] + eta[1] - eta[2] - eta[3]) / 4
    return phi, a, b, c


def _kak_core(v: np.ndarray):
    """V = (p1 ⊗ q1) · e^{iφ} exp(i(a XX + b YY + c ZZ)) · (p2 ⊗ q2)."""
    vm = _Ed @ v @ _E
    gram = vm.T @ vm
    p, lam = _diag_sym_unitary(gram)
    eta = np.angle(lam) / 2
    o1 = vm @ p @ np.diag(np.exp(-1j * eta))
    if np.linalg.det(o1).real < 0:
        eta = eta.copy()
        eta[0] += math.pi
        o1 = o1.copy()
        o1[:, 0] = -o1[:, 0]
    imag = float(np.max(np.abs(o1.imag)))
    if imag > 1e-9:
        raise FactorizationError(
            "magic-basis left factor failed to come out real", residual=imag
        )
    phi, a, b, c = _angles_from_eta(eta)
    p1, q1 = _extract_tensor(_E @ o1.real @ _Ed)
    p2, q2 = _extract_tensor(_E @ p.T @ _Ed)
    return p1, q1, phi, a, b, c, p2, q2


def _append_local(gates: list[Gate], u: np.ndarray, qubit: int) -> complex:
    lowered, phase = zyz_gates(u, qubit)
    gates.extend(lowered)
    return phase


def kak3(u) -> TwoQubitSynth:
    """Universal 3-CNOT synthesis of a two-qubit unitary.

    Decomposes SWAP·U in the magic basis and matches the canonical midpoint
    against CX10 · (RZ ⊗ RY) after absorbing the SWAP into the template; the
    G conjugation swaps the X and Y axes so all three interaction angles land
    on template parameters.
    """
    a = as_complex_matrix(u, "kak3 input")
    if a.shape != (4, 4):
        raise ValueError(f"kak3 expects a 4x4 matrix, got {a.shape}")
    assert_unitary(a, 1e-8, "kak3 input")
    p1, q1, phi, xa, xb, xc, p2, q2 = _kak_core(_SWAP @ a)
    gates: list[Gate] = []
    phase = complex(np.exp(1j * phi))
    phase *= _append_local(gates, p2, 0)
    phase *= _append_local(gates, _G @ q2, 1)
    gates.append(cir.cnot(1, 0))
    gates.append(cir.rz(2 * xc, 0))
    gates.append(cir.ry(2 * xa, 1))
    gates.append(cir.cnot(0, 1))
    gates.append(cir.ry(2 * xb, 1))
    gates.append(cir.cnot(1, 0))
    phase *= _append_local(gates, q1 @ _G, 0)
    phase *= _append_local(gates, p1, 1)
    return TwoQubitSynth(Circuit(2, tuple(gates), phase), None)


def _trace_transform(u: np.ndarray) -> np.ndarray:
    """Diagonal Δ (as a 4-vector, det 1) with U·diag(Δ) in the 2-CNOT class."""
    w = np.sqrt(np.linalg.det(u) + 0j)
    ta = np.trace(u @ _F_OUT @ u.T @ _F.conj().T) / w
    tb = np.trace(u @ _F_IN @ u.T @ _F.conj().T) / w
    beta = math.atan2(-(ta.imag + tb.imag), ta.real - tb.real)
    return np.exp(1j * np.array([beta / 2, -beta / 2, -beta / 2, beta / 2]))


def _kak2_arrange(v: np.ndarray):
    """Magic-basis split of a 2-CNOT-class unitary with the YY angle removed.

    Tries the eigenvalue pairings that can move the YY coefficient onto a
    multiple of π/2 and folds that multiple into the right-hand locals.
    """
    vm = _Ed @ v @ _E
    gram = vm.T @ vm
    p, lam = _diag_sym_unitary(gram)
    best = None
    for perm in ((0, 1, 2, 3), (1, 0, 2, 3), (2, 1, 0, 3)):
        pp = p[:, perm]
        lamp = lam[list(perm)]
        if np.linalg.det(pp) < 0:  # 2-cycles flip the determinant
            pp = pp.copy()
            pp[:, 3] = -pp[:, 3]
        eta = np.angle(lamp) / 2
        o1 = vm @ pp @ np.diag(np.exp(-1j * eta))
        if np.linalg.det(o1).real < 0:
            eta = eta.copy()
            eta[0] += math.pi
            o1 = o1.copy()
            o1[:, 0] = -o1[:, 0]
        b = (-eta[0] + eta[1] + eta[2] - eta[3]) / 4
        r = abs((b + math.pi / 4) % (math.pi / 2) - math.pi / 4)
        if best is None or r < best[0]:
            best = (r, eta, o1, pp)
    r, eta, o1, pp = best
    if r > 1e-8:
        raise FactorizationError(
            "no eigenvalue pairing put the input in the 2-CNOT class", residual=r
        )
    imag = float(np.max(np.abs(o1.imag)))
    if imag > 1e-9:
        raise FactorizationError(
            "magic-basis left factor failed to come out real", residual=imag
        )
    phi, a, b, c = _angles_from_eta(eta)
    p1, q1 = _extract_tensor(_E @ o1.real @ _Ed)
    p2, q2 = _extract_tensor(_E @ pp.T @ _Ed)
    m = int(np.rint(b / (math.pi / 2)))
    ym = np.linalg.matrix_power(_Y, m % 4)
    return p1, q1, phi + m * math.pi / 2, a, c, ym @ p2, ym @ q2


def kak2_up_to_diagonal(u) -> TwoQubitSynth:
    """2-CNOT synthesis of U up to a unit-modulus diagonal.

    Returns a circuit C and residual with U = C_mat · diag(residual); the
    residual commutes with anything diagonal-preserving placed before C.
    """
    a = as_complex_matrix(u, "kak2 input")
    if a.shape != (4, 4):
        raise ValueError(f"kak2 expects a 4x4 matrix, got {a.shape}")
    assert_unitary(a, 1e-8, "kak2 input")
    delta = _trace_transform(a)
    v = a @ np.diag(delta)
    p1, q1, phi, xa, xc, p2, q2 = _kak2_arrange(v)
    gates: list[Gate] = []
    phase = complex(np.exp(1j * phi))
    phase *= _append_local(gates, p2, 0)
    phase *= _append_local(gates, q2, 1)
    gates.append(cir.cnot(1, 0))
    gates.append(cir.rz(-2 * xc, 0))
    gates.append(cir.rx(2 * xa, 1))
    gates.append(cir.cnot(1, 0))
    phase *= _append_local(gates, p1, 0)
    phase *= _append_local(gates, q1, 1)
    return TwoQubitSynth(Circuit(2, tuple(gates), phase), delta.conj())
