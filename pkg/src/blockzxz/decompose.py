"""Recursive block-ZXZ synthesis: factor construction, demultiplexing, driver.

One recursion step rewrites an m-qubit unitary as

    U = (A1 ⊕ A2) · (H ⊗ I) · (I ⊕ B) · (H ⊗ I) · (I ⊕ C)

with the factors produced by :func:`compute_zxz_factors`. Each block-diagonal
piece demultiplexes into (I ⊗ V)(D ⊕ D†)(I ⊗ W), turning the step into three
multiplexed-Rz gates interleaved with (m−1)-qubit children; the children
recurse. The recursion always strips the most significant qubit of its block,
so every two-qubit leaf lands on the bottom wire pair, which is what keeps
the diagonal-migration pass legal.

At L2 and above the two Hadamard-adjacent CNOTs of every step are absorbed
algebraically: the outer multiplexed rotations lose their wrap-around CNOT
(DROP_LAST / DROP_FIRST) and the central block is conjugated into
B̃1 = W_A·V_C, B̃2 = (Z⊗I)·W_A·B·V_C·(Z⊗I) by :func:`merge_central`.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import circuit as cir
from .circuit import Circuit, Gate, circuit_to_unitary, distance_up_to_phase
from .config import OptLevel, SynthesisConfig
from .errors import LoweringError, SynthesisError
from .linalg import as_complex_matrix, assert_unitary, direct_sum, polar, unitary_eig
from .small_gates import kak2_up_to_diagonal, kak3, zyz_gates
from .ucrz import alphas_from_diagonal, synthesize_ucrz


@dataclass(frozen=True)
class BlockSplit:
    x: np.ndarray
    y: np.ndarray
    u21: np.ndarray
    u22: np.ndarray


@dataclass(frozen=True)
class BlockZXZFactors:
    a1: np.ndarray
    a2: np.ndarray
    b: np.ndarray
    c: np.ndarray
    # polar intermediates, kept for diagnostics
    s_x: np.ndarray
    u_x: np.ndarray
    s_y: np.ndarray
    u_y: np.ndarray


@dataclass(frozen=True)
class DemuxFactors:
    v: np.ndarray
    d: np.ndarray
    w: np.ndarray


@dataclass(frozen=True)
class CentralMerge:
    b1: np.ndarray
    b2: np.ndarray


def split_blocks(u) -> BlockSplit:
    """Quarter a matrix into [X Y; U21 U22]."""
    a = as_complex_matrix(u, "split_blocks input")
    if a.shape[0] < 4 or a.shape[0] % 2:
        raise ValueError("block splitting needs an even dimension of at least 4")
    half = a.shape[0] // 2
    return BlockSplit(
        a[:half, :half].copy(),
        a[:half, half:].copy(),
        a[half:, :half].copy(),
        a[half:, half:].copy(),
    )


def compute_zxz_factors(u, node_tol: float = 1e-8, check: bool = True) -> BlockZXZFactors:
    """Unitary factors (A1, A2, B, C) of the block-ZXZ identity.

    A1 = (S_X + i·S_Y)·U_X with (S, U) the polar parts of the X and Y blocks,
    C† = i·U_Y†·U_X, A2 = U21 + U22·C†, and B = 2·A1†·X − I. When ``check``
    is set the assembled identity is verified and a violation raises
    :class:`SynthesisError` (degenerate factorizations surface here instead
    of corrupting the circuit).
    """
    a = as_complex_matrix(u, "compute_zxz_factors input")
    assert_unitary(a, 1e-8, "compute_zxz_factors input")
    sp = split_blocks(a)
    half = sp.x.shape[0]
    s_x, u_x = polar(sp.x)
    s_y, u_y = polar(sp.y)
    c_dag = 1j * u_y.conj().T @ u_x
    a1 = (s_x + 1j * s_y) @ u_x
    a2 = sp.u21 + sp.u22 @ c_dag
    b = 2.0 * a1.conj().T @ sp.x - np.eye(half)
    c = c_dag.conj().T
    if check:
        eye = np.eye(half)
        middle = 0.5 * np.block([[eye + b, eye - b], [eye - b, eye + b]])
        rec = direct_sum(a1, a2) @ middle @ direct_sum(eye, c)
        residual = float(np.max(np.abs(rec - a)))
        if residual > node_tol:
            raise SynthesisError(
                "block-ZXZ factors failed to reassemble the input", residual=residual
            )
    return BlockZXZFactors(a1, a2, b, c, s_x, u_x, s_y, u_y)


def demultiplex(u1, u2, tol: float = 1e-8, check: bool = True) -> DemuxFactors:
    """Factor U1 ⊕ U2 = (I ⊗ V)(D ⊕ D†)(I ⊗ W).

    V and D² come from the eigendecomposition of U1·U2†; D takes the
    principal square root of each eigenvalue and W = D·V†·U2.
    """
    m1 = as_complex_matrix(u1, "demultiplex U1")
    m2 = as_complex_matrix(u2, "demultiplex U2")
    if m1.shape != m2.shape:
        raise ValueError(f"demultiplex needs equal shapes, got {m1.shape} vs {m2.shape}")
    eig = unitary_eig(m1 @ m2.conj().T, tol=1e-7, factor_tol=max(tol, 1e-10))
    d = np.exp(0.5j * np.angle(eig.lam))
    v = eig.v
    w = (d[:, None] * v.conj().T) @ m2
    if check:
        r1 = float(np.max(np.abs(v @ (d[:, None] * w) - m1)))
        r2 = float(np.max(np.abs(v @ (d.conj()[:, None] * w) - m2)))
        residual = max(r1, r2)
        if residual > tol:
            raise SynthesisError(
                "demultiplexing failed to reassemble its inputs", residual=residual
            )
    return DemuxFactors(v, d, w)


def merge_central(v_c, w_a, b) -> CentralMerge:
    """Absorb the two step CZs into the central multiplexor.

    B̃1 = W_A·V_C and B̃2 = (Z⊗I)·W_A·B·V_C·(Z⊗I), with Z on the most
    significant qubit of the lower register, so that
    (CZ)(I⊗W_A)(I⊕B)(I⊗V_C)(CZ) = B̃1 ⊕ B̃2.
    """
    mv = as_complex_matrix(v_c, "merge_central V_C")
    mw = as_complex_matrix(w_a, "merge_central W_A")
    mb = as_complex_matrix(b, "merge_central B")
    if not (mv.shape == mw.shape == mb.shape):
        raise ValueError("merge_central needs three equal-dimension matrices")
    if mv.shape[0] < 2 or mv.shape[0] % 2:
        raise ValueError("merge_central needs an even dimension of at least 2")
    half = mv.shape[0] // 2
    zsign = np.concatenate([np.ones(half), -np.ones(half)])
    core = mw @ mb @ mv
    b2 = zsign[:, None] * core * zsign[None, :]  # (Z⊗I) core (Z⊗I)
    return CentralMerge(mw @ mv, b2)


# -- recursion -------------------------------------------------------------


def _validated(u, cfg: SynthesisConfig) -> tuple[np.ndarray, int]:
    a = as_complex_matrix(u, "synthesis input")
    dim = a.shape[0]
    n = dim.bit_length() - 1
    if dim < 2 or dim != 1 << n:
        raise ValueError(f"dimension must be a power of two of at least 2, got {dim}")
    assert_unitary(a, cfg.unitarity_tol, "synthesis input")
    return a, n


def _recurse(a: np.ndarray, qubits: tuple[int, ...], cfg: SynthesisConfig, out: list[Gate], check: bool) -> None:
    m = len(qubits)
    if m == 1:
        out.append(cir.generic_1q(a, qubits[0]))
        return
    if m == 2 and cfg.opt_level >= OptLevel.L1:
        out.append(cir.generic_block(a, qubits))
        return

    factors = compute_zxz_factors(a, node_tol=cfg.node_tol, check=check)
    half = a.shape[0] // 2
    eye = np.eye(half, dtype=complex)
    dx_a = demultiplex(factors.a1, factors.a2, tol=cfg.node_tol, check=check)
    dx_c = demultiplex(eye, factors.c, tol=cfg.node_tol, check=check)
    top, sub = qubits[0], qubits[1:]

    if cfg.opt_level >= OptLevel.L2:
        merged = merge_central(dx_c.v, dx_a.w, factors.b)
        dx_b = demultiplex(merged.b1, merged.b2, tol=cfg.node_tol, check=check)
        _recurse(dx_c.w, sub, cfg, out, check)
        out.append(
            cir.ucrz_first(alphas_from_diagonal(dx_c.d), qubits, cir.STANDARD, cir.DROP_LAST)
        )
        out.append(cir.h(top))
        _recurse(dx_b.w, sub, cfg, out, check)
        out.append(cir.ucrz_first(alphas_from_diagonal(dx_b.d), qubits))
        _recurse(dx_b.v, sub, cfg, out, check)
        out.append(cir.h(top))
        out.append(
            cir.ucrz_first(alphas_from_diagonal(dx_a.d), qubits, cir.REVERSED, cir.DROP_FIRST)
        )
        _recurse(dx_a.v, sub, cfg, out, check)
    else:
        dx_b = demultiplex(eye, factors.b, tol=cfg.node_tol, check=check)
        _recurse(dx_c.w, sub, cfg, out, check)
        out.append(cir.ucrz_first(alphas_from_diagonal(dx_c.d), qubits))
        out.append(cir.h(top))
        # neighbor one-qubit-smaller gates merge by plain multiplication
        _recurse(dx_b.w @ dx_c.v, sub, cfg, out, check)
        out.append(cir.ucrz_first(alphas_from_diagonal(dx_b.d), qubits))
        _recurse(dx_a.w @ dx_b.v, sub, cfg, out, check)
        out.append(cir.h(top))
        out.append(cir.ucrz_first(alphas_from_diagonal(dx_a.d), qubits))
        _recurse(dx_a.v, sub, cfg, out, check)


def build_ir(u, config: SynthesisConfig | None = None) -> Circuit:
    """Recursion output before lowering: pseudo-gate circuit equal to u."""
    cfg = config if config is not None else SynthesisConfig()
    a, n = _validated(u, cfg)
    out: list[Gate] = []
    _recurse(a, tuple(range(n)), cfg, out, cfg.node_checks_enabled(n))
    return Circuit(n, tuple(out))


# -- lowering --------------------------------------------------------------


def _commutes_with_bottom_diagonal(g: Gate, bottom: tuple[int, int]) -> bool:
    bset = set(bottom)
    if g.kind in (cir.RZ, cir.Z, cir.CZ, cir.DIAGONAL, cir.GLOBAL_PHASE):
        return True
    if g.kind == cir.CNOT:
        return g.qubits[1] not in bset  # control may sit on the bottom pair
    if g.kind == cir.UCRZ_FIRST:
        return g.drop == cir.KEEP or g.qubits[0] not in bset
    if g.kind in (cir.H, cir.RX, cir.RY, cir.GENERIC_1Q):
        return g.qubits[0] not in bset
    return not (set(g.qubits) & bset)


def migrate_diagonals(circuit: Circuit, config: SynthesisConfig | None = None) -> Circuit:
    """Lower every bottom-pair two-qubit block, saving a CNOT per block but one.

    Blocks are processed from last to first in time. Each one except the
    first is synthesized up to a diagonal; the residual diagonal commutes
    with everything between consecutive blocks (checked structurally) and is
    folded into the preceding block's matrix. The first block absorbs the
    accumulated diagonal exactly with the 3-CNOT template.
    """
    del config  # uniform signature with the other passes
    n = circuit.num_qubits
    if n < 2:
        raise ValueError("diagonal migration needs at least two qubits")
    bottom = (n - 2, n - 1)
    gates = list(circuit.gates)
    idxs = [i for i, g in enumerate(gates) if g.kind == cir.GENERIC_BLOCK]
    if not idxs:
        return circuit
    for i in idxs:
        if gates[i].qubits != bottom:
            raise ValueError(
                "diagonal migration requires every two-qubit block on the bottom wire pair"
            )
    for g in gates[idxs[0] + 1 : idxs[-1]]:
        if g.kind != cir.GENERIC_BLOCK and not _commutes_with_bottom_diagonal(g, bottom):
            raise SynthesisError(
                f"gate {g.kind} on {g.qubits} blocks diagonal migration"
            )

    phase = circuit.global_phase
    mapping = {0: bottom[0], 1: bottom[1]}
    replacement: dict[int, list[Gate]] = {}
    pending: np.ndarray | None = None
    for pos in range(len(idxs) - 1, -1, -1):
        i = idxs[pos]
        mat = gates[i].matrix
        if pending is not None:
            mat = pending[:, None] * mat  # diag(pending) @ mat
        if pos == 0:
            synth = kak3(mat)
            pending = None
        else:
            synth = kak2_up_to_diagonal(mat)
            pending = synth.residual_diagonal
        phase *= synth.circuit.global_phase
        replacement[i] = [cir.remap_gate(g, mapping) for g in synth.circuit.gates]

    new_gates: list[Gate] = []
    for i, g in enumerate(gates):
        if i in replacement:
            new_gates.extend(replacement[i])
        else:
            new_gates.append(g)
    return Circuit(n, tuple(new_gates), phase)


def _lower_gate(g: Gate, out: list[Gate], cfg: SynthesisConfig) -> complex:
    if g.kind == cir.GLOBAL_PHASE:
        return g.phase
    if g.kind in cir.ELEMENTARY_KINDS:
        out.append(g)
        return 1.0 + 0.0j
    if g.kind == cir.UCRZ_FIRST:
        out.extend(synthesize_ucrz(g.params, g.qubits[0], g.qubits[1:], g.variant, g.drop))
        return 1.0 + 0.0j
    if g.kind == cir.GENERIC_1Q:
        gates, phase = zyz_gates(g.matrix, g.qubits[0])
        out.extend(gates)
        return phase
    if g.kind == cir.GENERIC_BLOCK:
        if len(g.qubits) == 2:
            synth = kak3(g.matrix)
            mapping = {0: g.qubits[0], 1: g.qubits[1]}
            out.extend(cir.remap_gate(x, mapping) for x in synth.circuit.gates)
            return synth.circuit.global_phase
        # a free-standing larger block: recurse without cross-block migration
        inner = cfg if cfg.opt_level <= OptLevel.L2 else replace(cfg, opt_level=OptLevel.L2)
        sub: list[Gate] = []
        _recurse(g.matrix, g.qubits, inner, sub, inner.node_checks_enabled(len(g.qubits)))
        phase = 1.0 + 0.0j
        for x in sub:
            phase *= _lower_gate(x, out, inner)
        return phase
    if g.kind == cir.MULTIPLEXOR:
        half = g.matrix.shape[0] // 2
        dx = demultiplex(g.matrix[:half, :half], g.matrix[half:, half:], tol=cfg.node_tol)
        sub_qs = g.qubits[1:]
        if len(sub_qs) == 1:
            parts = [cir.generic_1q(dx.w, sub_qs[0]), None, cir.generic_1q(dx.v, sub_qs[0])]
        else:
            parts = [cir.generic_block(dx.w, sub_qs), None, cir.generic_block(dx.v, sub_qs)]
        parts[1] = cir.ucrz_first(alphas_from_diagonal(dx.d), g.qubits)
        phase = 1.0 + 0.0j
        for x in parts:
            phase *= _lower_gate(x, out, cfg)
        return phase
    if g.kind == cir.DIAGONAL:
        full = np.diag(g.diag)
        if len(g.qubits) == 1:
            return _lower_gate(cir.generic_1q(full, g.qubits[0]), out, cfg)
        return _lower_gate(cir.generic_block(full, g.qubits), out, cfg)
    raise LoweringError(f"cannot lower gate kind {g.kind}")  # pragma: no cover


def lower(circuit: Circuit, config: SynthesisConfig | None = None) -> Circuit:
    """Expand all pseudo-gates into {H, Z, RX, RY, RZ, CNOT, CZ} + phase."""
    cfg = config if config is not None else SynthesisConfig()
    c = circuit
    if cfg.opt_level >= OptLevel.L3 and c.num_qubits >= 2:
        bottom = (c.num_qubits - 2, c.num_qubits - 1)
        blocks = [g for g in c.gates if g.kind == cir.GENERIC_BLOCK]
        if blocks and all(g.qubits == bottom for g in blocks):
            c = migrate_diagonals(c, cfg)
    out: list[Gate] = []
    phase = c.global_phase
    for g in c.gates:
        phase *= _lower_gate(g, out, cfg)
    return Circuit(c.num_qubits, tuple(out), phase)


def synthesize(u, config: SynthesisConfig | None = None) -> Circuit:
    """Compile a unitary into an elementary-gate circuit.

    Runs the recursion at ``config.opt_level``, lowers the result, and (by
    default, registers permitting) simulates the emitted circuit to confirm
    it reproduces the input within ``config.verify_tol``.
    """
    cfg = config if config is not None else SynthesisConfig()
    a, n = _validated(u, cfg)
    circ = lower(build_ir(a, cfg), cfg)
    if cfg.verify_final and n <= cfg.simulation_cap:
        dist = distance_up_to_phase(a, circuit_to_unitary(circ, cfg.simulation_cap))
        if dist > cfg.verify_tol:
            raise SynthesisError(
                "synthesized circuit failed end-to-end verification", residual=dist
            )
    return circ
