"""Gate model, circuit container, and the exact reconstruction oracle.

Conventions (normative for the whole package):

* Qubit 0 is the most significant bit / top wire. A basis index is read as
  b = q0 q1 ... q_{n-1}.
* Gates are listed in time order; the circuit unitary is
  ``global_phase · G_k ... G_2 G_1`` (last gate leftmost).
* ``RZ(t) = diag(e^{-it/2}, e^{it/2})``. ``RY`` and ``RX`` use the transposed
  sign convention ``exp(+i t Y/2)`` / ``exp(+i t X/2)``:
  ``RY(t) = [[cos(t/2), sin(t/2)], [-sin(t/2), cos(t/2)]]``,
  ``RX(t) = [[cos(t/2), i sin(t/2)], [i sin(t/2), cos(t/2)]]``.
* CNOT stores (control, target). CZ is symmetric and stores a sorted pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ResourceError

# gate kinds
H = "H"
Z = "Z"
RX = "RX"
RY = "RY"
RZ = "RZ"
CNOT = "CNOT"
CZ = "CZ"
GENERIC_1Q = "GENERIC_1Q"
GENERIC_BLOCK = "GENERIC_BLOCK"
UCRZ_FIRST = "UCRZ_FIRST"
MULTIPLEXOR = "MULTIPLEXOR"
DIAGONAL = "DIAGONAL"
GLOBAL_PHASE = "GLOBAL_PHASE"

ELEMENTARY_KINDS = frozenset({H, Z, RX, RY, RZ, CNOT, CZ, GLOBAL_PHASE})
_ALL_KINDS = ELEMENTARY_KINDS | {
    GENERIC_1Q,
    GENERIC_BLOCK,
    UCRZ_FIRST,
    MULTIPLEXOR,
    DIAGONAL,
}

# multiplexed-Rz emission variants
STANDARD = "standard"
REVERSED = "reversed"
KEEP = "keep"
DROP_LAST = "drop_last"
DROP_FIRST = "drop_first"

_MATRIX_TOL = 1e-9  # unitarity tolerance for matrices embedded in gates


class LoweringLevel(Enum):
    IR = "ir"
    ELEMENTARY = "elementary"


def _frozen_array(a) -> np.ndarray:
    out = np.array(a, dtype=complex)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Gate:
    """One circuit element. Use the module-level constructors below."""

    kind: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()
    matrix: np.ndarray | None = None
    diag: np.ndarray | None = None
    phase: complex | None = None
    variant: str | None = None  # UCRZ_FIRST only
    drop: str | None = None  # UCRZ_FIRST only

    def __post_init__(self) -> None:
        if self.kind not in _ALL_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"{self.kind} qubits must be distinct, got {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise ValueError("qubit indices must be non-negative")
        nq = len(self.qubits)
        if self.kind in (H, Z, RX, RY, RZ, GENERIC_1Q) and nq != 1:
            raise ValueError(f"{self.kind} acts on exactly one qubit")
        if self.kind in (CNOT, CZ) and nq != 2:
            raise ValueError(f"{self.kind} acts on exactly two qubits")
        if self.kind in (RX, RY, RZ):
            if len(self.params) != 1 or not math.isfinite(self.params[0]):
                raise ValueError(f"{self.kind} takes one finite angle")
        if self.kind in (GENERIC_1Q, GENERIC_BLOCK, MULTIPLEXOR):
            m = self.matrix
            dim = 1 << nq
            if m is None or m.shape != (dim, dim):
                raise ValueError(f"{self.kind} needs a {dim}x{dim} matrix")
            defect = np.max(np.abs(m.conj().T @ m - np.eye(dim)))
            if defect > _MATRIX_TOL:
                raise ValueError(
                    f"{self.kind} matrix is not unitary (defect {defect:.3e})"
                )
            if self.kind == GENERIC_BLOCK and nq < 2:
                raise ValueError("GENERIC_BLOCK needs at least two qubits")
            if self.kind == MULTIPLEXOR:
                if nq < 2:
                    raise ValueError("MULTIPLEXOR needs a select qubit plus targets")
                half = dim // 2
                off = max(
                    np.max(np.abs(m[:half, half:])), np.max(np.abs(m[half:, :half]))
                )
                if off > _MATRIX_TOL:
                    raise ValueError("MULTIPLEXOR matrix must be block-diagonal")
        if self.kind == DIAGONAL:
            d = self.diag
            if d is None or d.shape != (1 << nq,):
                raise ValueError("DIAGONAL needs 2^k unit-modulus entries")
            if np.max(np.abs(np.abs(d) - 1.0)) > _MATRIX_TOL:
                raise ValueError("DIAGONAL entries must be unit modulus")
        if self.kind == UCRZ_FIRST:
            if nq < 2:
                raise ValueError("UCRZ_FIRST needs a target and at least one control")
            if len(self.params) != 1 << (nq - 1):
                raise ValueError("UCRZ_FIRST needs 2^k angles for k controls")
            if self.variant not in (STANDARD, REVERSED):
                raise ValueError(f"bad UCRZ variant {self.variant!r}")
            if self.drop not in (KEEP, DROP_LAST, DROP_FIRST):
                raise ValueError(f"bad UCRZ drop mode {self.drop!r}")
            if self.drop == DROP_LAST and self.variant != STANDARD:
                raise ValueError("DROP_LAST is only defined for the STANDARD variant")
            if self.drop == DROP_FIRST and self.variant != REVERSED:
                raise ValueError("DROP_FIRST is only defined for the REVERSED variant")
        if self.kind == GLOBAL_PHASE:
            if nq != 0:
                raise ValueError("GLOBAL_PHASE takes no qubits")
            if self.phase is None or abs(abs(self.phase) - 1.0) > _MATRIX_TOL:
                raise ValueError("GLOBAL_PHASE needs a unit-modulus scalar")


# -- constructors ---------------------------------------------------------


def h(q: int) -> Gate:
    return Gate(H, (q,))


def z(q: int) -> Gate:
    return Gate(Z, (q,))


def rx(theta: float, q: int) -> Gate:
    return Gate(RX, (q,), (float(theta),))


def ry(theta: float, q: int) -> Gate:
    return Gate(RY, (q,), (float(theta),))


def rz(theta: float, q: int) -> Gate:
    return Gate(RZ, (q,), (float(theta),))


def cnot(control: int, target: int) -> Gate:
    return Gate(CNOT, (control, target))


def cz(a: int, b: int) -> Gate:
    return Gate(CZ, tuple(sorted((a, b))))


def generic_1q(matrix, q: int) -> Gate:
    return Gate(GENERIC_1Q, (q,), matrix=_frozen_array(matrix))


def generic_block(matrix, qubits) -> Gate:
    return Gate(GENERIC_BLOCK, tuple(qubits), matrix=_frozen_array(matrix))


def multiplexor(matrix, qubits) -> Gate:
    """Block-diagonal (U1 ⊕ U2) selected by the first listed qubit."""
    return Gate(MULTIPLEXOR, tuple(qubits), matrix=_frozen_array(matrix))


def diagonal(entries, qubits) -> Gate:
    return Gate(DIAGONAL, tuple(qubits), diag=_frozen_array(entries).reshape(-1))


def ucrz_first(alphas, qubits, variant: str = STANDARD, drop: str = KEEP) -> Gate:
    """Multiplexed Rz on qubits[0], controlled by qubits[1:]."""
    return Gate(
        UCRZ_FIRST,
        tuple(qubits),
        tuple(float(a) for a in np.asarray(alphas).reshape(-1)),
        variant=variant,
        drop=drop,
    )


def global_phase(value: complex) -> Gate:
    return Gate(GLOBAL_PHASE, (), phase=complex(value))


# -- circuit --------------------------------------------------------------


@dataclass(frozen=True)
class Circuit:
    """Time-ordered gate sequence with an explicit global phase."""

    num_qubits: int
    gates: tuple[Gate, ...] = ()
    global_phase: complex = 1.0 + 0.0j

    def __post_init__(self) -> None:
        if self.num_qubits < 1:
            raise ValueError("a circuit needs at least one qubit")
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "global_phase", complex(self.global_phase))
        for g in self.gates:
            if g.qubits and max(g.qubits) >= self.num_qubits:
                raise ValueError(
                    f"gate {g.kind} on {g.qubits} exceeds register of "
                    f"{self.num_qubits} qubits"
                )
        if abs(abs(self.global_phase) - 1.0) > 1e-8:
            raise ValueError("global phase must be unit modulus")


def is_elementary(c: Circuit) -> bool:
    return all(g.kind in ELEMENTARY_KINDS for g in c.gates)


def lowering_level(c: Circuit) -> LoweringLevel:
    return LoweringLevel.ELEMENTARY if is_elementary(c) else LoweringLevel.IR


# -- local matrices -------------------------------------------------------

_H_MAT = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_Z_MAT = np.array([[1, 0], [0, -1]], dtype=complex)
# (control, target) slot order
_CNOT_MAT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
# (target, control) slot order, used for the UCRZ wrap CNOT
_CNOT_REV_MAT = np.array(
    [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex
)
_CZ_MAT = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)


def _rx_mat(t: float) -> np.ndarray:
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, 1j * s], [1j * s, c]])


def _ry_mat(t: float) -> np.ndarray:
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, s], [-s, c]], dtype=complex)


def _rz_mat(t: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * t), np.exp(0.5j * t)])


def ucrz_first_matrix(alphas, drop: str = KEEP) -> np.ndarray:
    """Local matrix of a multiplexed Rz in (target, controls...) slot order.

    KEEP is the diagonal D ⊕ D† with D = diag(e^{-i α_j/2}). The drop modes
    account for the omitted wrap-around CNOT (control = first control slot):
    DROP_LAST = CX_wrap @ (D ⊕ D†), DROP_FIRST = (D ⊕ D†) @ CX_wrap.
    """
    alphas = np.asarray(alphas, dtype=float).reshape(-1)
    d = np.exp(-0.5j * alphas)
    m = np.diag(np.concatenate([d, d.conj()]))
    if drop == KEEP:
        return m
    k = alphas.shape[0].bit_length() - 1
    wrap = np.kron(_CNOT_REV_MAT, np.eye(1 << (k - 1)))
    return wrap @ m if drop == DROP_LAST else m @ wrap


def _local_matrix(g: Gate) -> np.ndarray:
    if g.kind == H:
        return _H_MAT
    if g.kind == Z:
        return _Z_MAT
    if g.kind == RX:
        return _rx_mat(g.params[0])
    if g.kind == RY:
        return _ry_mat(g.params[0])
    if g.kind == RZ:
        return _rz_mat(g.params[0])
    if g.kind == CNOT:
        return _CNOT_MAT
    if g.kind == CZ:
        return _CZ_MAT
    if g.kind in (GENERIC_1Q, GENERIC_BLOCK, MULTIPLEXOR):
        return g.matrix
    if g.kind == DIAGONAL:
        return np.diag(g.diag)
    if g.kind == UCRZ_FIRST:
        return ucrz_first_matrix(g.params, g.drop)
    raise ValueError(f"no local matrix for {g.kind}")  # pragma: no cover


def apply_gate(mat: np.ndarray, local: np.ndarray, qubits, num_qubits: int) -> np.ndarray:
    """Left-multiply the embedded gate onto a 2^n x 2^n matrix.

    The row index of ``mat`` is treated as n qubit axes (axis i = qubit i);
    ``local`` is contracted against the axes listed in ``qubits``.
    """
    n = num_qubits
    dim = 1 << n
    k = len(qubits)
    t = mat.reshape((2,) * n + (dim,))
    gl = np.asarray(local, dtype=complex).reshape((2,) * (2 * k))
    t = np.tensordot(gl, t, axes=(tuple(range(k, 2 * k)), tuple(qubits)))
    t = np.moveaxis(t, range(k), qubits)
    return t.reshape(dim, dim)


def gate_matrix(g: Gate, num_qubits: int) -> np.ndarray:
    """Full 2^n x 2^n matrix of a single gate."""
    if g.qubits and max(g.qubits) >= num_qubits:
        raise ValueError(f"gate on {g.qubits} does not fit in {num_qubits} qubits")
    dim = 1 << num_qubits
    if g.kind == GLOBAL_PHASE:
        return g.phase * np.eye(dim, dtype=complex)
    return apply_gate(np.eye(dim, dtype=complex), _local_matrix(g), g.qubits, num_qubits)


def circuit_to_unitary(c: Circuit, max_qubits: int = 10) -> np.ndarray:
    """Exact unitary of the circuit (the verification oracle)."""
    if c.num_qubits > max_qubits:
        raise ResourceError(
            f"{c.num_qubits}-qubit circuit exceeds the simulation cap of {max_qubits}"
        )
    n = c.num_qubits
    m = np.eye(1 << n, dtype=complex)
    for g in c.gates:
        if g.kind == GLOBAL_PHASE:
            m = g.phase * m
        else:
            m = apply_gate(m, _local_matrix(g), g.qubits, n)
    return c.global_phase * m


def cnot_count(c: Circuit) -> int:
    """Number of two-qubit entangling gates (CNOT and CZ both count as one)."""
    if not is_elementary(c):
        raise ValueError("cnot_count is defined on lowered circuits only")
    return sum(1 for g in c.gates if g.kind in (CNOT, CZ))


def one_qubit_count(c: Circuit) -> int:
    return sum(1 for g in c.gates if g.kind in (H, Z, RX, RY, RZ))


def distance_up_to_phase(u: np.ndarray, v: np.ndarray) -> float:
    """sqrt(1 − |tr(U†V)|/2^n): zero iff U and V agree up to a global phase.

    Evaluated as ‖U − e^{−iφ}V‖_F / sqrt(2·2^n) at the optimal phase
    φ = arg tr(U†V) — the same number, but the cancellation happens in the
    matrix difference instead of in 1 − |tr|/2^n, so values far below
    sqrt(machine-eps) remain meaningful.
    """
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape or u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    overlap = np.vdot(u, v)  # tr(U†V)
    scale = abs(overlap)
    phase = overlap.conjugate() / scale if scale > 0.0 else 1.0
    diff = u - phase * v
    return float(np.linalg.norm(diff)) / math.sqrt(2.0 * u.shape[0])


def _gate_fields_equal(a: Gate, b: Gate) -> bool:
    if (a.kind, a.qubits, a.params, a.variant, a.drop) != (
        b.kind,
        b.qubits,
        b.params,
        b.variant,
        b.drop,
    ):
        return False
    for x, y in ((a.matrix, b.matrix), (a.diag, b.diag)):
        if (x is None) != (y is None):
            return False
        if x is not None and not np.array_equal(x, y):
            return False
    if (a.phase is None) != (b.phase is None):
        return False
    return a.phase is None or a.phase == b.phase


def circuit_equal(a: Circuit, b: Circuit) -> bool:
    """Structural equality (exact gate-by-gate comparison)."""
    return (
        a.num_qubits == b.num_qubits
        and a.global_phase == b.global_phase
        and len(a.gates) == len(b.gates)
        and all(_gate_fields_equal(x, y) for x, y in zip(a.gates, b.gates))
    )


def remap_gate(g: Gate, mapping: dict[int, int]) -> Gate:
    """Same gate on relabeled wires."""
    return Gate(
        g.kind,
        tuple(mapping[q] for q in g.qubits),
        g.params,
        g.matrix,
        g.diag,
        g.phase,
        g.variant,
        g.drop,
    )
