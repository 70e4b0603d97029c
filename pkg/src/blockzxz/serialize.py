"""Text formats: circuit JSON, an OpenQASM 3 subset, and plain matrix files.

The JSON form round-trips every gate kind, including the pseudo-gates, so a
recursion-level circuit can be stored and reloaded. The QASM emitter only
accepts fully lowered circuits — the subset covers h, z, rx, ry, rz, cx, cz
and gphase and nothing else.

Matrix files are the simplest thing that survives a shell pipe: the first
line holds the dimension d, then d lines each carrying d "re im" pairs.
"""

from __future__ import annotations

import json
import re

import numpy as np

from . import circuit as cir
from .circuit import Circuit, Gate
from .errors import LoweringError
from .linalg import assert_unitary


def fmt_float(x: float) -> str:
    """17 significant digits — enough to reproduce any double exactly."""
    return format(float(x), ".17g")


def _pairs(values) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values).reshape(-1)]


def _unpairs(pairs) -> np.ndarray:
    return np.array([complex(p[0], p[1]) for p in pairs], dtype=complex)


# -- circuit JSON ----------------------------------------------------------


def circuit_to_json(circuit: Circuit) -> str:
    gates = []
    for g in circuit.gates:
        entry: dict = {"kind": g.kind, "qubits": list(g.qubits)}
        if g.kind in (cir.RX, cir.RY, cir.RZ):
            entry["params"] = [float(g.params[0])]
        elif g.kind == cir.UCRZ_FIRST:
            entry["params"] = [float(p) for p in g.params]
            entry["variant"] = g.variant
            entry["drop"] = g.drop
        elif g.kind == cir.GLOBAL_PHASE:
            entry["params"] = [float(g.phase.real), float(g.phase.imag)]
        elif g.kind in (cir.GENERIC_1Q, cir.GENERIC_BLOCK, cir.MULTIPLEXOR):
            entry["matrix"] = _pairs(g.matrix)
        elif g.kind == cir.DIAGONAL:
            entry["diag"] = _pairs(g.diag)
        gates.append(entry)
    doc = {
        "n": circuit.num_qubits,
        "global_phase": [float(circuit.global_phase.real), float(circuit.global_phase.imag)],
        "gates": gates,
    }
    return json.dumps(doc, separators=(",", ":"))


def circuit_from_json(text: str) -> Circuit:
    doc = json.loads(text)
    n = int(doc["n"])
    re_part, im_part = doc["global_phase"]
    phase = complex(float(re_part), float(im_part))
    gates: list[Gate] = []
    for entry in doc["gates"]:
        kind = entry["kind"]
        qs = tuple(int(q) for q in entry["qubits"])
        if kind == cir.H:
            gates.append(cir.h(qs[0]))
        elif kind == cir.Z:
            gates.append(cir.z(qs[0]))
        elif kind == cir.RX:
            gates.append(cir.rx(float(entry["params"][0]), qs[0]))
        elif kind == cir.RY:
            gates.append(cir.ry(float(entry["params"][0]), qs[0]))
        elif kind == cir.RZ:
            gates.append(cir.rz(float(entry["params"][0]), qs[0]))
        elif kind == cir.CNOT:
            gates.append(cir.cnot(qs[0], qs[1]))
        elif kind == cir.CZ:
            gates.append(cir.cz(qs[0], qs[1]))
        elif kind == cir.GLOBAL_PHASE:
            gates.append(cir.global_phase(complex(entry["params"][0], entry["params"][1])))
        elif kind == cir.UCRZ_FIRST:
            gates.append(
                cir.ucrz_first(
                    [float(p) for p in entry["params"]],
                    qs,
                    entry.get("variant", cir.STANDARD),
                    entry.get("drop", cir.KEEP),
                )
            )
        elif kind == cir.GENERIC_1Q:
            gates.append(cir.generic_1q(_unpairs(entry["matrix"]).reshape(2, 2), qs[0]))
        elif kind == cir.GENERIC_BLOCK:
            dim = 1 << len(qs)
            gates.append(cir.generic_block(_unpairs(entry["matrix"]).reshape(dim, dim), qs))
        elif kind == cir.MULTIPLEXOR:
            dim = 1 << len(qs)
            gates.append(cir.multiplexor(_unpairs(entry["matrix"]).reshape(dim, dim), qs))
        elif kind == cir.DIAGONAL:
            gates.append(cir.diagonal(_unpairs(entry["diag"]), qs))
        else:
            raise ValueError(f"unknown gate kind in JSON: {kind!r}")
    return Circuit(n, tuple(gates), phase)


# -- OpenQASM 3 subset -----------------------------------------------------

_QASM_NAME = {
    cir.H: "h",
    cir.Z: "z",
    cir.RX: "rx",
    cir.RY: "ry",
    cir.RZ: "rz",
    cir.CNOT: "cx",
    cir.CZ: "cz",
}

_QASM_LINE = re.compile(
    r"^(h|z|rx|ry|rz|cx|cz|gphase)\s*(?:\(\s*([^)]+?)\s*\))?\s*([^;]*);$"
)
_QUBIT_REF = re.compile(r"^q\[(\d+)\]$")
_QUBIT_DECL = re.compile(r"^qubit\[(\d+)\]\s+q\s*;$")


def circuit_to_qasm3(circuit: Circuit) -> str:
    lines = ["OPENQASM 3.0;", f"qubit[{circuit.num_qubits}] q;"]
    for g in circuit.gates:
        if g.kind == cir.GLOBAL_PHASE:
            lines.append(f"gphase({fmt_float(np.angle(g.phase))});")
            continue
        name = _QASM_NAME.get(g.kind)
        if name is None:
            raise LoweringError(f"gate kind {g.kind} has no QASM form; lower the circuit first")
        if g.kind in (cir.RX, cir.RY, cir.RZ):
            lines.append(f"{name}({fmt_float(g.params[0])}) q[{g.qubits[0]}];")
        elif g.kind in (cir.CNOT, cir.CZ):
            lines.append(f"{name} q[{g.qubits[0]}], q[{g.qubits[1]}];")
        else:
            lines.append(f"{name} q[{g.qubits[0]}];")
    if abs(circuit.global_phase - 1.0) > 1e-15:
        lines.append(f"gphase({fmt_float(np.angle(circuit.global_phase))});")
    return "\n".join(lines) + "\n"


def circuit_from_qasm3(text: str) -> Circuit:
    n: int | None = None
    phase = complex(1.0)
    gates: list[Gate] = []
    for raw in text.splitlines():
        line = raw.split("//", 1)[0].strip()
        if not line or line.startswith("OPENQASM"):
            continue
        decl = _QUBIT_DECL.match(line)
        if decl:
            n = int(decl.group(1))
            continue
        m = _QASM_LINE.match(line)
        if not m:
            raise ValueError(f"cannot parse QASM line: {raw!r}")
        name, arg, operands = m.groups()
        qs: list[int] = []
        if operands.strip():
            for tok in operands.split(","):
                ref = _QUBIT_REF.match(tok.strip())
                if not ref:
                    raise ValueError(f"cannot parse qubit reference in: {raw!r}")
                qs.append(int(ref.group(1)))
        if name == "gphase":
            phase *= complex(np.exp(1j * float(arg)))
            continue
        if name in ("rx", "ry", "rz"):
            ctor = {"rx": cir.rx, "ry": cir.ry, "rz": cir.rz}[name]
            gates.append(ctor(float(arg), qs[0]))
        elif name == "cx":
            gates.append(cir.cnot(qs[0], qs[1]))
        elif name == "cz":
            gates.append(cir.cz(qs[0], qs[1]))
        elif name == "h":
            gates.append(cir.h(qs[0]))
        else:
            gates.append(cir.z(qs[0]))
    if n is None:
        raise ValueError("QASM input has no qubit declaration")
    return Circuit(n, tuple(gates), phase)


# -- matrix files ----------------------------------------------------------


def matrix_to_text(u) -> str:
    a = np.asarray(u, dtype=complex)
    dim = a.shape[0]
    lines = [str(dim)]
    for row in a:
        lines.append(" ".join(f"{fmt_float(z.real)} {fmt_float(z.imag)}" for z in row))
    return "\n".join(lines) + "\n"


def matrix_from_text(text: str) -> np.ndarray:
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not lines:
        raise ValueError("empty matrix file")
    try:
        dim = int(lines[0])
    except ValueError:
        raise ValueError(f"matrix file must start with its dimension, got {lines[0]!r}") from None
    if dim < 2 or dim & (dim - 1):
        raise ValueError(f"matrix dimension must be a power of two of at least 2, got {dim}")
    if len(lines) != dim + 1:
        raise ValueError(f"expected {dim} matrix rows, found {len(lines) - 1}")
    out = np.empty((dim, dim), dtype=complex)
    for i, line in enumerate(lines[1:]):
        nums = [float(tok) for tok in line.split()]
        if len(nums) != 2 * dim:
            raise ValueError(f"row {i} holds {len(nums)} numbers, expected {2 * dim}")
        out[i] = [complex(nums[2 * j], nums[2 * j + 1]) for j in range(dim)]
    return out


def load_matrix(path: str, check_unitary: bool = True, tol: float = 1e-10) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        a = matrix_from_text(fh.read())
    if check_unitary:
        assert_unitary(a, tol, f"matrix from {path}")
    return a


def save_matrix(path: str, u) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(matrix_to_text(u))
