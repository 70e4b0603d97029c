"""Synthesis configuration: optimization levels and tolerance knobs."""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum


class OptLevel(IntEnum):
    """How aggressively the recursion compresses multiplexor structure.

    L0
        Recurse all the way down to one-qubit leaves; every multiplexed
        rotation keeps its full CNOT ladder.
    L1
        Stop the recursion at two-qubit blocks and emit each with the
        universal 3-CNOT template.
    L2
        Additionally absorb the CNOT adjacent to each Hadamard into the
        central multiplexor of every recursion step (two CNOTs saved per
        step, realized algebraically via a conjugated central block).
    L3
        Additionally synthesize every two-qubit leaf except the first up
        to a diagonal (2 CNOTs instead of 3), migrating the residual
        diagonals toward the front of the circuit.
    """

    L0 = 0
    L1 = 1
    L2 = 2
    L3 = 3


@dataclass(frozen=True)
class SynthesisConfig:
    """Knobs shared across the pipeline.

    ``verify_each_node=None`` means "auto": factor-level residual checks run
    at every recursion node for registers of up to 6 qubits and are skipped
    above that. ``verify_final`` controls the end-to-end simulation check in
    :func:`blockzxz.decompose.synthesize` (which only runs when the register
    fits under ``simulation_cap``). ``seed`` is metadata recorded in reports;
    the synthesis itself is deterministic.
    """

    opt_level: OptLevel = OptLevel.L3
    unitarity_tol: float = 1e-10
    factor_tol: float = 1e-10
    verify_tol: float = 1e-8
    node_tol: float = 1e-8
    verify_each_node: bool | None = None
    verify_final: bool = True
    simulation_cap: int = 10
    seed: int | None = None

    def __post_init__(self) -> None:
        for name in ("unitarity_tol", "factor_tol", "verify_tol", "node_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.simulation_cap < 1:
            raise ValueError("simulation_cap must be at least 1")

    def node_checks_enabled(self, num_qubits: int) -> bool:
        if self.verify_each_node is None:
            return num_qubits <= 6
        return self.verify_each_node
