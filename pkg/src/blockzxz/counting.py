"""Closed-form CNOT counts, the theoretical floor, and synthesis reports."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .circuit import (
    Circuit,
    circuit_to_unitary,
    cnot_count,
    distance_up_to_phase,
    one_qubit_count,
)
from .config import OptLevel, SynthesisConfig

_REPORT_KEYS = ("n", "level", "cnots", "expected", "oneq", "distance", "ms", "seed")


def expected_count(n: int, level: OptLevel | int = OptLevel.L3) -> int:
    """CNOTs emitted for an n-qubit unitary at the given optimization level.

    All four formulas are exact integers for n ≥ 2; a single qubit never
    needs a CNOT.

        L0: (3/4)·4^n − (3/2)·2^n
        L1: (9/16)·4^n − (3/2)·2^n
        L2: L1 − 2·⌊(4^(n−2) − 1)/3⌋
        L3: L2 − (4^(n−2) − 1)
    """
    if n < 1:
        raise ValueError(f"need at least one qubit, got {n}")
    lv = OptLevel(level)
    if n == 1:
        return 0
    if lv == OptLevel.L0:
        return 3 * 4**n // 4 - 3 * 2**n // 2
    count = 9 * 4**n // 16 - 3 * 2**n // 2
    if lv >= OptLevel.L2:
        count -= 2 * ((4 ** (n - 2) - 1) // 3)
    if lv >= OptLevel.L3:
        count -= 4 ** (n - 2) - 1
    return count


def lower_bound(n: int) -> int:
    """⌈(4^n − 3n − 1)/4⌉ — no exact synthesis can beat this CNOT count."""
    if n < 1:
        raise ValueError(f"need at least one qubit, got {n}")
    return (4**n - 3 * n - 1 + 3) // 4


@dataclass(frozen=True)
class SynthesisReport:
    n: int
    level: int
    cnots: int
    expected: int
    oneq: int
    distance: float | None
    ms: float | None
    seed: int | None

    def to_json(self) -> str:
        doc = {k: getattr(self, k) for k in _REPORT_KEYS}
        return json.dumps(doc, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "SynthesisReport":
        doc = json.loads(text)
        return cls(**{k: doc[k] for k in _REPORT_KEYS})


def make_report(
    u,
    circuit: Circuit,
    config: SynthesisConfig | None = None,
    *,
    wall_time_ms: float | None = None,
    seed: int | None = None,
    compute_distance: bool | None = None,
) -> SynthesisReport:
    """Bundle the countable facts about one synthesis run.

    ``compute_distance=None`` simulates the circuit whenever the register is
    within ``config.simulation_cap``; pass False to skip (large n) or True to
    force the check.
    """
    cfg = config if config is not None else SynthesisConfig()
    n = circuit.num_qubits
    if compute_distance is None:
        compute_distance = n <= cfg.simulation_cap
    distance = None
    if compute_distance:
        target = np.asarray(u, dtype=complex)
        rebuilt = circuit_to_unitary(circuit, max_qubits=max(cfg.simulation_cap, n))
        distance = float(distance_up_to_phase(target, rebuilt))
    return SynthesisReport(
        n=n,
        level=int(cfg.opt_level),
        cnots=cnot_count(circuit),
        expected=expected_count(n, cfg.opt_level),
        oneq=one_qubit_count(circuit),
        distance=distance,
        ms=None if wall_time_ms is None else float(wall_time_ms),
        seed=seed if seed is not None else cfg.seed,
    )
