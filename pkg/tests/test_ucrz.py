"""Multiplexed-Rz synthesis: Gray schedule, angle solve, emitted circuits."""

import numpy as np
import pytest

from blockzxz import circuit as cir
from blockzxz.circuit import Circuit, circuit_to_unitary, ucrz_first_matrix
from blockzxz.errors import ResourceError
from blockzxz.ucrz import (
    alphas_from_diagonal,
    gray_code,
    gray_schedule,
    mk_matrix,
    solve_thetas,
    synthesize_ucrz,
)


def test_gray_code_sequence():
    assert [gray_code(i) for i in range(8)] == [0, 1, 3, 2, 6, 7, 5, 4]


def test_gray_code_neighbors_differ_in_one_bit():
    for k in range(1, 7):
        seq = [gray_code(i) for i in range(1 << k)]
        for a, b in zip(seq, seq[1:] + seq[:1]):
            assert bin(a ^ b).count("1") == 1


def test_gray_schedule_small_cases():
    assert gray_schedule(1) == [1, 1]
    assert gray_schedule(2) == [2, 1, 2, 1]
    assert gray_schedule(3) == [3, 2, 3, 1, 3, 2, 3, 1]


def test_gray_schedule_wraps_on_most_significant_control():
    for k in range(1, 8):
        sched = gray_schedule(k)
        assert len(sched) == 1 << k
        assert sched[-1] == 1
        assert all(1 <= p <= k for p in sched)
        # every control appears an even number of times: 2 for the top one
        # (one in-sequence flip plus the wrap), 2^(p-1) below it
        assert sched.count(1) == 2
        for p in range(2, k + 1):
            assert sched.count(p) == 1 << (p - 1)


def test_gray_schedule_bounds():
    with pytest.raises(ResourceError):
        gray_schedule(0)
    with pytest.raises(ResourceError):
        gray_schedule(17)


def test_mk_matrix_entries_and_orthogonality():
    for k in range(1, 7):
        m = mk_matrix(k)
        assert m.shape == (1 << k, 1 << k)
        assert np.all(np.abs(m) == 1)
        assert np.array_equal(m @ m.T, (1 << k) * np.eye(1 << k, dtype=m.dtype))


def test_mk_matrix_first_row_and_column_positive():
    m = mk_matrix(4)
    assert np.all(m[0] == 1)
    assert np.all(m[:, 0] == 1)


def test_solve_thetas_inverts_mk():
    rng = np.random.default_rng(0)
    for k in range(1, 6):
        alphas = rng.uniform(-np.pi, np.pi, size=1 << k)
        thetas = solve_thetas(alphas)
        assert np.max(np.abs(mk_matrix(k) @ thetas - alphas)) < 1e-12


def test_alphas_from_diagonal_round_trip():
    rng = np.random.default_rng(1)
    alphas = rng.uniform(-np.pi, np.pi, size=8)
    d = np.exp(-0.5j * alphas)
    assert np.max(np.abs(alphas_from_diagonal(d) - alphas)) < 1e-14
    with pytest.raises(ValueError):
        alphas_from_diagonal(np.array([1.0, 0.5]))


def _ucrz_circuit(alphas, k, variant=cir.STANDARD, drop=cir.KEEP) -> Circuit:
    gates = synthesize_ucrz(alphas, 0, tuple(range(1, k + 1)), variant, drop)
    return Circuit(k + 1, tuple(gates))


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_standard_keep_equals_block_diagonal(k):
    rng = np.random.default_rng(10 + k)
    for _ in range(5):
        alphas = rng.uniform(-np.pi, np.pi, size=1 << k)
        got = circuit_to_unitary(_ucrz_circuit(alphas, k))
        assert np.max(np.abs(got - ucrz_first_matrix(alphas, cir.KEEP))) < 1e-12


@pytest.mark.parametrize("variant,drop", [
    (cir.STANDARD, cir.DROP_LAST),
    (cir.REVERSED, cir.DROP_FIRST),
    (cir.REVERSED, cir.KEEP),
])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_variants_match_their_matrices(k, variant, drop):
    rng = np.random.default_rng(20 + k)
    alphas = rng.uniform(-np.pi, np.pi, size=1 << k)
    got = circuit_to_unitary(_ucrz_circuit(alphas, k, variant, drop))
    assert np.max(np.abs(got - ucrz_first_matrix(alphas, drop))) < 1e-12


def test_reversed_equals_standard_operator():
    rng = np.random.default_rng(3)
    for k in range(1, 5):
        alphas = rng.uniform(-np.pi, np.pi, size=1 << k)
        std = circuit_to_unitary(_ucrz_circuit(alphas, k, cir.STANDARD, cir.KEEP))
        rev = circuit_to_unitary(_ucrz_circuit(alphas, k, cir.REVERSED, cir.KEEP))
        assert np.max(np.abs(std - rev)) < 1e-12


def test_gate_counts_and_structure():
    for k in range(1, 6):
        alphas = np.linspace(-1, 1, 1 << k)
        gates = synthesize_ucrz(alphas, 0, tuple(range(1, k + 1)))
        assert len(gates) == 2 << k  # alternating Rz / CNOT
        assert sum(g.kind == cir.CNOT for g in gates) == 1 << k
        assert all(g.kind == cir.RZ for g in gates[0::2])
        assert all(g.kind == cir.CNOT for g in gates[1::2])
        assert all(g.qubits == (0,) for g in gates[0::2])
        assert all(g.qubits[1] == 0 for g in gates[1::2])  # all CNOTs hit the target
        # drop modes strip exactly one CNOT
        short = synthesize_ucrz(alphas, 0, tuple(range(1, k + 1)), cir.STANDARD, cir.DROP_LAST)
        assert sum(g.kind == cir.CNOT for g in short) == (1 << k) - 1
        assert _shapes(short) == _shapes(gates[:-1])


def _shapes(gates):
    return [(g.kind, g.qubits, g.params) for g in gates]


def test_drop_first_strips_leading_cnot():
    alphas = [0.4, -0.2, 0.9, 0.1]
    full = synthesize_ucrz(alphas, 0, (1, 2), cir.REVERSED, cir.KEEP)
    head = synthesize_ucrz(alphas, 0, (1, 2), cir.REVERSED, cir.DROP_FIRST)
    assert full[0].kind == cir.CNOT
    assert _shapes(head) == _shapes(full[1:])


def test_controls_follow_gray_schedule():
    k = 3
    gates = synthesize_ucrz(np.zeros(1 << k), 4, (5, 6, 7))
    controls = [g.qubits[0] for g in gates if g.kind == cir.CNOT]
    # schedule position p means the p-th control counting from the target side
    expected = [(5, 6, 7)[p - 1] for p in gray_schedule(k)]
    assert controls == expected


def test_synthesize_ucrz_rejects_bad_combinations():
    with pytest.raises(ValueError):
        synthesize_ucrz([0.1, 0.2], 0, (1,), cir.REVERSED, cir.DROP_LAST)
    with pytest.raises(ValueError):
        synthesize_ucrz([0.1, 0.2], 0, (1,), cir.STANDARD, cir.DROP_FIRST)
    with pytest.raises(ValueError):
        synthesize_ucrz([0.1, 0.2, 0.3], 0, (1,))
    with pytest.raises(ValueError):
        synthesize_ucrz([0.1, 0.2], 0, ())
