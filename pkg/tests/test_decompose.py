"""Recursion driver: factor oracles, node structure, migration, end-to-end."""

import math

import numpy as np
import pytest

from blockzxz import circuit as cir
from blockzxz.circuit import (
    Circuit,
    circuit_equal,
    circuit_to_unitary,
    cnot_count,
    distance_up_to_phase,
    is_elementary,
)
from blockzxz.config import OptLevel, SynthesisConfig
from blockzxz.counting import expected_count
from blockzxz.decompose import (
    build_ir,
    compute_zxz_factors,
    demultiplex,
    lower,
    merge_central,
    migrate_diagonals,
    split_blocks,
    synthesize,
)
from blockzxz.errors import SynthesisError
from blockzxz.linalg import direct_sum, unitarity_defect
from conftest import haar

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def _zxz_assemble(f, dim):
    """Independent reassembly: (A1⊕A2)(H⊗I)(I⊕B)(H⊗I)(I⊕C)."""
    half = dim // 2
    hi = np.kron(_H, np.eye(half))
    eye = np.eye(half)
    return (
        direct_sum(f.a1, f.a2) @ hi @ direct_sum(eye, f.b) @ hi @ direct_sum(eye, f.c)
    )


# -- split / factors ----------------------------------------------------------


def test_split_blocks_quarters():
    u = haar(4, 0)
    s = split_blocks(u)
    assert np.array_equal(s.x, u[:2, :2])
    assert np.array_equal(s.y, u[:2, 2:])
    assert np.array_equal(s.u21, u[2:, :2])
    assert np.array_equal(s.u22, u[2:, 2:])
    with pytest.raises(ValueError):
        split_blocks(np.eye(2))


def test_zxz_factors_of_identity():
    f = compute_zxz_factors(np.eye(4))
    assert np.allclose(f.a1, np.eye(2), atol=1e-12)
    assert np.allclose(f.a2, 1j * np.eye(2), atol=1e-12)
    assert np.allclose(f.b, np.eye(2), atol=1e-12)
    assert np.allclose(f.c, -1j * np.eye(2), atol=1e-12)


@pytest.mark.parametrize("dim", [4, 8, 16])
def test_zxz_factors_reconstruct(dim):
    for seed in range(10):
        u = haar(dim, 10 * dim + seed)
        f = compute_zxz_factors(u, check=False)
        for part in (f.a1, f.a2, f.b, f.c):
            assert unitarity_defect(part) < 1e-8
        assert np.max(np.abs(_zxz_assemble(f, dim) - u)) < 1e-9


def test_zxz_factors_block_antidiagonal_input():
    # X = 0 exercises the polar decomposition of a singular block
    y, u21 = haar(4, 40), haar(4, 41)
    u = np.zeros((8, 8), dtype=complex)
    u[:4, 4:] = y
    u[4:, :4] = u21
    f = compute_zxz_factors(u)
    assert np.max(np.abs(_zxz_assemble(f, 8) - u)) < 1e-9


def test_zxz_factors_polar_intermediates():
    u = haar(8, 42)
    f = compute_zxz_factors(u)
    s = split_blocks(u)
    assert np.allclose(f.s_x @ f.u_x, s.x, atol=1e-10)
    assert np.allclose(f.s_y @ f.u_y, s.y, atol=1e-10)
    assert np.allclose(f.s_x, f.s_x.conj().T, atol=1e-10)


def test_zxz_factors_reject_non_unitary():
    with pytest.raises(ValueError):
        compute_zxz_factors(np.ones((4, 4)))


# -- demultiplexing -----------------------------------------------------------


@pytest.mark.parametrize("dim", [2, 3, 4, 5, 8])
def test_demultiplex_oracle(dim):
    for seed in range(10):
        u1, u2 = haar(dim, 100 + seed), haar(dim, 200 + seed)
        f = demultiplex(u1, u2, check=False)
        assert unitarity_defect(f.v) < 1e-9
        assert np.max(np.abs(np.abs(f.d) - 1.0)) < 1e-12
        assert np.max(np.abs(f.v @ (f.d[:, None] * f.w) - u1)) < 1e-9
        assert np.max(np.abs(f.v @ (f.d.conj()[:, None] * f.w) - u2)) < 1e-9


def test_demultiplex_degenerate_pairs():
    u = haar(4, 7)
    for u1, u2 in ((u, u), (u, -u), (np.eye(4, dtype=complex), u)):
        f = demultiplex(u1, u2)
        assert np.max(np.abs(f.v @ (f.d[:, None] * f.w) - u1)) < 1e-9
        assert np.max(np.abs(f.v @ (f.d.conj()[:, None] * f.w) - u2)) < 1e-9


def test_demultiplex_shape_mismatch():
    with pytest.raises(ValueError):
        demultiplex(np.eye(2), np.eye(4))


# -- central merge ------------------------------------------------------------


@pytest.mark.parametrize("half", [2, 4, 8])
def test_merge_central_brute_force(half):
    # CZw (I⊗W_A)(I⊕B)(I⊗V_C) CZw == B1 ⊕ B2, with CZw = I ⊕ (Z⊗I)
    for seed in range(5):
        v_c, w_a, b = haar(half, seed), haar(half, 50 + seed), haar(half, 90 + seed)
        m = merge_central(v_c, w_a, b)
        zs = np.concatenate([np.ones(half // 2), -np.ones(half // 2)])
        czw = direct_sum(np.eye(half), np.diag(zs))
        eye2 = np.eye(2)
        lhs = (
            czw
            @ np.kron(eye2, w_a)
            @ direct_sum(np.eye(half), b)
            @ np.kron(eye2, v_c)
            @ czw
        )
        assert np.max(np.abs(lhs - direct_sum(m.b1, m.b2))) < 1e-10
        assert unitarity_defect(m.b1) < 1e-10
        assert unitarity_defect(m.b2) < 1e-10


def test_merge_central_validation():
    with pytest.raises(ValueError):
        merge_central(haar(2, 0), haar(4, 1), haar(4, 2))
    with pytest.raises(ValueError):
        merge_central(np.eye(3), np.eye(3), np.eye(3))


# -- recursion output ---------------------------------------------------------


def test_build_ir_is_exact():
    for n in (2, 3, 4):
        u = haar(1 << n, 400 + n)
        for level in OptLevel:
            ir = build_ir(u, SynthesisConfig(opt_level=level))
            assert distance_up_to_phase(u, circuit_to_unitary(ir)) < 1e-12


def test_build_ir_leaf_structure():
    u = haar(16, 500)
    ir = build_ir(u, SynthesisConfig(opt_level=OptLevel.L3))
    blocks = [g for g in ir.gates if g.kind == cir.GENERIC_BLOCK]
    assert len(blocks) == 4 ** (4 - 2)
    assert all(g.qubits == (2, 3) for g in blocks)  # all leaves on the bottom pair
    drops = [g.drop for g in ir.gates if g.kind == cir.UCRZ_FIRST]
    # one node at m=4, four at m=3: each contributes DROP_LAST, KEEP, DROP_FIRST
    assert drops.count(cir.DROP_LAST) == 5
    assert drops.count(cir.DROP_FIRST) == 5
    assert drops.count(cir.KEEP) == 5


def test_build_ir_l0_has_no_two_qubit_leaves():
    u = haar(8, 501)
    ir = build_ir(u, SynthesisConfig(opt_level=OptLevel.L0))
    assert not any(g.kind == cir.GENERIC_BLOCK for g in ir.gates)
    assert all(g.drop == cir.KEEP for g in ir.gates if g.kind == cir.UCRZ_FIRST)


def test_build_ir_deterministic():
    u = haar(8, 502)
    cfg = SynthesisConfig()
    assert circuit_equal(build_ir(u, cfg), build_ir(u, cfg))


# -- migration ----------------------------------------------------------------


def test_migrate_diagonals_preserves_operator():
    u = haar(8, 600)
    ir = build_ir(u, SynthesisConfig(opt_level=OptLevel.L3))
    migrated = migrate_diagonals(ir)
    assert is_elementary(migrated) or not any(
        g.kind == cir.GENERIC_BLOCK for g in migrated.gates
    )
    assert distance_up_to_phase(circuit_to_unitary(ir), circuit_to_unitary(migrated)) < 1e-11


def test_migrate_diagonals_saves_one_cnot_per_extra_block():
    u = haar(16, 601)
    ir = build_ir(u, SynthesisConfig(opt_level=OptLevel.L3))
    n_blocks = sum(g.kind == cir.GENERIC_BLOCK for g in ir.gates)
    lowered = lower(ir, SynthesisConfig(opt_level=OptLevel.L2))  # plain per-leaf kak3
    migrated = lower(ir, SynthesisConfig(opt_level=OptLevel.L3))
    assert cnot_count(lowered) - cnot_count(migrated) == n_blocks - 1


def test_migrate_diagonals_rejects_off_pair_blocks():
    g = cir.generic_block(haar(4, 602), (0, 1))
    c = Circuit(3, (g,))
    with pytest.raises(ValueError):
        migrate_diagonals(c)


def test_migrate_diagonals_rejects_blocking_gate():
    blocks = [cir.generic_block(haar(4, 700 + i), (1, 2)) for i in range(2)]
    c = Circuit(3, (blocks[0], cir.h(2), blocks[1]))  # H on the pair blocks migration
    with pytest.raises(SynthesisError):
        migrate_diagonals(c)


def test_migrate_diagonals_allows_commuting_gates():
    blocks = [cir.generic_block(haar(4, 710 + i), (1, 2)) for i in range(2)]
    between = (cir.rz(0.3, 1), cir.cz(1, 2), cir.h(0), cir.cnot(2, 0))
    c = Circuit(3, (blocks[0],) + between + (blocks[1],))
    m = migrate_diagonals(c)
    assert distance_up_to_phase(circuit_to_unitary(c), circuit_to_unitary(m)) < 1e-11


def test_lower_handles_stray_block_at_l3():
    # a block off the bottom pair cannot migrate but must still lower correctly
    g = cir.generic_block(haar(4, 603), (0, 1))
    c = Circuit(3, (g, cir.generic_block(haar(4, 604), (1, 2))))
    out = lower(c, SynthesisConfig(opt_level=OptLevel.L3))
    assert is_elementary(out)
    assert distance_up_to_phase(circuit_to_unitary(c), circuit_to_unitary(out)) < 1e-9


def test_lower_expands_multiplexor_and_diagonal():
    u1, u2 = haar(4, 605), haar(4, 606)
    gates = (
        cir.multiplexor(direct_sum(u1, u2), (0, 1, 2)),
        cir.diagonal(np.exp(1j * np.linspace(0.1, 0.9, 4)), (1, 2)),
        cir.global_phase(1j),
    )
    c = Circuit(3, gates)
    out = lower(c, SynthesisConfig(opt_level=OptLevel.L1))
    assert is_elementary(out)
    assert distance_up_to_phase(circuit_to_unitary(c), circuit_to_unitary(out)) < 1e-9


# -- synthesize ---------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("level", list(OptLevel))
def test_synthesize_counts_and_distance(n, level):
    u = haar(1 << n, 800 + 10 * n + int(level))
    c = synthesize(u, SynthesisConfig(opt_level=level))
    assert is_elementary(c)
    assert cnot_count(c) == expected_count(n, level)
    assert distance_up_to_phase(u, circuit_to_unitary(c)) < 1e-10


def test_synthesize_verifies_by_default():
    u = haar(4, 900)
    c = synthesize(u)  # raises if self-verification fails
    assert cnot_count(c) == 3


def test_synthesize_rejects_bad_input():
    with pytest.raises(ValueError):
        synthesize(np.ones((4, 4)))
    with pytest.raises(ValueError):
        synthesize(haar(6, 0))  # not a power of two
    with pytest.raises(ValueError):
        synthesize(np.eye(1))


def test_synthesize_structured_inputs():
    for u in (
        np.eye(8, dtype=complex),
        np.kron(np.kron(_H, _H), _H),
        np.diag(np.exp(1j * np.arange(8))),
    ):
        c = synthesize(u)
        assert distance_up_to_phase(u, circuit_to_unitary(c)) < 1e-10
        assert cnot_count(c) == expected_count(3, OptLevel.L3)


def test_synthesize_deterministic():
    u = haar(8, 901)
    assert circuit_equal(synthesize(u), synthesize(u))
