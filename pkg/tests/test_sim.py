"""Simulator kernel tests: gate semantics, inversion, stats, determinism."""

import math

import numpy as np
import pytest

from qedge.sim import (
    CapacityError,
    Circuit,
    Gate,
    apply_circuit,
    apply_gate,
    enumerate_basis,
    gate_stats,
    inverse,
    mc_decomposition_depth,
    new_basis_state,
    new_zero_state,
    state_norm,
    zero_probability,
)

INV_SQRT2 = 1.0 / math.sqrt(2.0)


def random_circuit(rng, num_qubits, depth, kinds=("x", "h", "z")):
    circ = Circuit(num_qubits)
    for _ in range(depth):
        kind = kinds[rng.integers(0, len(kinds))]
        order = rng.permutation(num_qubits)
        target = int(order[0])
        n_ctrl = int(rng.integers(0, num_qubits))
        controls = tuple(
            (int(q), bool(rng.integers(0, 2))) for q in order[1:1 + n_ctrl]
        )
        circ.add(Gate(kind, target, controls))
    return circ


class TestZeroState:
    def test_one_qubit(self):
        state = new_zero_state(1)
        assert np.allclose(state.amplitudes, [1, 0])

    def test_two_qubits(self):
        state = new_zero_state(2)
        assert np.allclose(state.amplitudes, [1, 0, 0, 0])

    @pytest.mark.parametrize("m", [0, -1, 29])
    def test_capacity_guard(self, m):
        with pytest.raises(CapacityError):
            new_zero_state(m)


class TestGates:
    def test_h_on_zero(self):
        state = apply_gate(new_zero_state(1), Gate("h", 0))
        assert np.allclose(state.amplitudes, [INV_SQRT2, INV_SQRT2])

    def test_x_on_zero(self):
        state = apply_gate(new_zero_state(1), Gate("x", 0))
        assert np.allclose(state.amplitudes, [0, 1])

    def test_controlled_z_negates_only_11(self):
        state = new_zero_state(2)
        apply_gate(state, Gate("h", 0))
        apply_gate(state, Gate("h", 1))
        apply_gate(state, Gate("z", 0, ((1, True),)))
        assert np.allclose(state.amplitudes, [0.5, 0.5, 0.5, -0.5])

    def test_negative_control_fires_on_zero(self):
        state = new_zero_state(2)
        apply_gate(state, Gate("x", 0, ((1, False),)))
        assert np.allclose(state.amplitudes, [0, 1, 0, 0])

    def test_gate_index_out_of_range(self):
        with pytest.raises(ValueError):
            apply_gate(new_zero_state(1), Gate("x", 1))

    def test_gate_validation(self):
        with pytest.raises(ValueError):
            Gate("x", 0, ((0, True),))
        with pytest.raises(ValueError):
            Gate("x", 1, ((0, True), (0, False)))
        with pytest.raises(ValueError):
            Gate("y", 0)


class TestCircuits:
    def test_empty_circuit_is_identity(self):
        state = apply_circuit(new_zero_state(2), Circuit(2))
        assert np.allclose(state.amplitudes, [1, 0, 0, 0])

    def test_double_x_is_identity(self):
        circ = Circuit(2)
        circ.x(0)
        circ.x(0)
        for index in range(4):
            state = apply_circuit(new_basis_state(2, index), circ)
            assert abs(state.amplitudes[index] - 1.0) < 1e-12

    def test_width_mismatch(self):
        with pytest.raises(ValueError):
            apply_circuit(new_zero_state(2), Circuit(3))

    def test_inverse_reverses_gate_list(self):
        assert inverse(Circuit(2)).gates == []
        circ = Circuit(2)
        circ.h(0)
        circ.x(1, [0])
        inv = inverse(circ)
        assert inv.gates == [Gate("x", 1, ((0, True),)), Gate("h", 0)]

    def test_inverse_property_random_circuits(self):
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            circ = random_circuit(rng, 4, int(rng.integers(1, 25)))
            state = new_zero_state(4)
            apply_circuit(state, random_circuit(rng, 4, 6))  # arbitrary start
            before = state.amplitudes.copy()
            apply_circuit(state, circ)
            apply_circuit(state, circ.inverse())
            assert np.max(np.abs(state.amplitudes - before)) < 1e-9

    def test_x_family_permutes_basis_states(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            circ = random_circuit(rng, 4, 12, kinds=("x",))
            start = int(rng.integers(0, 16))
            state = apply_circuit(new_basis_state(4, start), circ)
            hits = enumerate_basis(state, 1e-9)
            assert len(hits) == 1
            assert abs(abs(hits[0][1]) - 1.0) < 1e-12

    def test_norm_preserved_under_long_sequences(self):
        rng = np.random.default_rng(5)
        state = new_zero_state(5)
        apply_circuit(state, random_circuit(rng, 5, 500))
        assert abs(state_norm(state) - 1.0) < 1e-9

    def test_determinism_bit_identical(self):
        rng1 = np.random.default_rng(99)
        rng2 = np.random.default_rng(99)
        s1 = apply_circuit(new_zero_state(5), random_circuit(rng1, 5, 80))
        s2 = apply_circuit(new_zero_state(5), random_circuit(rng2, 5, 80))
        assert s1.amplitudes.tobytes() == s2.amplitudes.tobytes()

    def test_controlled_wraps_every_gate(self):
        circ = Circuit(3)
        circ.h(0)
        circ.x(1)
        wrapped = circ.controlled([(2, True)])
        assert all(g.controls == ((2, True),) for g in wrapped.gates)
        # control off: identity
        state = apply_circuit(new_zero_state(3), wrapped)
        assert abs(state.amplitudes[0] - 1.0) < 1e-12


class TestEnumerateBasis:
    def test_zero_state(self):
        assert enumerate_basis(new_zero_state(1)) == [(0, 1.0 + 0.0j)]

    def test_hadamard_entries(self):
        state = apply_gate(new_zero_state(1), Gate("h", 0))
        hits = enumerate_basis(state, 1e-9)
        assert [i for i, _ in hits] == [0, 1]
        assert all(abs(a - INV_SQRT2) < 1e-12 for _, a in hits)

    def test_tolerance_filters_everything(self):
        state = apply_gate(new_zero_state(1), Gate("h", 0))
        assert enumerate_basis(state, 0.9) == []

    def test_negative_tolerance_rejected(self):
        with pytest.raises(ValueError):
            enumerate_basis(new_zero_state(1), -1.0)


class TestStats:
    def test_empty(self):
        assert gate_stats(Circuit(3)) == {
            "total_gates": 0,
            "multi_controlled_count": 0,
            "max_control_arity": 0,
            "depth": 0,
        }

    def test_depth_counts_shared_qubit_chains(self):
        circ = Circuit(3)
        circ.h(0)
        circ.h(1)       # parallel with the first
        circ.x(1, [0])  # chains behind both
        stats = gate_stats(circ)
        assert stats["total_gates"] == 3
        assert stats["depth"] == 2
        assert stats["max_control_arity"] == 1

    def test_multi_controlled_counts_toffoli_and_bare_z(self):
        circ = Circuit(3)
        circ.x(0, [1])          # plain CX: not counted
        circ.x(0, [1, 2])       # Toffoli: counted
        circ.z(0)               # phase gate: counted
        assert gate_stats(circ)["multi_controlled_count"] == 2

    def test_decomposition_depth_weights_control_arity(self):
        circ = Circuit(5)
        circ.x(0)
        assert mc_decomposition_depth(circ) == 1
        circ.z(0, [1, 2, 3, 4])  # 4 controls: ceil(log2 4) + 1 = 3
        assert mc_decomposition_depth(circ) == 4


def test_zero_probability_subspace():
    state = new_zero_state(2)
    apply_gate(state, Gate("h", 1))
    assert abs(zero_probability(state, [0]) - 1.0) < 1e-12
    assert abs(zero_probability(state, [1]) - 0.5) < 1e-12
