"""Threshold oracle tests: phase pattern, partition, comparator agreement."""

import pytest

from qedge.registers import RegisterRef
from qedge.sim import (
    Circuit,
    Gate,
    apply_circuit,
    enumerate_basis,
    gate_stats,
    new_zero_state,
)
from qedge.thresholding import (
    PartitionSets,
    Threshold,
    build_ftpo,
    build_qpa,
    build_qrca_comparator,
    classify_bruteforce,
)

from _util import run_permutation


def uniform_state(num_qubits, hadamard_qubits):
    state = new_zero_state(num_qubits)
    circ = Circuit(num_qubits)
    for q in hadamard_qubits:
        circ.h(q)
    return apply_circuit(state, circ)


class TestThreshold:
    def test_bits_msb_first(self):
        assert Threshold(2, 4).bits == "0010"

    def test_value_range(self):
        with pytest.raises(ValueError):
            Threshold(4, 2)
        with pytest.raises(ValueError):
            Threshold(-1, 2)

    def test_parse_decimal(self):
        assert Threshold.parse("10", 8).value == 10

    def test_parse_binary_with_width(self):
        t = Threshold.parse("0010", 4)
        assert (t.value, t.width) == (2, 4)
        # width match beats decimal: "10" at width 2 is binary
        assert Threshold.parse("10", 2).value == 2

    def test_parse_binary_leading_zero_without_width(self):
        t = Threshold.parse("0010")
        assert (t.value, t.width) == (2, 4)

    def test_parse_decimal_needs_width(self):
        with pytest.raises(ValueError):
            Threshold.parse("7")

    def test_coerce(self):
        assert Threshold.coerce(3, 2) == Threshold(3, 2)
        assert Threshold.coerce("11", 2) == Threshold(3, 2)
        with pytest.raises(ValueError):
            Threshold.coerce(Threshold(1, 3), 2)


class TestBruteForce:
    def test_trivial_cases(self):
        assert classify_bruteforce(0, Threshold(0, 2)) is False
        assert classify_bruteforce(1, Threshold(0, 2)) is True
        assert classify_bruteforce(3, Threshold(2, 2)) is True

    def test_range_checked(self):
        with pytest.raises(ValueError):
            classify_bruteforce(4, Threshold(0, 2))


class TestPartitionSets:
    def test_disjoint_union(self):
        for t in range(8):
            parts = PartitionSets.from_threshold(Threshold(t, 3))
            assert parts.above & parts.below_or_equal == frozenset()
            assert parts.above | parts.below_or_equal == frozenset(range(8))

    def test_leading_zero_fraction(self):
        # n leading zeros then all ones: |above| = (1 - 1/2^n) * 2^q exactly
        q = 6
        for lead in range(1, q + 1):
            value = (1 << (q - lead)) - 1
            parts = PartitionSets.from_threshold(Threshold(value, q))
            assert len(parts.above) == (1 << q) - (1 << (q - lead))


def phase_signs(threshold, extra_control=None):
    """Map s -> amplitude sign after the oracle acts on a uniform register."""
    q = threshold.width
    reg = RegisterRef("s", tuple(range(q)))
    m = q if extra_control is None else max(q, extra_control + 1)
    state = uniform_state(m, range(q))
    circ = build_ftpo(threshold, reg, oracle_control=extra_control,
                      num_qubits=m)
    apply_circuit(state, circ)
    signs = {}
    for index, amp in enumerate_basis(state, 1e-12):
        signs[reg.read(index)] = 1 if amp.real > 0 else -1
        assert abs(abs(amp) - 2 ** (-q / 2)) < 1e-12
    return signs


class TestFtpo:
    def test_reference_gate_sequence_for_t2_q4(self):
        reg = RegisterRef("s", (0, 1, 2, 3))
        circ = build_ftpo(Threshold(2, 4), reg)
        assert circ.gates == [
            Gate("z", 3),
            Gate("x", 3),
            Gate("z", 2, ((3, True),)),
            Gate("x", 2),
            Gate("z", 0, ((1, True), (2, True), (3, True))),
            Gate("x", 0),
            Gate("x", 3),
            Gate("x", 2),
            Gate("x", 0),
        ]
        assert gate_stats(circ)["multi_controlled_count"] == 3

    def test_max_threshold_is_empty(self):
        reg = RegisterRef("s", (0, 1, 2, 3))
        assert len(build_ftpo(Threshold(15, 4), reg).gates) == 0

    @pytest.mark.parametrize("q", [1, 2, 3, 4, 5, 6])
    def test_sign_pattern_exhaustive(self, q):
        for t in range(1 << q):
            threshold = Threshold(t, q)
            signs = phase_signs(threshold)
            for s in range(1 << q):
                expected = -1 if classify_bruteforce(s, threshold) else 1
                assert signs[s] == expected, (q, t, s)

    def test_phase_gate_count_equals_zero_bits(self):
        for q in range(1, 9):
            for t in range(1 << q):
                circ = build_ftpo(Threshold(t, q), RegisterRef("s", tuple(range(q))))
                zeros = q - bin(t).count("1")
                assert sum(1 for g in circ.gates if g.kind == "z") == zeros

    def test_oracle_control_off_means_no_flip(self):
        threshold = Threshold(0, 3)
        signs = phase_signs(threshold, extra_control=3)  # control stays |0>
        assert all(sign == 1 for sign in signs.values())

    def test_width_mismatch(self):
        with pytest.raises(ValueError):
            build_ftpo(Threshold(1, 3), RegisterRef("s", (0, 1)))


class TestQpa:
    def qpa_outcomes(self, q, t):
        reg = RegisterRef("s", tuple(range(q)))
        circ = build_qpa(Threshold(t, q), reg, q)
        state = uniform_state(q + 1, range(q))
        apply_circuit(state, circ)
        outcomes = {}
        for index, amp in enumerate_basis(state, 1e-12):
            s = reg.read(index)
            assert s not in outcomes, "ancilla left in superposition"
            outcomes[s] = (index >> q) & 1
            assert abs(abs(amp) - 2 ** (-q / 2)) < 1e-12
        return outcomes

    def test_q2_t1_partition(self):
        assert self.qpa_outcomes(2, 1) == {0: 0, 1: 0, 2: 1, 3: 1}

    def test_max_threshold_never_marks(self):
        assert set(self.qpa_outcomes(3, 7).values()) == {0}

    @pytest.mark.parametrize("q", [1, 2, 3, 4])
    def test_exhaustive_partition(self, q):
        for t in range(1 << q):
            outcomes = self.qpa_outcomes(q, t)
            for s in range(1 << q):
                assert outcomes[s] == int(classify_bruteforce(s, Threshold(t, q)))

    def test_single_ancilla_single_oracle_call(self):
        reg = RegisterRef("s", (0, 1, 2))
        threshold = Threshold(2, 3)
        circ = build_qpa(threshold, reg, 3)
        inner = build_ftpo(threshold, reg, oracle_control=3, num_qubits=4)
        assert circ.gates[0] == Gate("h", 3)
        assert circ.gates[-1] == Gate("h", 3)
        assert circ.gates[1:-1] == inner.gates
        touched = {q for g in circ.gates for q in g.qubits} - set(reg.qubits)
        assert touched == {3}

    def test_xor_semantics_on_set_ancilla(self):
        reg = RegisterRef("s", (0, 1))
        circ = build_qpa(Threshold(1, 2), reg, 2)
        # ancilla starts |1>, s=3 above threshold: ancilla ends 1 ^ 1 = 0
        idx = reg.write(0, 3) | (1 << 2)
        assert run_permutation(circ, idx, num_qubits=3) == reg.write(0, 3)

    def test_ancilla_overlap_rejected(self):
        with pytest.raises(ValueError):
            build_qpa(Threshold(1, 2), RegisterRef("s", (0, 1)), 1)


def comparator_regs(q):
    grad = RegisterRef("grad", tuple(range(q)))
    t_reg = RegisterRef("t", tuple(range(q, 2 * q)))
    return grad, t_reg, 2 * q, 2 * q + 1  # sign_out, carry_in


class TestComparator:
    def sign_of(self, q, s, t):
        grad, t_reg, sign_out, cin = comparator_regs(q)
        circ = build_qrca_comparator(Threshold(t, q), grad, t_reg, sign_out, cin)
        out = run_permutation(circ, grad.write(0, s))
        assert grad.read(out) == s, "gradient register must be preserved"
        assert (out >> cin) & 1 == 0
        return (out >> sign_out) & 1

    def test_above(self):
        assert self.sign_of(4, 5, 3) == 1

    def test_equal_is_not_marked(self):
        assert self.sign_of(4, 3, 3) == 0

    def test_exhaustive_q4_matches_bruteforce(self):
        for t in range(16):
            for s in range(16):
                expected = int(classify_bruteforce(s, Threshold(t, 4)))
                assert self.sign_of(4, s, t) == expected

    @pytest.mark.parametrize("q", [1, 2, 3, 4])
    def test_agrees_with_qpa(self, q):
        qpa_tester = TestQpa()
        for t in range(1 << q):
            outcomes = qpa_tester.qpa_outcomes(q, t)
            for s in range(1 << q):
                assert outcomes[s] == self.sign_of(q, s, t)
