"""Dense statevector simulator for circuits of self-inverse gates.

The gate alphabet is X, H, and Z, each carrying an arbitrary set of positive
or negative controls; every gate in this alphabet is its own inverse, so a
circuit is inverted by reversing its gate list. Basis indices are
little-endian: qubit ``k`` contributes ``2**k``.

Kernels either return fresh data or mutate only the state passed in, and the
output is bit-identical across runs for a fixed gate order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

MAX_QUBITS = 28

GATE_KINDS = ("x", "h", "z")

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


class CapacityError(ValueError):
    """Register file would exceed the dense-simulation qubit cap."""


def _coerce_controls(controls) -> tuple[tuple[int, bool], ...]:
    """Accept ints (positive control) or (qubit, polarity) pairs."""
    pairs = []
    for item in controls or ():
        if isinstance(item, tuple):
            qubit, polarity = item
        else:
            qubit, polarity = item, True
        pairs.append((int(qubit), bool(polarity)))
    pairs.sort()
    return tuple(pairs)


@dataclass(frozen=True)
class Gate:
    """One elementary operation: ``kind`` on ``target`` under ``controls``.

    A control is a (qubit, polarity) pair; polarity False fires on |0>.
    """

    kind: str
    target: int
    controls: tuple[tuple[int, bool], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "controls", _coerce_controls(self.controls))
        object.__setattr__(self, "target", int(self.target))
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.target < 0:
            raise ValueError("negative target index")
        ctrl_qubits = [q for q, _ in self.controls]
        if any(q < 0 for q in ctrl_qubits):
            raise ValueError("negative control index")
        if len(set(ctrl_qubits)) != len(ctrl_qubits):
            raise ValueError("duplicate control qubits")
        if self.target in ctrl_qubits:
            raise ValueError("target cannot also be a control")

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target, *(q for q, _ in self.controls))

    @property
    def arity(self) -> int:
        return len(self.controls)


@dataclass
class Circuit:
    """Ordered gate list over a fixed-width register file."""

    num_qubits: int
    gates: list[Gate] = field(default_factory=list)
    name: str = ""

    def __len__(self) -> int:
        return len(self.gates)

    def add(self, gate: Gate) -> "Circuit":
        if max(gate.qubits) >= self.num_qubits:
            raise ValueError(
                f"gate on qubits {gate.qubits} does not fit in {self.num_qubits} qubits"
            )
        self.gates.append(gate)
        return self

    def x(self, target: int, controls=()) -> "Circuit":
        return self.add(Gate("x", target, _coerce_controls(controls)))

    def h(self, target: int, controls=()) -> "Circuit":
        return self.add(Gate("h", target, _coerce_controls(controls)))

    def z(self, target: int, controls=()) -> "Circuit":
        return self.add(Gate("z", target, _coerce_controls(controls)))

    def extend(self, other: "Circuit") -> "Circuit":
        if other.num_qubits != self.num_qubits:
            raise ValueError("cannot extend across different widths")
        self.gates.extend(other.gates)
        return self

    def inverse(self) -> "Circuit":
        """Reversed gate list; every supported gate is self-inverse."""
        return Circuit(self.num_qubits, list(reversed(self.gates)),
                       name=f"inv({self.name})" if self.name else "")

    def controlled(self, controls) -> "Circuit":
        """Same circuit with extra controls attached to every gate."""
        extra = _coerce_controls(controls)
        gated = [Gate(g.kind, g.target, g.controls + extra) for g in self.gates]
        out = Circuit(self.num_qubits, name=f"ctrl({self.name})" if self.name else "")
        for g in gated:
            out.add(g)
        return out


def concat(num_qubits: int, circuits, name: str = "") -> Circuit:
    """Concatenate circuits of one width into a single program."""
    out = Circuit(num_qubits, name=name)
    for c in circuits:
        out.extend(c)
    return out


def inverse(circuit: Circuit) -> Circuit:
    return circuit.inverse()


@dataclass
class StateVector:
    """2**num_qubits complex amplitudes; L2 norm stays 1 under gates."""

    num_qubits: int
    amplitudes: np.ndarray


def new_zero_state(num_qubits: int) -> StateVector:
    """All-|0> state. Width is capped to keep the dense vector in memory."""
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise CapacityError(
            f"qubit count {num_qubits} outside supported range 1..{MAX_QUBITS}"
        )
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(num_qubits, amps)


def new_basis_state(num_qubits: int, index: int) -> StateVector:
    state = new_zero_state(num_qubits)
    if not 0 <= index < 1 << num_qubits:
        raise ValueError("basis index out of range")
    state.amplitudes[0] = 0.0
    state.amplitudes[index] = 1.0
    return state


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    """Apply one gate in place and return the state."""
    m = state.num_qubits
    if max(gate.qubits) >= m:
        raise ValueError(f"gate on qubits {gate.qubits} out of range for {m} qubits")
    view = state.amplitudes.reshape((2,) * m)
    key = [slice(None)] * m
    for qubit, polarity in gate.controls:
        key[m - 1 - qubit] = 1 if polarity else 0
    axis = m - 1 - gate.target
    if gate.kind == "z":
        key[axis] = 1
        view[tuple(key)] *= -1.0
        return state
    key0 = list(key)
    key0[axis] = 0
    key1 = list(key)
    key1[axis] = 1
    t0, t1 = tuple(key0), tuple(key1)
    if gate.kind == "x":
        low = view[t0].copy()
        view[t0] = view[t1]
        view[t1] = low
    else:  # h
        low = view[t0].copy()
        high = view[t1].copy()
        view[t0] = (low + high) * _INV_SQRT2
        view[t1] = (low - high) * _INV_SQRT2
    return state


def apply_circuit(state: StateVector, circuit: Circuit) -> StateVector:
    if circuit.num_qubits != state.num_qubits:
        raise ValueError(
            f"circuit width {circuit.num_qubits} != state width {state.num_qubits}"
        )
    for gate in circuit.gates:
        apply_gate(state, gate)
    return state


def state_norm(state: StateVector) -> float:
    return float(np.linalg.norm(state.amplitudes))


def enumerate_basis(state: StateVector, tol: float = 1e-9) -> list[tuple[int, complex]]:
    """All basis states with |amplitude| > tol, sorted by basis index."""
    if tol < 0:
        raise ValueError("tolerance must be non-negative")
    indices = np.flatnonzero(np.abs(state.amplitudes) > tol)
    return [(int(i), complex(state.amplitudes[i])) for i in indices]


def zero_probability(state: StateVector, qubits) -> float:
    """Probability mass on the subspace where all given qubits read |0>."""
    m = state.num_qubits
    key = [slice(None)] * m
    for qubit in qubits:
        key[m - 1 - qubit] = 0
    sub = state.amplitudes.reshape((2,) * m)[tuple(key)]
    return float(np.sum(np.abs(sub) ** 2))


def gate_stats(circuit: Circuit) -> dict:
    """Counts over the literal gate list.

    ``multi_controlled_count`` tallies phase (Z-family) gates of any control
    arity plus X/H gates with two or more controls; ``depth`` is the longest
    chain of gates sharing a qubit, counting each gate as one layer.
    """
    levels: dict[int, int] = {}
    depth = 0
    multi = 0
    max_arity = 0
    for gate in circuit.gates:
        if gate.kind == "z" or gate.arity >= 2:
            multi += 1
        max_arity = max(max_arity, gate.arity)
        level = 1 + max((levels.get(q, 0) for q in gate.qubits), default=0)
        for q in gate.qubits:
            levels[q] = level
        depth = max(depth, level)
    return {
        "total_gates": len(circuit.gates),
        "multi_controlled_count": multi,
        "max_control_arity": max_arity,
        "depth": depth,
    }


def _decomposition_weight(arity: int) -> int:
    # Log-depth multi-control decomposition with one clean ancilla:
    # an AND-tree over the controls plus the final single-qubit action.
    if arity <= 1:
        return 1
    return math.ceil(math.log2(arity)) + 1


def mc_decomposition_depth(circuit: Circuit) -> int:
    """Critical-path depth with each gate weighted by its decomposition cost."""
    levels: dict[int, int] = {}
    depth = 0
    for gate in circuit.gates:
        weight = _decomposition_weight(gate.arity)
        level = weight + max((levels.get(q, 0) for q in gate.qubits), default=0)
        for q in gate.qubits:
            levels[q] = level
        depth = max(depth, level)
    return depth
