"""End-to-end edge detection: neighborhood generation, gradient, reset,
direction-aware shifting, thresholding, and readout.

The acceptance-bearing mode is ``per-direction``: each axis runs on a fresh
state and the edge map is the union of both readouts. ``composite`` chains
the two axes on one state and is validated for consistency invariants only;
its inter-axis register clearing is governed by ``reset_strategy``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .arithmetic import build_abs_subtractor, build_ladder_shift
from .codec import (
    GrayImage,
    RegisterLayout,
    build_neqr_inverse,
    build_neqr_oracle,
    build_position_superposition,
    make_layout,
)
from .registers import RegisterRef
from .sim import (
    Circuit,
    StateVector,
    apply_circuit,
    concat,
    enumerate_basis,
    gate_stats,
    new_zero_state,
    state_norm,
    zero_probability,
)
from .thresholding import Threshold, build_qpa

AXES = ("x", "y")

_NORM_TOL = 1e-9
_RESIDUAL_TOL = 1e-12


class ConsistencyError(RuntimeError):
    """A register that should have been cleared still carries amplitude."""


@dataclass(frozen=True)
class PipelineConfig:
    threshold: Threshold
    mode: str = "per-direction"
    reset_strategy: str = "unitary"
    tol: float = 1e-9

    def __post_init__(self):
        if self.mode not in ("per-direction", "composite"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.reset_strategy not in ("unitary", "hybrid"):
            raise ValueError(f"unknown reset strategy {self.reset_strategy!r}")
        if self.tol <= 0:
            raise ValueError("tolerance must be positive")


@dataclass(eq=False)
class EdgeMap:
    """Binary edge grid matching the source image dimensions."""

    side_log2: int
    bits: np.ndarray

    def __post_init__(self):
        side = 1 << self.side_log2
        self.bits = np.asarray(self.bits, dtype=bool)
        if self.bits.shape != (side, side):
            raise ValueError(f"expected {side}x{side} edge grid")

    @classmethod
    def empty(cls, side_log2: int) -> "EdgeMap":
        side = 1 << side_log2
        return cls(side_log2, np.zeros((side, side), dtype=bool))

    def union(self, other: "EdgeMap") -> "EdgeMap":
        if other.side_log2 != self.side_log2:
            raise ValueError("edge map dimensions differ")
        return EdgeMap(self.side_log2, self.bits | other.bits)

    def count(self) -> int:
        return int(self.bits.sum())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, EdgeMap)
            and self.side_log2 == other.side_log2
            and np.array_equal(self.bits, other.bits)
        )


@dataclass(frozen=True)
class BranchRecord:
    """One basis state decoded through the register layout."""

    x: int
    y: int
    intensity: int
    i2: int
    grad: int
    sign: int
    a1: int
    a2: int
    out_x: int
    out_y: int
    out: int
    amplitude: complex


@dataclass
class RunStats:
    qubit_count: int
    gate_total: int
    multi_controlled_count: int
    max_control_arity: int
    depth: int
    wall_time_ms: float


def _axis_parts(layout: RegisterLayout, axis: str) -> tuple[RegisterRef, int, int]:
    if axis == "x":
        return layout.x, layout.a1, layout.out_x
    if axis == "y":
        return layout.y, layout.a2, layout.out_y
    raise ValueError(f"unknown axis {axis!r}")


def _check_image(image: GrayImage, layout: RegisterLayout) -> None:
    if image.side_log2 != layout.n or image.bit_depth != layout.q:
        raise ValueError("image dimensions do not match the register layout")


def build_neighborhood_stage(image: GrayImage, layout: RegisterLayout,
                             axis: str, *, encode_base: bool = True) -> Circuit:
    """Pair each pixel with its axis neighbor: encode I1, shift up, encode I2.

    ``encode_base=False`` skips the first oracle for states where I1 already
    holds the current pixel's intensity.
    """
    _check_image(image, layout)
    pos, _, _ = _axis_parts(layout, axis)
    parts = []
    if encode_base:
        parts.append(build_neqr_oracle(image, layout.x, layout.y, layout.i1,
                                       num_qubits=layout.num_qubits))
    parts.append(build_ladder_shift(pos, "up", num_qubits=layout.num_qubits))
    parts.append(build_neqr_oracle(image, layout.x, layout.y, layout.i2,
                                   num_qubits=layout.num_qubits))
    return concat(layout.num_qubits, parts, name=f"neighborhood_{axis}")


def build_gradient_stage(layout: RegisterLayout) -> Circuit:
    """Signed difference of the two intensity registers.

    Fans I1 out into the gradient register with per-bit CX copies, then
    absolute-subtracts it from I2: the magnitude bits end at |I2 - I1| and
    the sign qubit reads 1 exactly when the next pixel is darker. I1 and I2
    are both preserved for later uncompute.
    """
    circ = Circuit(layout.num_qubits, name="gradient")
    for i1_bit, grad_bit in zip(layout.i1.qubits, layout.grad_mag.qubits):
        circ.x(grad_bit, [i1_bit])
    circ.extend(build_abs_subtractor(layout.i2, layout.grad_mag, layout.sign,
                                     layout.carry, num_qubits=layout.num_qubits))
    return circ


def build_reset_stage(image: GrayImage, layout: RegisterLayout, axis: str) -> Circuit:
    """Clear I2 with the inverse oracle, then shift the position back down.

    The inverse oracle must run while the position register still points at
    the neighbor, otherwise the lookup would not cancel I2.
    """
    _check_image(image, layout)
    pos, _, _ = _axis_parts(layout, axis)
    return concat(layout.num_qubits, [
        build_neqr_inverse(image, layout.x, layout.y, layout.i2,
                           num_qubits=layout.num_qubits),
        build_ladder_shift(pos, "down", num_qubits=layout.num_qubits),
    ], name=f"reset_{axis}")


def build_shift_stage(image: GrayImage, layout: RegisterLayout, axis: str) -> Circuit:
    """Move descending-gradient marks onto the darker neighbor.

    Copies the sign bit to the axis ancilla, splits the sign with a
    controlled Hadamard, and on the surviving sign=1 branch re-encodes I1 at
    the incremented position. Each descending pixel becomes two half-weight
    branches: an in-place copy (sign=0, a=1) and a shifted copy
    (sign=1, a=1).
    """
    _check_image(image, layout)
    pos, ancilla, _ = _axis_parts(layout, axis)
    circ = Circuit(layout.num_qubits, name=f"shift_{axis}")
    circ.x(ancilla, [layout.sign])
    circ.h(layout.sign, [ancilla])
    circ.extend(build_neqr_inverse(image, layout.x, layout.y, layout.i1,
                                   control=layout.sign,
                                   num_qubits=layout.num_qubits))
    circ.extend(build_ladder_shift(pos, "up", control=layout.sign,
                                   num_qubits=layout.num_qubits))
    circ.extend(build_neqr_oracle(image, layout.x, layout.y, layout.i1,
                                  control=layout.sign,
                                  num_qubits=layout.num_qubits))
    return circ


def build_threshold_stage(layout: RegisterLayout, threshold: Threshold,
                          axis: str) -> Circuit:
    """Write [|grad| > T] into the axis output, excluding duplicated copies.

    A partitioning pass sets the output on every branch; a second pass,
    fully controlled on the in-place-copy pattern (sign=0, a=1), XORs the
    same predicate again there, so only genuine edge candidates can end
    with the output set.
    """
    if threshold.width != layout.q:
        raise ValueError("threshold width does not match the gradient register")
    _, ancilla, out_qubit = _axis_parts(layout, axis)
    qpa = build_qpa(threshold, layout.grad_mag, out_qubit,
                    num_qubits=layout.num_qubits)
    corrective = qpa.controlled([(layout.sign, False), (ancilla, True)])
    return concat(layout.num_qubits, [qpa, corrective], name=f"threshold_{axis}")


def build_or_stage(layout: RegisterLayout) -> Circuit:
    """Reversible OR of the two axis outputs into the final output qubit."""
    circ = Circuit(layout.num_qubits, name="or")
    circ.x(layout.out_x)
    circ.x(layout.out_y)
    circ.x(layout.out, [layout.out_x, layout.out_y])
    circ.x(layout.out)
    circ.x(layout.out_x)
    circ.x(layout.out_y)
    return circ


def decode_branches(state: StateVector, layout: RegisterLayout,
                    tol: float = 1e-9) -> list[BranchRecord]:
    """Decode every above-tolerance basis state into named register fields."""
    records = []
    for index, amplitude in enumerate_basis(state, tol):
        records.append(BranchRecord(
            x=layout.x.read(index),
            y=layout.y.read(index),
            intensity=layout.i1.read(index),
            i2=layout.i2.read(index),
            grad=layout.grad_mag.read(index),
            sign=(index >> layout.sign) & 1,
            a1=(index >> layout.a1) & 1,
            a2=(index >> layout.a2) & 1,
            out_x=(index >> layout.out_x) & 1,
            out_y=(index >> layout.out_y) & 1,
            out=(index >> layout.out) & 1,
            amplitude=amplitude,
        ))
    return records


def _read_marked_positions(state: StateVector, layout: RegisterLayout,
                           out_qubit: int, tol: float) -> EdgeMap:
    edge = EdgeMap.empty(layout.n)
    for index, _ in enumerate_basis(state, tol):
        if (index >> out_qubit) & 1:
            edge.bits[layout.x.read(index), layout.y.read(index)] = True
    return edge


def _check_norm(state: StateVector) -> None:
    drift = abs(state_norm(state) - 1.0)
    if drift >= _NORM_TOL:
        raise ConsistencyError(f"state norm drifted by {drift:.3e}")


def _check_cleared(state: StateVector, qubits, what: str) -> None:
    residual = 1.0 - zero_probability(state, qubits)
    if residual >= _RESIDUAL_TOL:
        raise ConsistencyError(
            f"{what} carries residual probability {residual:.3e}"
        )


def _axis_pass(image: GrayImage, layout: RegisterLayout, threshold: Threshold,
               axis: str) -> list[Circuit]:
    return [
        build_neighborhood_stage(image, layout, axis),
        build_gradient_stage(layout),
        build_reset_stage(image, layout, axis),
        build_shift_stage(image, layout, axis),
        build_threshold_stage(layout, threshold, axis),
    ]


def _build_interaxis_clear(image: GrayImage, layout: RegisterLayout) -> Circuit:
    """Unitary uncompute of the x pass's gradient, sign, ancilla, and I2.

    Inverts the shift, then the whole neighbor/gradient/reset block, leaving
    I1 encoded for the y pass. This only disentangles cleanly when the
    duplicated shift branches agree on the written output bit; run() checks
    the residual afterwards.
    """
    inv_shift = build_shift_stage(image, layout, "x").inverse()
    block = concat(layout.num_qubits, [
        build_neighborhood_stage(image, layout, "x", encode_base=False),
        build_gradient_stage(layout),
        build_reset_stage(image, layout, "x"),
    ])
    return concat(layout.num_qubits, [inv_shift, block.inverse()],
                  name="interaxis_clear")


def _hybrid_reset(state: StateVector, layout: RegisterLayout) -> None:
    """Classically force I2, gradient, sign, and a1 back to |0>.

    Probability mass of basis states that collide after clearing is summed
    and re-entered with a non-negative real amplitude, so the norm is
    preserved exactly while phases on the cleared registers are dropped.
    """
    clear_mask = (layout.i2.mask | layout.grad_mag.mask
                  | (1 << layout.sign) | (1 << layout.a1))
    amps = state.amplitudes
    occupied = np.flatnonzero(np.abs(amps) > 0.0)
    merged = occupied & ~clear_mask
    probs = np.zeros(amps.shape[0], dtype=np.float64)
    np.add.at(probs, merged, np.abs(amps[occupied]) ** 2)
    state.amplitudes = np.sqrt(probs).astype(np.complex128)


def _combine_stats(layout: RegisterLayout, programs: list[Circuit],
                   wall_ms: float) -> RunStats:
    per_program = [gate_stats(p) for p in programs]
    return RunStats(
        qubit_count=layout.num_qubits,
        gate_total=sum(s["total_gates"] for s in per_program),
        multi_controlled_count=sum(s["multi_controlled_count"] for s in per_program),
        max_control_arity=max(s["max_control_arity"] for s in per_program),
        depth=max(s["depth"] for s in per_program),
        wall_time_ms=wall_ms,
    )


def run(image: GrayImage, config: PipelineConfig) -> tuple[EdgeMap, RunStats]:
    """Detect edges and report circuit resource usage.

    per-direction: two fresh states, one per axis; the edge map is the union
    of positions whose axis output reads 1 above the readout tolerance.
    composite: one state through both axes plus the final OR, with the
    inter-axis registers cleared per ``reset_strategy``.
    """
    start = time.perf_counter()
    layout = make_layout(image.side_log2, image.bit_depth)
    threshold = Threshold.coerce(config.threshold, image.bit_depth)
    programs: list[Circuit] = []

    if config.mode == "per-direction":
        edge = EdgeMap.empty(image.side_log2)
        for axis in AXES:
            state = new_zero_state(layout.num_qubits)
            apply_circuit(state, build_position_superposition(layout))
            stages = _axis_pass(image, layout, threshold, axis)
            for stage in stages:
                apply_circuit(state, stage)
                if stage.name == f"reset_{axis}":
                    _check_cleared(state, layout.i2.qubits, "intensity register I2")
            _check_norm(state)
            _, _, out_qubit = _axis_parts(layout, axis)
            edge = edge.union(_read_marked_positions(state, layout, out_qubit,
                                                     config.tol))
            programs.append(concat(layout.num_qubits,
                                   [build_position_superposition(layout), *stages]))
    else:
        state = new_zero_state(layout.num_qubits)
        applied = [build_position_superposition(layout)]
        apply_circuit(state, applied[0])
        for stage in _axis_pass(image, layout, threshold, "x"):
            apply_circuit(state, stage)
            applied.append(stage)
            if stage.name == "reset_x":
                _check_cleared(state, layout.i2.qubits, "intensity register I2")
        cleared = (*layout.i2.qubits, *layout.grad_mag.qubits,
                   layout.sign, layout.a1)
        if config.reset_strategy == "unitary":
            clear = _build_interaxis_clear(image, layout)
            apply_circuit(state, clear)
            applied.append(clear)
        else:
            _hybrid_reset(state, layout)
        _check_cleared(state, cleared, "inter-axis scratch registers")
        y_stages = [
            build_neighborhood_stage(image, layout, "y", encode_base=False),
            build_gradient_stage(layout),
            build_reset_stage(image, layout, "y"),
            build_shift_stage(image, layout, "y"),
            build_threshold_stage(layout, threshold, "y"),
            build_or_stage(layout),
        ]
        for stage in y_stages:
            apply_circuit(state, stage)
            applied.append(stage)
            if stage.name == "reset_y":
                _check_cleared(state, layout.i2.qubits, "intensity register I2")
        _check_norm(state)
        edge = _read_marked_positions(state, layout, layout.out, config.tol)
        programs.append(concat(layout.num_qubits, applied))

    wall_ms = (time.perf_counter() - start) * 1e3
    return edge, _combine_stats(layout, programs, wall_ms)
