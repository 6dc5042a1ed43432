"""Threshold circuits: the fast threshold phase oracle (FTPO), the quantum
partitioning algorithm (QPA), and a ripple-carry comparator baseline.

All three mark the strict condition s > T; s = T is never marked.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arithmetic import AdderLayout, build_qrca, build_s2c
from .registers import RegisterRef, check_disjoint
from .sim import Circuit


@dataclass(frozen=True)
class Threshold:
    """Unsigned threshold value with a fixed register width."""

    value: int
    width: int

    def __post_init__(self):
        if self.width < 1:
            raise ValueError("threshold width must be at least 1")
        if not 0 <= self.value < 1 << self.width:
            raise ValueError(
                f"threshold {self.value} does not fit in {self.width} bits"
            )

    @property
    def bits(self) -> str:
        """MSB-first bitstring t_{q-1}..t_0."""
        return format(self.value, f"0{self.width}b")

    def bit(self, i: int) -> int:
        return (self.value >> i) & 1

    @classmethod
    def parse(cls, text: str, width: int | None = None) -> "Threshold":
        """Parse a decimal integer or an MSB-first binary string.

        A string of 0/1 characters is read as binary when its length equals
        ``width``, or when no width is given and it has at least two digits
        with a leading zero; anything else is decimal.
        """
        text = text.strip()
        if not text:
            raise ValueError("empty threshold")
        is_binary = set(text) <= {"0", "1"} and (
            (width is not None and len(text) == width)
            or (width is None and len(text) >= 2 and text[0] == "0")
        )
        if is_binary:
            return cls(int(text, 2), width if width is not None else len(text))
        value = int(text, 10)
        if width is None:
            raise ValueError("decimal threshold needs an explicit width")
        return cls(value, width)

    @classmethod
    def coerce(cls, value, width: int) -> "Threshold":
        if isinstance(value, Threshold):
            if value.width != width:
                raise ValueError(
                    f"threshold width {value.width} does not match register width {width}"
                )
            return value
        if isinstance(value, str):
            return cls.parse(value, width)
        return cls(int(value), width)


@dataclass(frozen=True)
class PartitionSets:
    """The two halves a threshold induces on [0, 2^q)."""

    above: frozenset[int]
    below_or_equal: frozenset[int]

    @classmethod
    def from_threshold(cls, threshold: Threshold) -> "PartitionSets":
        full = range(1 << threshold.width)
        above = frozenset(s for s in full if s > threshold.value)
        return cls(above, frozenset(full) - above)


def classify_bruteforce(s: int, threshold: Threshold) -> bool:
    """Independent oracle: is s strictly above the threshold?"""
    if not 0 <= s < 1 << threshold.width:
        raise ValueError(f"value {s} outside [0, 2^{threshold.width})")
    return s > threshold.value


def build_ftpo(threshold: Threshold, target: RegisterRef, *,
               oracle_control: int | None = None,
               num_qubits: int | None = None) -> Circuit:
    """Phase oracle flipping exactly the basis states s with s > T.

    Walks the threshold bits from the MSB down; each zero bit contributes
    one Z on that qubit controlled by all more-significant qubits, followed
    by a literal X that arms the prefix match, with all X gates uncomputed
    at the end. With ``oracle_control`` set, only the Z gates gain the
    extra control; the X pairs cancel on the untriggered branch anyway.
    """
    if target.width != threshold.width:
        raise ValueError(
            f"target width {target.width} != threshold width {threshold.width}"
        )
    if oracle_control is not None and oracle_control in target.qubits:
        raise ValueError("oracle control must lie outside the target register")
    indices = list(target.qubits)
    if oracle_control is not None:
        indices.append(oracle_control)
    needed = max(indices) + 1
    circ = Circuit(needed if num_qubits is None else num_qubits, name="ftpo")
    uncompute: list[int] = []
    for i in range(threshold.width - 1, -1, -1):
        if threshold.bit(i) == 0:
            controls: list = [target.qubits[j] for j in range(i + 1, threshold.width)]
            if oracle_control is not None:
                controls.append(oracle_control)
            circ.z(target.qubits[i], controls)
            circ.x(target.qubits[i])
            uncompute.append(i)
    for i in uncompute:
        circ.x(target.qubits[i])
    return circ


def build_qpa(threshold: Threshold, grad: RegisterRef, ancilla: int, *,
              num_qubits: int | None = None) -> Circuit:
    """Partition by phase kickback: |0>|s> -> |[s > T]>|s>.

    One Hadamard puts the ancilla in |+>, a single controlled phase-oracle
    call flips the |1> branch on states above the threshold, and a closing
    Hadamard turns the phase into a basis value. Acts as an XOR write when
    the ancilla is not |0>.
    """
    check_disjoint(grad, ancilla)
    indices = (*grad.qubits, ancilla)
    needed = max(indices) + 1
    circ = Circuit(needed if num_qubits is None else num_qubits, name="qpa")
    circ.h(ancilla)
    circ.extend(build_ftpo(threshold, grad, oracle_control=ancilla,
                           num_qubits=circ.num_qubits))
    circ.h(ancilla)
    return circ


def build_qrca_comparator(threshold: Threshold, grad: RegisterRef,
                          t_reg: RegisterRef, sign_out: int, carry_in: int, *,
                          num_qubits: int | None = None) -> Circuit:
    """Arithmetic comparator baseline: sign_out reads [s > T].

    Loads T into ``t_reg`` with X gates, then computes T - s in (q+1)-bit
    two's complement across ``t_reg`` plus ``sign_out``; the magnitude bits
    are left dirty in ``t_reg`` (no uncompute path is provided).
    """
    if t_reg.width != threshold.width or grad.width != threshold.width:
        raise ValueError("comparator register widths must match the threshold")
    check_disjoint(grad, t_reg, sign_out, carry_in)
    ext = RegisterRef(f"{t_reg.name}_signed", (*t_reg.qubits, sign_out))
    indices = (*grad.qubits, *ext.qubits, carry_in)
    needed = max(indices) + 1
    circ = Circuit(needed if num_qubits is None else num_qubits, name="comparator")
    for i in range(threshold.width):
        if threshold.bit(i):
            circ.x(t_reg.qubits[i])
    # t_reg holds T; negate, add s, negate again: the register ends at
    # T - s and the extension bit is 1 exactly when s > T.
    circ.extend(build_s2c(ext, num_qubits=circ.num_qubits))
    circ.extend(build_qrca(AdderLayout(grad, t_reg, carry_in, sign_out),
                           num_qubits=circ.num_qubits))
    circ.extend(build_s2c(ext, num_qubits=circ.num_qubits))
    return circ
