"""Builders for reversible arithmetic circuits.

Everything here emits X-family gates only, so every builder output is a
basis permutation and equals its own inverse after gate-list reversal.
Builders are pure functions; execution happens in :mod:`qedge.sim`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .registers import RegisterRef, check_disjoint
from .sim import Circuit


def _circuit(name: str, indices, num_qubits: int | None) -> Circuit:
    needed = max(indices) + 1
    if num_qubits is None:
        num_qubits = needed
    elif num_qubits < needed:
        raise ValueError(f"{name}: num_qubits {num_qubits} < required {needed}")
    return Circuit(num_qubits, name=name)


@dataclass(frozen=True)
class AdderLayout:
    """Wire assignment for the ripple-carry adder.

    ``carry_in`` must be supplied in |0> for plain addition; ``carry_out``
    is optional and, when present, receives carry XORed onto its prior
    value.
    """

    a: RegisterRef
    b: RegisterRef
    carry_in: int
    carry_out: int | None = None

    def __post_init__(self):
        if self.a.width != self.b.width:
            raise ValueError("adder operands must have equal width")
        if self.a.width < 1:
            raise ValueError("adder operands must be non-empty")
        parts = [self.a, self.b, self.carry_in]
        if self.carry_out is not None:
            parts.append(self.carry_out)
        check_disjoint(*parts)

    @property
    def qubits(self) -> tuple[int, ...]:
        extra = () if self.carry_out is None else (self.carry_out,)
        return (*self.a.qubits, *self.b.qubits, self.carry_in, *extra)


def _maj_gates(circ: Circuit, c: int, b: int, a: int) -> None:
    circ.x(b, [a])
    circ.x(c, [a])
    circ.x(a, [c, b])


def _uma_gates(circ: Circuit, c: int, b: int, a: int) -> None:
    circ.x(a, [c, b])
    circ.x(c, [a])
    circ.x(b, [c])


def build_maj(c: int, b: int, a: int, *, num_qubits: int | None = None) -> Circuit:
    """Majority block: |c,b,a> -> |c^a, b^a, MAJ(a,b,c)>."""
    if len({a, b, c}) != 3:
        raise ValueError("MAJ wires must be distinct")
    circ = _circuit("maj", (a, b, c), num_qubits)
    _maj_gates(circ, c, b, a)
    return circ


def build_uma(c: int, b: int, a: int, *, num_qubits: int | None = None) -> Circuit:
    """Unmajority-and-add block: undoes MAJ and leaves |c, a^b^c, a>."""
    if len({a, b, c}) != 3:
        raise ValueError("UMA wires must be distinct")
    circ = _circuit("uma", (a, b, c), num_qubits)
    _uma_gates(circ, c, b, a)
    return circ


def build_qrca(layout: AdderLayout, *, num_qubits: int | None = None) -> Circuit:
    """Ripple-carry adder: |a>|b>|0>|z> -> |a>|a+b mod 2^n>|0>|z ^ carry>.

    n MAJ blocks ride the carry along the ``a`` wires, one CX deposits the
    carry on ``carry_out`` (if present), and n UMA blocks write the sum
    into ``b`` while restoring ``a`` and ``carry_in``.
    """
    n = layout.a.width
    circ = _circuit("qrca", layout.qubits, num_qubits)
    chain = (layout.carry_in, *layout.a.qubits[:-1])
    for i in range(n):
        _maj_gates(circ, chain[i], layout.b.qubits[i], layout.a.qubits[i])
    if layout.carry_out is not None:
        circ.x(layout.carry_out, [layout.a.qubits[-1]])
    for i in reversed(range(n)):
        _uma_gates(circ, chain[i], layout.b.qubits[i], layout.a.qubits[i])
    return circ


def _increment_gates(circ: Circuit, qubits, extra_controls) -> None:
    # Modular +1: flip bit i iff all lower bits are 1, descending so each
    # gate still sees the original lower bits.
    for i in range(len(qubits) - 1, 0, -1):
        circ.x(qubits[i], [*qubits[:i], *extra_controls])
    circ.x(qubits[0], list(extra_controls))


def build_ladder_shift(pos: RegisterRef, direction: str = "up", *,
                       control: int | None = None,
                       num_qubits: int | None = None) -> Circuit:
    """Modular shift |x> -> |x +- 1 mod 2^n> on a position register.

    With ``control`` given, the shift acts only on the control's |1>
    branch.
    """
    if direction not in ("up", "down"):
        raise ValueError(f"direction must be 'up' or 'down', got {direction!r}")
    if pos.width < 1:
        raise ValueError("empty position register")
    if control is not None and control in pos.qubits:
        raise ValueError("shift control must lie outside the position register")
    indices = pos.qubits if control is None else (*pos.qubits, control)
    circ = _circuit(f"ladder_{direction}", indices, num_qubits)
    extra = () if control is None else (control,)
    _increment_gates(circ, pos.qubits, extra)
    if direction == "down":
        circ.gates.reverse()
    return circ


def build_s2c(target: RegisterRef, *, control: int | None = None,
              num_qubits: int | None = None) -> Circuit:
    """Two's complement in place: |y> -> |-y mod 2^width>.

    Flips every bit, then adds one with the modular increment ladder.
    """
    if target.width < 1:
        raise ValueError("empty register")
    if control is not None and control in target.qubits:
        raise ValueError("control must lie outside the target register")
    indices = target.qubits if control is None else (*target.qubits, control)
    circ = _circuit("s2c", indices, num_qubits)
    extra = () if control is None else (control,)
    for qb in target.qubits:
        circ.x(qb, extra)
    _increment_gates(circ, target.qubits, extra)
    return circ


def build_subtractor(a: RegisterRef, b: RegisterRef, carry_in: int, *,
                     carry_out: int | None = None,
                     num_qubits: int | None = None) -> Circuit:
    """In-place subtraction |x>|y> -> |x>|x-y mod 2^width>.

    Negates ``b`` (two's complement) and adds ``a`` into it; interpret the
    result as a signed two's-complement value.
    """
    layout = AdderLayout(a, b, carry_in, carry_out)
    circ = _circuit("subtract", layout.qubits, num_qubits)
    circ.extend(build_s2c(b, num_qubits=circ.num_qubits))
    circ.extend(build_qrca(layout, num_qubits=circ.num_qubits))
    return circ


def build_abs_subtractor(a: RegisterRef, b: RegisterRef, sign: int,
                         carry_in: int, *,
                         num_qubits: int | None = None) -> Circuit:
    """Magnitude difference: |a>|b>|0> -> |a>| |a-b| >|[a<b]>.

    ``b`` extended by ``sign`` forms a (width+1)-bit two's-complement
    register holding a-b after the addition; a sign-controlled negation of
    the low bits folds negative results back to their magnitude.
    """
    ext = RegisterRef(f"{b.name}_signed", (*b.qubits, sign))
    layout = AdderLayout(a, b, carry_in, sign)
    circ = _circuit("abs_subtract", (*layout.qubits, sign), num_qubits)
    circ.extend(build_s2c(ext, num_qubits=circ.num_qubits))
    circ.extend(build_qrca(layout, num_qubits=circ.num_qubits))
    circ.extend(build_s2c(b, control=sign, num_qubits=circ.num_qubits))
    return circ
