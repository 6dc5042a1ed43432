"""Named register views over qubit indices (least-significant first)."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class RegisterRef:
    """A named, ordered slice of the qubit file; qubits[0] is the LSB."""

    name: str
    qubits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if any(q < 0 for q in self.qubits):
            raise ValueError(f"register {self.name!r} has negative qubit index")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"register {self.name!r} repeats a qubit")

    @property
    def width(self) -> int:
        return len(self.qubits)

    @property
    def mask(self) -> int:
        return sum(1 << q for q in self.qubits)

    def read(self, basis_index: int) -> int:
        """Integer value of this register within a basis index."""
        value = 0
        for k, q in enumerate(self.qubits):
            value |= ((basis_index >> q) & 1) << k
        return value

    def write(self, basis_index: int, value: int) -> int:
        """Basis index with this register's bits replaced by ``value``."""
        if not 0 <= value < 1 << self.width:
            raise ValueError(f"value {value} does not fit register {self.name!r}")
        for k, q in enumerate(self.qubits):
            basis_index &= ~(1 << q)
            if (value >> k) & 1:
                basis_index |= 1 << q
        return basis_index


def check_disjoint(*parts) -> None:
    """Raise if any qubit appears twice across registers/indices."""
    seen: set[int] = set()
    for part in parts:
        qubits = part.qubits if isinstance(part, RegisterRef) else (int(part),)
        for q in qubits:
            if q in seen:
                raise ValueError(f"qubit {q} assigned twice")
            seen.add(q)
