"""Grayscale image I/O (PGM P2/P5), register layout, and NEQR encoding.

Image convention: ``pixels[x][y]`` with x the first index, so an "x" shift
moves along the first axis. Intensities are ``bit_depth``-bit unsigned
integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .registers import RegisterRef, check_disjoint
from .sim import MAX_QUBITS, CapacityError, Circuit

_WHITESPACE = b" \t\r\n"


@dataclass(eq=False)
class GrayImage:
    """Square 2^n x 2^n grid of q-bit intensities."""

    side_log2: int
    bit_depth: int
    pixels: np.ndarray

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels, dtype=np.int64)
        side = 1 << self.side_log2
        if self.side_log2 < 0:
            raise ValueError("side_log2 must be non-negative")
        if self.bit_depth < 1:
            raise ValueError("bit_depth must be at least 1")
        if self.pixels.shape != (side, side):
            raise ValueError(
                f"expected {side}x{side} pixel grid, got {self.pixels.shape}"
            )
        if self.pixels.min(initial=0) < 0 or self.pixels.max(initial=0) >= 1 << self.bit_depth:
            raise ValueError(f"pixel values must lie in [0, {1 << self.bit_depth})")

    @property
    def side(self) -> int:
        return 1 << self.side_log2

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GrayImage)
            and self.side_log2 == other.side_log2
            and self.bit_depth == other.bit_depth
            and np.array_equal(self.pixels, other.pixels)
        )


def image_from_array(pixels, bit_depth: int | None = None) -> GrayImage:
    """Wrap a square power-of-two array; infer bit depth from the max value."""
    arr = np.asarray(pixels, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square 2D array, got shape {arr.shape}")
    side = arr.shape[0]
    if side < 1 or side & (side - 1):
        raise ValueError(f"side {side} is not a power of two")
    if bit_depth is None:
        bit_depth = max(1, int(arr.max(initial=0)).bit_length())
    return GrayImage(side.bit_length() - 1, bit_depth, arr)


def _read_tokens(data: bytes, count: int, pos: int) -> tuple[list[bytes], int]:
    tokens: list[bytes] = []
    while len(tokens) < count:
        while pos < len(data):
            ch = data[pos:pos + 1]
            if ch in _WHITESPACE and ch:
                pos += 1
            elif ch == b"#":
                newline = data.find(b"\n", pos)
                pos = len(data) if newline < 0 else newline + 1
            else:
                break
        start = pos
        while pos < len(data) and data[pos:pos + 1] not in _WHITESPACE:
            pos += 1
        if start == pos:
            raise ValueError("truncated PGM header")
        tokens.append(data[start:pos])
    return tokens, pos


def load_pgm(path) -> GrayImage:
    """Parse a P2 (ASCII) or P5 (binary, maxval <= 255) grayscale file.

    The bit depth is the smallest q with maxval < 2^q; sides must be equal
    powers of two.
    """
    data = Path(path).read_bytes()
    (magic,), pos = _read_tokens(data, 1, 0)
    if magic not in (b"P2", b"P5"):
        raise ValueError(f"unsupported PGM magic {magic!r}")
    header, pos = _read_tokens(data, 3, pos)
    try:
        width, height, maxval = (int(tok) for tok in header)
    except ValueError as exc:
        raise ValueError(f"malformed PGM header: {exc}") from exc
    if width != height:
        raise ValueError(f"image must be square, got {width}x{height}")
    if width < 1 or width & (width - 1):
        raise ValueError(f"side {width} is not a power of two")
    if not 1 <= maxval <= 255:
        raise ValueError(f"maxval {maxval} outside supported range 1..255")
    count = width * height
    if magic == b"P5":
        pos += 1  # single whitespace byte after maxval
        raw = data[pos:pos + count]
        if len(raw) != count:
            raise ValueError("truncated P5 pixel data")
        values = list(raw)
    else:
        tokens, _ = _read_tokens(data, count, pos)
        values = [int(tok) for tok in tokens]
    if max(values) > maxval:
        raise ValueError("pixel value exceeds declared maxval")
    bit_depth = maxval.bit_length()
    pixels = np.array(values, dtype=np.int64).reshape(height, width)
    return GrayImage(width.bit_length() - 1, bit_depth, pixels)


def write_pgm(obj, path) -> None:
    """Write a GrayImage (maxval 2^q - 1) or an edge map (0/255, maxval 255)."""
    if hasattr(obj, "bits"):
        grid = np.where(np.asarray(obj.bits, dtype=bool), 255, 0)
        maxval = 255
    else:
        grid = np.asarray(obj.pixels, dtype=np.int64)
        maxval = (1 << obj.bit_depth) - 1
    side = grid.shape[0]
    lines = ["P2", f"{side} {side}", str(maxval)]
    lines.extend(" ".join(str(int(v)) for v in row) for row in grid)
    Path(path).write_text("\n".join(lines) + "\n")


def reduce_bit_depth(image: GrayImage, bit_depth: int) -> GrayImage:
    """Downsample intensities by right-shifting to the requested depth."""
    if not 1 <= bit_depth <= image.bit_depth:
        raise ValueError(
            f"target bit depth must lie in 1..{image.bit_depth}, got {bit_depth}"
        )
    shift = image.bit_depth - bit_depth
    return GrayImage(image.side_log2, bit_depth, image.pixels >> shift)


@dataclass(frozen=True)
class RegisterLayout:
    """Fixed qubit assignment for the edge-detection register file.

    Total width is 2n + 3q + 7: positions, two intensity registers, the
    gradient magnitude with its sign bit, two shift ancillas, three output
    qubits, and one adder carry.
    """

    n: int
    q: int
    x: RegisterRef
    y: RegisterRef
    i1: RegisterRef
    i2: RegisterRef
    grad_mag: RegisterRef
    sign: int
    a1: int
    a2: int
    out_x: int
    out_y: int
    out: int
    carry: int
    num_qubits: int

    def __post_init__(self):
        check_disjoint(self.x, self.y, self.i1, self.i2, self.grad_mag,
                       self.sign, self.a1, self.a2, self.out_x, self.out_y,
                       self.out, self.carry)

    @property
    def grad(self) -> RegisterRef:
        """Gradient magnitude plus sign, sign most significant."""
        return RegisterRef("grad", (*self.grad_mag.qubits, self.sign))


def make_layout(n: int, q: int) -> RegisterLayout:
    if n < 1 or q < 1:
        raise ValueError("layout needs n >= 1 and q >= 1")
    total = 2 * n + 3 * q + 7
    if total > MAX_QUBITS:
        raise CapacityError(
            f"image needs {total} qubits (2n + 3q + 7), cap is {MAX_QUBITS}"
        )
    cursor = 0

    def take(count: int) -> tuple[int, ...]:
        nonlocal cursor
        qubits = tuple(range(cursor, cursor + count))
        cursor += count
        return qubits

    x = RegisterRef("x", take(n))
    y = RegisterRef("y", take(n))
    i1 = RegisterRef("i1", take(q))
    i2 = RegisterRef("i2", take(q))
    grad_mag = RegisterRef("grad_mag", take(q))
    sign, a1, a2, out_x, out_y, out, carry = (take(1)[0] for _ in range(7))
    return RegisterLayout(n, q, x, y, i1, i2, grad_mag, sign, a1, a2,
                          out_x, out_y, out, carry, total)


def build_position_superposition(layout: RegisterLayout) -> Circuit:
    """Hadamards on both position registers: uniform over all 2^(2n) pixels."""
    circ = Circuit(layout.num_qubits, name="positions")
    for qb in (*layout.x.qubits, *layout.y.qubits):
        circ.h(qb)
    return circ


def _position_pattern(image: GrayImage, x_reg: RegisterRef, y_reg: RegisterRef,
                      xv: int, yv: int) -> list[tuple[int, bool]]:
    n = image.side_log2
    pattern = [(x_reg.qubits[j], bool((xv >> j) & 1)) for j in range(n)]
    pattern += [(y_reg.qubits[j], bool((yv >> j) & 1)) for j in range(n)]
    return pattern


def build_neqr_oracle(image: GrayImage, x_reg: RegisterRef, y_reg: RegisterRef,
                      target: RegisterRef, *, control: int | None = None,
                      num_qubits: int | None = None) -> Circuit:
    """Intensity lookup |x>|y>|t> -> |x>|y>|t ^ I(x,y)> on every branch.

    One X per set intensity bit per pixel, controlled on the full position
    pattern; zero position bits use negative controls instead of X
    sandwiches.
    """
    if x_reg.width != image.side_log2 or y_reg.width != image.side_log2:
        raise ValueError("position register width does not match image size")
    if target.width != image.bit_depth:
        raise ValueError("target register width does not match image bit depth")
    indices = [*x_reg.qubits, *y_reg.qubits, *target.qubits]
    if control is not None:
        indices.append(control)
    needed = max(indices) + 1
    circ = Circuit(needed if num_qubits is None else num_qubits, name="neqr")
    for xv in range(image.side):
        for yv in range(image.side):
            value = int(image.pixels[xv, yv])
            if value == 0:
                continue
            pattern = _position_pattern(image, x_reg, y_reg, xv, yv)
            if control is not None:
                pattern.append((control, True))
            for k in range(image.bit_depth):
                if (value >> k) & 1:
                    circ.x(target.qubits[k], pattern)
    return circ


def build_neqr_inverse(image: GrayImage, x_reg: RegisterRef, y_reg: RegisterRef,
                       target: RegisterRef, *, control: int | None = None,
                       num_qubits: int | None = None) -> Circuit:
    """Adjoint of the intensity oracle (reversed X-family gate list)."""
    circ = build_neqr_oracle(image, x_reg, y_reg, target, control=control,
                             num_qubits=num_qubits)
    circ.gates.reverse()
    circ.name = "neqr_inv"
    return circ
