"""Classical reference semantics for the edge detector.

Deliberately free of any import from the circuit modules: plain integer
loops with explicit wrap-around indexing, so it can serve as an independent
oracle for the quantum pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class ReferenceResult:
    grad_x: np.ndarray
    grad_y: np.ndarray
    edge_x: np.ndarray
    edge_y: np.ndarray
    edge: np.ndarray


def _pixels(image) -> np.ndarray:
    return np.asarray(getattr(image, "pixels", image), dtype=np.int64)


def _axis_delta(pixels: np.ndarray, axis: str) -> np.ndarray:
    side = pixels.shape[0]
    delta = np.zeros_like(pixels)
    for r in range(side):
        for c in range(side):
            if axis == "x":
                ahead = pixels[(r + 1) % side][c]
            else:
                ahead = pixels[r][(c + 1) % side]
            delta[r][c] = int(ahead) - int(pixels[r][c])
    return delta


def reference_gradients(image, axis: str) -> np.ndarray:
    """Signed cyclic differences I(next) - I(current) along one axis."""
    if axis not in ("x", "y"):
        raise ValueError(f"unknown axis {axis!r}")
    return _axis_delta(_pixels(image), axis)


def reference_edge_map(image, threshold) -> ReferenceResult:
    """Mark the darker member of every pair whose |difference| exceeds T.

    For each pixel and axis: the candidate is the next pixel when the
    difference is negative, else the pixel itself; it is marked iff the
    magnitude strictly exceeds the threshold. Contributions OR together and
    the final map is the OR of both axes.
    """
    pixels = _pixels(image)
    side = pixels.shape[0]
    t = int(getattr(threshold, "value", threshold))
    deltas = {}
    marks = {}
    for axis in ("x", "y"):
        delta = _axis_delta(pixels, axis)
        edge = np.zeros((side, side), dtype=bool)
        for r in range(side):
            for c in range(side):
                d = int(delta[r][c])
                if abs(d) <= t:
                    continue
                if d < 0:
                    rr, cc = ((r + 1) % side, c) if axis == "x" else (r, (c + 1) % side)
                else:
                    rr, cc = r, c
                edge[rr][cc] = True
        deltas[axis] = delta
        marks[axis] = edge
    return ReferenceResult(deltas["x"], deltas["y"], marks["x"], marks["y"],
                           marks["x"] | marks["y"])
