"""Fully quantum gradient-based edge detection on a dense statevector simulator.

Grayscale images are encoded in the computational basis (NEQR), directional
gradients are computed with exact reversible arithmetic, descending edges
are relocated onto the darker pixel, and a single-ancilla phase-kickback
partition writes the thresholded edge flag. A classical reference oracle
with identical semantics ships alongside for verification.
"""

from .codec import GrayImage, image_from_array, load_pgm, reduce_bit_depth, write_pgm
from .estimator import QuantumEdgeDetector
from .pipeline import ConsistencyError, EdgeMap, PipelineConfig, run
from .reference import ReferenceResult, reference_edge_map, reference_gradients
from .registers import RegisterRef
from .sim import (
    CapacityError,
    Circuit,
    Gate,
    StateVector,
    apply_circuit,
    apply_gate,
    enumerate_basis,
    gate_stats,
    new_zero_state,
)
from .thresholding import Threshold

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "Circuit",
    "ConsistencyError",
    "EdgeMap",
    "Gate",
    "GrayImage",
    "PipelineConfig",
    "QuantumEdgeDetector",
    "ReferenceResult",
    "RegisterRef",
    "StateVector",
    "Threshold",
    "apply_circuit",
    "apply_gate",
    "enumerate_basis",
    "gate_stats",
    "image_from_array",
    "load_pgm",
    "new_zero_state",
    "reduce_bit_depth",
    "reference_edge_map",
    "reference_gradients",
    "run",
    "write_pgm",
]
