"""scikit-learn style front end for the quantum edge-detection pipeline."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .codec import image_from_array, make_layout
from .pipeline import PipelineConfig, run
from .thresholding import Threshold


class QuantumEdgeDetector(TransformerMixin, BaseEstimator):
    """Detect intensity edges by simulating the full quantum pipeline.

    Stateless in the learning sense: ``fit`` validates the input geometry
    and pins the qubit budget, ``transform`` maps grayscale images to
    boolean edge maps of the same shape.

    Parameters
    ----------
    threshold : int or str
        Gradient magnitude must strictly exceed this to count as an edge.
        Accepts a decimal integer or an MSB-first binary string.
    mode : {"per-direction", "composite"}
        Pipeline execution mode; per-direction is the verified default.
    reset_strategy : {"unitary", "hybrid"}
        Inter-axis register clearing used by composite mode.
    bit_depth : int or None
        Intensity bit depth; inferred from the data when None.
    tol : float
        Amplitude readout tolerance.
    """

    def __init__(self, threshold=1, mode="per-direction",
                 reset_strategy="unitary", bit_depth=None, tol=1e-9):
        self.threshold = threshold
        self.mode = mode
        self.reset_strategy = reset_strategy
        self.bit_depth = bit_depth
        self.tol = tol

    def _coerce_images(self, X):
        if isinstance(X, (list, tuple)):
            arrays = [np.asarray(item) for item in X]
            single = False
        else:
            arr = np.asarray(X)
            if arr.ndim == 2:
                arrays, single = [arr], True
            elif arr.ndim == 3:
                arrays, single = list(arr), False
            else:
                raise ValueError(
                    f"expected a 2D image or a stack of 2D images, got ndim={arr.ndim}"
                )
        if not arrays:
            raise ValueError("no images to process")
        if not np.issubdtype(np.asarray(arrays[0]).dtype, np.integer):
            raise ValueError("pixel intensities must be integers")
        depth = self.bit_depth
        if depth is None:
            depth = max(
                1, max(int(np.asarray(a).max(initial=0)) for a in arrays).bit_length()
            )
        images = [image_from_array(a, bit_depth=depth) for a in arrays]
        if len({(img.side_log2, img.bit_depth) for img in images}) != 1:
            raise ValueError("all images in a batch must share one shape")
        return images, single

    def fit(self, X, y=None):
        """Validate geometry and the qubit budget; no parameters are learned."""
        images, _ = self._coerce_images(X)
        first = images[0]
        # Raises CapacityError early if the image cannot be simulated.
        layout = make_layout(first.side_log2, first.bit_depth)
        Threshold.coerce(self.threshold, first.bit_depth)
        self.side_log2_ = first.side_log2
        self.bit_depth_ = first.bit_depth
        self.n_qubits_ = layout.num_qubits
        return self

    def transform(self, X):
        """Boolean edge map(s) with the same spatial shape as the input."""
        if not hasattr(self, "n_qubits_"):
            raise NotFittedError(
                "This QuantumEdgeDetector instance is not fitted yet; "
                "call fit before transform."
            )
        images, single = self._coerce_images(X)
        if images[0].side_log2 != self.side_log2_ or images[0].bit_depth != self.bit_depth_:
            raise ValueError("input geometry differs from the fitted geometry")
        config = PipelineConfig(
            threshold=Threshold.coerce(self.threshold, self.bit_depth_),
            mode=self.mode,
            reset_strategy=self.reset_strategy,
            tol=self.tol,
        )
        maps = [run(img, config)[0].bits for img in images]
        return maps[0] if single else np.stack(maps)
