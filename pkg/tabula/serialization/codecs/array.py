from typing import Any

import numpy as np

from .codec import Codec


class ArrayCodec(Codec):
    """numpy arrays as ``{"dtype", "shape", "data"}`` with the data flattened in row-major order."""

    def applicable(self) -> bool:
        return self.type is np.ndarray

    def encode(self, value: Any) -> Any:
        array = np.asarray(value)
        return {"dtype": array.dtype.str, "shape": list(array.shape), "data": array.ravel().tolist()}

    def decode(self, raw: Any) -> Any:
        array = np.asarray(raw["data"], dtype=np.dtype(raw["dtype"]))
        return array.reshape(tuple(raw["shape"]))
