from dataclasses import is_dataclass
from typing import Any

from ..registry import MODELS
from .codec import Codec
from .dataclass import DataclassCodec


class ModelCodec(Codec):
    """Fields typed with an abstract base of registered models, stored as ``{"type", "params"}`` envelopes."""

    def applicable(self) -> bool:
        return isinstance(self.type, type) and not is_dataclass(self.type) and MODELS.has_subclasses(self.type)

    def encode(self, value: Any) -> Any:
        return {"type": MODELS.name_of(type(value)), "params": DataclassCodec(type(value)).encode(value)}

    def decode(self, raw: Any) -> Any:
        cls = MODELS.get(raw["type"])
        if not issubclass(cls, self.type):
            raise ValueError(f"'{raw['type']}' is not a '{self.type.__name__}'")
        return DataclassCodec(cls).decode(raw["params"])
