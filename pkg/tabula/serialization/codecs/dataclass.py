from dataclasses import is_dataclass
from typing import Any, Dict

from ..fieldmeta import dataclass_fields
from .codec import Codec, codec_for


class DataclassCodec(Codec):
    """Dataclasses as an object with one entry per init field, encoded recursively by field type."""

    def applicable(self) -> bool:
        return isinstance(self.type, type) and is_dataclass(self.type)

    def encode(self, value: Any) -> Any:
        encoded: Dict[str, Any] = {}
        for name, field in dataclass_fields(self.type).items():
            if not field.init:
                continue
            item = getattr(value, name)
            if item is None:
                if not field.allow_none:
                    raise ValueError(f"{field!r} of '{self.type.__name__}' is None")
                encoded[name] = None
            else:
                encoded[name] = codec_for(field.type).encode(item)
        return encoded

    def decode(self, raw: Any) -> Any:
        kwargs: Dict[str, Any] = {}
        for name, field in dataclass_fields(self.type).items():
            if not field.init:
                continue
            if name not in raw:
                if field.required:
                    raise ValueError(f"{field!r} of '{self.type.__name__}' is missing")
                continue
            item = raw[name]
            kwargs[name] = None if item is None else codec_for(field.type).decode(item)
        unknown = set(raw) - set(dataclass_fields(self.type))
        if unknown:
            raise ValueError(f"unknown fields {sorted(unknown)} for '{self.type.__name__}'")
        return self.type(**kwargs)
