from typing import Any, Optional, get_args, get_origin

from ..fieldmeta import is_optional, is_union_type, strip_optional
from .codec import Codec, codec_for


def _runtime_class(type_: Any) -> Any:
    return get_origin(type_) or type_


def _tag(type_: Any) -> str:
    return str(getattr(_runtime_class(type_), "__name__", type_))


class OptionalCodec(Codec):
    def applicable(self) -> bool:
        return is_optional(self.type)

    def encode(self, value: Any) -> Any:
        return None if value is None else codec_for(strip_optional(self.type)[0]).encode(value)

    def decode(self, raw: Any) -> Any:
        return None if raw is None else codec_for(strip_optional(self.type)[0]).decode(raw)


class UnionCodec(Codec):
    """Unions of distinct classes, stored as ``{"type": <class name>, "value": ...}``."""

    def applicable(self) -> bool:
        return is_union_type(self.type) and not is_optional(self.type)

    def _member(self, value: Any) -> Optional[Any]:
        for member in get_args(self.type):
            if isinstance(value, _runtime_class(member)):
                return member
        return None

    def encode(self, value: Any) -> Any:
        member = self._member(value)
        if member is None:
            raise ValueError(f"{value!r} is not an instance of any member of '{self.type}'")
        return {"type": _tag(member), "value": codec_for(member).encode(value)}

    def decode(self, raw: Any) -> Any:
        for member in get_args(self.type):
            if _tag(member) == raw["type"]:
                return codec_for(member).decode(raw["value"])
        raise ValueError(f"'{raw['type']}' is not a member of '{self.type}'")
