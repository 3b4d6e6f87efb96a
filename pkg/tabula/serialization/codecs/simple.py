from typing import Any, get_args

from ..fieldmeta import is_union_type
from .codec import Codec

SIMPLE_TYPES = (bool, int, float, str)


def _is_simple(type_: Any) -> bool:
    return type_ in SIMPLE_TYPES or type_ is Any


class SimpleCodec(Codec):
    """Scalars, and unions of scalars such as the label type ``Union[str, float]``."""

    def applicable(self) -> bool:
        if is_union_type(self.type):
            return all(_is_simple(t) for t in get_args(self.type))
        return _is_simple(self.type)

    def encode(self, value: Any) -> Any:
        if value is None or isinstance(value, (bool, str)):
            return value
        if self.type is int:
            return int(value)
        return float(value)

    def decode(self, raw: Any) -> Any:
        if self.type is Any or raw is None or isinstance(raw, (bool, str)):
            return raw
        if self.type is int:
            return int(raw)
        return float(raw)
