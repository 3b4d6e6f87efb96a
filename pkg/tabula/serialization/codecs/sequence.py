from typing import Any, List, Tuple, get_args, get_origin

from .codec import Codec, codec_for


class SequenceCodec(Codec):
    """``Tuple[X, ...]``, fixed-length ``Tuple[X, Y]`` and ``List[X]``, stored as JSON arrays."""

    def applicable(self) -> bool:
        return get_origin(self.type) in (tuple, list)

    def _item_types(self, length: int) -> List[Any]:
        args = get_args(self.type)
        if get_origin(self.type) is list or (len(args) == 2 and args[1] is Ellipsis):
            return [args[0] if args else Any] * length
        if len(args) != length:
            raise ValueError(f"expected {len(args)} items for '{self.type}', got {length}")
        return list(args)

    def encode(self, value: Any) -> Any:
        items = list(value)
        return [codec_for(t).encode(item) for t, item in zip(self._item_types(len(items)), items)]

    def decode(self, raw: Any) -> Any:
        items = [codec_for(t).decode(item) for t, item in zip(self._item_types(len(raw)), raw)]
        return tuple(items) if get_origin(self.type) is tuple else items


def _pair_types(type_: Any) -> Tuple[Any, Any]:
    args = get_args(type_)
    return (args[0], args[1]) if args else (Any, Any)


class MappingCodec(Codec):
    """Dictionaries as a list of ``[key, value]`` pairs, so keys don't have to be strings."""

    def applicable(self) -> bool:
        return get_origin(self.type) is dict

    def encode(self, value: Any) -> Any:
        key_type, value_type = _pair_types(self.type)
        return [[codec_for(key_type).encode(k), codec_for(value_type).encode(v)] for k, v in value.items()]

    def decode(self, raw: Any) -> Any:
        key_type, value_type = _pair_types(self.type)
        return {codec_for(key_type).decode(k): codec_for(value_type).decode(v) for k, v in raw}
