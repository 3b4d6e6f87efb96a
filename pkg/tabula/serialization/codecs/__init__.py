from functools import lru_cache
from typing import Any, List, Type

from .array import ArrayCodec
from .codec import Codec, codec_for
from .dataclass import DataclassCodec
from .enum import EnumCodec
from .model import ModelCodec
from .sequence import MappingCodec, SequenceCodec
from .simple import SimpleCodec
from .union import OptionalCodec, UnionCodec

# first applicable codec wins
CODECS: List[Type[Codec]] = [
    OptionalCodec,
    SimpleCodec,
    EnumCodec,
    ArrayCodec,
    SequenceCodec,
    MappingCodec,
    ModelCodec,
    DataclassCodec,
    UnionCodec,
]


@lru_cache(maxsize=None)
def find_codec(type_: Any) -> Codec:
    for codec_cls in CODECS:
        codec = codec_cls(type_)
        if codec.applicable():
            return codec
    raise TypeError(f"values of type '{type_}' cannot be serialized")


__all__ = [
    "Codec",
    "codec_for",
    "find_codec",
    "ArrayCodec",
    "DataclassCodec",
    "EnumCodec",
    "MappingCodec",
    "ModelCodec",
    "OptionalCodec",
    "SequenceCodec",
    "SimpleCodec",
    "UnionCodec",
]
