from abc import ABC, abstractmethod
from typing import Any


class Codec(ABC):
    """Converts values of one type to JSON-compatible values and back."""

    def __init__(self, type_: Any):
        """
        :param type_: the exact (resolved) type of the values this codec handles
        """
        self.type = type_

    @abstractmethod
    def applicable(self) -> bool:
        ...

    @abstractmethod
    def encode(self, value: Any) -> Any:
        ...

    @abstractmethod
    def decode(self, raw: Any) -> Any:
        ...


def codec_for(type_: Any) -> Codec:
    from . import find_codec

    return find_codec(type_)
