from enum import Enum
from typing import Any

from .codec import Codec


class EnumCodec(Codec):
    """Enum members are stored by name."""

    def applicable(self) -> bool:
        return isinstance(self.type, type) and issubclass(self.type, Enum)

    def encode(self, value: Any) -> Any:
        return value.name

    def decode(self, raw: Any) -> Any:
        try:
            return self.type[raw]
        except KeyError:
            raise ValueError(f"'{raw}' is not a member of the enum '{self.type.__name__}'") from None
