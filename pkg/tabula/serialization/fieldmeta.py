import sys
from dataclasses import MISSING, dataclass, fields, is_dataclass
from dataclasses import Field as DataclassField
from functools import lru_cache
from typing import Any, Dict, Tuple, Union, cast, get_args, get_origin, get_type_hints


def is_union_type(type_: Any) -> bool:
    origin = get_origin(type_)
    if sys.version_info < (3, 10):
        return origin is Union
    else:
        from types import UnionType

        return origin in (Union, UnionType)


def is_optional(type_: Any) -> bool:
    return is_union_type(type_) and type(None) in get_args(type_)


def strip_optional(type_: Any) -> Tuple[Any, bool]:
    """``Optional[X]`` becomes ``(X, True)``, every other type ``(type_, False)``."""
    if not is_optional(type_):
        return type_, False
    remaining = tuple(t for t in get_args(type_) if t is not type(None))
    if len(remaining) == 1:
        return remaining[0], True
    return Union[remaining], True  # type: ignore[return-value]


@dataclass(frozen=True)
class FieldMeta:
    """Meta information about one field of a dataclass: its name, its exact type and whether it can be left out.

    For optional fields the Optional quantifier is removed, and `allow_none` is set accordingly.
    - int           => type = int, allow_none = False
    - Optional[int] => type = int, allow_none = True
    """

    name: str
    type: Any
    allow_none: bool
    required: bool
    init: bool = True

    @property
    def type_string(self) -> str:
        try:
            type_name = cast(str, self.type.__name__)
        except Exception:
            type_name = str(self.type)
        if self.allow_none:
            type_name = f"Optional[{type_name}]"
        return type_name

    def __repr__(self) -> str:
        return f"'{self.name}' of type '{self.type_string}'"

    @classmethod
    def from_dataclass(cls, field: DataclassField, real_type: Any) -> "FieldMeta":
        has_default = field.default is not MISSING or field.default_factory is not MISSING
        type_, allow_none = strip_optional(real_type)
        return cls(name=field.name, type=type_, allow_none=allow_none, required=not has_default, init=field.init)


@lru_cache(maxsize=None)
def dataclass_fields(clazz: Any) -> Dict[str, FieldMeta]:
    """Field metas of a dataclass in declaration order, with string annotations resolved."""
    if not is_dataclass(clazz):
        raise TypeError(f"'{getattr(clazz, '__name__', clazz)}' is not a dataclass")
    real_types = get_type_hints(clazz)
    return {field.name: FieldMeta.from_dataclass(field, real_type=real_types[field.name]) for field in fields(clazz)}
