"""The ``name:key=value,key=value`` micro-syntax used for algorithm and hyperparameter flags.

Values arrive as strings and are coerced to the field types of the target dataclass.
"""

from dataclasses import replace
from enum import Enum
from typing import Any, Callable, Dict, Mapping, Tuple, TypeVar, get_args

from .errors import UsageError
from .serialization.fieldmeta import FieldMeta, dataclass_fields, is_union_type

T = TypeVar("T")

# text parsers for types that are not plain scalars or enums
PARSERS: Dict[Any, Callable[[str], Any]] = {}

TRUE_WORDS = frozenset({"true", "yes", "1", "on"})
FALSE_WORDS = frozenset({"false", "no", "0", "off"})


def register_parser(type_: Any) -> Callable[[Callable[[str], Any]], Callable[[str], Any]]:
    def decorator(func: Callable[[str], Any]) -> Callable[[str], Any]:
        PARSERS[type_] = func
        return func

    return decorator


def parse_micro(text: str) -> Tuple[str, Dict[str, str]]:
    """Splits ``name:key=value,...`` into the name and the raw key/value strings.

    >>> parse_micro("knn:k=5,metric=minkowski:g=3")
    ('knn', {'k': '5', 'metric': 'minkowski:g=3'})
    """
    name, _, rest = text.strip().partition(":")
    name = name.strip()
    if not name:
        raise UsageError(f"expected 'name:key=value,...', got '{text}'")
    params: Dict[str, str] = {}
    for item in rest.split(","):
        if not item.strip():
            continue
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or not key:
            raise UsageError(f"expected 'key=value' in '{text}', got '{item.strip()}'")
        if key in params:
            raise UsageError(f"the key '{key}' is given twice in '{text}'")
        params[key] = value.strip()
    return name, params


def _parse_enum(enum_cls: Any, value: str) -> Any:
    wanted = value.strip().lower().replace("_", "-")
    for member in enum_cls:
        if str(member.value).lower() == wanted or member.name.lower().replace("_", "-") == wanted:
            return member
    raise ValueError(value)


def _parse_scalar(type_: Any, value: str) -> Any:
    if type_ in PARSERS:
        return PARSERS[type_](value)
    if type_ is bool:
        word = value.strip().lower()
        if word in TRUE_WORDS:
            return True
        if word in FALSE_WORDS:
            return False
        raise ValueError(value)
    if type_ is int:
        return int(value)
    if type_ is float:
        return float(value)
    if type_ is str:
        return value
    if isinstance(type_, type) and issubclass(type_, Enum):
        return _parse_enum(type_, value)
    if is_union_type(type_):
        for member in get_args(type_):
            try:
                return _parse_scalar(member, value)
            except (ValueError, UsageError):
                continue
    raise ValueError(value)


def coerce(value: Any, field: FieldMeta, owner: str) -> Any:
    """Converts a flag value to the type of ``field``, non-string values are passed through."""
    if not isinstance(value, str):
        if field.type is int and isinstance(value, float) and value.is_integer():
            return int(value)
        return value
    if field.allow_none and value.strip().lower() == "none":
        return None
    try:
        return _parse_scalar(field.type, value)
    except (ValueError, UsageError):
        raise UsageError(f"{field!r} of '{owner}' cannot be set to '{value}'") from None


def coerced_kwargs(cls: Any, params: Mapping[str, Any], owner: str) -> Dict[str, Any]:
    known = {name: field for name, field in dataclass_fields(cls).items() if field.init}
    unknown = sorted(set(params) - set(known))
    if unknown:
        raise UsageError(f"unknown keys {unknown} for '{owner}', expected some of {sorted(known)}")
    return {key: coerce(value, known[key], owner) for key, value in params.items()}


def build(cls: Callable[..., T], params: Mapping[str, Any], owner: str) -> T:
    """Instantiates the dataclass ``cls`` from (string) parameters."""
    return cls(**coerced_kwargs(cls, params, owner))


def with_params(instance: T, params: Mapping[str, Any], owner: str) -> T:
    """Copy of the dataclass ``instance`` with some fields replaced by (string) parameters."""
    return replace(instance, **coerced_kwargs(type(instance), params, owner))  # type: ignore[type-var]
