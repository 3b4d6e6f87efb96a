from typing import Callable, Dict, List, Type, TypeVar

from ..errors import DataError, TabulaError

T = TypeVar("T")


class Registry:
    """Two-way mapping between registered names and classes."""

    def __init__(self, kind: str, error: Type[TabulaError] = DataError) -> None:
        self.kind = kind
        self.error = error
        self._classes: Dict[str, type] = {}
        self._names: Dict[type, str] = {}

    def register(self, name: str) -> Callable[[Type[T]], Type[T]]:
        def decorator(cls: Type[T]) -> Type[T]:
            if name in self._classes and self._classes[name] is not cls:
                raise ValueError(f"the {self.kind} name '{name}' is already used by '{self._classes[name].__name__}'")
            self._classes[name] = cls
            self._names[cls] = name
            return cls

        return decorator

    def name_of(self, cls: type) -> str:
        try:
            return self._names[cls]
        except KeyError:
            raise ValueError(f"'{cls.__name__}' is not a registered {self.kind}") from None

    def get(self, name: str) -> type:
        try:
            return self._classes[name]
        except KeyError:
            raise self.error(f"unknown {self.kind} type '{name}', known: {self.names()}") from None

    def names(self) -> List[str]:
        return sorted(self._classes)

    def has_subclasses(self, base: type) -> bool:
        return any(issubclass(cls, base) and cls is not base for cls in self._classes.values())


MODELS = Registry("model")


def register_model(name: str) -> Callable[[Type[T]], Type[T]]:
    """Makes a dataclass storable with :func:`tabula.serialization.dump_model` under the given name."""
    return MODELS.register(name)
