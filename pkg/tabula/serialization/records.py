import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

from pydantic import BaseModel, ConfigDict, ValidationError

from ..errors import DataError
from .codecs import DataclassCodec
from .registry import MODELS

logger = logging.getLogger(__name__)


class ModelRecord(BaseModel):
    """JSON envelope of every stored model."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    type: str
    params: Dict[str, Any]


def _ensure_registered() -> None:
    # registration happens on import of the defining modules
    from .. import clustering, decomposition, estimators, scaling  # noqa: F401


def to_record(model: Any) -> ModelRecord:
    _ensure_registered()
    return ModelRecord(type=MODELS.name_of(type(model)), params=DataclassCodec(type(model)).encode(model))


def from_record(record: ModelRecord) -> Any:
    _ensure_registered()
    cls = MODELS.get(record.type)
    try:
        return DataclassCodec(cls).decode(record.params)
    except (ValueError, TypeError, KeyError) as e:
        raise DataError(f"stored '{record.type}' is malformed: {e}") from e


def to_json(data: Any) -> str:
    """Canonical JSON text: UTF-8, sorted keys."""
    return json.dumps(data, sort_keys=True, ensure_ascii=False)


def dump_model(model: Any) -> str:
    return to_json(to_record(model).model_dump())


def load_model(text: str) -> Any:
    try:
        record = ModelRecord.model_validate(json.loads(text))
    except (json.JSONDecodeError, ValidationError) as e:
        raise DataError(f"not a stored model: {e}") from e
    return from_record(record)


def save_model(model: Any, path: Union[str, Path]) -> None:
    Path(path).write_text(dump_model(model) + "\n", encoding="utf-8")
    logger.info("stored %s in '%s'", type(model).__name__, path)


def read_model(path: Union[str, Path]) -> Any:
    return load_model(Path(path).read_text(encoding="utf-8"))
