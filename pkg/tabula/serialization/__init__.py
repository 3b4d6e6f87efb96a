from .records import ModelRecord, dump_model, from_record, load_model, read_model, save_model, to_json, to_record
from .registry import MODELS, Registry, register_model

__all__ = [
    "MODELS",
    "ModelRecord",
    "Registry",
    "dump_model",
    "from_record",
    "load_model",
    "read_model",
    "register_model",
    "save_model",
    "to_json",
    "to_record",
]
