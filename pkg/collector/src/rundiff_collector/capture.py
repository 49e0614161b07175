"""Depth-bounded capture of live Python objects into wire-format value nodes.

A captured node is a plain dict with the wire keys kind/name/type/value/
fields/arrayElements. Numbers, booleans and strings are primitive leaves;
sequences become arrayElements named by decimal index; mappings and objects
become fields sorted by name. None has nothing inside to observe and is
emitted as a childless node typed NoneType (the wire cannot distinguish a
null payload from a depth cut). Capture is total: attribute access failures
become "<unreadable>" leaves, and revisiting an object already on the current
path stops the recursion, so arbitrary object graphs terminate.
"""

from __future__ import annotations

from dataclasses import dataclass

KIND_LOCAL = "LOCAL_VARIABLE"
KIND_FIELD = "FIELD"
KIND_ELEMENT = "ARRAY_ELEMENT"
KIND_RETURN = "RETURN"

RETURN_NAME = "<return>"
UNREADABLE = "<unreadable>"


@dataclass(frozen=True)
class CaptureConfig:
    depth: int = 1
    max_array_elements: int = 256
    max_string_length: int = 4096

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("depth must be >= 0")
        if self.max_array_elements <= 0 or self.max_string_length <= 0:
            raise ValueError("capture caps must be positive")


def _node(kind: str, name: str, type_name: str, value=None, fields=None, elements=None) -> dict:
    return {
        "kind": kind,
        "name": name,
        "type": type_name,
        "value": value,
        "fields": fields,
        "arrayElements": elements,
    }


def _is_dunder(name: str) -> bool:
    return name.startswith("__") and name.endswith("__")


def _field_names(obj: object) -> list[str]:
    names: set[str] = set()
    if hasattr(obj, "__dict__"):
        names.update(vars(obj))
    for klass in type(obj).__mro__:
        names.update(getattr(klass, "__slots__", ()) or ())
    return sorted(name for name in names if isinstance(name, str) and not _is_dunder(name))


def capture_value(
    obj: object,
    name: str,
    kind: str,
    depth_remaining: int,
    cfg: CaptureConfig,
    _on_path: frozenset[int] = frozenset(),
) -> dict:
    """Capture one value to at most ``depth_remaining`` dereference steps."""
    if isinstance(obj, bool):
        return _node(kind, name, "bool", value=obj)
    if isinstance(obj, (int, float)):
        return _node(kind, name, type(obj).__name__, value=obj)
    if isinstance(obj, str):
        return _node(kind, name, "str", value=obj[: cfg.max_string_length])
    if obj is None:
        return _node(kind, name, "NoneType")

    if depth_remaining <= 0 or id(obj) in _on_path:
        return _node(kind, name, type(obj).__name__)
    on_path = _on_path | {id(obj)}

    if isinstance(obj, (list, tuple, bytes, bytearray, set, frozenset)):
        items = sorted(obj, key=repr) if isinstance(obj, (set, frozenset)) else list(obj)
        elements = [
            capture_value(item, str(i), KIND_ELEMENT, depth_remaining - 1, cfg, on_path)
            for i, item in enumerate(items[: cfg.max_array_elements])
        ]
        return _node(kind, name, type(obj).__name__, elements=elements)

    if isinstance(obj, dict):
        keys = sorted(obj, key=str)
        fields = [
            capture_value(obj[key], str(key), KIND_FIELD, depth_remaining - 1, cfg, on_path)
            for key in keys[: cfg.max_array_elements]
            if not _is_dunder(str(key))
        ]
        return _node(kind, name, type(obj).__name__, fields=fields)

    fields = []
    for field_name in _field_names(obj)[: cfg.max_array_elements]:
        try:
            attr = getattr(obj, field_name)
        except Exception:
            fields.append(_node(KIND_FIELD, field_name, "?", value=UNREADABLE))
            continue
        fields.append(capture_value(attr, field_name, KIND_FIELD, depth_remaining - 1, cfg, on_path))
    return _node(kind, name, type(obj).__name__, fields=fields)
