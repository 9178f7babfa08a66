"""
Dotted-path ``--set key=value`` overrides applied to a raw config document.

Values are parsed as JSON literals (numbers, booleans, null, lists,
objects) and fall back to plain strings:

    --set noise.mean=2            → {"noise": {"mean": 2}}
    --set population.capacity.law=power_alpha
    --set simulation.burn_in=null
"""

import copy
import json
from typing import Any, Dict, Iterable, Tuple

from armarket.experiments.schema import ConfigError


def parse_assignment(item: str) -> Tuple[str, Any]:
    """Split ``key=value`` and decode the value."""
    key, sep, text = item.partition("=")
    key = key.strip()
    if not sep or not key:
        raise ConfigError(f"override must look like key=value, got {item!r}")
    try:
        value = json.loads(text)
    except json.JSONDecodeError:
        value = text
    return key, value


def set_path(doc: Dict[str, Any], dotted: str, value: Any) -> None:
    """Assign ``value`` at ``dotted`` inside ``doc``, creating sections as needed."""
    parts = dotted.split(".")
    node = doc
    for depth, part in enumerate(parts[:-1]):
        child = node.setdefault(part, {})
        if not isinstance(child, dict):
            raise ConfigError(
                "cannot descend into a scalar value",
                path=".".join(parts[: depth + 1]),
            )
        node = child
    node[parts[-1]] = value


def apply_overrides(raw: Dict[str, Any], items: Iterable[str]) -> Dict[str, Any]:
    """Copy of ``raw`` with every override applied in order."""
    doc = copy.deepcopy(raw)
    for item in items or ():
        key, value = parse_assignment(item)
        set_path(doc, key, value)
    return doc
