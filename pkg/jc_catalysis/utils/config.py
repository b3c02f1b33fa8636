"""
Run configurations: flat `section.key=value` files read with python-dotenv and
validated by the RunConfig model.
"""
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

from dotenv import dotenv_values
from pydantic import ValidationError

from ..models.run_config import RunConfig
from .errors import ConfigInvalid, IoError

logger = logging.getLogger(__name__)


def nest(flat: Dict[str, Optional[str]]) -> Dict[str, Any]:
    """{'params.omega': '1'} -> {'params': {'omega': '1'}}."""
    nested: Dict[str, Any] = {}
    for key, value in flat.items():
        if value is None:
            raise ConfigInvalid(f"key {key!r} has no value")
        *sections, leaf = key.strip().split(".")
        node = nested
        for section in sections:
            child = node.setdefault(section, {})
            if not isinstance(child, dict):
                raise ConfigInvalid(f"key {key!r} conflicts with scalar {section!r}")
            node = child
        if isinstance(node.get(leaf), dict):
            raise ConfigInvalid(f"key {key!r} conflicts with section {leaf!r}")
        node[leaf] = value
    return nested


def parse_config(flat: Dict[str, Optional[str]]) -> RunConfig:
    try:
        return RunConfig.model_validate(nest(flat))
    except ValidationError as exc:
        raise ConfigInvalid(str(exc)) from exc


def read_config(path: Union[str, Path]) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise IoError(f"config file {path} not found")
    try:
        flat = dotenv_values(path, interpolate=False)
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    logger.debug("read %d keys from %s", len(flat), path)
    return parse_config(flat)


def _format(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, complex):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ",".join(_format(item) for item in value)
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def _flatten(prefix: str, data: Dict[str, Any]) -> Iterable[str]:
    for key, value in data.items():
        name = f"{prefix}{key}"
        if value is None:
            continue
        if isinstance(value, dict):
            yield from _flatten(f"{name}.", value)
        else:
            yield f"{name}={_format(value)}"


def config_lines(config: RunConfig) -> List[str]:
    """The config as dotted key=value lines that parse back to an equal RunConfig."""
    data = config.model_dump(exclude_none=True, exclude={"output_dir"})
    return list(_flatten("", data))
