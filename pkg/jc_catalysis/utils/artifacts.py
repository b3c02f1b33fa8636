import csv
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Sequence

from .. import __spec_version__, __version__
from ..models.run_config import RunConfig
from .config import config_lines
from .errors import IoError

logger = logging.getLogger(__name__)

METADATA_FILE = "run.env"


def format_value(value: Any) -> str:
    """17 significant digits for numbers, true/false for flags, empty for missing."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int,)):
        return str(value)
    return format(float(value), ".17g")


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> int:
    count = 0
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([format_value(value) for value in row])
                count += 1
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    logger.info("wrote %s (%d rows)", path, count)
    return count


def write_metadata(
    output_dir: Path, config: RunConfig, resolved: Optional[Dict[str, Any]] = None
) -> Path:
    """
    run.env: the full config (re-runnable as is) plus resolved defaults as comments.
    """
    notes = {
        "code_version": __version__,
        "spec_version": __spec_version__,
        "log_base": "natural",
        "bloch_y": "2*Im(r)",
        "fidelity": "squared",
    }
    notes.update(resolved or {})
    lines = [f"# {key}: {value}" for key, value in notes.items()]
    lines += config_lines(config)

    path = output_dir / METADATA_FILE
    try:
        output_dir.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    return path
