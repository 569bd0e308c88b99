"""
Output - CSV tables and JSON reports with fixed numeric formatting
"""

import csv
import json
import logging
import os
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np

from .config import DEFAULT_CONFIG
from .errors import OutputError

logger = logging.getLogger(__name__)


def check_writable(path: Path) -> Path:
    """Fail with OutputError unless path can be created or overwritten"""
    path = Path(path)
    if path.is_dir():
        raise OutputError(f"output path is a directory: {path}")

    parent = path.parent if str(path.parent) else Path('.')
    if not parent.is_dir():
        raise OutputError(f"output directory does not exist: {parent}")
    if path.exists() and not os.access(path, os.W_OK):
        raise OutputError(f"output file is not writable: {path}")
    if not path.exists() and not os.access(parent, os.W_OK):
        raise OutputError(f"output directory is not writable: {parent}")
    return path


def sidecar_path(path: Path) -> Path:
    """Metadata file written next to a table: out.csv -> out.csv.json"""
    path = Path(path)
    return path.with_name(path.name + '.json')


def format_number(value: Any, digits: int = DEFAULT_CONFIG.significant_digits) -> str:
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        text = f"{float(value):.{digits}g}"
        return '0' if text == '-0' else text
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]],
              comments: Optional[List[str]] = None,
              digits: int = DEFAULT_CONFIG.significant_digits):
    """
    Write a CSV table (CRLF line endings, minimal quoting)

    Args:
        path: Destination file
        header: Column names
        rows: Row values, formatted with format_number
        comments: Lines written first, each prefixed with '# '
        digits: Significant digits for floats
    """
    try:
        with open(path, 'w', newline='') as f:
            for line in comments or []:
                f.write(f"# {line}\r\n")
            writer = csv.writer(f, lineterminator='\r\n')
            writer.writerow(header)
            for row in rows:
                writer.writerow([format_number(v, digits) for v in row])
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e}")
    logger.info("Wrote %s", path)


def _jsonable(value: Any, digits: int) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_jsonable(v, digits) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(f"{float(value):.{digits}g}")
    return value


def write_json(path: Path, payload: Dict, digits: int = DEFAULT_CONFIG.significant_digits):
    """JSON with floats rounded to the given significant digits and sorted keys"""
    try:
        Path(path).write_text(json.dumps(_jsonable(payload, digits), indent=2, sort_keys=True) + '\n')
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e}")
    logger.info("Wrote %s", path)


def timestamp_comment() -> str:
    return f"generated {datetime.now().isoformat(timespec='seconds')}"
