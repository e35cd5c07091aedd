"""
Output Writers
Deterministic CSV and JSON emission for trajectories, reports and sweeps
"""

import csv
import json
from pathlib import Path
from typing import Any, Iterable, Sequence

from ..core.errors import OutputError
from ..core.logger import logger


def ensure_dir(path) -> Path:
    path = Path(path)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise OutputError(f"cannot create output directory {path}: {e}")
    return path


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """Write a CSV file with a header row

    Floats are written with repr, so identical runs give identical bytes.
    """
    path = Path(path)
    try:
        with open(path, 'w', newline='') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(header)
            count = 0
            for row in rows:
                writer.writerow([repr(x) if isinstance(x, float) else x for x in row])
                count += 1
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e}")
    logger.info(f"Wrote {count} rows to {path}")
    return path


def write_json(path, payload: Any) -> Path:
    """Write a JSON document with sorted keys"""
    path = Path(path)
    try:
        with open(path, 'w') as f:
            json.dump(payload, f, indent=2, sort_keys=True, allow_nan=True)
            f.write('\n')
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e}")
    except (TypeError, ValueError) as e:
        raise OutputError(f"report for {path} is not serializable: {e}")
    logger.info(f"Wrote report {path}")
    return path
