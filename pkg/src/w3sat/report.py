"""CSV and JSON report writers plus the run record attached to CLI output.

Report files hold only values that are a function of the inputs and seeds,
so reruns are byte-identical. Wall-clock measurements go to a separate
``*.timing.csv`` file next to the main report.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__


def csv_text(fields, rows) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(fields), lineterminator="\r\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def write_csv(path, fields, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        fh.write(csv_text(fields, rows))
    return path


def timing_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.stem + ".timing.csv")


def json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_json(path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json_text(obj), encoding="utf-8")
    return path


def digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


@dataclass
class RunRecord:
    """What was run, on which input bytes, and what came out."""

    command: str
    options: dict
    input_digest: str | None
    payload: dict
    version: str = __version__
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    def as_dict(self):
        return asdict(self)

    def write(self, path) -> Path:
        return write_json(path, self.as_dict())
