"""Deterministic JSON/CSV writers and model hashing for auditable reports."""

from __future__ import annotations

import csv
import hashlib
import json
import os
from datetime import datetime, timezone


def jsonable(obj):
    """Recursively convert numpy scalars/arrays so json.dumps is deterministic."""
    import numpy as np

    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def dumps_canonical(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


def model_hash(model_dict) -> str:
    blob = json.dumps(jsonable(model_dict), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


def _atomic_write(path, data: str):
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(data)
    os.replace(tmp, path)


def write_json(obj, path, no_timestamp=False):
    payload = dict(obj)
    if not no_timestamp:
        payload["generated_at"] = datetime.now(timezone.utc).isoformat()
    _atomic_write(path, dumps_canonical(payload))


def write_csv(header, rows, path):
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    os.replace(tmp, path)


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v
