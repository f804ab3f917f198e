"""On-disk cache of free resolutions.

One JSON file per resolution, named by the sha256 of a canonical
serialization of (ring fingerprint, module fingerprint, length, generator
mode).  Writes go to a temporary file in the same directory followed by an
atomic rename, so readers never see partial files; unreadable or mismatched
entries are deleted and recomputed.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

SCHEMA = "excision-lab/resolution/v1"


class ResolutionCache:
    def __init__(self, directory):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0
        self.discarded = 0

    @staticmethod
    def key(ring, module, length: int, mode: str = "all") -> str:
        data = json.dumps(
            {"ring": ring.fingerprint(), "module": module.fingerprint(), "length": length, "mode": mode},
            sort_keys=True,
        )
        return hashlib.sha256(data.encode()).hexdigest()

    def path(self, key: str) -> Path:
        return self.dir / f"{key}.json"

    def load(self, ring, module, length: int, mode: str = "all"):
        k = self.key(ring, module, length, mode)
        p = self.path(k)
        if not p.exists():
            self.misses += 1
            return None
        try:
            blob = json.loads(p.read_text())
            if blob.get("schema") != SCHEMA or blob.get("key") != k:
                raise ValueError("mismatched entry")
            data = blob["data"]
            if len(data["ranks"]) != length + 1:
                raise ValueError("wrong length")
        except (ValueError, KeyError, TypeError, OSError):
            self.discarded += 1
            try:
                p.unlink()
            except OSError:
                pass
            return None
        self.hits += 1
        return data

    def store(self, ring, module, length: int, mode: str, data: dict):
        k = self.key(ring, module, length, mode)
        blob = json.dumps({"schema": SCHEMA, "key": k, "data": data}, sort_keys=True)
        fd, tmp = tempfile.mkstemp(dir=self.dir, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(blob)
            os.replace(tmp, self.path(k))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
