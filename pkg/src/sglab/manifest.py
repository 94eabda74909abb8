"""Run manifests: a JSON record of what a command did, written next to
its artifacts so any run can be audited or repeated later.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass
from pathlib import Path


@dataclass
class RunManifest:
    command: str
    config: dict
    input_digests: dict
    seed: int | None
    artifacts: list
    duration_seconds: float


def sha256_file(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def write_manifest(manifest: RunManifest, path: str | Path) -> Path:
    path = Path(path)
    payload = asdict(manifest)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")
    return path
