"""Run manifests and content-addressed caching for pipeline commands.

Every command writes one manifest next to its outputs recording the resolved
configuration, inputs, seeds, and timing. The extraction cache is keyed by a
content hash of the input file plus the extraction settings, so weight sweeps
reuse extractions while depth changes invalidate them.
"""

import hashlib
import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

from astsearch import __version__
from astsearch.errors import CacheConsistencyError

CACHE_ENV = "ASTSEARCH_CACHE_DIR"
THREADS_ENV = "ASTSEARCH_THREADS"


@dataclass
class RunManifest:
    command: str
    config: dict
    inputs: dict[str, str] = field(default_factory=dict)
    outputs: list[str] = field(default_factory=list)
    seeds: dict[str, int] = field(default_factory=dict)
    tool_version: str = __version__
    started_at: str = ""
    duration_s: float = 0.0
    _t0: float = field(default=0.0, repr=False)

    def __post_init__(self):
        self._t0 = time.monotonic()
        self.started_at = time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime())

    def add_input(self, label: str, path: str | Path) -> None:
        self.inputs[label] = str(path)

    def add_output(self, path: str | Path) -> None:
        self.outputs.append(str(path))

    def write(self, directory: str | Path) -> Path:
        self.duration_s = round(time.monotonic() - self._t0, 3)
        path = Path(directory) / "manifest.json"
        payload = {k: v for k, v in self.__dict__.items() if not k.startswith("_")}
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(payload, f, indent=2, sort_keys=True)
            f.write("\n")
        return path


def file_sha256(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def cache_key(*parts: str) -> str:
    return hashlib.sha256("\x1f".join(parts).encode("utf-8")).hexdigest()[:24]


def cache_dir() -> Path:
    root = os.environ.get(CACHE_ENV)
    if root:
        return Path(root)
    return Path.home() / ".cache" / "astsearch"


def thread_count() -> int | None:
    raw = os.environ.get(THREADS_ENV)
    return int(raw) if raw else None


class ExtractionCache:
    """Content-addressed store of extraction outputs."""

    def __init__(self, root: Path | None = None):
        self.root = root or cache_dir()

    def entry(self, key: str) -> Path:
        return self.root / f"extract_{key}"

    def lookup(self, key: str) -> Path | None:
        path = self.entry(key)
        marker = path / "cache_key"
        if not marker.exists():
            return None
        stored = marker.read_text(encoding="utf-8").strip()
        if stored != key:
            raise CacheConsistencyError(
                f"cache entry {path} records key {stored!r}, expected {key!r}")
        return path

    def store(self, key: str) -> Path:
        path = self.entry(key)
        path.mkdir(parents=True, exist_ok=True)
        (path / "cache_key").write_text(key + "\n", encoding="utf-8")
        return path
