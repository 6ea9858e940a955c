"""Persistent store of solved configurations keyed by (N, precision).

Entries are the canonical stable JSON documents, so cache hits return
byte-identical text.  Writes go to a temporary file in the cache
directory followed by an atomic rename, so concurrent sweeps never see a
torn entry.  Entries re-validate their structural identities on load.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from .errors import SchemaError
from .serialize import (
    canonical_json,
    check_loaded_configuration,
    configuration_to_document,
    document_to_configuration,
)
from .solver import Configuration

ENV_CACHE_DIR = "MIWORLDS_CACHE_DIR"


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_CACHE_DIR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "miworlds"


class SolutionCache:
    def __init__(self, directory: str | Path | None = None):
        self.directory = Path(directory) if directory else default_cache_dir()

    def path(self, n_worlds: int, precision_digits: int) -> Path:
        return self.directory / f"config_N{n_worlds}_p{precision_digits}.json"

    def load(self, n_worlds: int, precision_digits: int):
        """(document_text, Configuration) for a cache hit, else None.

        A hit is self-validated (schema + structural identities) before
        being returned; validation errors propagate.
        """
        path = self.path(n_worlds, precision_digits)
        if not path.exists():
            return None
        text = path.read_text()
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"cache entry {path} is not valid JSON: {exc}")
        cfg = document_to_configuration(doc)
        check_loaded_configuration(cfg)
        return text, cfg

    def store(self, cfg: Configuration) -> str:
        """Serialize cfg, write it atomically, return the document text."""
        self.directory.mkdir(parents=True, exist_ok=True)
        text = canonical_json(configuration_to_document(cfg))
        fd, tmp = tempfile.mkstemp(
            dir=self.directory, prefix=".tmp_", suffix=".json"
        )
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(text)
            os.replace(tmp, self.path(cfg.N, cfg.precision_digits))
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise
        return text
