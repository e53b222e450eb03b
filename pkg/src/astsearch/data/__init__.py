"""Bundled desk-scale corpora."""

from importlib import resources
from pathlib import Path


def desk_corpus_path(language: str = "java") -> Path:
    """Filesystem path of the bundled desk corpus for a language."""
    name = f"desk_corpus_{language}.jsonl"
    with resources.as_file(resources.files(__package__) / name) as p:
        return Path(p)
