"""Accessors for the bundled tutorial data.

The package ships a small self-contained working set: a two-town newsletter
corpus, seed files for two concepts, a dictionary directory with the full
pattern lists, and an example hyperparameter grid. ``python3 -m
polarscale.datasets DEST`` copies everything into DEST for a hands-on run.
"""

from __future__ import annotations

import argparse
import shutil
import sys
from importlib import resources
from pathlib import Path

from .corpus import Document, read_corpus
from .errors import ConfigError

TUTORIAL_CONCEPTS = ("achievement", "health")


def _data_root() -> Path:
    return Path(str(resources.files("polarscale") / "data"))


def tutorial_corpus_path() -> Path:
    return _data_root() / "tutorial_corpus.jsonl"


def tutorial_seeds_path(concept: str) -> Path:
    if concept not in TUTORIAL_CONCEPTS:
        raise ConfigError(f"unknown tutorial concept {concept!r}; choose from {TUTORIAL_CONCEPTS}")
    return _data_root() / f"seeds_{concept}.txt"


def dictionary_dir_path() -> Path:
    return _data_root() / "dictionary"


def example_grid_path() -> Path:
    return _data_root() / "example_grid.txt"


def load_tutorial_corpus() -> list[Document]:
    return read_corpus(tutorial_corpus_path())


def copy_tutorial_files(dest: str | Path) -> list[Path]:
    """Copy the bundled corpus, seeds, dictionaries, and grid into ``dest``."""
    dest = Path(dest)
    dest.mkdir(parents=True, exist_ok=True)
    copied: list[Path] = []
    for src in (tutorial_corpus_path(), example_grid_path(),
                *(tutorial_seeds_path(c) for c in TUTORIAL_CONCEPTS)):
        target = dest / src.name
        shutil.copyfile(src, target)
        copied.append(target)
    dict_dest = dest / "dictionary"
    dict_dest.mkdir(exist_ok=True)
    for src in sorted(dictionary_dir_path().glob("*.txt")):
        target = dict_dest / src.name
        shutil.copyfile(src, target)
        copied.append(target)
    return copied


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="python3 -m polarscale.datasets",
        description="Copy the bundled tutorial data into a directory.",
    )
    parser.add_argument("dest", help="destination directory")
    args = parser.parse_args(argv)
    for path in copy_tutorial_files(args.dest):
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
