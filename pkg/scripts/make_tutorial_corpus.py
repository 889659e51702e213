#!/usr/bin/env python3
"""Regenerate the bundled tutorial corpus.

The corpus is generated deterministically, so running this script always
reproduces the committed file byte for byte.
"""

from pathlib import Path

from polarscale.corpus import write_corpus
from polarscale.synth import make_tutorial_corpus

OUT = Path(__file__).resolve().parent.parent / "src" / "polarscale" / "data" / "tutorial_corpus.jsonl"


def main() -> None:
    documents = make_tutorial_corpus()
    write_corpus(documents, OUT)
    print(f"wrote {len(documents)} documents to {OUT}")


if __name__ == "__main__":
    main()
