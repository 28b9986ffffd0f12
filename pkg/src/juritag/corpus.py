"""Corpus ingestion: one CoNLL-U file per judgement, plus constituency trees.

Layout: ``<stem>.conllu`` holds the tokens and dependencies; constituency
trees come either from inline ``# constituency = ...`` comments or from a
``<stem>.trees`` sidecar with one bracketed tree per non-blank line, aligned
with sentence order.  The document id is the file stem; ``# title/court/year``
comments on the first sentence become document metadata.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import NamedTuple, Optional, Union

from .errors import DocumentError, JuritagError
from .parse_model import (
    Document,
    ParsedSentence,
    read_bracketed,
    read_conllu,
    unwrap_root,
)

logger = logging.getLogger(__name__)

METADATA_KEYS = ("title", "court", "year")


class CorpusScan(NamedTuple):
    """Result of scanning a directory: loaded documents and per-file errors."""

    documents: list[Document]
    errors: list[tuple[str, str]]

    @property
    def sentence_count(self) -> int:
        return sum(len(d.sentences) for d in self.documents)


def load_document(conllu_path: Union[str, Path], trees_path: Optional[Union[str, Path]] = None) -> Document:
    """Load one judgement; ``trees_path`` defaults to the ``.trees`` sidecar."""
    path = Path(conllu_path)
    with open(path, "r", encoding="utf-8") as handle:
        fragments = read_conllu(handle)
    if not fragments:
        raise DocumentError(f"{path.name}: no sentences")

    if trees_path is None:
        candidate = path.with_suffix(".trees")
        trees_path = candidate if candidate.exists() else None
    tree_lines: Optional[list[str]] = None
    if trees_path is not None:
        with open(trees_path, "r", encoding="utf-8") as handle:
            tree_lines = [line.strip() for line in handle if line.strip()]
        if len(tree_lines) != len(fragments):
            raise DocumentError(
                f"{Path(trees_path).name}: {len(tree_lines)} trees for "
                f"{len(fragments)} sentences"
            )

    sentences = []
    for position, fragment in enumerate(fragments):
        tree_text = fragment.constituency
        if tree_text is None and tree_lines is not None:
            tree_text = tree_lines[position]
        tree = unwrap_root(read_bracketed(tree_text)) if tree_text else None
        sentences.append(
            ParsedSentence(
                tokens=fragment.tokens,
                deps=fragment.deps,
                tree=tree,
                text=fragment.joined_text(),
            )
        )
    metadata = {
        key: fragments[0].comments[key]
        for key in METADATA_KEYS
        if key in fragments[0].comments
    }
    return Document(id=path.stem, sentences=tuple(sentences), metadata=metadata)


def load_corpus(directory: Union[str, Path]) -> list[Document]:
    """Load every ``*.conllu`` document in the directory; any error aborts."""
    scan = scan_corpus(directory, strict=True)
    return scan.documents


def scan_corpus(directory: Union[str, Path], strict: bool = False) -> CorpusScan:
    """Load all documents, collecting per-file errors instead of aborting.

    With ``strict=True`` the first bad file raises; otherwise it is recorded
    in ``errors`` as (filename, message) and skipped with a warning.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise DocumentError(f"corpus directory {directory} does not exist")
    documents: list[Document] = []
    errors: list[tuple[str, str]] = []
    for path in sorted(directory.glob("*.conllu")):
        try:
            documents.append(load_document(path))
        except JuritagError as exc:
            if strict:
                raise DocumentError(f"{path.name}: {exc}") from exc
            logger.warning("skipping %s: %s", path.name, exc)
            errors.append((path.name, str(exc)))
    return CorpusScan(documents=documents, errors=errors)
