"""Word vectors in word2vec text format, phrase pooling, cosine similarity.

A phrase (tag text, sentence, full document) embeds as the arithmetic mean
of its in-vocabulary word vectors; lookups are lowercase.  Fully
out-of-vocabulary phrases embed to the zero vector, and the zero-norm guard
in :func:`cosine` makes them score 0 against everything.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Mapping, Optional, Union

import numpy as np

from .errors import EmbeddingError

Source = Union[str, Path, IO[str]]


@dataclass(frozen=True)
class PhraseEmbedding:
    """Pooled vector for a phrase plus out-of-vocabulary diagnostics."""

    vector: np.ndarray
    oov_count: int
    word_count: int

    @property
    def fully_oov(self) -> bool:
        return self.oov_count == self.word_count


class WordVectors:
    """An immutable word -> vector table of fixed dimensionality."""

    def __init__(self, table: Mapping[str, np.ndarray], dim: int):
        if dim <= 0:
            raise EmbeddingError(f"vector dimension must be positive, got {dim}")
        self._table = {}
        for word, vec in table.items():
            arr = np.asarray(vec, dtype=np.float64)
            if arr.shape != (dim,):
                raise EmbeddingError(
                    f"vector for {word!r} has shape {arr.shape}, expected ({dim},)"
                )
            self._table[word.lower()] = arr
        self._dim = dim

    @property
    def dim(self) -> int:
        return self._dim

    def __len__(self) -> int:
        return len(self._table)

    def __contains__(self, word: str) -> bool:
        return word.lower() in self._table

    def get(self, word: str) -> Optional[np.ndarray]:
        return self._table.get(word.lower())

    def phrase_vector(self, text: str) -> np.ndarray:
        return embed_phrase(text, self).vector

    def weighted_mean(self, weighted_words: Iterable[tuple[str, float]]) -> np.ndarray:
        """Weight-normalized mean over in-vocabulary words; OOV words are skipped."""
        total = np.zeros(self._dim)
        weight_sum = 0.0
        for word, weight in weighted_words:
            vec = self.get(word)
            if vec is None:
                continue
            total += weight * vec
            weight_sum += weight
        if weight_sum == 0.0:
            return np.zeros(self._dim)
        return total / weight_sum


def embed_phrase(text: str, store: WordVectors) -> PhraseEmbedding:
    """Mean of in-vocabulary word vectors over whitespace-split, lowercased words."""
    words = text.split()
    if not words:
        raise EmbeddingError("cannot embed empty text")
    vectors = [v for v in (store.get(w) for w in words) if v is not None]
    oov = len(words) - len(vectors)
    if not vectors:
        return PhraseEmbedding(np.zeros(store.dim), oov, len(words))
    return PhraseEmbedding(np.mean(vectors, axis=0), oov, len(words))


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity in [-1, 1]; 0.0 when either vector has zero norm."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise EmbeddingError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


def load_word_vectors(source: Source) -> WordVectors:
    """Read word2vec text format; a leading "count dim" header line is optional."""
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as handle:
            return _read_vectors(handle)
    return _read_vectors(source)


def loads_word_vectors(text: str) -> WordVectors:
    return _read_vectors(io.StringIO(text))


def _read_vectors(stream: IO[str]) -> WordVectors:
    table: dict[str, np.ndarray] = {}
    dim: Optional[int] = None
    declared: Optional[tuple[int, int]] = None
    for line_number, raw in enumerate(stream, start=1):
        fields = raw.split()
        if not fields:
            continue
        if line_number == 1 and len(fields) == 2 and _all_ints(fields):
            declared = (int(fields[0]), int(fields[1]))
            continue
        word, values = fields[0], fields[1:]
        if not values:
            raise EmbeddingError(f"line {line_number}: no vector components for {word!r}")
        if dim is None:
            dim = len(values)
        elif len(values) != dim:
            raise EmbeddingError(
                f"line {line_number}: expected {dim} components, got {len(values)}"
            )
        try:
            table[word.lower()] = np.array([float(v) for v in values], dtype=np.float64)
        except ValueError as exc:
            raise EmbeddingError(f"line {line_number}: non-numeric component ({exc})") from exc
    if dim is None:
        raise EmbeddingError("no vectors found")
    if declared is not None and declared[1] != dim:
        raise EmbeddingError(f"header declares dimension {declared[1]} but rows have {dim}")
    return WordVectors(table, dim)


def _all_ints(fields: list[str]) -> bool:
    try:
        for f in fields:
            int(f)
    except ValueError:
        return False
    return True
