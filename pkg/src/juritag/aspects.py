"""Aspect definitions and aspect-based sentence selection.

An aspect names a facet of a judgement (liability, quantum, ...) and carries
one or more weighted word-list topics.  A sentence's score against an aspect
is the max over topics of cosine(sentence vector, topic vector), where the
topic vector is the weight-normalized mean of its in-vocabulary word vectors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import IO, NamedTuple, Optional, Sequence, Union

import numpy as np

from .embeddings import WordVectors, cosine
from .errors import AspectConfigError
from .parse_model import Document

Source = Union[str, Path, IO[str]]


@dataclass(frozen=True)
class Topic:
    words: tuple[str, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        if not self.words:
            raise AspectConfigError("topic has no words")
        if len(self.weights) != len(self.words):
            raise AspectConfigError(
                f"topic has {len(self.words)} words but {len(self.weights)} weights"
            )
        for word in self.words:
            if not word or word != word.strip():
                raise AspectConfigError(f"bad topic word: {word!r}")
        for weight in self.weights:
            if not np.isfinite(weight) or weight <= 0:
                raise AspectConfigError(f"topic weights must be positive, got {weight}")


@dataclass(frozen=True)
class Aspect:
    name: str
    topics: tuple[Topic, ...]

    def __post_init__(self):
        if not self.name:
            raise AspectConfigError("aspect needs a name")
        if not self.topics:
            raise AspectConfigError(f"aspect {self.name!r} has no topics")


class AspectSentence(NamedTuple):
    """One selected sentence: position in the input, label, score, text."""

    index: int
    aspect: str
    score: float
    text: str


def load_aspects(source: Source) -> list[Aspect]:
    """Read aspect definitions from JSON: {"aspects": [{"name", "topics"}]}."""
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as handle:
            text = handle.read()
    else:
        text = source.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AspectConfigError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict) or "aspects" not in data:
        raise AspectConfigError('top level must be an object with an "aspects" list')
    raw_aspects = data["aspects"]
    if not isinstance(raw_aspects, list):
        raise AspectConfigError('"aspects" must be a list')
    aspects = []
    seen = set()
    for position, raw in enumerate(raw_aspects):
        aspect = _parse_aspect(raw, position)
        if aspect.name in seen:
            raise AspectConfigError(f"duplicate aspect name {aspect.name!r}")
        seen.add(aspect.name)
        aspects.append(aspect)
    return aspects


def _parse_aspect(raw: object, position: int) -> Aspect:
    if not isinstance(raw, dict):
        raise AspectConfigError(f"aspect #{position} is not an object")
    name = raw.get("name")
    if not isinstance(name, str):
        raise AspectConfigError(f"aspect #{position} needs a string name")
    raw_topics = raw.get("topics")
    if not isinstance(raw_topics, list) or not raw_topics:
        raise AspectConfigError(f"aspect {name!r} needs a non-empty topics list")
    topics = []
    for t_pos, raw_topic in enumerate(raw_topics):
        if not isinstance(raw_topic, dict) or "words" not in raw_topic:
            raise AspectConfigError(f"aspect {name!r} topic #{t_pos} needs a words list")
        words = raw_topic["words"]
        if not isinstance(words, list) or not all(isinstance(w, str) for w in words):
            raise AspectConfigError(f"aspect {name!r} topic #{t_pos}: words must be strings")
        weights = raw_topic.get("weights", [1.0] * len(words))
        if not isinstance(weights, list) or not all(
            isinstance(w, (int, float)) and not isinstance(w, bool) for w in weights
        ):
            raise AspectConfigError(f"aspect {name!r} topic #{t_pos}: weights must be numbers")
        topics.append(Topic(words=tuple(words), weights=tuple(float(w) for w in weights)))
    return Aspect(name=name, topics=tuple(topics))


def topic_vector(topic: Topic, vectors: WordVectors) -> np.ndarray:
    return vectors.weighted_mean(zip(topic.words, topic.weights))


def score_against_aspect(
    sentence_vector: np.ndarray, aspect: Aspect, vectors: WordVectors
) -> float:
    return max(cosine(sentence_vector, topic_vector(t, vectors)) for t in aspect.topics)


def select_sentences(
    sentences: Sequence[str],
    aspects: Sequence[Aspect],
    vectors: WordVectors,
    k: int = 3,
    per_aspect: bool = False,
) -> list[AspectSentence]:
    """Pick aspect-bearing sentences.

    Global mode (default): each sentence is scored by its best aspect and the
    top ``k`` overall are returned.  Per-aspect mode returns up to ``k``
    sentences for every aspect; a sentence may then appear under several
    aspects.  Ordering is by score descending, then sentence index ascending;
    equal scores across aspects resolve in aspect list order.
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if not aspects:
        return []
    topic_vecs = [[topic_vector(t, vectors) for t in aspect.topics] for aspect in aspects]
    sentence_vecs = [vectors.phrase_vector(text) for text in sentences]

    def score(sent_i: int, aspect_i: int) -> float:
        return max(cosine(sentence_vecs[sent_i], tv) for tv in topic_vecs[aspect_i])

    if per_aspect:
        selected = []
        for aspect_i, aspect in enumerate(aspects):
            rows = [
                AspectSentence(i, aspect.name, score(i, aspect_i), sentences[i])
                for i in range(len(sentences))
            ]
            rows.sort(key=lambda r: (-r.score, r.index))
            selected.extend(rows[:k])
        return selected

    best: list[AspectSentence] = []
    for i in range(len(sentences)):
        top: Optional[AspectSentence] = None
        for aspect_i, aspect in enumerate(aspects):
            s = score(i, aspect_i)
            if top is None or s > top.score:
                top = AspectSentence(i, aspect.name, s, sentences[i])
        if top is not None:
            best.append(top)
    best.sort(key=lambda r: (-r.score, r.index))
    return best[:k]


def select_aspect_sentences(
    document: Document,
    aspects: Sequence[Aspect],
    vectors: WordVectors,
    k: int = 3,
    per_aspect: bool = False,
) -> list[AspectSentence]:
    """The k best starting sentences of a document; see :func:`select_sentences`."""
    texts = [sentence.text for sentence in document.sentences]
    return select_sentences(texts, aspects, vectors, k=k, per_aspect=per_aspect)
