"""Similar-judgement recommendation over an embedded tag index.

A candidate document's score against a tag selection is the sum, over the
selected tags, of the best cosine similarity any of the candidate's own tags
achieves.  Candidates are ranked on a max-heap; equal scores fall back to
ascending document id.  A full-text baseline scores each selected tag
against one whole-document embedding instead.
"""

from __future__ import annotations

import heapq
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, NamedTuple, Optional, Sequence, Union

from .aspects import Aspect, AspectSentence, select_aspect_sentences
from .embeddings import WordVectors, cosine, embed_phrase
from .errors import DocumentError, IndexFormatError, RecommendError
from .parse_model import Document
from .tagger import Tag, TagMode, tag_sentences

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1

Target = Union[str, Path, IO[str]]


@dataclass(frozen=True)
class IndexedTag:
    """A tag as persisted: provenance plus its phrase embedding."""

    text: str
    matched_term: str
    sentence_index: int
    aspect: str
    mode: str
    vector: tuple[float, ...]


@dataclass(frozen=True)
class IndexedDocument:
    """Everything the service needs to show and score one judgement."""

    doc_id: str
    metadata: dict[str, str]
    sentences: tuple[str, ...]
    aspect_sentences: tuple[AspectSentence, ...]
    tags: tuple[IndexedTag, ...]
    text_vector: tuple[float, ...]

    @property
    def fulltext(self) -> str:
        return " ".join(self.sentences)

    def tag_texts(self) -> list[str]:
        return [tag.text for tag in self.tags]


@dataclass(frozen=True)
class CorpusIndex:
    """Persisted, queryable collection of documents, tags, and embeddings."""

    dim: int
    mode: str
    documents: tuple[IndexedDocument, ...]
    format_version: int = FORMAT_VERSION
    _by_id: dict[str, IndexedDocument] = field(
        init=False, default=None, repr=False, compare=False  # type: ignore[assignment]
    )

    def __post_init__(self):
        by_id: dict[str, IndexedDocument] = {}
        for doc in self.documents:
            if doc.doc_id in by_id:
                raise DocumentError(f"duplicate document id {doc.doc_id!r} in index")
            by_id[doc.doc_id] = doc
        object.__setattr__(self, "_by_id", by_id)

    def __len__(self) -> int:
        return len(self.documents)

    def document(self, doc_id: str) -> Optional[IndexedDocument]:
        return self._by_id.get(doc_id)


class TagMatch(NamedTuple):
    """Best match for one selected tag: its text, the matched tag, cosine."""

    selected: str
    best_match: Optional[str]
    similarity: float


class Recommendation(NamedTuple):
    doc_id: str
    score: float
    per_tag_scores: tuple[TagMatch, ...]


def build_index(
    items: Sequence[tuple[Document, Sequence[Tag], Sequence[AspectSentence]]],
    store: WordVectors,
    mode: TagMode = TagMode.HYBRID,
) -> CorpusIndex:
    """Embed every tag and assemble the index, sorted by document id.

    Documents with no tags are indexed anyway (they score 0 against every
    query) with a warning, as are tags whose words are all out of vocabulary.
    """
    entries = []
    for document, tags, selections in items:
        indexed_tags = []
        for tag in tags:
            emb = embed_phrase(tag.text, store)
            if emb.fully_oov:
                logger.warning(
                    "document %s: tag %r is fully out-of-vocabulary and will score 0",
                    document.id, tag.text,
                )
            indexed_tags.append(
                IndexedTag(
                    text=tag.text,
                    matched_term=tag.matched_term,
                    sentence_index=tag.sentence_index,
                    aspect=tag.aspect,
                    mode=tag.mode.value,
                    vector=tuple(float(x) for x in emb.vector),
                )
            )
        if not indexed_tags:
            logger.warning("document %s has no tags", document.id)
        sentences = tuple(s.text for s in document.sentences)
        text_vector = tuple(float(x) for x in embed_phrase(" ".join(sentences), store).vector)
        entries.append(
            IndexedDocument(
                doc_id=document.id,
                metadata=dict(document.metadata),
                sentences=sentences,
                aspect_sentences=tuple(selections),
                tags=tuple(indexed_tags),
                text_vector=text_vector,
            )
        )
    entries.sort(key=lambda e: e.doc_id)
    return CorpusIndex(dim=store.dim, mode=mode.value, documents=tuple(entries))


def index_corpus(
    documents: Sequence[Document],
    concepts,
    store: WordVectors,
    aspects: Sequence[Aspect],
    k: int = 3,
    mode: TagMode = TagMode.HYBRID,
    per_aspect: bool = False,
    to_scope: str = "all",
) -> CorpusIndex:
    """Select aspect sentences, tag them, and build the index in one pass."""
    items = []
    for document in documents:
        selections = select_aspect_sentences(
            document, aspects, store, k=k, per_aspect=per_aspect
        )
        tags = tag_sentences(document, selections, concepts, mode=mode, to_scope=to_scope)
        items.append((document, tags, selections))
    return build_index(items, store, mode=mode)


def dumps_index(index: CorpusIndex) -> str:
    """Canonical JSON serialization; identical indexes serialize identically."""
    payload = {
        "format_version": index.format_version,
        "dim": index.dim,
        "mode": index.mode,
        "documents": [
            {
                "doc_id": doc.doc_id,
                "metadata": doc.metadata,
                "sentences": list(doc.sentences),
                "aspect_sentences": [
                    {"index": s.index, "aspect": s.aspect, "score": s.score, "text": s.text}
                    for s in doc.aspect_sentences
                ],
                "tags": [
                    {
                        "text": t.text,
                        "matched_term": t.matched_term,
                        "sentence_index": t.sentence_index,
                        "aspect": t.aspect,
                        "mode": t.mode,
                        "vector": list(t.vector),
                    }
                    for t in doc.tags
                ],
                "text_vector": list(doc.text_vector),
            }
            for doc in index.documents
        ],
    }
    return json.dumps(payload, ensure_ascii=False, sort_keys=True, separators=(",", ":")) + "\n"


def save_index(index: CorpusIndex, target: Target) -> None:
    text = dumps_index(index)
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        target.write(text)


def load_index(source: Target) -> CorpusIndex:
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as handle:
            text = handle.read()
    else:
        text = source.read()
    return loads_index(text)


def loads_index(text: str) -> CorpusIndex:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise IndexFormatError(f"index is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise IndexFormatError("index top level must be an object")
    version = payload.get("format_version")
    if version != FORMAT_VERSION:
        raise IndexFormatError(
            f"unsupported index format_version {version!r}, expected {FORMAT_VERSION}"
        )
    try:
        dim = int(payload["dim"])
        mode = str(payload["mode"])
        raw_documents = payload["documents"]
        documents = tuple(_load_document(raw, dim) for raw in raw_documents)
    except IndexFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise IndexFormatError(f"malformed index: {exc!r}") from exc
    return CorpusIndex(dim=dim, mode=mode, documents=documents)


def _load_document(raw: dict, dim: int) -> IndexedDocument:
    tags = []
    for t in raw["tags"]:
        vector = tuple(float(x) for x in t["vector"])
        if len(vector) != dim:
            raise IndexFormatError(
                f"tag {t['text']!r} has a {len(vector)}-dim vector, index dim is {dim}"
            )
        tags.append(
            IndexedTag(
                text=str(t["text"]),
                matched_term=str(t["matched_term"]),
                sentence_index=int(t["sentence_index"]),
                aspect=str(t["aspect"]),
                mode=str(t["mode"]),
                vector=vector,
            )
        )
    text_vector = tuple(float(x) for x in raw["text_vector"])
    if len(text_vector) != dim:
        raise IndexFormatError(
            f"document {raw['doc_id']!r} text vector has dim {len(text_vector)}, "
            f"index dim is {dim}"
        )
    return IndexedDocument(
        doc_id=str(raw["doc_id"]),
        metadata={str(k): str(v) for k, v in raw["metadata"].items()},
        sentences=tuple(str(s) for s in raw["sentences"]),
        aspect_sentences=tuple(
            AspectSentence(int(s["index"]), str(s["aspect"]), float(s["score"]), str(s["text"]))
            for s in raw["aspect_sentences"]
        ),
        tags=tuple(tags),
        text_vector=text_vector,
    )


def recommend(
    selected: Sequence[str],
    index: CorpusIndex,
    store: WordVectors,
    exclude: Optional[str] = None,
    top_n: int = 5,
) -> list[Recommendation]:
    """Rank documents by summed max-cosine between selected and stored tags."""
    query = _embed_selection(selected, store, top_n)
    heap = []
    for doc in index.documents:
        if doc.doc_id == exclude:
            continue
        per_tag = []
        for text, qv in query:
            best_text: Optional[str] = None
            best_sim = 0.0
            for tag in doc.tags:
                sim = cosine(qv, tag.vector)
                if best_text is None or sim > best_sim:
                    best_text, best_sim = tag.text, sim
            per_tag.append(TagMatch(text, best_text, best_sim))
        score = float(sum(m.similarity for m in per_tag))
        heap.append((-score, doc.doc_id, tuple(per_tag)))
    return _pop_top(heap, top_n)


def recommend_fulltext_baseline(
    selected: Sequence[str],
    index: CorpusIndex,
    store: WordVectors,
    exclude: Optional[str] = None,
    top_n: int = 5,
) -> list[Recommendation]:
    """Baseline arm: compare selected tags against whole-document embeddings."""
    query = _embed_selection(selected, store, top_n)
    heap = []
    for doc in index.documents:
        if doc.doc_id == exclude:
            continue
        per_tag = tuple(
            TagMatch(text, None, cosine(qv, doc.text_vector)) for text, qv in query
        )
        score = float(sum(m.similarity for m in per_tag))
        heap.append((-score, doc.doc_id, per_tag))
    return _pop_top(heap, top_n)


def rank_for_document(
    index: CorpusIndex,
    store: WordVectors,
    doc_id: str,
    selected: Sequence[str],
    top_n: int = 5,
    baseline: bool = False,
) -> list[Recommendation]:
    """Validated entry point shared by the CLI and the HTTP service.

    The selected tags must all belong to the named document, which is then
    excluded from the ranking.
    """
    entry = index.document(doc_id)
    if entry is None:
        raise DocumentError(f"unknown document {doc_id!r}")
    valid = set(entry.tag_texts())
    unknown = [t for t in selected if t not in valid]
    if unknown:
        raise RecommendError(
            f"tags not in document {doc_id}: {unknown}; valid tags: {sorted(valid)}"
        )
    ranker = recommend_fulltext_baseline if baseline else recommend
    return ranker(selected, index, store, exclude=doc_id, top_n=top_n)


def _embed_selection(selected: Sequence[str], store: WordVectors, top_n: int):
    if top_n < 1:
        raise RecommendError(f"top_n must be at least 1, got {top_n}")
    if not selected:
        raise RecommendError("at least one tag must be selected")
    return [(text, embed_phrase(text, store).vector) for text in selected]


def _pop_top(
    heap: list[tuple[float, str, tuple[TagMatch, ...]]], top_n: int
) -> list[Recommendation]:
    heapq.heapify(heap)
    results = []
    while heap and len(results) < top_n:
        neg_score, doc_id, per_tag = heapq.heappop(heap)
        results.append(Recommendation(doc_id=doc_id, score=-neg_score, per_tag_scores=per_tag))
    return results
