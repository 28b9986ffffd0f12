"""Recommendation scoring against a brute-force oracle, plus index formats."""

import random

import pytest

from juritag.aspects import AspectSentence
from juritag.embeddings import cosine, embed_phrase, loads_word_vectors
from juritag.errors import DocumentError, IndexFormatError, RecommendError
from juritag.recommender import (
    FORMAT_VERSION,
    CorpusIndex,
    IndexedDocument,
    IndexedTag,
    build_index,
    dumps_index,
    index_corpus,
    load_index,
    loads_index,
    rank_for_document,
    recommend,
    recommend_fulltext_baseline,
    save_index,
)
from juritag.tagger import TagMode


def random_store(rng, dim):
    lines = [
        f"w{i} " + " ".join(f"{rng.uniform(-1, 1):.6f}" for _ in range(dim))
        for i in range(20)
    ]
    return loads_word_vectors("\n".join(lines) + "\n")


def random_index(rng, store, n_docs):
    docs = []
    for d in range(n_docs):
        tags = []
        for t in range(rng.randint(0, 10)):
            if rng.random() < 0.05:
                vector = (0.0,) * store.dim
            else:
                vector = tuple(rng.uniform(-1, 1) for _ in range(store.dim))
            tags.append(
                IndexedTag(
                    text=f"tag {d} {t}",
                    matched_term="term",
                    sentence_index=t,
                    aspect="a",
                    mode="hybrid",
                    vector=vector,
                )
            )
        docs.append(
            IndexedDocument(
                doc_id=f"doc_{d:03d}",
                metadata={},
                sentences=("x",),
                aspect_sentences=(),
                tags=tuple(tags),
                text_vector=tuple(rng.uniform(-1, 1) for _ in range(store.dim)),
            )
        )
    return CorpusIndex(dim=store.dim, mode="hybrid", documents=tuple(docs))


def oracle_rank(selected, index, store, exclude, top_n):
    """Independent triple loop: docs x selected tags x stored tags."""
    query = [embed_phrase(text, store).vector for text in selected]
    rows = []
    for doc in index.documents:
        if doc.doc_id == exclude:
            continue
        score = 0.0
        for qv in query:
            sims = [cosine(qv, tag.vector) for tag in doc.tags]
            score += max(sims) if sims else 0.0
        rows.append((doc.doc_id, score))
    rows.sort(key=lambda r: (-r[1], r[0]))
    return rows[:top_n]


def test_recommend_matches_oracle_on_random_corpora():
    rng = random.Random(99)
    for trial in range(40):
        dim = rng.randint(2, 8)
        store = random_store(rng, dim)
        index = random_index(rng, store, rng.randint(1, 20))
        selected = [
            " ".join(rng.choice([f"w{i}" for i in range(20)]) for _ in range(rng.randint(1, 3)))
            for _ in range(rng.randint(1, 10))
        ]
        exclude = rng.choice([None, index.documents[0].doc_id])
        top_n = rng.randint(1, 25)
        got = recommend(selected, index, store, exclude=exclude, top_n=top_n)
        expected = oracle_rank(selected, index, store, exclude, top_n)
        assert [r.doc_id for r in got] == [e[0] for e in expected]
        for r, e in zip(got, expected):
            assert r.score == pytest.approx(e[1], abs=1e-9)


def small_world():
    store = loads_word_vectors("alpha 1 0\nbeta 0 1\ngamma 1 1\n")
    docs = (
        IndexedDocument(
            doc_id="a",
            metadata={"title": "A"},
            sentences=("alpha",),
            aspect_sentences=(AspectSentence(0, "x", 1.0, "alpha"),),
            tags=(
                IndexedTag("alpha", "alpha", 0, "x", "hybrid", (1.0, 0.0)),
                IndexedTag("gamma", "gamma", 0, "x", "hybrid", (1.0, 1.0)),
            ),
            text_vector=(1.0, 0.0),
        ),
        IndexedDocument(
            doc_id="b",
            metadata={},
            sentences=("beta",),
            aspect_sentences=(),
            tags=(IndexedTag("beta", "beta", 0, "x", "hybrid", (0.0, 1.0)),),
            text_vector=(0.0, 1.0),
        ),
        IndexedDocument(
            doc_id="c",
            metadata={},
            sentences=("empty",),
            aspect_sentences=(),
            tags=(),
            text_vector=(0.5, 0.5),
        ),
    )
    return store, CorpusIndex(dim=2, mode="hybrid", documents=docs)


def test_recommend_scores_and_best_matches():
    store, index = small_world()
    got = recommend(["alpha"], index, store, top_n=3)
    # b and c tie at 0.0, so ids break the tie ascending
    assert [r.doc_id for r in got] == ["a", "b", "c"]
    top = got[0]
    assert top.score == pytest.approx(1.0)
    # the exact-match tag wins over the diagonal one
    assert top.per_tag_scores[0].best_match == "alpha"
    assert got[1].score == pytest.approx(0.0)
    # tagless documents score zero with no matching tag to report
    assert got[2].score == 0.0 and got[2].per_tag_scores[0].best_match is None


def test_recommend_first_max_wins_ties():
    store, _ = small_world()
    doc = IndexedDocument(
        doc_id="a",
        metadata={},
        sentences=("s",),
        aspect_sentences=(),
        tags=(
            IndexedTag("first", "t", 0, "x", "hybrid", (2.0, 0.0)),
            IndexedTag("second", "t", 0, "x", "hybrid", (1.0, 0.0)),
        ),
        text_vector=(1.0, 0.0),
    )
    index = CorpusIndex(dim=2, mode="hybrid", documents=(doc,))
    got = recommend(["alpha"], index, store, top_n=1)
    assert got[0].per_tag_scores[0].best_match == "first"


def test_recommend_excludes_query_document():
    store, index = small_world()
    got = recommend(["alpha"], index, store, exclude="a", top_n=5)
    assert "a" not in [r.doc_id for r in got]
    assert len(got) == 2


def test_recommend_additive_over_selection():
    store, index = small_world()
    one = {r.doc_id: r.score for r in recommend(["alpha"], index, store, top_n=3)}
    two = {r.doc_id: r.score for r in recommend(["alpha", "beta"], index, store, top_n=3)}
    for doc_id, score in two.items():
        assert score >= one[doc_id] - 1e-12


def test_recommend_selection_order_does_not_change_scores():
    store, index = small_world()
    forward = recommend(["alpha", "beta"], index, store, top_n=3)
    backward = recommend(["beta", "alpha"], index, store, top_n=3)
    assert [r.doc_id for r in forward] == [r.doc_id for r in backward]
    for f, b in zip(forward, backward):
        assert f.score == pytest.approx(b.score, abs=1e-12)
        assert {m.selected for m in f.per_tag_scores} == {m.selected for m in b.per_tag_scores}


def test_recommend_validates_selection_and_top_n():
    store, index = small_world()
    with pytest.raises(RecommendError):
        recommend([], index, store)
    with pytest.raises(RecommendError):
        recommend(["alpha"], index, store, top_n=0)


def test_fulltext_baseline_uses_document_vector():
    store, index = small_world()
    got = recommend_fulltext_baseline(["alpha"], index, store, top_n=3)
    by_id = {r.doc_id: r for r in got}
    assert by_id["a"].score == pytest.approx(1.0)
    assert by_id["c"].score == pytest.approx(cosine((1.0, 0.0), (0.5, 0.5)))
    assert all(m.best_match is None for r in got for m in r.per_tag_scores)


def test_rank_for_document_validates_inputs():
    store, index = small_world()
    got = rank_for_document(index, store, "a", ["alpha"], top_n=5)
    assert [r.doc_id for r in got] == ["b", "c"]
    with pytest.raises(DocumentError):
        rank_for_document(index, store, "zz", ["alpha"])
    with pytest.raises(RecommendError) as err:
        rank_for_document(index, store, "a", ["alpha", "nope"])
    message = str(err.value)
    assert "nope" in message and "gamma" in message


# -- index construction and persistence ---------------------------------------


def test_index_corpus_shape(corpus_index, corpus):
    assert corpus_index.dim == 4
    assert corpus_index.mode == "hybrid"
    assert len(corpus_index) == len(corpus)
    assert [d.doc_id for d in corpus_index.documents] == ["case_001", "case_002", "case_003"]
    entry = corpus_index.document("case_001")
    assert entry.metadata["title"] == "Chan v Wong"
    assert len(entry.aspect_sentences) == 3
    assert "His mental condition bad and unstable" in entry.tag_texts()
    assert corpus_index.document("zz") is None


def test_build_index_warns_on_tagless_and_oov(corpus, caplog):
    import logging

    store = loads_word_vectors("alpha 1 0\n")
    doc = corpus[0]
    from juritag.tagger import Tag

    tags = [Tag(text="zz yy", matched_term="zz", sentence_index=0, token_indices=(1,))]
    with caplog.at_level(logging.WARNING, logger="juritag.recommender"):
        index = build_index([(doc, tags, []), (corpus[1], [], [])], store)
    messages = " ".join(r.getMessage() for r in caplog.records)
    assert "out-of-vocabulary" in messages
    assert "no tags" in messages
    assert index.document(doc.id).tags[0].vector == (0.0, 0.0)


def test_index_documents_sorted_by_id(corpus, concepts, store, aspects):
    shuffled = [corpus[2], corpus[0], corpus[1]]
    index = index_corpus(shuffled, concepts, store, aspects, k=3)
    assert [d.doc_id for d in index.documents] == ["case_001", "case_002", "case_003"]


def test_duplicate_doc_ids_rejected():
    store, index = small_world()
    with pytest.raises(DocumentError):
        CorpusIndex(dim=2, mode="hybrid", documents=(index.documents[0],) * 2)


def test_index_round_trip_bytes_and_equality(corpus_index, tmp_path):
    text = dumps_index(corpus_index)
    assert text.endswith("\n")
    again = loads_index(text)
    assert again == corpus_index
    assert dumps_index(again) == text

    path = tmp_path / "index.json"
    save_index(corpus_index, path)
    assert load_index(path) == corpus_index
    assert path.read_text(encoding="utf-8") == text


def test_loads_index_rejects_other_versions(corpus_index):
    payload = dumps_index(corpus_index).replace(
        f'"format_version":{FORMAT_VERSION}', '"format_version":99'
    )
    with pytest.raises(IndexFormatError) as err:
        loads_index(payload)
    assert "format_version" in str(err.value)


@pytest.mark.parametrize(
    "text",
    [
        "{not json",
        "[]",
        '{"format_version": 1}',
        '{"format_version": 1, "dim": 2, "mode": "hybrid", "documents": [{}]}',
    ],
)
def test_loads_index_rejects_malformed(text):
    with pytest.raises(IndexFormatError):
        loads_index(text)


def test_loads_index_checks_vector_dims():
    doc = {
        "doc_id": "a",
        "metadata": {},
        "sentences": ["s"],
        "aspect_sentences": [],
        "tags": [
            {
                "text": "t",
                "matched_term": "t",
                "sentence_index": 0,
                "aspect": "x",
                "mode": "hybrid",
                "vector": [1.0],
            }
        ],
        "text_vector": [1.0, 0.0],
    }
    import json

    payload = {"format_version": 1, "dim": 2, "mode": "hybrid", "documents": [doc]}
    with pytest.raises(IndexFormatError) as err:
        loads_index(json.dumps(payload))
    assert "dim" in str(err.value)

    doc["tags"][0]["vector"] = [1.0, 0.0]
    doc["text_vector"] = [1.0]
    with pytest.raises(IndexFormatError):
        loads_index(json.dumps(payload))
