"""End-to-end acceptance gate.

One test per acceptance criterion; `pytest -v tests/test_acceptance.py`
prints one pass/fail line for each.
"""

import io
import json
import random
import time

import numpy as np
import pytest
from click.testing import CliRunner

from juritag.cli import main
from juritag.concept_tree import load_concept_tree
from juritag.corpus import scan_corpus
from juritag.embeddings import cosine, embed_phrase, loads_word_vectors
from juritag.errors import (
    BracketParseError,
    ConlluParseError,
    EmbeddingError,
    IndexFormatError,
    TaxonomyError,
)
from juritag.parse_model import read_bracketed, read_conllu, write_conllu
from juritag.recommender import (
    CorpusIndex,
    IndexedDocument,
    IndexedTag,
    index_corpus,
    loads_index,
    recommend,
)
from juritag.simplifier import count_subject_verb_pairs, simplify
from juritag.tagger import TagMode, generate_tags

from conftest import DATA_DIR, make_sentence
from test_aspects import A1, A2, SENTENCES, STORE, brute_force_topk
from test_parse_model import random_tree, walk_spans_ok
from test_recommender import oracle_rank, random_index, random_store


def sentence_of(corpus, doc_id, i):
    return next(d for d in corpus if d.id == doc_id).sentences[i]


def is_subsequence(needle, haystack):
    it = iter(haystack)
    return all(word in it for word in needle)


def test_worked_example_fidelity(corpus, concepts):
    started = time.perf_counter()
    sentence = sentence_of(corpus, "case_001", 0)
    hybrid = [t.text for t in generate_tags(sentence, concepts, TagMode.HYBRID)]
    const = [t.text for t in generate_tags(sentence, concepts, TagMode.CONST_ONLY)]
    word = [t.text for t in generate_tags(sentence, concepts, TagMode.WORD_ONLY)]
    assert hybrid == ["His mental condition bad and unstable"]
    assert const == ["His mental condition"]
    assert word == ["condition"]
    assert time.perf_counter() - started < 1.0


def test_preposition_chain_fidelity(corpus, concepts):
    started = time.perf_counter()
    sentence = sentence_of(corpus, "case_001", 1)
    for mode in (TagMode.DEP_ONLY, TagMode.HYBRID):
        texts = [t.text for t in generate_tags(sentence, concepts, mode)]
        assert any(
            is_subsequence(["fracture", "of", "rami", "of", "pelvis"], text.split())
            for text in texts
        ), texts
    assert [t.text for t in generate_tags(sentence, concepts, TagMode.WORD_ONLY)] == ["fracture"]
    assert time.perf_counter() - started < 1.0


def test_heuristic_coverage(corpus, concepts):
    # heuristic 1: trailing link verb truncated
    h1 = generate_tags(sentence_of(corpus, "case_002", 1), concepts, TagMode.DEP_ONLY)
    assert [t.text for t in h1] == ["terms of settlement"]

    # heuristic 2: two-word constituent opening with DT collapses to the term
    h2 = generate_tags(sentence_of(corpus, "case_001", 1), concepts, TagMode.CONST_ONLY)
    assert [t.text for t in h2] == ["fracture"]

    # heuristic 3: "to" inserted before a bare VB
    h3 = generate_tags(sentence_of(corpus, "case_002", 2), concepts, TagMode.HYBRID)
    assert [t.text for t in h3] == ["duty to mitigate", "losses"]

    # acl pruning: the relative-clause back-edge goes away, the enhanced
    # subject edge into the clause survives
    relative = make_sentence(
        [
            ("The", "DT"), ("man", "NN"), ("who", "WP"),
            ("paid", "VBD"), ("compensation", "NN"), ("left", "VBD"), (".", "."),
        ],
        [
            (2, 1, "det"), (6, 2, "nsubj"), (4, 2, "nsubj"), (2, 4, "acl:relcl"),
            (4, 3, "nsubj"), (4, 5, "obj"), (0, 6, "root"), (6, 7, "punct"),
        ],
    )
    acl_concepts = load_concept_tree(io.StringIO("1\t\tlaw\n2\t1\tman\n"))
    assert [t.text for t in generate_tags(relative, acl_concepts, TagMode.DEP_ONLY)] == [
        "man paid"
    ]


def test_recommender_oracle():
    started = time.perf_counter()
    rng = random.Random(2024)
    for trial in range(100):
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
            assert abs(r.score - e[1]) <= 1e-9
    assert time.perf_counter() - started < 30.0


def test_embedding_math():
    rng = np.random.default_rng(7)
    for _ in range(10_000):
        dim = int(rng.integers(1, 9))
        u = rng.uniform(-10, 10, dim)
        v = rng.uniform(-10, 10, dim)
        s = cosine(u, v)
        assert abs(s) <= 1 + 1e-12
        assert abs(s - cosine(v, u)) <= 1e-12
        scale = float(rng.uniform(0.1, 100.0))
        assert abs(cosine(scale * u, v) - s) <= 1e-9


def test_aspect_selection_against_brute_force():
    from juritag.aspects import select_sentences

    got = select_sentences(SENTENCES, [A1, A2], STORE, k=3)
    expected = brute_force_topk(SENTENCES, [A1, A2], STORE, 3)
    assert [(g.index, g.aspect) for g in got] == [(e.index, e.aspect) for e in expected]

    # uniform rescaling of every word vector preserves set and order
    scaled = loads_word_vectors("alpha 7 0\nbeta 0 7\ngamma 7 7\n")
    rescaled = select_sentences(SENTENCES, [A1, A2], scaled, k=3)
    assert [(g.index, g.aspect) for g in got] == [(r.index, r.aspect) for r in rescaled]
    for g, r in zip(got, rescaled):
        assert abs(g.score - r.score) <= 1e-9


def test_simplifier_criteria(corpus):
    coordinated = sentence_of(corpus, "case_003", 2)
    parts = simplify(coordinated)
    assert len(parts) == 2
    for part in parts:
        assert count_subject_verb_pairs(part.tokens, coordinated.deps) <= 1

    johnson = make_sentence(
        [("Johnson", "NNP"), ("and", "CC"), ("Johnson", "NNP"), ("settled", "VBD"), (".", ".")],
        [(4, 1, "nsubj"), (1, 2, "cc"), (1, 3, "conj:and"), (0, 4, "root"), (4, 5, "punct")],
        tree="(S (NP (NNP Johnson) (CC and) (NNP Johnson)) (VP (VBD settled)) (. .))",
    )
    assert [p.indices for p in simplify(johnson)] == [(1, 2, 3, 4, 5)]

    simple = sentence_of(corpus, "case_001", 0)
    identity = simplify(simple)
    assert len(identity) == 1
    assert identity[0].indices == tuple(t.index for t in simple.tokens)


def test_format_robustness():
    # CoNLL-U round-trip
    source = (DATA_DIR / "corpus" / "case_002.conllu").read_text(encoding="utf-8")
    frags = read_conllu(io.StringIO(source))
    out = io.StringIO()
    write_conllu(frags, out)
    assert read_conllu(io.StringIO(out.getvalue())) == frags

    # span invariant over 1,000 random trees
    rng = random.Random(404)
    for _ in range(1000):
        counter = [0]
        tree = read_bracketed(random_tree(rng, counter))
        assert walk_spans_ok(tree)

    # malformed inputs raise the documented error types, never crash
    with pytest.raises(ConlluParseError):
        read_conllu(io.StringIO("1\ttoo\tfew\n\n"))
    with pytest.raises(BracketParseError):
        read_bracketed("(S (NP broken)")
    with pytest.raises(TaxonomyError):
        load_concept_tree(io.StringIO("1\t\ta\n2\t\tb\n"))
    with pytest.raises(EmbeddingError):
        loads_word_vectors("w 1 2\nv 3\n")
    with pytest.raises(IndexFormatError):
        loads_index('{"format_version": 2}')


def full_run(tmp_path, label):
    workdir = tmp_path / label
    workdir.mkdir()
    config = {
        "taxonomy": str(DATA_DIR / "taxonomy.tsv"),
        "embeddings": str(DATA_DIR / "vectors.txt"),
        "aspects": str(DATA_DIR / "aspects.json"),
        "corpus": str(DATA_DIR / "corpus"),
        "index": str(workdir / "index.json"),
    }
    config_path = workdir / "config.json"
    config_path.write_text(json.dumps(config), encoding="utf-8")
    runner = CliRunner()
    outputs = {}
    for args in (
        ["ingest", "--config", str(config_path)],
        ["tag", "--config", str(config_path), "--out", str(workdir / "report")],
        ["index", "--config", str(config_path)],
        ["recommend", "--config", str(config_path), "--doc", "case_001",
         "--tag", "liability"],
    ):
        result = runner.invoke(main, args)
        assert result.exit_code == 0, result.output
        outputs[args[0]] = result.output
    return {
        "tags": (workdir / "report" / "tags.tsv").read_bytes(),
        "summary": (workdir / "report" / "summary.tsv").read_bytes(),
        "index": (workdir / "index.json").read_bytes(),
        "ranking": outputs["recommend"],
    }


def test_pipeline_determinism(tmp_path):
    first = full_run(tmp_path, "first")
    second = full_run(tmp_path, "second")
    assert first["tags"] == second["tags"]
    assert first["summary"] == second["summary"]
    assert first["index"] == second["index"]
    assert first["ranking"] == second["ranking"]


def write_scale_corpus(root, n_docs=500, n_sentences=40, n_terms=13_000):
    corpus_dir = root / "corpus"
    corpus_dir.mkdir()
    for d in range(n_docs):
        blocks = []
        for s in range(n_sentences):
            term = f"term{(d * n_sentences + s) % n_terms:05d}"
            blocks.append(
                f"# text = {term} remained decisive throughout proceedings .\n"
                f"# constituency = (S (NP (NN {term})) (VP (VBD remained)"
                " (ADJP (JJ decisive)) (PP (IN throughout) (NP (NNS proceedings)))) (. .))\n"
                f"1\t{term}\t_\t_\tNN\t_\t2\tnsubj\t_\t_\n"
                "2\tremained\t_\t_\tVBD\t_\t0\troot\t_\t_\n"
                "3\tdecisive\t_\t_\tJJ\t_\t2\txcomp\t_\t_\n"
                "4\tthroughout\t_\t_\tIN\t_\t5\tcase\t_\t_\n"
                "5\tproceedings\t_\t_\tNNS\t_\t2\tnmod:throughout\t_\t_\n"
                "6\t.\t_\t_\t.\t_\t2\tpunct\t_\t_\n\n"
            )
        (corpus_dir / f"doc_{d:04d}.conllu").write_text("".join(blocks), encoding="utf-8")

    taxonomy = ["1\t\tlaw"] + [f"{i + 2}\t1\tterm{i:05d}" for i in range(n_terms)]
    (root / "taxonomy.tsv").write_text("\n".join(taxonomy) + "\n", encoding="utf-8")

    rng = random.Random(3)
    words = ["remained", "decisive", "throughout", "proceedings"]
    words += [f"term{i:05d}" for i in range(100)]
    vectors = [
        w + " " + " ".join(f"{rng.uniform(-1, 1):.4f}" for _ in range(8)) for w in words
    ]
    (root / "vectors.txt").write_text("\n".join(vectors) + "\n", encoding="utf-8")
    (root / "aspects.json").write_text(
        json.dumps({"aspects": [{"name": "all", "topics": [{"words": ["proceedings"]}]}]}),
        encoding="utf-8",
    )


def test_scale_smoke(tmp_path):
    write_scale_corpus(tmp_path)
    from juritag.aspects import load_aspects
    from juritag.embeddings import load_word_vectors

    started = time.perf_counter()
    scan = scan_corpus(tmp_path / "corpus")
    assert len(scan.documents) == 500
    assert scan.sentence_count == 20_000
    concepts = load_concept_tree(tmp_path / "taxonomy.tsv")
    assert len(concepts) == 13_001
    store = load_word_vectors(tmp_path / "vectors.txt")
    aspects = load_aspects(tmp_path / "aspects.json")
    index = index_corpus(scan.documents, concepts, store, aspects, k=3)
    elapsed = time.perf_counter() - started
    assert len(index) == 500
    assert all(len(doc.tags) >= 1 for doc in index.documents)
    assert elapsed < 300.0, f"pipeline took {elapsed:.1f}s"
