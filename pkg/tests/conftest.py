"""Shared fixtures: the 3-document sample corpus and its side files."""

from pathlib import Path

import pytest

from juritag.aspects import load_aspects
from juritag.concept_tree import load_concept_tree
from juritag.corpus import load_corpus
from juritag.embeddings import load_word_vectors
from juritag.parse_model import (
    DepEdge,
    DependencyGraph,
    ParsedSentence,
    Token,
    read_bracketed,
)
from juritag.recommender import index_corpus

DATA_DIR = Path(__file__).parent / "data"


def make_sentence(words, edges, tree=None, text=None):
    """Build a ParsedSentence from (form, pos) pairs and (head, dep, rel) triples."""
    tokens = tuple(Token(i, form, pos) for i, (form, pos) in enumerate(words, start=1))
    deps = DependencyGraph(DepEdge(h, d, r) for h, d, r in edges)
    parsed_tree = read_bracketed(tree) if tree else None
    return ParsedSentence(
        tokens=tokens,
        deps=deps,
        tree=parsed_tree,
        text=text or " ".join(form for form, _ in words),
    )


@pytest.fixture(scope="session")
def data_dir():
    return DATA_DIR


@pytest.fixture(scope="session")
def corpus():
    return load_corpus(DATA_DIR / "corpus")


@pytest.fixture(scope="session")
def concepts():
    return load_concept_tree(DATA_DIR / "taxonomy.tsv")


@pytest.fixture(scope="session")
def store():
    return load_word_vectors(DATA_DIR / "vectors.txt")


@pytest.fixture(scope="session")
def aspects():
    return load_aspects(DATA_DIR / "aspects.json")


@pytest.fixture(scope="session")
def corpus_index(corpus, concepts, store, aspects):
    return index_corpus(corpus, concepts, store, aspects, k=3)
