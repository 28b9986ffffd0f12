"""Legal phrase-tag extraction and similar-judgement recommendation.

The pipeline: parse-ingested judgements are split into simple sentences,
aspect-relevant sentences are selected by embedding similarity, taxonomy
terms matched in them are grown into phrase tags by hybrid constituency +
dependency traversal, and tag embeddings drive a max-of-cosine recommender
over the corpus.
"""

from .aspects import (
    Aspect,
    AspectSentence,
    Topic,
    load_aspects,
    score_against_aspect,
    select_aspect_sentences,
    select_sentences,
    topic_vector,
)
from .concept_tree import (
    ConceptIndex,
    ConceptNode,
    TermMatch,
    generalize,
    load_concept_tree,
    match_terms,
    normalize_term,
)
from .corpus import CorpusScan, load_corpus, load_document, scan_corpus
from .embeddings import (
    PhraseEmbedding,
    WordVectors,
    cosine,
    embed_phrase,
    load_word_vectors,
    loads_word_vectors,
)
from .errors import (
    AspectConfigError,
    BracketParseError,
    ConlluParseError,
    CycleError,
    DocumentError,
    EmbeddingError,
    IndexFormatError,
    JuritagError,
    RecommendError,
    TaxonomyError,
)
from .parse_model import (
    ConstituencyNode,
    DepEdge,
    DependencyGraph,
    Document,
    ParsedSentence,
    SentenceFragment,
    Token,
    prune_acl_edges,
    read_bracketed,
    read_conllu,
    unwrap_root,
    write_conllu,
)
from .recommender import (
    CorpusIndex,
    IndexedDocument,
    IndexedTag,
    Recommendation,
    TagMatch,
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
from .simplifier import SimpleSentence, count_subject_verb_pairs, simplify
from .tagger import (
    LINK_VERBS,
    Tag,
    TagMode,
    backtrack_dependencies,
    generate_tags,
    smallest_constituent,
    tag_document,
    tag_sentences,
)

__version__ = "0.1.0"

__all__ = [
    "Aspect",
    "AspectConfigError",
    "AspectSentence",
    "BracketParseError",
    "ConceptIndex",
    "ConceptNode",
    "ConlluParseError",
    "ConstituencyNode",
    "CorpusIndex",
    "CorpusScan",
    "CycleError",
    "DepEdge",
    "DependencyGraph",
    "Document",
    "DocumentError",
    "EmbeddingError",
    "IndexFormatError",
    "IndexedDocument",
    "IndexedTag",
    "JuritagError",
    "LINK_VERBS",
    "ParsedSentence",
    "PhraseEmbedding",
    "Recommendation",
    "RecommendError",
    "SentenceFragment",
    "SimpleSentence",
    "Tag",
    "TagMatch",
    "TagMode",
    "TaxonomyError",
    "TermMatch",
    "Token",
    "Topic",
    "WordVectors",
    "backtrack_dependencies",
    "build_index",
    "cosine",
    "count_subject_verb_pairs",
    "dumps_index",
    "embed_phrase",
    "generalize",
    "generate_tags",
    "index_corpus",
    "load_aspects",
    "load_concept_tree",
    "load_corpus",
    "load_document",
    "load_index",
    "load_word_vectors",
    "loads_index",
    "loads_word_vectors",
    "match_terms",
    "normalize_term",
    "prune_acl_edges",
    "rank_for_document",
    "read_bracketed",
    "read_conllu",
    "recommend",
    "recommend_fulltext_baseline",
    "save_index",
    "scan_corpus",
    "score_against_aspect",
    "select_aspect_sentences",
    "select_sentences",
    "simplify",
    "smallest_constituent",
    "tag_document",
    "tag_sentences",
    "topic_vector",
    "unwrap_root",
    "write_conllu",
]
