"""Phrase-tag generation from parsed sentences and a concept taxonomy.

For every taxonomy term matched in a simple sentence the tagger builds a
phrase around it from two sources:

  B. the smallest constituency node whose label ends in "P" covering the
     matched term (noun/verb/prepositional phrases and the like);
  C. the chain of dependency heads above the term, stopping at the root or
     before crossing an object relation; lexical material carried on
     nmod/obl/conj/advcl relations ("of", "and", ...) is re-inserted
     immediately before the later endpoint of its edge.

Words are emitted in original sentence order.  Three cleanup heuristics
apply in every mode except WORD_ONLY:

  1. trailing link verbs (is/was/seems/became/...) are truncated;
  2. a two-token constituent opening with DT/IN/PRP$/CD is discarded in
     favor of the bare term;
  3. "to" is inserted before a VB-tagged tag word unless one is already
     there (``to_scope="parents"`` restricts this to words collected by
     the head chain).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Sequence

from .aspects import Aspect, AspectSentence, select_aspect_sentences
from .concept_tree import ConceptIndex, TermMatch, match_terms
from .embeddings import WordVectors
from .errors import CycleError, DocumentError
from .parse_model import (
    ConstituencyNode,
    DependencyGraph,
    Document,
    ParsedSentence,
    prune_acl_edges,
)
from .simplifier import SimpleSentence, simplify

logger = logging.getLogger(__name__)

LINK_VERBS = frozenset(
    {
        "be", "is", "are", "was", "were", "been", "being",
        "seem", "seems", "seemed", "become", "becomes", "became",
    }
)

_SKIP_FIRST_POS = frozenset({"DT", "IN", "PRP$", "CD"})
_INSERTION_BASES = frozenset({"nmod", "obl", "conj", "advcl"})
_HEAD_PRIORITY = {"nsubj": 0, "obj": 1, "nmod": 2, "obl": 3, "conj": 4, "advcl": 5}
_TO_SCOPES = ("all", "parents")


class TagMode(str, Enum):
    """Which evidence feeds a tag: constituents, dependencies, both, or neither."""

    HYBRID = "hybrid"
    DEP_ONLY = "dep_only"
    CONST_ONLY = "const_only"
    WORD_ONLY = "word_only"


@dataclass(frozen=True)
class Tag:
    """One generated phrase tag with full provenance."""

    text: str
    matched_term: str
    sentence_index: int
    token_indices: tuple[int, ...]
    mode: TagMode = TagMode.HYBRID
    doc_id: str = ""
    aspect: str = ""

    def __post_init__(self):
        if not self.text:
            raise DocumentError("tag text must be non-empty")


def smallest_constituent(tree: ConstituencyNode, term_span: tuple[int, int]) -> tuple[int, int]:
    """Span of the lowest node labelled ...P that covers ``term_span``.

    Falls back to ``term_span`` itself when no such node exists, and also
    (heuristic 2) when the found constituent is exactly two tokens long and
    opens with a DT/IN/PRP$/CD word, which adds noise, not meaning.
    """
    lo_needed, hi_needed = term_span
    if lo_needed > hi_needed or lo_needed < tree.span[0] or hi_needed > tree.span[1]:
        raise DocumentError(f"term span {term_span} outside tree span {tree.span}")
    best: Optional[tuple[tuple[int, int], ConstituencyNode]] = None
    for node in tree.walk():
        if node.is_leaf or not node.label.endswith("P"):
            continue
        lo, hi = node.span
        if lo > lo_needed or hi < hi_needed:
            continue
        key = (hi - lo + 1, lo)
        if best is None or key < best[0]:
            best = (key, node)
    if best is None:
        return term_span
    lo, hi = best[1].span
    if hi - lo + 1 == 2 and next(best[1].leaves()).label in _SKIP_FIRST_POS:
        return term_span
    return (lo, hi)


def backtrack_dependencies(
    deps: DependencyGraph,
    start: int,
    limit: int,
    within: Optional[set[int]] = None,
) -> tuple[set[int], list[tuple[str, int]]]:
    """Climb head edges from ``start``; return collected heads and insertions.

    At each step the governing edge is the one whose relation base ranks
    highest in nsubj > obj > nmod > obl > conj > advcl > other, ties broken
    by lower head index.  The climb stops at the root, before crossing an
    obj-based edge, at the fragment boundary (``within``), and after
    ``limit`` steps.  Each insertion is (suffix word, index of the later
    endpoint), to be placed immediately before that endpoint.

    Raises :class:`CycleError` if the climb revisits a token, which cannot
    happen on a properly pruned graph.
    """
    collected: set[int] = set()
    insertions: list[tuple[str, int]] = []
    current = start
    visited = {start}
    for _ in range(limit):
        edges = deps.edges_for(current)
        if not edges:
            break
        edge = min(edges, key=lambda e: (_HEAD_PRIORITY.get(e.base, 6), e.head))
        if edge.base == "obj" or edge.head == 0:
            break
        if within is not None and edge.head not in within:
            break
        if edge.head in visited:
            raise CycleError(edge.head)
        if edge.base in _INSERTION_BASES and edge.suffix:
            # UD joins multiword case markers with underscores
            insertions.append((edge.suffix.replace("_", " "), max(current, edge.head)))
        collected.add(edge.head)
        visited.add(edge.head)
        current = edge.head
    return collected, insertions


def generate_tags(
    sentence: ParsedSentence,
    concepts: ConceptIndex,
    mode: TagMode = TagMode.HYBRID,
    sentence_index: int = 0,
    to_scope: str = "all",
) -> list[Tag]:
    """All tags for one sentence, deduplicated by text within the sentence.

    The sentence is first split into simple sentences; every taxonomy term
    matched in a fragment seeds one tag.  ``to_scope`` controls heuristic 3
    (see module docstring).
    """
    mode = TagMode(mode)
    if to_scope not in _TO_SCOPES:
        raise ValueError(f"to_scope must be one of {_TO_SCOPES}, got {to_scope!r}")
    fragments = _fragments(sentence, mode)
    deps: Optional[DependencyGraph] = None
    if mode in (TagMode.HYBRID, TagMode.DEP_ONLY):
        deps = prune_acl_edges(sentence.deps)

    tags: list[Tag] = []
    seen: set[str] = set()
    for fragment in fragments:
        fragment_set = set(fragment.indices)
        for match in match_terms(fragment.tokens, concepts):
            covered = tuple(
                t.index for t in fragment.tokens if match.start <= t.index <= match.end
            )
            tag = _build_tag(sentence, fragment_set, match, covered, mode, deps,
                             sentence_index, to_scope)
            if tag is not None and tag.text not in seen:
                seen.add(tag.text)
                tags.append(tag)
    return tags


def tag_sentences(
    document: Document,
    selections: Sequence[AspectSentence],
    concepts: ConceptIndex,
    mode: TagMode = TagMode.HYBRID,
    to_scope: str = "all",
) -> list[Tag]:
    """Tag the selected sentences of a document, attaching provenance.

    Tags are deduplicated document-wide by (text, mode).  A sentence whose
    dependency graph is cyclic is skipped with a warning; the rest of the
    document proceeds.
    """
    tags: list[Tag] = []
    seen: set[tuple[str, TagMode]] = set()
    for selection in selections:
        sentence = document.sentences[selection.index]
        try:
            sentence_tags = generate_tags(
                sentence, concepts, mode=mode, sentence_index=selection.index,
                to_scope=to_scope,
            )
        except CycleError as exc:
            logger.warning(
                "document %s sentence %d: dependency cycle at token %d, sentence skipped",
                document.id, selection.index, exc.token_index,
            )
            continue
        for tag in sentence_tags:
            tag = replace(tag, doc_id=document.id, aspect=selection.aspect)
            if (tag.text, tag.mode) not in seen:
                seen.add((tag.text, tag.mode))
                tags.append(tag)
    return tags


def tag_document(
    document: Document,
    concepts: ConceptIndex,
    store: WordVectors,
    aspects: Sequence[Aspect],
    k: int = 3,
    mode: TagMode = TagMode.HYBRID,
    per_aspect: bool = False,
    to_scope: str = "all",
) -> list[Tag]:
    """Full per-document pipeline: select aspect sentences, then tag them."""
    selections = select_aspect_sentences(document, aspects, store, k=k, per_aspect=per_aspect)
    return tag_sentences(document, selections, concepts, mode=mode, to_scope=to_scope)


def _fragments(sentence: ParsedSentence, mode: TagMode) -> list[SimpleSentence]:
    if sentence.tree is not None:
        return simplify(sentence)
    if mode in (TagMode.HYBRID, TagMode.CONST_ONLY):
        raise DocumentError(f"mode {mode.value} requires a constituency tree")
    return [SimpleSentence(tokens=sentence.tokens, source=sentence)]


def _build_tag(
    sentence: ParsedSentence,
    fragment_set: set[int],
    match: TermMatch,
    covered: tuple[int, ...],
    mode: TagMode,
    deps: Optional[DependencyGraph],
    sentence_index: int,
    to_scope: str,
) -> Optional[Tag]:
    if mode is TagMode.WORD_ONLY:
        return Tag(
            text=match.term,
            matched_term=match.term,
            sentence_index=sentence_index,
            token_indices=covered,
            mode=mode,
        )

    indices: set[int] = set(covered)
    if mode in (TagMode.HYBRID, TagMode.CONST_ONLY):
        assert sentence.tree is not None
        lo, hi = smallest_constituent(sentence.tree, (min(covered), max(covered)))
        indices.update(i for i in range(lo, hi + 1) if i in fragment_set)

    collected: set[int] = set()
    insertions: list[tuple[str, int]] = []
    if mode in (TagMode.HYBRID, TagMode.DEP_ONLY):
        assert deps is not None
        collected, insertions = backtrack_dependencies(
            deps, covered[-1], limit=len(sentence.tokens), within=fragment_set
        )
        indices.update(collected)

    eligible_for_to = indices if to_scope == "all" else collected
    words = _assemble(sentence, indices, insertions, eligible_for_to)
    if not words:
        return None
    return Tag(
        text=" ".join(w for _, w in words),
        matched_term=match.term,
        sentence_index=sentence_index,
        token_indices=tuple(i for i, _ in words if i > 0),
        mode=mode,
    )


def _assemble(
    sentence: ParsedSentence,
    indices: set[int],
    insertions: list[tuple[str, int]],
    eligible_for_to: set[int],
) -> list[tuple[int, str]]:
    """Order words by sentence position, then apply heuristics 1 and 3.

    Entries are (token index, word); inserted literals carry index 0 so the
    caller can tell them from real tokens.
    """
    entries: list[tuple[tuple[int, int, int], int, str]] = []
    for i in sorted(indices):
        entries.append(((i, 1, 0), i, sentence.token(i).form))
    for seq, (literal, target) in enumerate(insertions):
        if target in indices:
            entries.append(((target, 0, seq), 0, literal))
    entries.sort(key=lambda e: e[0])

    # a suffix literal echoing the word already directly before it adds nothing
    deduped: list[tuple[int, str]] = []
    for _, index, word in entries:
        if index == 0 and deduped and deduped[-1][1].lower() == word.lower():
            continue
        deduped.append((index, word))

    # heuristic 1: drop trailing link verbs, plus insertions left dangling;
    # insertions precede their target, so a trailing one lost its target
    while deduped:
        index, word = deduped[-1]
        if index == 0 or (index > 0 and word.lower() in LINK_VERBS):
            deduped.pop()
        else:
            break

    # heuristic 3: a bare infinitive reads better with its "to"
    final: list[tuple[int, str]] = []
    for index, word in deduped:
        if (
            index in eligible_for_to
            and sentence.token(index).pos == "VB"
            and (not final or final[-1][1].lower() != "to")
        ):
            final.append((0, "to"))
        final.append((index, word))
    return final
