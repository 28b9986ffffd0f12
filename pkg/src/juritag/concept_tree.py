"""Legal-concept taxonomy: loading, keyword matching, and generalization.

The taxonomy is a single-rooted tree where parents are more general than
their children.  All terms are indexed in a hash map keyed by normalized
term, so membership checks during matching are O(1).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, NamedTuple, Optional, Sequence, Union

from .errors import TaxonomyError
from .parse_model import ParsedSentence, Token

_WHITESPACE = re.compile(r"\s+")


def normalize_term(text: str) -> str:
    """Lowercase and collapse internal whitespace."""
    return _WHITESPACE.sub(" ", text.strip()).lower()


@dataclass
class ConceptNode:
    term: str
    parent: Optional["ConceptNode"] = None
    children: list["ConceptNode"] = field(default_factory=list)

    def __repr__(self):
        return f"ConceptNode({self.term!r})"


@dataclass(frozen=True)
class ConceptIndex:
    """All taxonomy nodes plus the hashed term -> node map."""

    root: ConceptNode
    by_term: dict[str, ConceptNode]
    max_term_words: int

    def __len__(self):
        return len(self.by_term)

    def __contains__(self, term: str) -> bool:
        return normalize_term(term) in self.by_term


class TermMatch(NamedTuple):
    """A matched term and the (start, end) token-index span it covers."""

    term: str
    start: int
    end: int


def load_concept_tree(source: Union[str, Path, IO[str]]) -> ConceptIndex:
    """Load the taxonomy file: ``id<TAB>parent_id<TAB>term`` per line.

    The root has an empty parent_id; ``#`` lines are comments.  Duplicate
    terms, unknown parent ids, multiple roots, cycles, and empty files all
    raise :class:`TaxonomyError`.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as handle:
            return load_concept_tree(handle)
    stream = source
    rows: list[tuple[str, str, str]] = []
    for line_number, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise TaxonomyError(f"line {line_number}: expected 3 tab-separated fields")
        rows.append((parts[0].strip(), parts[1].strip(), parts[2]))

    if not rows:
        raise TaxonomyError("taxonomy file contains no nodes")

    nodes: dict[str, ConceptNode] = {}
    by_term: dict[str, ConceptNode] = {}
    parent_of: dict[str, str] = {}
    roots: list[str] = []
    for node_id, parent_id, term in rows:
        if node_id in nodes:
            raise TaxonomyError(f"duplicate node id {node_id!r}")
        normalized = normalize_term(term)
        if not normalized:
            raise TaxonomyError(f"node {node_id!r} has an empty term")
        if normalized in by_term:
            raise TaxonomyError(f"duplicate term {normalized!r}")
        node = ConceptNode(term=normalized)
        nodes[node_id] = node
        by_term[normalized] = node
        if parent_id:
            parent_of[node_id] = parent_id
        else:
            roots.append(node_id)

    if len(roots) != 1:
        raise TaxonomyError(f"expected exactly one root, found {len(roots)}")

    for node_id, parent_id in parent_of.items():
        if parent_id not in nodes:
            raise TaxonomyError(
                f"node {nodes[node_id].term!r} references unknown parent id {parent_id!r}"
            )
        parent = nodes[parent_id]
        nodes[node_id].parent = parent
        parent.children.append(nodes[node_id])

    root = nodes[roots[0]]
    limit = len(nodes)
    for node in nodes.values():
        steps = 0
        current = node
        while current.parent is not None:
            current = current.parent
            steps += 1
            if steps > limit:
                raise TaxonomyError(f"cycle in parent links at term {node.term!r}")
        if current is not root:
            raise TaxonomyError(f"term {node.term!r} is not connected to the root")

    max_words = max(len(t.split(" ")) for t in by_term)
    return ConceptIndex(root=root, by_term=by_term, max_term_words=max_words)


def match_terms(
    sentence: Union[ParsedSentence, Sequence[Token]], index: ConceptIndex
) -> list[TermMatch]:
    """Greedy longest-match left-to-right keyword matching over token forms.

    Matches never overlap; each covers a contiguous token window of at most
    ``index.max_term_words`` tokens.  Results come back in sentence order.
    """
    tokens = getattr(sentence, "tokens", sentence)
    forms = [normalize_term(t.form) for t in tokens]
    matches: list[TermMatch] = []
    i = 0
    while i < len(tokens):
        found = None
        found_width = 0
        longest = min(index.max_term_words, len(tokens) - i)
        for width in range(longest, 0, -1):
            candidate = " ".join(forms[i : i + width])
            if candidate in index.by_term:
                found = TermMatch(candidate, tokens[i].index, tokens[i + width - 1].index)
                found_width = width
                break
        if found is not None:
            matches.append(found)
            i += found_width
        else:
            i += 1
    return matches


def generalize(term: str, index: ConceptIndex) -> Optional[str]:
    """Parent term of ``term``, or None for the root / unknown terms."""
    node = index.by_term.get(normalize_term(term))
    if node is None or node.parent is None:
        return None
    return node.parent.term
