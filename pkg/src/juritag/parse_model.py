"""Token / dependency-graph / constituency-tree data model and readers.

Dependencies arrive as CoNLL-U (enhanced relations taken from the DEPS
column when present, otherwise HEAD/DEPREL); constituency trees arrive as
Penn-Treebank-style bracketed strings.  All types are immutable after
construction and safe to share across threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, TextIO

from .errors import BracketParseError, ConlluParseError, CycleError, DocumentError

_MULTIWORD_ID = re.compile(r"^\d+-\d+$")
_EMPTY_NODE_ID = re.compile(r"^\d+\.\d+$")

CONLLU_COLUMNS = 10


@dataclass(frozen=True)
class Token:
    """One surface token with its 1-based sentence position and PTB POS tag."""

    index: int
    form: str
    pos: str

    def __post_init__(self):
        if self.index < 1:
            raise DocumentError(f"token index must be >= 1, got {self.index}")
        if not self.form:
            raise DocumentError(f"token {self.index} has an empty form")


@dataclass(frozen=True)
class DepEdge:
    """A dependency edge; head 0 denotes the artificial root.

    The relation may carry lexical material after a colon (``nmod:of``,
    ``conj:and``); :attr:`base` and :attr:`suffix` split it.
    """

    head: int
    dependent: int
    relation: str

    def __post_init__(self):
        if self.dependent < 1 or self.head < 0:
            raise DocumentError(f"bad edge endpoints ({self.head}, {self.dependent})")
        if self.head == self.dependent:
            raise DocumentError(f"self-edge at token {self.dependent}")
        if not self.relation:
            raise DocumentError(f"empty relation on edge to token {self.dependent}")

    @property
    def base(self) -> str:
        return self.relation.split(":", 1)[0]

    @property
    def suffix(self) -> Optional[str]:
        parts = self.relation.split(":", 1)
        return parts[1] if len(parts) == 2 and parts[1] else None


class DependencyGraph:
    """Set of dependency edges over one sentence; tokens may have several heads."""

    __slots__ = ("edges", "_by_dependent")

    def __init__(self, edges: Iterable[DepEdge]):
        self.edges: frozenset[DepEdge] = frozenset(edges)
        by_dep: dict[int, list[DepEdge]] = {}
        for edge in self.edges:
            by_dep.setdefault(edge.dependent, []).append(edge)
        for dep_edges in by_dep.values():
            dep_edges.sort(key=lambda e: (e.head, e.relation))
        self._by_dependent = by_dep

    def edges_for(self, dependent: int) -> tuple[DepEdge, ...]:
        """All edges whose dependent is the given token, sorted deterministically."""
        return tuple(self._by_dependent.get(dependent, ()))

    def dependents(self) -> frozenset[int]:
        return frozenset(self._by_dependent)

    def find_cycle_token(self) -> Optional[int]:
        """Return a token on some head-chain cycle, or None if acyclic."""
        WHITE, GREY, BLACK = 0, 1, 2
        color = {tok: WHITE for tok in self._by_dependent}
        for start in sorted(self._by_dependent):
            if color[start] != WHITE:
                continue
            stack = [(start, iter(self.edges_for(start)))]
            color[start] = GREY
            while stack:
                node, edges = stack[-1]
                advanced = False
                for edge in edges:
                    head = edge.head
                    if head == 0 or head not in color:
                        continue
                    if color[head] == GREY:
                        return head
                    if color[head] == WHITE:
                        color[head] = GREY
                        stack.append((head, iter(self.edges_for(head))))
                        advanced = True
                        break
                if not advanced:
                    color[node] = BLACK
                    stack.pop()
        return None

    def __eq__(self, other):
        return isinstance(other, DependencyGraph) and self.edges == other.edges

    def __hash__(self):
        return hash(self.edges)

    def __len__(self):
        return len(self.edges)

    def __repr__(self):
        return f"DependencyGraph({len(self.edges)} edges)"


def prune_acl_edges(deps: DependencyGraph) -> DependencyGraph:
    """Drop every edge whose relation is ``acl`` or starts with ``acl:``.

    Those relations re-enter the clause they modify and create cycles, so
    removing them must leave the graph acyclic; a residual cycle means the
    input was malformed and raises :class:`CycleError`.
    """
    kept = [e for e in deps.edges if e.base != "acl"]
    pruned = DependencyGraph(kept)
    offender = pruned.find_cycle_token()
    if offender is not None:
        raise CycleError(offender)
    return pruned


@dataclass(frozen=True)
class ConstituencyNode:
    """A constituency-tree node; leaves carry the word in :attr:`form`."""

    label: str
    children: tuple["ConstituencyNode", ...]
    span: tuple[int, int]
    form: Optional[str] = None

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def leaves(self) -> Iterator["ConstituencyNode"]:
        if self.is_leaf:
            yield self
        else:
            for child in self.children:
                yield from child.leaves()

    def walk(self) -> Iterator["ConstituencyNode"]:
        yield self
        for child in self.children:
            yield from child.walk()

    def covers(self, start: int, end: int) -> bool:
        return self.span[0] <= start and end <= self.span[1]

    def __repr__(self):
        if self.is_leaf:
            return f"({self.label} {self.form})"
        return f"({self.label} [{self.span[0]},{self.span[1]}])"


@dataclass(frozen=True)
class SentenceFragment:
    """One CoNLL-U sentence block: tokens and dependencies, plus comments.

    ``constituency`` holds the raw bracketed string from an inline
    ``# constituency = ...`` comment, if any.
    """

    tokens: tuple[Token, ...]
    deps: DependencyGraph
    text: Optional[str] = None
    constituency: Optional[str] = None
    comments: Mapping[str, str] = field(default_factory=dict)

    def joined_text(self) -> str:
        return self.text if self.text else " ".join(t.form for t in self.tokens)


@dataclass(frozen=True)
class ParsedSentence:
    """A fully assembled sentence: tokens, dependency graph, optional tree."""

    tokens: tuple[Token, ...]
    deps: DependencyGraph
    tree: Optional[ConstituencyNode]
    text: str

    def __post_init__(self):
        n = len(self.tokens)
        if n == 0:
            raise DocumentError("sentence has no tokens")
        for expected, token in enumerate(self.tokens, start=1):
            if token.index != expected:
                raise DocumentError(
                    f"token indices not contiguous: expected {expected}, got {token.index}"
                )
        for edge in self.deps.edges:
            if edge.dependent > n or edge.head > n:
                raise DocumentError(
                    f"dependency edge ({edge.head}, {edge.dependent}) outside 1..{n}"
                )
        if self.tree is not None and self.tree.span != (1, n):
            raise DocumentError(
                f"constituency span {self.tree.span} does not cover tokens 1..{n}"
            )

    def token(self, index: int) -> Token:
        return self.tokens[index - 1]


@dataclass(frozen=True)
class Document:
    """An ingested judgement: id, parsed sentences, optional metadata."""

    id: str
    sentences: tuple[ParsedSentence, ...]
    metadata: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.id:
            raise DocumentError("document id must be non-empty")
        if not self.sentences:
            raise DocumentError(f"document {self.id!r} has no sentences")

    @property
    def text(self) -> str:
        return " ".join(s.text for s in self.sentences)


def _parse_deps_column(value: str, line_number: int) -> Optional[list[tuple[int, str]]]:
    """Parse the DEPS column into (head, relation) pairs; None when absent."""
    if value in ("_", ""):
        return None
    pairs = []
    for item in value.split("|"):
        head_str, sep, relation = item.partition(":")
        if not sep or not relation:
            raise ConlluParseError(f"malformed DEPS item {item!r}", line_number)
        if _EMPTY_NODE_ID.match(head_str):
            continue  # reference to an empty node; those tokens are skipped
        if not head_str.isdigit():
            raise ConlluParseError(f"non-numeric head {head_str!r} in DEPS", line_number)
        pairs.append((int(head_str), relation))
    return pairs


def read_conllu(stream: TextIO) -> list[SentenceFragment]:
    """Read CoNLL-U sentence blocks into fragments (tokens + dependency edges).

    Multiword-token ranges (ids like ``3-4``) and empty nodes (``5.1``) are
    skipped.  Enhanced relations come from DEPS when present for a token,
    else from HEAD/DEPREL.
    """
    fragments: list[SentenceFragment] = []
    tokens: list[Token] = []
    edges: list[DepEdge] = []
    comments: dict[str, str] = {}

    def flush():
        nonlocal tokens, edges, comments
        if not tokens:
            comments = {}
            return
        text = comments.pop("text", None)
        constituency = comments.pop("constituency", None)
        fragments.append(
            SentenceFragment(
                tokens=tuple(tokens),
                deps=DependencyGraph(edges),
                text=text,
                constituency=constituency,
                comments=dict(comments),
            )
        )
        tokens, edges, comments = [], [], {}

    for line_number, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            flush()
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].partition("=")
            if sep:
                comments[key.strip()] = value.strip()
            continue
        fields = line.split("\t")
        if len(fields) != CONLLU_COLUMNS:
            raise ConlluParseError(
                f"expected {CONLLU_COLUMNS} tab-separated columns, got {len(fields)}",
                line_number,
            )
        token_id = fields[0]
        if _MULTIWORD_ID.match(token_id) or _EMPTY_NODE_ID.match(token_id):
            continue
        if not token_id.isdigit():
            raise ConlluParseError(f"bad token id {token_id!r}", line_number)
        index = int(token_id)
        tokens.append(Token(index=index, form=fields[1], pos=fields[4]))
        deps_pairs = _parse_deps_column(fields[8], line_number)
        if deps_pairs is None:
            head_str, deprel = fields[6], fields[7]
            if not head_str.isdigit():
                raise ConlluParseError(f"non-numeric head {head_str!r}", line_number)
            deps_pairs = [(int(head_str), deprel)]
        for head, relation in deps_pairs:
            edges.append(DepEdge(head=head, dependent=index, relation=relation))
    flush()
    return fragments


def write_conllu(fragments: Iterable[SentenceFragment], stream: TextIO) -> None:
    """Serialize fragments back to CoNLL-U (edges via the DEPS column)."""
    for fragment in fragments:
        if fragment.text is not None:
            stream.write(f"# text = {fragment.text}\n")
        if fragment.constituency is not None:
            stream.write(f"# constituency = {fragment.constituency}\n")
        for key in sorted(fragment.comments):
            stream.write(f"# {key} = {fragment.comments[key]}\n")
        for token in fragment.tokens:
            edges = fragment.deps.edges_for(token.index)
            deps_col = "|".join(f"{e.head}:{e.relation}" for e in edges) or "_"
            head, deprel = (edges[0].head, edges[0].relation) if edges else (0, "dep")
            stream.write(
                "\t".join(
                    (
                        str(token.index),
                        token.form,
                        "_",
                        "_",
                        token.pos,
                        "_",
                        str(head),
                        deprel,
                        deps_col,
                        "_",
                    )
                )
                + "\n"
            )
        stream.write("\n")


class _BracketScanner:
    """Tokenizer over a bracketed-tree string tracking character offsets."""

    def __init__(self, source: str):
        self.source = source
        self.pos = 0

    def next_token(self) -> Optional[tuple[str, int]]:
        src = self.source
        while self.pos < len(src) and src[self.pos].isspace():
            self.pos += 1
        if self.pos >= len(src):
            return None
        start = self.pos
        ch = src[start]
        if ch in "()":
            self.pos += 1
            return ch, start
        while self.pos < len(src) and not src[self.pos].isspace() and src[self.pos] not in "()":
            self.pos += 1
        return src[start : self.pos], start


def read_bracketed(source: str) -> ConstituencyNode:
    """Parse one Penn-Treebank-style bracketed tree.

    Leaf token positions are assigned left to right starting at 1; every
    internal span is the union of its children's spans.
    """
    scanner = _BracketScanner(source)
    first = scanner.next_token()
    if first is None:
        raise BracketParseError("empty input", 0)
    if first[0] != "(":
        raise BracketParseError(f"expected '(', got {first[0]!r}", first[1])
    counter = [0]
    node = _parse_node(scanner, first[1], counter)
    trailing = scanner.next_token()
    if trailing is not None:
        raise BracketParseError(f"trailing content {trailing[0]!r}", trailing[1])
    return node


def _parse_node(scanner: _BracketScanner, open_offset: int, counter: list[int]) -> ConstituencyNode:
    tok = scanner.next_token()
    if tok is None:
        raise BracketParseError("unclosed '('", open_offset)
    label = ""
    if tok[0] not in ("(", ")"):
        label = tok[0]
        tok = scanner.next_token()

    children: list[ConstituencyNode] = []
    words: list[str] = []
    while True:
        if tok is None:
            raise BracketParseError("unclosed '('", open_offset)
        text, offset = tok
        if text == ")":
            break
        if text == "(":
            children.append(_parse_node(scanner, offset, counter))
        else:
            words.append(text)
        tok = scanner.next_token()

    if words and children:
        raise BracketParseError("node mixes words and sub-constituents", open_offset)
    if len(words) > 1:
        raise BracketParseError("leaf node with more than one word", open_offset)
    if words:
        counter[0] += 1
        pos = counter[0]
        return ConstituencyNode(label=label, children=(), span=(pos, pos), form=words[0])
    if not children:
        raise BracketParseError("empty constituent", open_offset)
    span = (children[0].span[0], children[-1].span[1])
    return ConstituencyNode(label=label, children=tuple(children), span=span)


def unwrap_root(tree: ConstituencyNode) -> ConstituencyNode:
    """Strip ROOT/TOP/empty-label unary wrappers around the clause node."""
    node = tree
    while len(node.children) == 1 and node.label in ("", "ROOT", "TOP"):
        node = node.children[0]
    return node
