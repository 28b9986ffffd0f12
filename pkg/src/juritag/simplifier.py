"""Split complex/compound sentences into simple ones via the constituency tree.

Target: one subject-verb pair per output.  Three splitting rules, applied
top-down and recursively:

  R1  an S whose children include two or more S/VP conjuncts joined by CC
      splits into one output per conjunct; a conjunct without its own
      subject is prefixed with the shared subject NP;
  R2  coordinated VPs under a single subject split into one output per VP
      with the subject copied;
  R3  an SBAR introduced by a subordinating conjunction (IN) is detached
      as its own output, with the subordinator dropped;
  R4  guard: a CC never splits a proper-name coordination such as
      "Johnson and Johnson" (all conjunct siblings NNP/NNPS, or an NP
      headed by NNP).

Splitting is purely syntactic; coordination the parser mis-bracketed
(gerunds under PP and the like) passes through unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import DocumentError
from .parse_model import ConstituencyNode, DependencyGraph, ParsedSentence, Token, unwrap_root

CLAUSE_LABELS = {"S"}
_PUNCT_LABELS = {",", ".", ":", "``", "''"}


@dataclass(frozen=True)
class SimpleSentence:
    """An ordered subset of one sentence's tokens, original indices kept."""

    tokens: tuple[Token, ...]
    source: ParsedSentence

    def __post_init__(self):
        if not self.tokens:
            raise DocumentError("simple sentence has no tokens")
        indices = [t.index for t in self.tokens]
        if any(b <= a for a, b in zip(indices, indices[1:])):
            raise DocumentError("simple sentence token indices must be strictly increasing")

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(t.index for t in self.tokens)

    @property
    def text(self) -> str:
        return " ".join(t.form for t in self.tokens)


def simplify(sentence: ParsedSentence) -> list[SimpleSentence]:
    """Split ``sentence`` into simple sentences; unsplittable input returns itself."""
    if sentence.tree is None:
        raise DocumentError("simplify requires a constituency tree")
    root = unwrap_root(sentence.tree)
    pieces = [p for p in _split_clause(root, ()) if p]
    seen = set()
    ordered = []
    for piece in sorted(pieces):
        if piece not in seen:
            seen.add(piece)
            ordered.append(piece)
    if not ordered:
        ordered = [tuple(t.index for t in sentence.tokens)]
    return [
        SimpleSentence(tokens=tuple(sentence.token(i) for i in piece), source=sentence)
        for piece in ordered
    ]


def count_subject_verb_pairs(tokens: Iterable[Token], deps: DependencyGraph) -> int:
    """Distinct nsubj/nsubj:pass edges with both endpoints inside the fragment."""
    present = {t.index for t in tokens}
    return sum(
        1
        for edge in deps.edges
        if edge.base == "nsubj" and edge.dependent in present and edge.head in present
    )


def _span_indices(node: ConstituencyNode) -> range:
    return range(node.span[0], node.span[1] + 1)


def _split_clause(node: ConstituencyNode, shared_subject: tuple[int, ...]) -> list[tuple[int, ...]]:
    site = _coordination_site(node)
    if site is not None:
        subject, parts = site
        results = []
        for part in parts:
            subj = () if _has_own_subject(part) else (subject or shared_subject)
            results.extend(_split_clause(part, subj))
        return results

    sbars = _detachable_sbars(node)
    if sbars:
        results = []
        excluded: set[int] = set()
        for sbar, subordinator in sbars:
            excluded.update(_span_indices(sbar))
            results.extend(_detach_sbar(sbar, subordinator))
        main = sorted(set(shared_subject) | (set(_span_indices(node)) - excluded))
        return [tuple(main)] + results

    return [tuple(sorted(set(shared_subject) | set(_span_indices(node))))]


def _detach_sbar(sbar: ConstituencyNode, subordinator: ConstituencyNode) -> list[tuple[int, ...]]:
    inner = [c for c in sbar.children if c is not subordinator and c.label not in _PUNCT_LABELS]
    if len(inner) == 1 and inner[0].label in CLAUSE_LABELS:
        return _split_clause(inner[0], ())
    indices = sorted(set(_span_indices(sbar)) - set(_span_indices(subordinator)))
    return [tuple(indices)] if indices else []


def _coordination_site(
    node: ConstituencyNode,
) -> Optional[tuple[tuple[int, ...], list[ConstituencyNode]]]:
    """Find S/VP conjuncts at this node (R1) or inside its VP child (R2)."""
    parts = _conjunct_children(node)
    if parts:
        return _subject_before(node, parts[0]), parts
    if node.label in CLAUSE_LABELS:
        for child in node.children:
            if child.label == "VP":
                inner = _conjunct_children(child)
                if inner:
                    return _subject_before(node, child), inner
    return None


def _conjunct_children(node: ConstituencyNode) -> list[ConstituencyNode]:
    children = node.children
    cc_positions = [i for i, c in enumerate(children) if c.label == "CC"]
    if not cc_positions or _proper_name_coordination(node):
        return []
    conjuncts = [c for c in children if c.label in CLAUSE_LABELS | {"VP"} and not c.is_leaf]
    if len(conjuncts) < 2:
        return []
    first = children.index(conjuncts[0])
    last = children.index(conjuncts[-1])
    if not any(first < i < last for i in cc_positions):
        return []
    return conjuncts


def _proper_name_coordination(node: ConstituencyNode) -> bool:
    """R4: true when a CC coordinates proper names rather than clauses."""
    siblings = [c for c in node.children if c.label != "CC" and c.label not in _PUNCT_LABELS]
    if siblings and all(c.label in ("NNP", "NNPS") for c in siblings):
        return True
    if node.label == "NP":
        leaves = list(node.leaves())
        if leaves and leaves[-1].label in ("NNP", "NNPS"):
            return True
    return False


def _subject_before(node: ConstituencyNode, boundary: ConstituencyNode) -> tuple[int, ...]:
    """Token indices of the nearest NP sibling preceding ``boundary``."""
    subject = None
    for child in node.children:
        if child is boundary:
            break
        if child.label == "NP":
            subject = child
    return tuple(_span_indices(subject)) if subject is not None else ()


def _has_own_subject(part: ConstituencyNode) -> bool:
    if part.label not in CLAUSE_LABELS:
        return False
    seen_np = False
    for child in part.children:
        if child.label == "NP":
            seen_np = True
        if child.label == "VP":
            return seen_np
    return seen_np


def _detachable_sbars(
    node: ConstituencyNode,
) -> list[tuple[ConstituencyNode, ConstituencyNode]]:
    found = []

    def visit(n: ConstituencyNode) -> None:
        for child in n.children:
            if child.label == "SBAR":
                sub = _subordinator(child)
                if sub is not None:
                    found.append((child, sub))
                    continue
            visit(child)

    visit(node)
    return found


def _subordinator(sbar: ConstituencyNode) -> Optional[ConstituencyNode]:
    for child in sbar.children:
        if child.label in _PUNCT_LABELS:
            continue
        return child if child.label == "IN" else None
    return None
