"""Tagging reports: the delimited tag file, per-mode averages, and a chart."""

from __future__ import annotations

from pathlib import Path
from typing import IO, Mapping, NamedTuple, Sequence, Union

import matplotlib

matplotlib.use("Agg")  # render to files only, no display required

import matplotlib.pyplot as plt

from .tagger import Tag

TAG_COLUMNS = ("doc_id", "sentence_index", "aspect", "mode", "matched_term", "text")

Target = Union[str, Path, IO[str]]


class ModeSummary(NamedTuple):
    mode: str
    tag_count: int
    document_count: int
    average: float


def format_tag_file(tags: Sequence[Tag]) -> str:
    """Tab-separated tag records with a header row.

    Fields never contain tabs: CoNLL-U forms are tab-delimited at the source
    and tag texts are space-joined forms.
    """
    lines = ["\t".join(TAG_COLUMNS)]
    for tag in tags:
        lines.append(
            "\t".join(
                (
                    tag.doc_id,
                    str(tag.sentence_index),
                    tag.aspect,
                    tag.mode.value,
                    tag.matched_term,
                    tag.text,
                )
            )
        )
    return "\n".join(lines) + "\n"


def write_tag_file(tags: Sequence[Tag], target: Target) -> None:
    _write(format_tag_file(tags), target)


def summarize_modes(
    tags_by_mode: Mapping[str, Sequence[Tag]], document_count: int
) -> list[ModeSummary]:
    """One row per mode, in the mapping's order: counts and per-document average."""
    rows = []
    for mode, tags in tags_by_mode.items():
        count = len(tags)
        average = count / document_count if document_count else 0.0
        rows.append(ModeSummary(mode, count, document_count, average))
    return rows


def format_summary(rows: Sequence[ModeSummary]) -> str:
    lines = ["\t".join(("mode", "tags", "documents", "avg_tags_per_doc"))]
    for row in rows:
        lines.append(
            "\t".join((row.mode, str(row.tag_count), str(row.document_count), f"{row.average:.2f}"))
        )
    return "\n".join(lines) + "\n"


def write_summary(rows: Sequence[ModeSummary], target: Target) -> None:
    _write(format_summary(rows), target)


def render_mode_chart(rows: Sequence[ModeSummary], path: Union[str, Path]) -> None:
    """Bar chart of average tags per document by mode, written as PNG."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    modes = [row.mode for row in rows]
    averages = [row.average for row in rows]
    bars = ax.bar(modes, averages, color="#4878a8")
    ax.set_ylabel("average tags per document")
    ax.set_title("Tag yield by generation mode")
    ax.bar_label(bars, fmt="%.2f", padding=2)
    ax.margins(y=0.15)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _write(text: str, target: Target) -> None:
    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        target.write(text)
