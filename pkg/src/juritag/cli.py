"""Command-line pipeline: ingest -> tag -> index -> recommend -> serve.

Options resolve in three layers: built-in defaults, then a JSON config file
(--config), then explicit flags.  Every option can also come from an
environment variable named JURITAG_<COMMAND>_<PARAM> (click's auto-envvar
derivation), e.g. JURITAG_TAG_K=5 or JURITAG_TAG_MODES="hybrid dep_only".
"""

from __future__ import annotations

import dataclasses
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import click

from . import report
from .aspects import load_aspects, select_aspect_sentences
from .concept_tree import load_concept_tree
from .corpus import scan_corpus
from .embeddings import load_word_vectors
from .errors import JuritagError
from .recommender import build_index, load_index, rank_for_document, save_index
from .tagger import TagMode, tag_sentences

logger = logging.getLogger(__name__)

CONTEXT_SETTINGS = {
    "auto_envvar_prefix": "JURITAG",
    "help_option_names": ["-h", "--help"],
}

MODE_NAMES = tuple(mode.value for mode in TagMode)


@dataclass
class PipelineConfig:
    taxonomy: Optional[Path] = None
    embeddings: Optional[Path] = None
    aspects: Optional[Path] = None
    corpus: Optional[Path] = None
    index: Path = Path("index.json")
    k: int = 3
    mode: str = TagMode.HYBRID.value
    top_n: int = 5


_PATH_FIELDS = ("taxonomy", "embeddings", "aspects", "corpus", "index")


def resolve_config(config_path: Optional[Path], **overrides) -> PipelineConfig:
    """Merge defaults <- config file <- explicit flag values (None = unset)."""
    values = dataclasses.asdict(PipelineConfig())
    if config_path is not None:
        try:
            raw = json.loads(Path(config_path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise click.UsageError(f"cannot read config {config_path}: {exc}")
        if not isinstance(raw, dict):
            raise click.UsageError(f"config {config_path} must be a JSON object")
        unknown = sorted(set(raw) - set(values))
        if unknown:
            raise click.UsageError(f"unknown config keys: {', '.join(unknown)}")
        values.update(raw)
    for key, value in overrides.items():
        if value is not None:
            values[key] = value
    for key in _PATH_FIELDS:
        if values[key] is not None:
            values[key] = Path(values[key])
    cfg = PipelineConfig(**values)
    if cfg.k < 1:
        raise click.UsageError(f"k must be at least 1, got {cfg.k}")
    if cfg.top_n < 1:
        raise click.UsageError(f"top_n must be at least 1, got {cfg.top_n}")
    if cfg.mode not in MODE_NAMES:
        raise click.UsageError(f"mode must be one of {', '.join(MODE_NAMES)}")
    return cfg


def _require(cfg: PipelineConfig, *names: str) -> None:
    missing = [name for name in names if getattr(cfg, name) is None]
    if missing:
        raise click.UsageError(
            "missing required settings: "
            + ", ".join(f"--{name} (or config key '{name}')" for name in missing)
        )


def _config_option(fn):
    return click.option(
        "--config",
        type=click.Path(exists=True, dir_okay=False, path_type=Path),
        default=None,
        help="JSON config file with pipeline settings.",
    )(fn)


@click.group(context_settings=CONTEXT_SETTINGS)
def main():
    """Extract legally important phrase tags and recommend similar judgements."""
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")


@main.command()
@_config_option
@click.option("--corpus", type=click.Path(file_okay=False, path_type=Path), default=None,
              help="Directory of per-document .conllu files (+ .trees sidecars).")
def ingest(config, corpus):
    """Parse the corpus and report document/sentence counts."""
    cfg = resolve_config(config, corpus=corpus)
    _require(cfg, "corpus")
    with _cli_errors():
        scan = scan_corpus(cfg.corpus)
    for name, message in scan.errors:
        click.echo(f"warning: {name}: {message}", err=True)
    click.echo(
        f"{len(scan.documents)} documents, {scan.sentence_count} sentences, "
        f"{len(scan.errors)} files skipped"
    )
    if not scan.documents:
        raise click.ClickException("no loadable documents in corpus")


@main.command()
@_config_option
@click.option("--corpus", type=click.Path(file_okay=False, path_type=Path), default=None)
@click.option("--taxonomy", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.option("--embeddings", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.option("--aspects", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.option("--k", type=int, default=None, help="Aspect sentences per document.")
@click.option("--mode", "modes", multiple=True,
              type=click.Choice(MODE_NAMES + ("all",)),
              help="Generation mode; repeatable; 'all' runs every mode.")
@click.option("--out", type=click.Path(file_okay=False, path_type=Path),
              default=Path("report"), show_default=True,
              help="Report directory for tags.tsv, summary.tsv, tags_by_mode.png.")
def tag(config, corpus, taxonomy, embeddings, aspects, k, modes, out):
    """Generate tags and write the tag file, summary table, and chart."""
    cfg = resolve_config(config, corpus=corpus, taxonomy=taxonomy,
                         embeddings=embeddings, aspects=aspects, k=k)
    _require(cfg, "corpus", "taxonomy", "embeddings", "aspects")
    mode_list = list(MODE_NAMES) if "all" in modes else list(dict.fromkeys(modes))
    if not mode_list:
        mode_list = [cfg.mode]

    with _cli_errors():
        concepts, store, aspect_list = _load_shared(cfg)
        scan = scan_corpus(cfg.corpus)
        if not scan.documents:
            raise click.ClickException("no loadable documents in corpus")
        # aspect selection does not depend on the mode, so compute it once
        selections = {
            doc.id: select_aspect_sentences(doc, aspect_list, store, k=cfg.k)
            for doc in scan.documents
        }
        tags_by_mode = {}
        for mode in mode_list:
            mode_tags = []
            for doc in scan.documents:
                mode_tags.extend(
                    tag_sentences(doc, selections[doc.id], concepts, mode=TagMode(mode))
                )
            tags_by_mode[mode] = mode_tags

    all_tags = [tag_ for tags in tags_by_mode.values() for tag_ in tags]
    rows = report.summarize_modes(tags_by_mode, len(scan.documents))
    out.mkdir(parents=True, exist_ok=True)
    report.write_tag_file(all_tags, out / "tags.tsv")
    report.write_summary(rows, out / "summary.tsv")
    report.render_mode_chart(rows, out / "tags_by_mode.png")
    click.echo(report.format_summary(rows), nl=False)
    click.echo(f"wrote {out / 'tags.tsv'}, {out / 'summary.tsv'}, {out / 'tags_by_mode.png'}")


@main.command(name="index")
@_config_option
@click.option("--corpus", type=click.Path(file_okay=False, path_type=Path), default=None)
@click.option("--taxonomy", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.option("--embeddings", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.option("--aspects", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.option("--k", type=int, default=None)
@click.option("--mode", type=click.Choice(MODE_NAMES), default=None)
@click.option("--index", "index_path", type=click.Path(dir_okay=False, path_type=Path),
              default=None, help="Output index file.")
def build(config, corpus, taxonomy, embeddings, aspects, k, mode, index_path):
    """Run the full pipeline and persist the corpus index."""
    cfg = resolve_config(config, corpus=corpus, taxonomy=taxonomy, embeddings=embeddings,
                         aspects=aspects, k=k, mode=mode, index=index_path)
    _require(cfg, "corpus", "taxonomy", "embeddings", "aspects")
    with _cli_errors():
        concepts, store, aspect_list = _load_shared(cfg)
        scan = scan_corpus(cfg.corpus)
        if not scan.documents:
            raise click.ClickException("no loadable documents in corpus")
        items = []
        for doc in scan.documents:
            selections = select_aspect_sentences(doc, aspect_list, store, k=cfg.k)
            tags = tag_sentences(doc, selections, concepts, mode=TagMode(cfg.mode))
            items.append((doc, tags, selections))
        corpus_index = build_index(items, store, mode=TagMode(cfg.mode))
        save_index(corpus_index, cfg.index)
    click.echo(f"indexed {len(corpus_index)} documents -> {cfg.index}")


@main.command()
@_config_option
@click.option("--embeddings", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.option("--index", "index_path", type=click.Path(dir_okay=False, path_type=Path),
              default=None)
@click.option("--doc", "doc_id", required=True, help="Document whose tags were selected.")
@click.option("--tag", "tags", multiple=True, required=True,
              help="Selected tag text; repeatable.")
@click.option("--top-n", type=int, default=None)
@click.option("--baseline", is_flag=True, default=False,
              help="Compare against whole-document embeddings instead of tags.")
def recommend(config, embeddings, index_path, doc_id, tags, top_n, baseline):
    """Print ranked similar judgements for a tag selection."""
    cfg = resolve_config(config, embeddings=embeddings, index=index_path, top_n=top_n)
    _require(cfg, "embeddings")
    with _cli_errors():
        store = load_word_vectors(cfg.embeddings)
        corpus_index = load_index(cfg.index)
        results = rank_for_document(
            corpus_index, store, doc_id, list(tags), top_n=cfg.top_n, baseline=baseline
        )
    arm = "full-text baseline" if baseline else "tag-based"
    click.echo(f"{arm} recommendations for {doc_id}:")
    for rank, rec in enumerate(results, start=1):
        click.echo(f"{rank}. {rec.doc_id}\tscore={rec.score:.6f}")
        for match in rec.per_tag_scores:
            target = match.best_match if match.best_match is not None else "(full text)"
            click.echo(f"   {match.selected} -> {target} ({match.similarity:.6f})")


@main.command()
@_config_option
@click.option("--embeddings", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.option("--index", "index_path", type=click.Path(dir_okay=False, path_type=Path),
              default=None)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(config, embeddings, index_path, host, port):
    """Serve the HTTP API over a prebuilt index."""
    import uvicorn

    from .service import create_app

    cfg = resolve_config(config, embeddings=embeddings, index=index_path)
    _require(cfg, "embeddings")
    with _cli_errors():
        store = load_word_vectors(cfg.embeddings)
        corpus_index = load_index(cfg.index)
    app = create_app(corpus_index, store)
    uvicorn.run(app, host=host, port=port)


def _load_shared(cfg: PipelineConfig):
    concepts = load_concept_tree(cfg.taxonomy)
    store = load_word_vectors(cfg.embeddings)
    aspect_list = load_aspects(cfg.aspects)
    return concepts, store, aspect_list


class _cli_errors:
    """Convert library errors into clean CLI failures (message, exit code 1)."""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is not None and issubclass(exc_type, JuritagError):
            raise click.ClickException(str(exc))
        return False


if __name__ == "__main__":
    main()
