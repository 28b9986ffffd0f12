/**
 * DOM builders for the two main views.
 *
 * All builders render into a given root element and reach the document via
 * root.ownerDocument, so they work unchanged under jsdom.  Scores are taken
 * verbatim from API responses: the visible text is a fixed 6-decimal
 * rendering and the raw value is kept on data-score.
 */

import { DocumentDetail, DocumentSummary, Recommendation, TagGroup } from "./api.js";
import { SelectionState } from "./state.js";

export interface DocumentHandlers {
  onToggleTag: (text: string) => void;
  onRecommend: () => void;
  onToggleBaseline: (flag: boolean) => void;
}

export interface RecommendationHandlers {
  onOpen: (docId: string) => void;
}

export function formatScore(value: number): string {
  return value.toFixed(6);
}

function el<K extends keyof HTMLElementTagNameMap>(
  root: Element,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = root.ownerDocument.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function clear(root: Element): void {
  while (root.firstChild) root.removeChild(root.firstChild);
}

function groupByAspect(groups: TagGroup[]): Map<string, TagGroup[]> {
  const byAspect = new Map<string, TagGroup[]>();
  for (const group of groups) {
    const bucket = byAspect.get(group.aspect);
    if (bucket) {
      bucket.push(group);
    } else {
      byAspect.set(group.aspect, [group]);
    }
  }
  return byAspect;
}

export function renderDocumentList(
  root: Element,
  docs: DocumentSummary[],
  onOpen: (docId: string) => void,
): void {
  clear(root);
  const heading = el(root, "h2", undefined, "Judgements");
  root.appendChild(heading);
  const list = el(root, "ul", "doc-list");
  for (const doc of docs) {
    const item = el(list, "li", "doc-list-item");
    const link = el(item, "a", "doc-link", `${doc.title} (${doc.doc_id})`);
    link.setAttribute("href", `#/doc/${encodeURIComponent(doc.doc_id)}`);
    link.dataset.docId = doc.doc_id;
    link.addEventListener("click", () => onOpen(doc.doc_id));
    item.appendChild(link);
    item.appendChild(el(item, "span", "tag-count", ` ${doc.tag_count} tags`));
    list.appendChild(item);
  }
  root.appendChild(list);
}

export function renderDocumentView(
  root: Element,
  doc: DocumentDetail,
  state: SelectionState,
  handlers: DocumentHandlers,
): void {
  clear(root);
  root.appendChild(el(root, "h2", "doc-title", doc.metadata["title"] ?? doc.doc_id));

  const meta = el(root, "dl", "doc-metadata");
  for (const [key, value] of Object.entries(doc.metadata)) {
    meta.appendChild(el(meta, "dt", undefined, key));
    meta.appendChild(el(meta, "dd", undefined, value));
  }
  root.appendChild(meta);

  const sentenceSection = el(root, "section", "aspect-sentences");
  sentenceSection.appendChild(el(sentenceSection, "h3", undefined, "Selected sentences"));
  const byAspect = new Map<string, string[]>();
  for (const entry of doc.aspect_sentences) {
    const bucket = byAspect.get(entry.aspect) ?? [];
    bucket.push(entry.text);
    byAspect.set(entry.aspect, bucket);
  }
  for (const [aspect, texts] of byAspect) {
    const block = el(sentenceSection, "div", "aspect-block");
    block.dataset.aspect = aspect;
    block.appendChild(el(block, "h4", "aspect-name", aspect));
    const list = el(block, "ul");
    for (const text of texts) {
      list.appendChild(el(list, "li", "aspect-sentence", text));
    }
    block.appendChild(list);
    sentenceSection.appendChild(block);
  }
  root.appendChild(sentenceSection);

  const tagSection = el(root, "section", "tags");
  tagSection.appendChild(el(tagSection, "h3", undefined, "Tags"));
  if (doc.tag_groups.length === 0) {
    tagSection.appendChild(
      el(tagSection, "p", "empty-state", "No tags were extracted for this judgement."),
    );
  } else {
    for (const [aspect, groups] of groupByAspect(doc.tag_groups)) {
      const block = el(tagSection, "div", "tag-aspect-block");
      block.dataset.aspect = aspect;
      block.appendChild(el(block, "h4", "aspect-name", aspect));
      for (const group of groups) {
        for (const tag of group.tags) {
          const chip = el(block, "button", "tag-chip", tag.text);
          chip.type = "button";
          chip.dataset.tag = tag.text;
          chip.dataset.mode = group.mode;
          if (state.isChosen(tag.text)) chip.classList.add("selected");
          chip.addEventListener("click", () => handlers.onToggleTag(tag.text));
          block.appendChild(chip);
        }
      }
      tagSection.appendChild(block);
    }
  }
  root.appendChild(tagSection);

  const controls = el(root, "div", "recommend-controls");
  const button = el(controls, "button", "recommend-button", "Recommend similar judgements");
  button.type = "button";
  button.disabled = !state.canRecommend;
  button.addEventListener("click", () => handlers.onRecommend());
  controls.appendChild(button);

  const label = el(controls, "label", "baseline-toggle");
  const box = el(label, "input") as HTMLInputElement;
  box.type = "checkbox";
  box.checked = state.baseline;
  box.addEventListener("change", () => handlers.onToggleBaseline(box.checked));
  label.appendChild(box);
  label.appendChild(el(label, "span", undefined, "full-text baseline"));
  controls.appendChild(label);
  root.appendChild(controls);
}

export function renderRecommendations(
  root: Element,
  results: Recommendation[],
  baseline: boolean,
  handlers: RecommendationHandlers,
): void {
  clear(root);
  const heading = el(root, "h3", undefined, "Similar judgements");
  root.appendChild(heading);
  if (baseline) {
    root.appendChild(el(root, "span", "mode-badge", "baseline: full-text vector"));
  }
  if (results.length === 0) {
    root.appendChild(el(root, "p", "empty-state", "No other judgements to compare against."));
    return;
  }
  const list = el(root, "ol", "recommendation-list");
  for (const rec of results) {
    const card = el(list, "li", "recommendation-card");
    card.dataset.docId = rec.doc_id;
    card.dataset.score = String(rec.score);
    const title = el(card, "a", "card-title", `${rec.title} (${rec.doc_id})`);
    title.setAttribute("href", `#/doc/${encodeURIComponent(rec.doc_id)}`);
    title.addEventListener("click", () => handlers.onOpen(rec.doc_id));
    card.appendChild(title);
    card.appendChild(el(card, "span", "card-score", formatScore(rec.score)));
    const detail = el(card, "ul", "per-tag");
    for (const match of rec.per_tag_scores) {
      const text =
        match.best_match === null
          ? `${match.selected} ~ (full text) (${formatScore(match.similarity)})`
          : `${match.selected} ~ ${match.best_match} (${formatScore(match.similarity)})`;
      detail.appendChild(el(detail, "li", "per-tag-match", text));
    }
    card.appendChild(detail);
    list.appendChild(card);
  }
  root.appendChild(list);
}

export function renderNotFound(root: Element, docId: string): void {
  clear(root);
  root.appendChild(el(root, "h2", "not-found", "Document not found"));
  root.appendChild(
    el(root, "p", undefined, `No judgement with id ${docId} exists in this corpus.`),
  );
}

export function renderErrorBanner(root: Element, message: string, onRetry: () => void): void {
  clear(root);
  const banner = el(root, "div", "error-banner");
  banner.appendChild(el(banner, "span", "error-message", message));
  const retry = el(banner, "button", "retry-button", "Retry");
  retry.type = "button";
  retry.addEventListener("click", () => onRetry());
  banner.appendChild(retry);
  root.appendChild(banner);
}

export function renderNotice(root: Element, message: string): void {
  clear(root);
  root.appendChild(el(root, "div", "notice", message));
}
