/**
 * Client-side selection state.
 *
 * Invariants kept here rather than in the DOM:
 *   - chosen tags are always a subset of the current document's tags
 *   - loading a document (navigation included) clears the selection and any
 *     stale recommendations
 *   - only the most recently issued recommendation request may land; earlier
 *     responses that arrive late are dropped
 */

import { DocumentDetail, Recommendation } from "./api.js";

export class SelectionState {
  private doc: DocumentDetail | null = null;
  private available = new Set<string>();
  private chosen: string[] = [];
  private requestSeq = 0;

  baseline = false;
  recommendations: Recommendation[] | null = null;
  recommendationsAreBaseline = false;

  get document(): DocumentDetail | null {
    return this.doc;
  }

  get docId(): string | null {
    return this.doc ? this.doc.doc_id : null;
  }

  /** Chosen tag texts in the order they were picked. */
  get chosenTags(): readonly string[] {
    return this.chosen;
  }

  get canRecommend(): boolean {
    return this.doc !== null && this.chosen.length > 0;
  }

  /** Entering a document resets everything tied to the previous one. */
  setDocument(doc: DocumentDetail): void {
    this.doc = doc;
    this.available = new Set(
      doc.tag_groups.flatMap((group) => group.tags.map((tag) => tag.text)),
    );
    this.chosen = [];
    this.recommendations = null;
    this.recommendationsAreBaseline = false;
    this.requestSeq += 1; // in-flight responses for the old document are stale now
  }

  isChosen(text: string): boolean {
    return this.chosen.includes(text);
  }

  hasTag(text: string): boolean {
    return this.available.has(text);
  }

  toggleTag(text: string): void {
    if (!this.available.has(text)) {
      throw new RangeError(`tag not in current document: ${text}`);
    }
    const at = this.chosen.indexOf(text);
    if (at >= 0) {
      this.chosen.splice(at, 1);
    } else {
      this.chosen.push(text);
    }
  }

  clearSelection(): void {
    this.chosen = [];
  }

  /** Start a recommendation request; the returned token gates the response. */
  beginRequest(): number {
    this.requestSeq += 1;
    return this.requestSeq;
  }

  /**
   * Accept a response only when it belongs to the latest request.
   * Returns false when the response was stale and ignored.
   */
  applyRecommendations(token: number, results: Recommendation[], baseline: boolean): boolean {
    if (token !== this.requestSeq) {
      return false;
    }
    this.recommendations = results;
    this.recommendationsAreBaseline = baseline;
    return true;
  }
}
