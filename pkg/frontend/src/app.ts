/**
 * Wiring between the API client, the selection state, and the renderers.
 *
 * openDocument and runRecommendation carry the behavior the UI promises:
 * navigation clears the selection, stale responses never overwrite newer
 * ones, and a 422 (foreign tags) resets the selection before surfacing.
 */

import { ApiClient, ApiError, DocumentDetail } from "./api.js";
import { SelectionState } from "./state.js";
import {
  renderDocumentList,
  renderDocumentView,
  renderErrorBanner,
  renderNotFound,
  renderNotice,
  renderRecommendations,
} from "./render.js";

/** Load a document and make it current; the selection is cleared by setDocument. */
export async function openDocument(
  client: ApiClient,
  state: SelectionState,
  docId: string,
): Promise<DocumentDetail> {
  const doc = await client.getDocument(docId);
  state.setDocument(doc);
  return doc;
}

/**
 * Issue a recommendation request for the current selection.
 * Returns true when the response was applied, false when it lost the
 * latest-wins race or there was nothing to send.  A 422 clears the
 * selection and rethrows so the caller can show a notice.
 */
export async function runRecommendation(
  client: ApiClient,
  state: SelectionState,
  topN = 5,
): Promise<boolean> {
  if (!state.canRecommend || state.docId === null) {
    return false;
  }
  const token = state.beginRequest();
  let response;
  try {
    response = await client.recommend({
      doc_id: state.docId,
      selected_tags: [...state.chosenTags],
      top_n: topN,
      baseline: state.baseline,
    });
  } catch (err) {
    if (err instanceof ApiError && err.status === 422) {
      state.clearSelection();
    }
    throw err;
  }
  return state.applyRecommendations(token, response.recommendations, response.baseline);
}

interface Panels {
  main: HTMLElement;
  side: HTMLElement;
  status: HTMLElement;
}

function panels(root: HTMLElement): Panels {
  root.innerHTML = "";
  const doc = root.ownerDocument;
  const main = doc.createElement("section");
  main.id = "main-panel";
  const side = doc.createElement("aside");
  side.id = "recommend-panel";
  const status = doc.createElement("div");
  status.id = "status-panel";
  root.append(status, main, side);
  return { main, side, status };
}

/** Browser entry point: hash routing plus event wiring. */
export function startApp(root: HTMLElement, baseUrl: string): void {
  const client = new ApiClient(baseUrl);
  const state = new SelectionState();
  const { main, side, status } = panels(root);
  const win = root.ownerDocument.defaultView;
  if (!win) throw new Error("root element is not attached to a window");

  const showError = (message: string, retry: () => void) =>
    renderErrorBanner(status, message, retry);
  const clearStatus = () => {
    status.innerHTML = "";
  };

  const redrawDocument = () => {
    const doc = state.document;
    if (!doc) return;
    renderDocumentView(main, doc, state, {
      onToggleTag: (text) => {
        state.toggleTag(text);
        redrawDocument();
      },
      onRecommend: () => {
        void recommend();
      },
      onToggleBaseline: (flag) => {
        state.baseline = flag;
        // re-issue with the new arm so the panel always matches the toggle
        if (state.canRecommend && state.recommendations !== null) {
          void recommend();
        }
      },
    });
  };

  const redrawRecommendations = () => {
    if (state.recommendations === null) {
      side.innerHTML = "";
      return;
    }
    renderRecommendations(side, state.recommendations, state.recommendationsAreBaseline, {
      onOpen: (docId) => {
        win.location.hash = `#/doc/${encodeURIComponent(docId)}`;
      },
    });
  };

  const recommend = async () => {
    clearStatus();
    try {
      const applied = await runRecommendation(client, state);
      if (applied) redrawRecommendations();
    } catch (err) {
      if (err instanceof ApiError && err.status === 422) {
        renderNotice(status, `Selection no longer valid, cleared: ${err.message}`);
        redrawDocument();
      } else if (err instanceof ApiError && err.retryable) {
        showError(err.message, () => void recommend());
      } else {
        showError(String(err), () => void recommend());
      }
    }
  };

  const route = async () => {
    clearStatus();
    const match = /^#\/doc\/(.+)$/.exec(win.location.hash);
    try {
      if (match) {
        await openDocument(client, state, decodeURIComponent(match[1]));
        redrawDocument();
        redrawRecommendations();
      } else {
        const page = await client.listDocuments();
        renderDocumentList(main, page.documents, () => undefined);
        side.innerHTML = "";
      }
    } catch (err) {
      if (err instanceof ApiError && err.status === 404 && match) {
        renderNotFound(main, decodeURIComponent(match[1]));
      } else if (err instanceof ApiError && err.retryable) {
        showError(err.message, () => void route());
      } else {
        showError(String(err), () => void route());
      }
    }
  };

  win.addEventListener("hashchange", () => void route());
  void route();
}
