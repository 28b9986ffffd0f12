/**
 * Typed client for the juritag HTTP API.
 *
 * Every similarity score shown in the UI comes straight out of these
 * responses; nothing is recomputed on the client side.
 */

export interface HealthResponse {
  status: string;
  format_version: number;
  mode: string;
  corpus_size: number;
}

export interface DocumentSummary {
  doc_id: string;
  title: string;
  tag_count: number;
}

export interface DocumentListResponse {
  total: number;
  offset: number;
  limit: number;
  documents: DocumentSummary[];
}

export interface TagInfo {
  text: string;
  matched_term: string;
  sentence_index: number;
}

export interface TagGroup {
  aspect: string;
  mode: string;
  tags: TagInfo[];
}

export interface AspectSentenceInfo {
  index: number;
  aspect: string;
  score: number;
  text: string;
}

export interface DocumentDetail {
  doc_id: string;
  metadata: Record<string, string>;
  fulltext: string;
  sentences: string[];
  aspect_sentences: AspectSentenceInfo[];
  tag_groups: TagGroup[];
}

export interface TagMatch {
  selected: string;
  best_match: string | null;
  similarity: number;
}

export interface Recommendation {
  doc_id: string;
  title: string;
  score: number;
  per_tag_scores: TagMatch[];
}

export interface RecommendResponse {
  doc_id: string;
  baseline: boolean;
  recommendations: Recommendation[];
}

export interface RecommendRequest {
  doc_id: string;
  selected_tags: string[];
  top_n?: number;
  baseline?: boolean;
}

/** status 0 means the service could not be reached at all. */
export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, message: string) {
    super(message);
    this.name = "ApiError";
    this.status = status;
  }

  get retryable(): boolean {
    return this.status === 0 || this.status >= 500;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function readDetail(response: Response): Promise<string> {
  let body: unknown;
  try {
    body = await response.json();
  } catch {
    return response.statusText || `HTTP ${response.status}`;
  }
  if (body && typeof body === "object" && "detail" in body) {
    const detail = (body as { detail: unknown }).detail;
    return typeof detail === "string" ? detail : JSON.stringify(detail);
  }
  return JSON.stringify(body);
}

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl: string, fetchFn?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  async health(): Promise<HealthResponse> {
    return this.request<HealthResponse>("/health");
  }

  async listDocuments(offset = 0, limit = 100): Promise<DocumentListResponse> {
    const query = new URLSearchParams({ offset: String(offset), limit: String(limit) });
    return this.request<DocumentListResponse>(`/documents?${query}`);
  }

  async getDocument(docId: string): Promise<DocumentDetail> {
    return this.request<DocumentDetail>(`/documents/${encodeURIComponent(docId)}`);
  }

  async recommend(req: RecommendRequest): Promise<RecommendResponse> {
    return this.request<RecommendResponse>("/recommend", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(req),
    });
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, init);
    } catch (err) {
      throw new ApiError(0, `service unreachable: ${String(err)}`);
    }
    if (!response.ok) {
      throw new ApiError(response.status, await readDetail(response));
    }
    return (await response.json()) as T;
  }
}
