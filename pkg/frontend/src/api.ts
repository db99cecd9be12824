import type {
  ActionResult,
  Analysis,
  AuditLog,
  DocumentListing,
  ReviewActionBody,
  ReviewState,
  Role,
  SoaDocument,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

const ROLE_HEADER = "X-Role";

/** Thin fetch wrapper over the documented HTTP API; no other channel exists. */
export class ApiClient {
  role: Role = "auditor";
  private readonly fetchImpl: typeof fetch;

  constructor(
    public baseUrl: string,
    fetchImpl: typeof fetch = fetch,
  ) {
    // Browsers require fetch to be invoked with the global as its receiver;
    // calling it as a method of this client would throw there.
    this.fetchImpl = (input, init) => fetchImpl.call(globalThis, input, init);
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    withRole = false,
  ): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (withRole) headers[ROLE_HEADER] = this.role;
    const response = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    if (!response.ok) {
      let detail = text;
      try {
        const parsed = JSON.parse(text);
        if (typeof parsed.detail === "string") detail = parsed.detail;
        else if (parsed.detail) detail = JSON.stringify(parsed.detail);
      } catch {
        // non-JSON error body, keep raw text
      }
      throw new ApiError(response.status, detail);
    }
    return JSON.parse(text) as T;
  }

  ingestDocument(doc: SoaDocument): Promise<{ document_id: string }> {
    return this.request("POST", "/documents", doc);
  }

  listDocuments(sort?: "risk"): Promise<DocumentListing> {
    const query = sort ? `?sort=${sort}` : "";
    return this.request("GET", `/documents${query}`);
  }

  getDocument(documentId: string): Promise<SoaDocument> {
    return this.request("GET", `/documents/${encodeURIComponent(documentId)}`);
  }

  analyze(documentId: string): Promise<Analysis> {
    return this.request("POST", `/documents/${encodeURIComponent(documentId)}/analyze`);
  }

  getAssessment(documentId: string): Promise<Analysis> {
    return this.request("GET", `/documents/${encodeURIComponent(documentId)}/assessment`);
  }

  getReviewState(documentId: string): Promise<ReviewState> {
    return this.request("GET", `/documents/${encodeURIComponent(documentId)}/review-state`);
  }

  getAuditLog(documentId: string): Promise<AuditLog> {
    return this.request("GET", `/documents/${encodeURIComponent(documentId)}/audit-log`);
  }

  submitAction(documentId: string, action: ReviewActionBody): Promise<ActionResult> {
    return this.request(
      "POST",
      `/documents/${encodeURIComponent(documentId)}/actions`,
      action,
      true,
    );
  }
}

export function newIdempotencyKey(): string {
  // crypto.randomUUID exists in every target runtime (browsers, node >= 19)
  return `ui-${crypto.randomUUID()}`;
}
