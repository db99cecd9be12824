// Screen-level plumbing shared by the views: not-found and retryable error
// states, and the document/analysis loads every document screen starts with.

import { ApiError, ApiClient } from "../api.js";
import { clear, el } from "../dom.js";
import type { Analysis, SoaDocument } from "../types.js";

export interface Nav {
  go(hash: string): void;
}

export const defaultNav: Nav = {
  go(hash: string) {
    window.location.hash = hash;
  },
};

export function docHash(documentId: string, ...rest: string[]): string {
  const parts = ["#/doc", encodeURIComponent(documentId), ...rest.map(encodeURIComponent)];
  return parts.join("/");
}

export function describeError(error: unknown): string {
  if (error instanceof ApiError) {
    return `the review service answered ${error.status}: ${error.message}`;
  }
  if (error instanceof Error) {
    return `cannot reach the review service: ${error.message}`;
  }
  return String(error);
}

export function renderNotFound(root: HTMLElement, documentId: string): void {
  clear(root);
  root.append(
    el("div", { class: "screen not-found", "data-screen": "not-found" }, [
      el("h2", {}, ["Document not found"]),
      el("p", {}, [`No document with id "${documentId}" is known to the review service.`]),
      el("p", {}, [el("a", { href: "#/" }, ["Back to the document list"])]),
    ]),
  );
}

export function renderErrorState(root: HTMLElement, message: string, retry: () => void): void {
  clear(root);
  const button = el("button", { class: "retry", type: "button" }, ["Retry"]);
  button.addEventListener("click", retry);
  root.append(
    el("div", { class: "screen error-state", "data-screen": "error" }, [
      el("h2", {}, ["Could not load this view"]),
      el("p", { class: "error-message" }, [message]),
      button,
    ]),
  );
}

export function renderLoading(root: HTMLElement): void {
  clear(root);
  root.append(el("div", { class: "screen loading", "data-screen": "loading" }, ["Loading…"]));
}

/**
 * Fetch the document, rendering the not-found screen on a 404 and the
 * retryable error screen on anything else. Returns null when a screen was
 * rendered in place of the caller's.
 */
export async function requireDocument(
  root: HTMLElement,
  api: ApiClient,
  documentId: string,
  retry: () => void,
): Promise<SoaDocument | null> {
  try {
    return await api.getDocument(documentId);
  } catch (error) {
    if (error instanceof ApiError && error.status === 404) {
      renderNotFound(root, documentId);
    } else {
      renderErrorState(root, describeError(error), retry);
    }
    return null;
  }
}

/** Stored analysis if present, otherwise run one. The document must exist. */
export async function requireAnalysis(api: ApiClient, documentId: string): Promise<Analysis> {
  try {
    return await api.getAssessment(documentId);
  } catch (error) {
    if (error instanceof ApiError && error.status === 404) {
      return api.analyze(documentId);
    }
    throw error;
  }
}
