// Landing screen: every known document, riskiest first, linking into the
// per-document overview.

import { ApiClient } from "../api.js";
import { clear, el } from "../dom.js";
import { ratingColor } from "../viewmodels.js";
import {
  Nav,
  defaultNav,
  describeError,
  docHash,
  renderErrorState,
  renderLoading,
} from "./shared.js";

export async function renderDocumentList(
  root: HTMLElement,
  api: ApiClient,
  nav: Nav = defaultNav,
): Promise<void> {
  renderLoading(root);
  let listing;
  try {
    listing = await api.listDocuments("risk");
  } catch (error) {
    renderErrorState(root, describeError(error), () => {
      void renderDocumentList(root, api, nav);
    });
    return;
  }

  const body = el("tbody");
  for (const summary of listing.documents) {
    const overall = summary.overall;
    const chip = overall
      ? el("span", { class: "chip", "data-rating": overall }, [overall])
      : el("span", { class: "chip muted" }, ["not analyzed"]);
    if (overall) {
      chip.style.setProperty("--rating-color", ratingColor(overall));
    }
    const row = el(
      "tr",
      { class: "doc-row", "data-document-id": summary.document_id },
      [
        el("td", { class: "id" }, [
          el("a", { href: docHash(summary.document_id) }, [summary.document_id]),
        ]),
        el("td", { class: "overall" }, [chip]),
        el("td", { class: "score" }, [
          summary.score === null ? "" : summary.score.toFixed(4),
        ]),
        el("td", { class: "reds" }, [
          summary.red_count === null ? "" : String(summary.red_count),
        ]),
      ],
    );
    body.append(row);
  }

  clear(root);
  root.append(
    el("div", { class: "screen doc-list", "data-screen": "list" }, [
      el("h2", {}, ["Documents"]),
      listing.documents.length === 0
        ? el("p", { class: "empty" }, ["No documents ingested yet."])
        : el("table", { class: "doc-table" }, [
            el("thead", {}, [
              el("tr", {}, [
                el("th", {}, ["document"]),
                el("th", {}, ["overall"]),
                el("th", {}, ["score"]),
                el("th", {}, ["red KRIs"]),
              ]),
            ]),
            body,
          ]),
    ]),
  );
}
