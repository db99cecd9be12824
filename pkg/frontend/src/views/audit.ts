// Audit screen: the event log as served, one row per recorded action.

import { ApiClient } from "../api.js";
import { clear, el } from "../dom.js";
import { buildAuditRows } from "../viewmodels.js";
import {
  Nav,
  defaultNav,
  describeError,
  docHash,
  renderErrorState,
  renderLoading,
  requireDocument,
} from "./shared.js";

export async function renderAudit(
  root: HTMLElement,
  api: ApiClient,
  documentId: string,
  nav: Nav = defaultNav,
): Promise<void> {
  renderLoading(root);
  const retry = () => {
    void renderAudit(root, api, documentId, nav);
  };
  const doc = await requireDocument(root, api, documentId, retry);
  if (!doc) {
    return;
  }
  let log;
  try {
    log = await api.getAuditLog(documentId);
  } catch (error) {
    renderErrorState(root, describeError(error), retry);
    return;
  }

  const body = el("tbody");
  for (const row of buildAuditRows(log)) {
    body.append(
      el(
        "tr",
        { class: "audit-row", "data-seq": String(row.seq), "data-kind": row.kind },
        [
          el("td", { class: "seq" }, [String(row.seq)]),
          el("td", { class: "time" }, [row.timestamp]),
          el("td", { class: "role" }, [row.actorRole]),
          el("td", { class: "kind" }, [row.kind]),
          el("td", { class: "summary" }, [row.summary]),
          el("td", { class: "hash" }, [el("code", {}, [row.stateHash.slice(0, 12)])]),
        ],
      ),
    );
  }

  clear(root);
  root.append(
    el("div", { class: "screen audit", "data-screen": "audit" }, [
      el("header", { class: "doc-header" }, [
        el("a", { href: docHash(documentId), class: "back" }, ["← overview"]),
        el("h2", {}, [`Audit log for ${doc.title}`]),
        el("p", { class: "doc-id" }, [documentId]),
      ]),
      log.events.length === 0
        ? el("p", { class: "empty" }, ["No review actions recorded yet."])
        : el("table", { class: "audit-table" }, [
            el("thead", {}, [
              el("tr", {}, [
                el("th", {}, ["seq"]),
                el("th", {}, ["time"]),
                el("th", {}, ["role"]),
                el("th", {}, ["action"]),
                el("th", {}, ["summary"]),
                el("th", {}, ["state hash"]),
              ]),
            ]),
            body,
          ]),
    ]),
  );
}
