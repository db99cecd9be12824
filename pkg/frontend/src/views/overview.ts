// Overview screen: one panel per KRI plus the overall badge. The color shown
// on a panel is derived from the served rating and nothing else; data-rating
// and data-color attributes expose exactly what was rendered.

import { ApiClient } from "../api.js";
import { clear, el } from "../dom.js";
import { enumerateUnits } from "../segmentation.js";
import type { DocumentUnit } from "../segmentation.js";
import type { SoaDocument } from "../types.js";
import { buildOverview } from "../viewmodels.js";
import type { PanelViewModel } from "../viewmodels.js";
import {
  Nav,
  defaultNav,
  describeError,
  docHash,
  renderErrorState,
  renderLoading,
  requireAnalysis,
  requireDocument,
} from "./shared.js";

export function unitIndex(doc: SoaDocument): Map<string, DocumentUnit> {
  return new Map(enumerateUnits(doc).map((unit) => [unit.unitId, unit]));
}

function renderPanel(panel: PanelViewModel, documentId: string, nav: Nav): HTMLElement {
  const article = el(
    "article",
    {
      class: "panel",
      "data-kri": panel.kriId,
      "data-rating": panel.rating,
      "data-color": panel.color,
    },
    [
      el("header", {}, [
        el("h3", {}, [panel.title]),
        el("span", { class: "chip", "data-rating": panel.rating }, [panel.rating]),
      ]),
      el("p", { class: "headline" }, [panel.headline]),
      el("p", { class: "evidence-count" }, [
        `${panel.evidence.length} evidence item${panel.evidence.length === 1 ? "" : "s"}`,
      ]),
    ],
  );
  article.style.setProperty("--rating-color", panel.color);
  article.addEventListener("click", () => {
    nav.go(docHash(documentId, "kri", panel.kriId));
  });
  return article;
}

export async function renderOverview(
  root: HTMLElement,
  api: ApiClient,
  documentId: string,
  nav: Nav = defaultNav,
): Promise<void> {
  renderLoading(root);
  const retry = () => {
    void renderOverview(root, api, documentId, nav);
  };
  const doc = await requireDocument(root, api, documentId, retry);
  if (!doc) {
    return;
  }
  let analysis;
  try {
    analysis = await requireAnalysis(api, documentId);
  } catch (error) {
    renderErrorState(root, describeError(error), retry);
    return;
  }

  const overview = buildOverview(analysis.assessment, unitIndex(doc));
  const badge = el(
    "div",
    {
      class: "overall-badge",
      "data-rating": overview.overall,
      "data-color": overview.overallColor,
    },
    [
      el("span", { class: "label" }, ["Overall"]),
      el("span", { class: "value" }, [overview.overall]),
      el("span", { class: "score" }, [`score ${overview.score.toFixed(4)}`]),
    ],
  );
  badge.style.setProperty("--rating-color", overview.overallColor);

  const panels = el("div", { class: "panels" });
  for (const panel of overview.panels) {
    panels.append(renderPanel(panel, documentId, nav));
  }

  clear(root);
  root.append(
    el("div", { class: "screen overview", "data-screen": "overview" }, [
      el("header", { class: "doc-header" }, [
        el("div", {}, [
          el("h2", {}, [doc.title]),
          el("p", { class: "doc-id" }, [documentId]),
          el("p", { class: "policy-hash" }, [`policy ${overview.policyHash.slice(0, 12)}`]),
        ]),
        badge,
      ]),
      panels,
      el("p", { class: "links" }, [
        el("a", { href: docHash(documentId, "audit"), class: "audit-link" }, ["Audit log"]),
      ]),
    ]),
  );
}
