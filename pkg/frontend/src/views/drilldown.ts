// Drill-down screen: findings on the left, the original document on the
// right. All edits go through POST /actions and the screen re-renders from a
// fresh server fetch afterwards, so what is shown can never drift from what
// the server holds. A 409 offers a reload, a 422 stays inline next to the
// control that caused it.

import { ApiClient, ApiError, newIdempotencyKey } from "../api.js";
import { clear, el, hide, show } from "../dom.js";
import type { ReviewActionBody, ReviewState, RiskRating } from "../types.js";
import {
  KRI_IDS,
  KRI_TITLES,
  buildMappingRows,
  buildPanels,
  ratingColor,
} from "../viewmodels.js";
import type { KriId, MappingRowViewModel, PanelViewModel } from "../viewmodels.js";
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
import { highlightUnit, renderSourcePane } from "./sourcepane.js";
import type { SentenceSelection } from "./sourcepane.js";
import { unitIndex } from "./overview.js";

function ratingChip(rating: RiskRating): HTMLElement {
  const chip = el("span", { class: "chip", "data-rating": rating }, [rating]);
  chip.style.setProperty("--rating-color", ratingColor(rating));
  return chip;
}

function shortLabel(text: string, max = 48): string {
  return text.length <= max ? text : `${text.slice(0, max - 1)}…`;
}

interface ScreenContext {
  root: HTMLElement;
  api: ApiClient;
  documentId: string;
  kriId: KriId;
  nav: Nav;
  state: ReviewState;
  sourcePane: HTMLElement;
  conflictBanner: HTMLElement;
  rerender: (highlightUnitId?: string) => Promise<void>;
}

/**
 * Submit one action and re-render from the server. The idempotency key and
 * expected_seq are fixed when the body is built, so a retry after a network
 * failure replays the identical request and cannot double-apply.
 */
async function runAction(
  ctx: ScreenContext,
  body: ReviewActionBody,
  errorBox: HTMLElement,
): Promise<void> {
  hide(errorBox);
  try {
    await ctx.api.submitAction(ctx.documentId, body);
    await ctx.rerender();
  } catch (error) {
    if (error instanceof ApiError && error.status === 409) {
      show(ctx.conflictBanner);
    } else if (error instanceof ApiError) {
      show(errorBox, error.message);
    } else {
      show(errorBox, `${describeError(error)} `);
      const again = el("button", { class: "retry-action", type: "button" }, ["Retry"]);
      again.addEventListener("click", () => {
        void runAction(ctx, body, errorBox);
      });
      errorBox.append(again);
    }
  }
}

function actionBody(ctx: ScreenContext, partial: Omit<ReviewActionBody, "idempotency_key" | "expected_seq">): ReviewActionBody {
  return {
    ...partial,
    idempotency_key: newIdempotencyKey(),
    expected_seq: ctx.state.seq,
  };
}

function renderEvidence(ctx: ScreenContext, panel: PanelViewModel): HTMLElement {
  const list = el("ul", { class: "evidence" });
  for (const row of panel.evidence) {
    const item = el("li", { class: "evidence-row", "data-unit-id": row.unitId }, [
      el("p", { class: "note" }, [row.note]),
    ]);
    if (row.excerpt) {
      item.append(el("blockquote", { class: "excerpt" }, [row.excerpt]));
    }
    if (row.values.length > 0) {
      item.append(el("p", { class: "values" }, [row.values.join("  ")]));
    }
    if (row.canJump) {
      const jump = el(
        "a",
        {
          class: "jump",
          href: docHash(ctx.documentId, "kri", ctx.kriId, "unit", row.unitId),
        },
        ["show in document"],
      );
      // Highlight immediately as well, so the jump works whether or not a
      // hash router re-renders this screen.
      jump.addEventListener("click", () => {
        highlightUnit(ctx.sourcePane, row.unitId);
      });
      item.append(jump);
    }
    list.append(item);
  }
  return el("section", { class: "findings" }, [el("h4", {}, ["Findings"]), list]);
}

function renderMappingRow(
  ctx: ScreenContext,
  row: MappingRowViewModel,
  errorBox: HTMLElement,
): HTMLElement {
  const linked = el("td", { class: "linked" });
  const link = row.linked[0];
  if (link) {
    linked.append(
      el("span", { class: "rec-text" }, [link.text]),
      el("small", { class: "link-meta" }, [
        ` confidence ${link.confidence.toFixed(6)}${link.pinned ? ", pinned" : ""}`,
      ]),
    );
  } else {
    linked.append(el("em", {}, ["no linked recommendation"]));
  }

  const band = el("td", { class: "band" }, [ratingChip(row.band)]);

  const relinkSelect = el("select", { class: "relink-target" });
  for (const rec of ctx.state.recommendations) {
    relinkSelect.append(
      el("option", { value: rec.recommendation_id }, [shortLabel(rec.text)]),
    );
  }
  const relinkButton = el("button", { class: "relink", type: "button" }, ["Pin"]);
  relinkButton.addEventListener("click", () => {
    const target = (relinkSelect as HTMLSelectElement).value;
    if (!target) {
      show(errorBox, "choose a recommendation to pin this goal to");
      return;
    }
    void runAction(
      ctx,
      actionBody(ctx, { kind: "relink", targets: [row.goalId, target] }),
      errorBox,
    );
  });
  const deleteButton = el("button", { class: "delete", type: "button" }, ["Delete"]);
  deleteButton.addEventListener("click", () => {
    void runAction(
      ctx,
      actionBody(ctx, { kind: "delete_goal", targets: [row.goalId] }),
      errorBox,
    );
  });

  const tr = el("tr", { class: "mapping-row", "data-goal-id": row.goalId, "data-band": row.band }, [
    el("td", { class: "pick" }, [
      el("input", { type: "checkbox", class: "merge-pick", "data-goal-id": row.goalId }),
    ]),
    el("td", { class: "goal-text" }, [
      row.goalText,
      el("small", { class: "sources" }, [` (${row.sourceIds.join(", ")})`]),
    ]),
    linked,
    band,
    el("td", { class: "row-actions" }, [relinkSelect, relinkButton, deleteButton]),
  ]);
  return tr;
}

function renderMapping(ctx: ScreenContext, selection: () => SentenceSelection | null): HTMLElement {
  const errorBox = el("div", { class: "inline-error", role: "alert" });
  hide(errorBox);

  const table = el("table", { class: "mapping-rows" }, [
    el("thead", {}, [
      el("tr", {}, [
        el("th", {}, [""]),
        el("th", {}, ["Goal"]),
        el("th", {}, ["Linked recommendation"]),
        el("th", {}, ["Match"]),
        el("th", {}, [""]),
      ]),
    ]),
  ]);
  const body = el("tbody");
  for (const row of buildMappingRows(ctx.state)) {
    body.append(renderMappingRow(ctx, row, errorBox));
  }
  table.append(body);

  const mergeButton = el("button", { class: "merge", type: "button" }, ["Merge selected goals"]);
  mergeButton.addEventListener("click", () => {
    const picked = [...table.querySelectorAll<HTMLInputElement>(".merge-pick:checked")].map(
      (box) => box.getAttribute("data-goal-id") ?? "",
    );
    if (picked.length !== 2) {
      show(errorBox, "pick exactly two goals to merge");
      return;
    }
    void runAction(ctx, actionBody(ctx, { kind: "merge_goals", targets: picked }), errorBox);
  });

  const selectionInfo = el("span", { class: "selection-info" }, ["no sentence selected"]);
  const addGoal = el("button", { class: "add-goal", type: "button", disabled: "" }, [
    "Add selected as goal",
  ]);
  const addRec = el("button", { class: "add-rec", type: "button", disabled: "" }, [
    "Add selected as recommendation",
  ]);
  const submitAdd = (kind: "add_goal" | "add_recommendation") => {
    const current = selection();
    if (!current) {
      show(errorBox, "select a sentence in the document first");
      return;
    }
    void runAction(ctx, actionBody(ctx, { kind, span: current.span }), errorBox);
  };
  addGoal.addEventListener("click", () => submitAdd("add_goal"));
  addRec.addEventListener("click", () => submitAdd("add_recommendation"));

  return el("section", { class: "mapping" }, [
    el("h4", {}, ["Goal to recommendation mapping"]),
    table,
    el("div", { class: "mapping-actions" }, [mergeButton, selectionInfo, addGoal, addRec]),
    errorBox,
  ]);
}

function renderComments(ctx: ScreenContext): HTMLElement {
  const errorBox = el("div", { class: "inline-error", role: "alert" });
  hide(errorBox);
  const list = el("ul", { class: "comment-list" });
  for (const comment of ctx.state.comments.filter((c) => c.kri_id === ctx.kriId)) {
    list.append(
      el("li", { class: "comment", "data-seq": String(comment.seq) }, [
        el("strong", {}, [`[${comment.actor_role}] `]),
        comment.text,
      ]),
    );
  }
  const input = el("textarea", { class: "comment-input", rows: "2" });
  const button = el("button", { class: "add-comment", type: "button" }, ["Add comment"]);
  button.addEventListener("click", () => {
    const text = (input as HTMLTextAreaElement).value.trim();
    if (!text) {
      show(errorBox, "comment text is required");
      return;
    }
    void runAction(
      ctx,
      actionBody(ctx, { kind: "add_comment", kri_id: ctx.kriId, comment: text }),
      errorBox,
    );
  });
  return el("section", { class: "comments" }, [
    el("h4", {}, ["Comments"]),
    list,
    input,
    button,
    errorBox,
  ]);
}

export async function renderDrilldown(
  root: HTMLElement,
  api: ApiClient,
  documentId: string,
  kriId: string,
  nav: Nav = defaultNav,
  highlightUnitId?: string,
): Promise<void> {
  if (!(KRI_IDS as readonly string[]).includes(kriId)) {
    clear(root);
    root.append(
      el("div", { class: "screen not-found", "data-screen": "not-found" }, [
        el("h2", {}, [`Unknown risk indicator "${kriId}"`]),
        el("p", {}, [el("a", { href: docHash(documentId) }, ["Back to the overview"])]),
      ]),
    );
    return;
  }

  renderLoading(root);
  const retry = () => {
    void renderDrilldown(root, api, documentId, kriId, nav, highlightUnitId);
  };
  const doc = await requireDocument(root, api, documentId, retry);
  if (!doc) {
    return;
  }
  let analysis;
  let state: ReviewState;
  try {
    analysis = await requireAnalysis(api, documentId);
    state = await api.getReviewState(documentId);
  } catch (error) {
    renderErrorState(root, describeError(error), retry);
    return;
  }

  const panel = buildPanels(analysis.assessment, unitIndex(doc)).find((p) => p.kriId === kriId);
  if (!panel) {
    throw new Error(`assessment is missing KRI '${kriId}'`);
  }

  let selected: SentenceSelection | null = null;
  const sourcePane = renderSourcePane(doc, {
    onSelect: (selection) => {
      selected = selection;
      const info = root.querySelector(".selection-info");
      if (info) {
        info.textContent = `selected: ${shortLabel(selection.text, 64)}`;
      }
      for (const button of root.querySelectorAll<HTMLButtonElement>(".add-goal, .add-rec")) {
        button.disabled = false;
      }
    },
  });

  const conflictBanner = el("div", { class: "conflict-banner" }, [
    el("span", { class: "msg" }, [
      "Another session changed this review after this screen loaded. Reload to continue.",
    ]),
  ]);
  const reloadButton = el("button", { class: "reload", type: "button" }, ["Reload"]);
  const ctx: ScreenContext = {
    root,
    api,
    documentId,
    kriId: kriId as KriId,
    nav,
    state,
    sourcePane,
    conflictBanner,
    rerender: (highlight?: string) =>
      renderDrilldown(root, api, documentId, kriId, nav, highlight),
  };
  reloadButton.addEventListener("click", () => {
    void ctx.rerender();
  });
  conflictBanner.append(reloadButton);
  hide(conflictBanner);

  const head = el("header", { class: "kri-head", "data-kri": kriId, "data-rating": panel.rating }, [
    el("a", { href: docHash(documentId), class: "back" }, ["← overview"]),
    el("h3", {}, [panel.title]),
    ratingChip(panel.rating),
  ]);

  const left = el("div", { class: "pane left" }, [head, conflictBanner, renderEvidence(ctx, panel)]);
  if (kriId === "goal_advice") {
    left.append(renderMapping(ctx, () => selected));
  }
  left.append(renderComments(ctx));

  clear(root);
  root.append(
    el("div", { class: "screen drilldown", "data-screen": "drilldown" }, [
      left,
      el("div", { class: "pane right" }, [sourcePane]),
    ]),
  );

  if (highlightUnitId) {
    highlightUnit(sourcePane, highlightUnitId);
  }
}
