// Right-hand pane of the drill-down: the original document, with every
// sentence and table wrapped in an element addressable by unit id. Evidence
// rows jump here, and sentence clicks supply the span for add-goal and
// add-recommendation actions.

import { el } from "../dom.js";
import { enumerateUnits, unitDomId } from "../segmentation.js";
import type { DocumentUnit } from "../segmentation.js";
import type { SoaDocument, Span, TableBlock } from "../types.js";

export interface SentenceSelection {
  unitId: string;
  span: Span;
  text: string;
}

export interface SourcePaneOptions {
  onSelect?: (selection: SentenceSelection) => void;
}

function renderTable(unit: DocumentUnit): HTMLElement {
  const table = unit.table as TableBlock;
  const element = el("table", {
    id: unitDomId(unit.unitId),
    class: "unit table-unit",
    "data-unit-id": unit.unitId,
  });
  if (table.caption) {
    element.append(el("caption", {}, [table.caption]));
  }
  const head = el("tr");
  for (const cell of table.header) {
    head.append(el("th", {}, [cell]));
  }
  element.append(el("thead", {}, [head]));
  const body = el("tbody");
  for (const row of table.rows) {
    const tr = el("tr");
    for (const cell of row) {
      tr.append(el("td", {}, [cell]));
    }
    body.append(tr);
  }
  element.append(body);
  return element;
}

export function renderSourcePane(doc: SoaDocument, options: SourcePaneOptions = {}): HTMLElement {
  const pane = el("div", { class: "source-pane" }, [el("h2", {}, [doc.title])]);
  const units = enumerateUnits(doc);
  const byBlock = new Map<string, DocumentUnit[]>();
  for (const unit of units) {
    const key = `${unit.section}:${unit.block}`;
    const bucket = byBlock.get(key);
    if (bucket) {
      bucket.push(unit);
    } else {
      byBlock.set(key, [unit]);
    }
  }

  const select = (target: HTMLElement, unit: DocumentUnit) => {
    for (const previous of pane.querySelectorAll(".unit.selected")) {
      previous.classList.remove("selected");
    }
    target.classList.add("selected");
    options.onSelect?.({
      unitId: unit.unitId,
      span: unit.span as Span,
      text: unit.text,
    });
  };

  doc.sections.forEach((section, si) => {
    const sectionEl = el("section", { class: "doc-section" }, [el("h3", {}, [section.heading])]);
    section.blocks.forEach((block, bi) => {
      const blockUnits = byBlock.get(`${si}:${bi}`) ?? [];
      if (block.type === "paragraph") {
        const paragraph = el("p", { class: "doc-paragraph" });
        // Sentence spans never overlap and only whitespace separates them;
        // emitting the gaps as plain text reproduces the paragraph exactly.
        let cursor = 0;
        for (const unit of blockUnits) {
          const span = unit.span as Span;
          if (span.start > cursor) {
            paragraph.append(block.text.slice(cursor, span.start));
          }
          const sentence = el(
            "span",
            {
              id: unitDomId(unit.unitId),
              class: "unit sentence",
              "data-unit-id": unit.unitId,
            },
            [block.text.slice(span.start, span.end)],
          );
          sentence.addEventListener("click", () => select(sentence, unit));
          paragraph.append(sentence);
          cursor = span.end;
        }
        if (cursor < block.text.length) {
          paragraph.append(block.text.slice(cursor));
        }
        sectionEl.append(paragraph);
      } else {
        const tableUnit = blockUnits[0];
        if (tableUnit) {
          sectionEl.append(renderTable(tableUnit));
        }
      }
    });
    pane.append(sectionEl);
  });
  return pane;
}

export function findUnitElement(pane: HTMLElement, unitId: string): HTMLElement | null {
  for (const candidate of pane.querySelectorAll<HTMLElement>("[data-unit-id]")) {
    if (candidate.getAttribute("data-unit-id") === unitId) {
      return candidate;
    }
  }
  return null;
}

/** Scroll a unit into view and flash it. Returns false for unknown ids. */
export function highlightUnit(pane: HTMLElement, unitId: string): boolean {
  for (const previous of pane.querySelectorAll(".unit.highlight")) {
    previous.classList.remove("highlight");
  }
  const target = findUnitElement(pane, unitId);
  if (!target) {
    return false;
  }
  target.classList.add("highlight");
  try {
    target.scrollIntoView({ block: "center" });
  } catch {
    // headless DOM without layout
  }
  return true;
}
