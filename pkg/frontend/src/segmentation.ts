// Client-side copy of the server's sentence segmentation. The two must agree
// exactly: evidence unit ids coming back from the API are positional
// ("{doc}:s{si}:b{bi}:u{ki}"), and spans the user selects here are validated
// server-side against the same offsets.
//
// Offsets are plain string indices. The server indexes by code point and we
// index by UTF-16 code unit; documents in this corpus are BMP-only text, where
// the two coincide.

import type { Block, SoaDocument, Span, TableBlock } from "./types.js";

export const ABBREVIATIONS = new Set([
  "e.g.",
  "i.e.",
  "mr.",
  "mrs.",
  "ms.",
  "dr.",
  "no.",
  "etc.",
]);

const TERMINALS = ".!?";

function isDigit(ch: string): boolean {
  return ch >= "0" && ch <= "9";
}

function isAlpha(ch: string): boolean {
  return /[a-zA-Z]/.test(ch);
}

function isSpace(ch: string): boolean {
  return /\s/.test(ch);
}

// True only for cased uppercase characters, so digits and punctuation never
// start a new sentence ("In 2043 ...").
function isUpper(ch: string): boolean {
  return ch !== ch.toLowerCase() && ch === ch.toUpperCase();
}

export interface SentenceSpan {
  start: number;
  end: number; // exclusive
}

export function splitSentenceSpans(
  paragraph: string,
  abbreviations: Set<string> = ABBREVIATIONS,
): SentenceSpan[] {
  const n = paragraph.length;
  const boundaries: number[] = []; // index one past the terminal character

  for (let i = 0; i < n; i++) {
    const ch = paragraph[i]!;
    if (!TERMINALS.includes(ch)) {
      continue;
    }
    if (ch === ".") {
      // decimal point inside a number is never a boundary
      if (i > 0 && i < n - 1 && isDigit(paragraph[i - 1]!) && isDigit(paragraph[i + 1]!)) {
        continue;
      }
      // known abbreviation ending here ("e.g.", "Mr.")
      let start = i;
      while (start > 0 && (isAlpha(paragraph[start - 1]!) || paragraph[start - 1] === ".")) {
        start -= 1;
      }
      if (abbreviations.has(paragraph.slice(start, i + 1).toLowerCase())) {
        continue;
      }
    }
    let j = i + 1;
    while (j < n && isSpace(paragraph[j]!)) {
      j += 1;
    }
    if (j === i + 1) {
      continue; // terminal not followed by whitespace
    }
    if (j < n && isUpper(paragraph[j]!)) {
      boundaries.push(i + 1);
    }
  }

  const spans: SentenceSpan[] = [];
  let prev = 0;
  for (const cut of [...boundaries, n]) {
    const piece = paragraph.slice(prev, cut);
    const lead = piece.length - piece.trimStart().length;
    const trail = piece.length - piece.trimEnd().length;
    if (prev + lead < cut - trail) {
      spans.push({ start: prev + lead, end: cut - trail });
    }
    prev = cut;
  }
  return spans;
}

export function flattenTableText(table: TableBlock): string {
  const parts: string[] = [];
  if (table.caption) {
    parts.push(table.caption);
  }
  for (const cell of table.header) {
    if (cell.trim()) {
      parts.push(cell);
    }
  }
  return parts.join(" ");
}

/** One addressable unit of a document: a sentence or a whole table. */
export interface DocumentUnit {
  unitId: string;
  kind: "sentence" | "table";
  section: number;
  block: number;
  text: string;
  /** Sentence offsets within the paragraph; absent for tables. */
  span?: Span;
  table?: TableBlock;
}

export function enumerateUnits(doc: SoaDocument): DocumentUnit[] {
  const units: DocumentUnit[] = [];
  doc.sections.forEach((section, si) => {
    section.blocks.forEach((block: Block, bi) => {
      if (block.type === "paragraph") {
        splitSentenceSpans(block.text).forEach((span, ki) => {
          units.push({
            unitId: `${doc.id}:s${si}:b${bi}:u${ki}`,
            kind: "sentence",
            section: si,
            block: bi,
            text: block.text.slice(span.start, span.end),
            span: { section: si, block: bi, start: span.start, end: span.end },
          });
        });
      } else {
        units.push({
          unitId: `${doc.id}:s${si}:b${bi}:table`,
          kind: "table",
          section: si,
          block: bi,
          text: flattenTableText(block),
          table: block,
        });
      }
    });
  });
  return units;
}

/**
 * DOM id for a unit's element in the source pane. Unit ids contain colons,
 * which are legal in HTML ids but collide with our hash router if used as
 * fragment targets, so evidence rows navigate by lookup rather than by href.
 */
export function unitDomId(unitId: string): string {
  return `u-${unitId.replace(/[^A-Za-z0-9_-]/g, "-")}`;
}
