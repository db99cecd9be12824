// The client splitter must agree with the service, character for character:
// evidence unit ids are positional, and add-goal spans are validated against
// the server's own offsets. Tricky cases are pinned individually, then a
// seeded fuzz run compares spans with the reference implementation.

import { execFileSync } from "node:child_process";
import { describe, expect, it } from "vitest";

import { enumerateUnits, splitSentenceSpans, unitDomId } from "../src/segmentation.js";
import type { SoaDocument } from "../src/types.js";

function sentences(paragraph: string): string[] {
  return splitSentenceSpans(paragraph).map((span) => paragraph.slice(span.start, span.end));
}

describe("splitSentenceSpans", () => {
  it("keeps decimal amounts together", () => {
    expect(sentences("The balance is $200,000.50 today. It grows later.")).toEqual([
      "The balance is $200,000.50 today.",
      "It grows later.",
    ]);
  });

  it("does not break after known abbreviations", () => {
    expect(sentences("Mr. Smith retired. Mrs. Smith did not.")).toEqual([
      "Mr. Smith retired.",
      "Mrs. Smith did not.",
    ]);
    expect(sentences("Fees apply (e.g. brokerage). Review yearly.")).toEqual([
      "Fees apply (e.g. brokerage).",
      "Review yearly.",
    ]);
  });

  it("requires whitespace then an uppercase letter at a boundary", () => {
    expect(sentences("one. two. Three.")).toEqual(["one. two.", "Three."]);
    expect(sentences("Costs rose.Next year too.")).toEqual(["Costs rose.Next year too."]);
    expect(sentences("It fell 3.5 points. In 2043 it recovers.")).toEqual([
      "It fell 3.5 points.",
      "In 2043 it recovers.",
    ]);
  });

  it("handles exclamations and questions", () => {
    expect(sentences("Will it last? We believe so! Review it.")).toEqual([
      "Will it last?",
      "We believe so!",
      "Review it.",
    ]);
  });

  it("trims whitespace from spans and skips blank pieces", () => {
    const paragraph = "  First point.   Second point.  ";
    const spans = splitSentenceSpans(paragraph);
    expect(spans.map((s) => paragraph.slice(s.start, s.end))).toEqual([
      "First point.",
      "Second point.",
    ]);
    for (const span of spans) {
      const text = paragraph.slice(span.start, span.end);
      expect(text).toBe(text.trim());
      expect(text.length).toBeGreaterThan(0);
    }
  });

  it("covers the paragraph: between and around spans is only whitespace", () => {
    const paragraph = "Alpha beta. Gamma delta! Epsilon? Final words here.";
    const spans = splitSentenceSpans(paragraph);
    let cursor = 0;
    for (const span of spans) {
      expect(paragraph.slice(cursor, span.start).trim()).toBe("");
      cursor = span.end;
    }
    expect(paragraph.slice(cursor).trim()).toBe("");
  });
});

describe("agreement with the service's splitter", () => {
  // Deterministic picks so a disagreement reproduces.
  let seed = 1729;
  const next = () => {
    seed = (seed * 1103515245 + 12345) % 2147483648;
    return seed / 2147483648;
  };
  const pick = <T>(pool: T[]): T => pool[Math.floor(next() * pool.length)]!;

  const FRAGMENTS = [
    "Your current superannuation balance is $200,000.50.",
    "We recommend a plan to retire at age 62.",
    "Mr. Smith asked about fees.",
    "See item No. 5 for details.",
    "Costs (e.g. brokerage, i.e. per trade) apply.",
    "Will the surplus hold?",
    "It grew by 3.5% last year!",
    "In 2043 the projection ends.",
    "net position is -$1,200.",
    "the fund returned 7.1 points. then it fell.",
    "Dr. Reed signed the form.",
    "Balances: $95,000 and $110,000.",
    "No change was made.etc. follows oddly.",
    "A short one.",
  ];
  const SEPARATORS = [" ", "  ", " \t", "\n", " \n "];

  it("matches the reference on 60 fuzzed paragraphs", () => {
    const paragraphs: string[] = [];
    for (let i = 0; i < 60; i++) {
      const count = 1 + Math.floor(next() * 5);
      let paragraph = "";
      for (let k = 0; k < count; k++) {
        if (k > 0) {
          paragraph += pick(SEPARATORS);
        }
        paragraph += pick(FRAGMENTS);
      }
      paragraphs.push(paragraph);
    }

    const script = [
      "import json, sys",
      "from soaguard.model import split_sentence_spans",
      "paragraphs = json.load(sys.stdin)",
      "print(json.dumps([[list(s) for s in split_sentence_spans(p)] for p in paragraphs]))",
    ].join("\n");
    const reference = JSON.parse(
      execFileSync("python3", ["-c", script], {
        input: JSON.stringify(paragraphs),
        encoding: "utf8",
      }),
    ) as [number, number][][];

    paragraphs.forEach((paragraph, i) => {
      const ours = splitSentenceSpans(paragraph).map((s) => [s.start, s.end]);
      expect(ours, `paragraph ${i}: ${JSON.stringify(paragraph)}`).toEqual(reference[i]);
    });
  });
});

describe("enumerateUnits", () => {
  const doc: SoaDocument = {
    id: "doc-1",
    title: "T",
    sections: [
      {
        heading: "A",
        blocks: [
          { type: "paragraph", text: "First sentence here. Second sentence too." },
          {
            type: "table",
            caption: "Asset allocation",
            header: ["Class", "Share"],
            rows: [["Shares", "60%"]],
          },
        ],
      },
      {
        heading: "B",
        blocks: [{ type: "paragraph", text: "Only one sentence." }],
      },
    ],
  };

  it("assigns positional ids to sentences and tables", () => {
    const units = enumerateUnits(doc);
    expect(units.map((u) => u.unitId)).toEqual([
      "doc-1:s0:b0:u0",
      "doc-1:s0:b0:u1",
      "doc-1:s0:b1:table",
      "doc-1:s1:b0:u0",
    ]);
    expect(units[0]!.text).toBe("First sentence here.");
    expect(units[1]!.span).toEqual({ section: 0, block: 0, start: 21, end: 41 });
    expect(units[2]!.kind).toBe("table");
    expect(units[2]!.text).toBe("Asset allocation Class Share");
  });

  it("derives stable DOM-safe element ids", () => {
    expect(unitDomId("doc-1:s0:b0:u0")).toBe("u-doc-1-s0-b0-u0");
    expect(unitDomId("doc-1:s0:b1:table")).toBe("u-doc-1-s0-b1-table");
  });
});
