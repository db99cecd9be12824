// Shared plumbing for tests that talk to the live service started by
// globalSetup.

import { readFileSync } from "node:fs";
import { join } from "node:path";

import { ApiClient } from "../src/api.js";
import type { Analysis, SoaDocument } from "../src/types.js";

export function apiBase(): string {
  const fromEnv = process.env.SOAGUARD_TEST_BASE;
  if (fromEnv) {
    return fromEnv;
  }
  try {
    const recorded = JSON.parse(
      readFileSync(join(process.cwd(), "test", ".server.json"), "utf8"),
    ) as { base?: string };
    if (recorded.base) {
      return recorded.base;
    }
  } catch {
    // fall through to the error below
  }
  throw new Error("no test server recorded; is globalSetup configured?");
}

export function client(): ApiClient {
  return new ApiClient(apiBase());
}

let counter = 0;

/** Document ids unique across parallel workers sharing one service. */
export function uniqueId(prefix: string): string {
  counter += 1;
  const entropy = Math.random().toString(36).slice(2, 8);
  return `${prefix}-${Date.now().toString(36)}-${entropy}-${counter}`;
}

/**
 * A small advice document whose ratings are deliberately mixed: the mortgage
 * goal has no matching recommendation and the cash position is never
 * discussed, while the balance and insurance sections are in order. Gives
 * the overview real color variety and the mapping editor two goals and one
 * recommendation to start from.
 */
export function probeDocument(id: string): SoaDocument {
  return {
    id,
    title: "Statement of Advice",
    sections: [
      {
        heading: "Goals",
        blocks: [
          {
            type: "paragraph",
            text:
              "I would like to retire at age 62 with an annual income of $58,000. " +
              "I would like to pay off the mortgage within 8 years.",
          },
        ],
      },
      {
        heading: "Recommendations",
        blocks: [
          {
            type: "paragraph",
            text: "We recommend a plan to retire at age 62 with an annual income of $58,000.",
          },
        ],
      },
      {
        heading: "Your superannuation",
        blocks: [
          {
            type: "paragraph",
            text: "Your current superannuation balance is $300,000.",
          },
        ],
      },
      {
        heading: "Insurance",
        blocks: [
          {
            type: "paragraph",
            text: "We recommend life and income protection cover.",
          },
        ],
      },
    ],
  };
}

export async function ingestAndAnalyze(api: ApiClient, doc: SoaDocument): Promise<Analysis> {
  await api.ingestDocument(doc);
  return api.analyze(doc.id);
}

/** Mount a fresh root for one test. */
export function mount(): HTMLElement {
  const root = document.createElement("div");
  document.body.append(root);
  return root;
}

/**
 * Poll until the probe returns something truthy. The views re-render from
 * the server after actions, so tests wait on DOM facts rather than on the
 * promises of click handlers.
 */
export async function waitFor<T>(
  probe: () => T | false | null | undefined,
  what: string,
  timeoutMs = 10_000,
): Promise<T> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    const value = probe();
    if (value) {
      return value;
    }
    if (Date.now() > deadline) {
      throw new Error(`timed out waiting for ${what}`);
    }
    await new Promise((resolve) => setTimeout(resolve, 25));
  }
}

export interface NavSpy {
  go(hash: string): void;
  calls: string[];
}

export function navSpy(): NavSpy {
  const calls: string[] = [];
  return {
    calls,
    go(hash: string) {
      calls.push(hash);
    },
  };
}
