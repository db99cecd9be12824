// Boots one real review service for the whole test run: fresh corpus, fresh
// models, empty data directory, random free port. Tests find the base URL in
// SOAGUARD_TEST_BASE (with test/.server.json as a fallback for worker pools
// that do not inherit the mutated environment).

import { execFileSync, spawn } from "node:child_process";
import type { ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";

const SERVER_FILE = join(process.cwd(), "test", ".server.json");

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const probe = createServer();
    probe.once("error", reject);
    probe.listen(0, "127.0.0.1", () => {
      const address = probe.address();
      if (address === null || typeof address === "string") {
        probe.close(() => reject(new Error("could not determine a free port")));
        return;
      }
      const port = address.port;
      probe.close(() => resolve(port));
    });
  });
}

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

async function waitUntilServing(base: string, child: ChildProcess): Promise<void> {
  const deadline = Date.now() + 60_000;
  for (;;) {
    if (child.exitCode !== null) {
      throw new Error(`review service exited during startup with code ${child.exitCode}`);
    }
    try {
      const response = await fetch(`${base}/documents`);
      if (response.ok) {
        return;
      }
    } catch {
      // not listening yet
    }
    if (Date.now() > deadline) {
      child.kill("SIGKILL");
      throw new Error("review service did not start within 60s");
    }
    await sleep(150);
  }
}

export default async function setup(): Promise<() => Promise<void>> {
  const work = mkdtempSync(join(tmpdir(), "soaguard-ui-"));
  const corpus = join(work, "corpus");
  const models = join(work, "models");
  const data = join(work, "data");

  // Small but large enough that every label class clears the training
  // minimum; seeds pinned so failures reproduce.
  execFileSync(
    "soaguard",
    ["generate", "--n", "200", "--seed", "11", "--noise", "0.05", "--out", corpus],
    { stdio: "ignore" },
  );
  execFileSync("soaguard", ["train", "--corpus", corpus, "--seed", "0", "--out", models], {
    stdio: "ignore",
  });

  const port = await freePort();
  const base = `http://127.0.0.1:${port}`;
  const child = spawn(
    "soaguard",
    [
      "serve",
      "--models",
      models,
      "--data-dir",
      data,
      "--host",
      "127.0.0.1",
      "--port",
      String(port),
    ],
    { stdio: "ignore" },
  );
  try {
    await waitUntilServing(base, child);
  } catch (error) {
    rmSync(work, { recursive: true, force: true });
    throw error;
  }

  process.env.SOAGUARD_TEST_BASE = base;
  writeFileSync(SERVER_FILE, JSON.stringify({ base }));

  return async () => {
    const exited = new Promise<void>((resolve) => {
      child.once("exit", () => resolve());
    });
    child.kill("SIGTERM");
    await Promise.race([exited, sleep(5_000)]);
    if (child.exitCode === null) {
      child.kill("SIGKILL");
    }
    rmSync(work, { recursive: true, force: true });
    rmSync(SERVER_FILE, { force: true });
  };
}
