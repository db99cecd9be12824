import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "jsdom",
    globalSetup: "./test/globalSetup.ts",
    // The round-trip suites talk to a live service process; generous
    // timeouts keep slow cold starts from flaking the run.
    testTimeout: 30000,
    hookTimeout: 120000,
  },
});
