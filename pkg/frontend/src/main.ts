// Browser entry point; kept apart from startApp so tests can mount the app
// against their own root and client.

import { ApiClient } from "./api.js";
import { resolveBaseUrl, startApp } from "./app.js";

const root = document.getElementById("app");
if (root) {
  startApp(root, new ApiClient(resolveBaseUrl()));
}
