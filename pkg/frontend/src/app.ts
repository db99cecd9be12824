// Shell and hash router. Routes:
//   #/                         document list
//   #/doc/{id}                 overview panels
//   #/doc/{id}/kri/{kri}       drill-down for one KRI
//   #/doc/{id}/kri/{kri}/unit/{unit}  drill-down with a position highlighted
//   #/doc/{id}/audit           audit log

import { ApiClient } from "./api.js";
import { el } from "./dom.js";
import type { Role } from "./types.js";
import { renderAudit } from "./views/audit.js";
import { renderDrilldown } from "./views/drilldown.js";
import { renderDocumentList } from "./views/list.js";
import { renderOverview } from "./views/overview.js";
import type { Nav } from "./views/shared.js";

export type Route =
  | { screen: "list" }
  | { screen: "overview"; documentId: string }
  | { screen: "kri"; documentId: string; kriId: string; unitId?: string }
  | { screen: "audit"; documentId: string };

export function parseRoute(hash: string): Route {
  const raw = hash.startsWith("#") ? hash.slice(1) : hash;
  const parts = raw
    .split("/")
    .filter((part) => part.length > 0)
    .map(decodeURIComponent);
  if (parts[0] !== "doc" || parts.length < 2) {
    return { screen: "list" };
  }
  const documentId = parts[1]!;
  if (parts.length === 2) {
    return { screen: "overview", documentId };
  }
  if (parts[2] === "audit" && parts.length === 3) {
    return { screen: "audit", documentId };
  }
  if (parts[2] === "kri" && parts.length === 4) {
    return { screen: "kri", documentId, kriId: parts[3]! };
  }
  if (parts[2] === "kri" && parts.length === 6 && parts[4] === "unit") {
    return { screen: "kri", documentId, kriId: parts[3]!, unitId: parts[5]! };
  }
  return { screen: "list" };
}

/** API base: <meta name="soaguard-api-base">, then ?api=, then the serve default. */
export function resolveBaseUrl(): string {
  const meta = document.querySelector('meta[name="soaguard-api-base"]');
  const fromMeta = meta?.getAttribute("content")?.trim();
  if (fromMeta) {
    return fromMeta.replace(/\/+$/, "");
  }
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  if (fromQuery) {
    return fromQuery.replace(/\/+$/, "");
  }
  return "http://127.0.0.1:8000";
}

export interface App {
  render(): Promise<void>;
}

export function startApp(root: HTMLElement, api: ApiClient): App {
  const roleSelect = el("select", { class: "role-select", "aria-label": "acting role" }, []);
  for (const role of ["auditor", "advisor"] as const) {
    roleSelect.append(el("option", { value: role }, [role]));
  }
  (roleSelect as HTMLSelectElement).value = api.role;
  roleSelect.addEventListener("change", () => {
    api.role = (roleSelect as HTMLSelectElement).value as Role;
  });

  const outlet = el("main", { class: "outlet" });
  root.append(
    el("header", { class: "topbar" }, [
      el("a", { href: "#/", class: "home" }, ["soaguard review"]),
      el("label", { class: "role-label" }, ["acting as ", roleSelect]),
    ]),
    outlet,
  );

  const nav: Nav = {
    go(hash: string) {
      if (window.location.hash === hash) {
        void render();
      } else {
        window.location.hash = hash;
      }
    },
  };

  const render = async (): Promise<void> => {
    const route = parseRoute(window.location.hash);
    switch (route.screen) {
      case "list":
        return renderDocumentList(outlet, api, nav);
      case "overview":
        return renderOverview(outlet, api, route.documentId, nav);
      case "kri":
        return renderDrilldown(outlet, api, route.documentId, route.kriId, nav, route.unitId);
      case "audit":
        return renderAudit(outlet, api, route.documentId, nav);
    }
  };

  window.addEventListener("hashchange", () => {
    void render();
  });
  void render();
  return { render };
}
