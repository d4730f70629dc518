/** Entry point: wires the query console, browse panel, and model list to
 * the HTTP service. The service mounts the built app at /ui/, so the API
 * base is the page's own origin; append ?api=http://host:port to develop
 * against another instance. */

import { ApiError, Client } from "./api.js";
import { PRESETS } from "./presets.js";
import {
  renderBrowse,
  renderError,
  renderModels,
  renderResultsTable,
  renderStats,
} from "./render.js";

function apiBase(): string {
  const override = new URLSearchParams(window.location.search).get("api");
  return override ? override.replace(/\/$/, "") : "";
}

const client = new Client(apiBase());

function element<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) {
    throw new Error(`missing element #${id}`);
  }
  return found as T;
}

function showFailure(target: HTMLElement, error: unknown): void {
  if (error instanceof ApiError) {
    target.innerHTML = renderError(error.payload);
  } else {
    target.innerHTML = renderError({ error: "RequestFailed", message: String(error) });
  }
}

async function runQuery(text: string): Promise<void> {
  const output = element<HTMLDivElement>("results");
  output.innerHTML = `<p class="empty">running…</p>`;
  try {
    output.innerHTML = renderResultsTable(await client.query(text));
  } catch (error) {
    showFailure(output, error);
  }
}

async function browseTo(iri: string): Promise<void> {
  const output = element<HTMLDivElement>("browse");
  output.innerHTML = `<p class="empty">loading…</p>`;
  try {
    output.innerHTML = renderBrowse(await client.browse(iri));
  } catch (error) {
    showFailure(output, error);
  }
  element<HTMLInputElement>("browse-input").value = iri;
}

async function refreshSidebar(): Promise<void> {
  const health = element<HTMLSpanElement>("health");
  try {
    const payload = await client.health();
    health.textContent = `${payload.status} — ${payload.triples} triples`;
    element<HTMLDivElement>("models").innerHTML = renderModels(await client.models());
    element<HTMLDivElement>("stats").innerHTML = renderStats(await client.stats());
  } catch (error) {
    health.textContent = `unreachable: ${String(error)}`;
  }
}

function wirePresets(): void {
  const bar = element<HTMLDivElement>("presets");
  const editor = element<HTMLTextAreaElement>("query");
  for (const preset of PRESETS) {
    const button = document.createElement("button");
    button.type = "button";
    button.textContent = preset.label;
    button.dataset.preset = preset.name;
    button.addEventListener("click", () => {
      editor.value = preset.text;
      void runQuery(preset.text);
    });
    bar.appendChild(button);
  }
}

export function start(): void {
  wirePresets();
  element<HTMLButtonElement>("run").addEventListener("click", () => {
    void runQuery(element<HTMLTextAreaElement>("query").value);
  });
  element<HTMLButtonElement>("browse-go").addEventListener("click", () => {
    const iri = element<HTMLInputElement>("browse-input").value.trim();
    if (iri) {
      void browseTo(iri);
    }
  });
  // Any rendered IRI anchor drives the browse panel.
  document.addEventListener("click", (event) => {
    const target = event.target as HTMLElement | null;
    const anchor = target?.closest?.("a.iri") as HTMLAnchorElement | null;
    if (anchor?.dataset.iri) {
      event.preventDefault();
      void browseTo(anchor.dataset.iri);
    }
  });
  void refreshSidebar();
}

start();
