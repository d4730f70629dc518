/** Pure HTML builders: every function maps service payloads to markup
 * strings, so they are unit-testable without a DOM. All dynamic text goes
 * through escapeHtml; IRIs become anchors carrying data-iri for the browse
 * panel to pick up. */

import type {
  Binding,
  BrowsePayload,
  BrowseRow,
  ErrorPayload,
  ModelsPayload,
  ResultsJson,
  StatsPayload,
  Term,
} from "./types.js";

const PREFIXES: ReadonlyArray<readonly [string, string]> = [
  ["AgriKMap:", "http://www.ucd.ie/consus/AgriKMap#"],
  ["AgriOnt:", "http://www.ucd.ie/consus/AgriOnt#"],
  ["rdf:", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"],
  ["rdfs:", "http://www.w3.org/2000/01/rdf-schema#"],
  ["owl:", "http://www.w3.org/2002/07/owl#"],
  ["xsd:", "http://www.w3.org/2001/XMLSchema#"],
];

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

/** Compact a full IRI to a prefixed name when one of the known prefixes applies. */
export function shorten(iri: string): string {
  for (const [prefix, namespace] of PREFIXES) {
    if (iri.startsWith(namespace)) {
      return prefix + iri.slice(namespace.length);
    }
  }
  return iri;
}

export function renderTerm(term: Term): string {
  if (term.type === "uri") {
    const full = escapeHtml(term.value);
    return `<a href="#" class="iri" data-iri="${full}" title="${full}">${escapeHtml(shorten(term.value))}</a>`;
  }
  if (term.type === "bnode") {
    return `<span class="bnode">_:${escapeHtml(term.value)}</span>`;
  }
  let suffix = "";
  if (term["xml:lang"]) {
    suffix = `<span class="lang">@${escapeHtml(term["xml:lang"])}</span>`;
  } else if (term.datatype) {
    suffix = `<span class="datatype">^^${escapeHtml(shorten(term.datatype))}</span>`;
  }
  return `<span class="literal">"${escapeHtml(term.value)}"</span>${suffix}`;
}

function tableRow(cells: string[], tag: "td" | "th" = "td"): string {
  return `<tr>${cells.map((c) => `<${tag}>${c}</${tag}>`).join("")}</tr>`;
}

export function renderResultsTable(results: ResultsJson): string {
  const vars = results.head.vars;
  const bindings = results.results.bindings;
  const count = bindings.length;
  const caption = `${count} row${count === 1 ? "" : "s"}`;
  if (count === 0) {
    return `<p class="empty">no rows (${caption})</p>`;
  }
  const head = tableRow(
    vars.map((v) => escapeHtml(`?${v}`)),
    "th",
  );
  const body = bindings
    .map((binding: Binding) =>
      tableRow(vars.map((v) => (binding[v] ? renderTerm(binding[v] as Term) : ""))),
    )
    .join("");
  return `<table class="results"><thead>${head}</thead><tbody>${body}</tbody></table><p class="caption">(${caption})</p>`;
}

function renderBrowseRows(rows: BrowseRow[]): string {
  if (rows.length === 0) {
    return `<p class="empty">none</p>`;
  }
  const body = rows
    .map((row) =>
      tableRow([renderTerm(row.subject), renderTerm(row.predicate), renderTerm(row.object)]),
    )
    .join("");
  return `<table class="results"><tbody>${body}</tbody></table>`;
}

export function renderBrowse(payload: BrowsePayload): string {
  return (
    `<h3>${escapeHtml(shorten(payload.iri))}</h3>` +
    `<p class="full-iri">${escapeHtml(payload.iri)}</p>` +
    `<h4>as subject (${payload.subject_of.length})</h4>` +
    renderBrowseRows(payload.subject_of) +
    `<h4>as object (${payload.object_of.length})</h4>` +
    renderBrowseRows(payload.object_of)
  );
}

export function renderModels(models: ModelsPayload): string {
  const sections = Object.entries(models).map(([task, iris]) => {
    const items =
      iris.length === 0
        ? `<li class="empty">none</li>`
        : iris
            .map(
              (iri) =>
                `<li><a href="#" class="iri" data-iri="${escapeHtml(iri)}">${escapeHtml(shorten(iri))}</a></li>`,
            )
            .join("");
    return `<h4>${escapeHtml(task)} (${iris.length})</h4><ul>${items}</ul>`;
  });
  return sections.join("");
}

export function renderStats(stats: StatsPayload): string {
  const entries: Array<[string, number]> = [
    ["triples", stats.triples],
    ["classes", stats.classes],
    ["object properties", stats.object_properties],
    ["data properties", stats.data_properties],
    ["individuals", stats.individuals],
    ["axioms", stats.axioms],
  ];
  const items = entries
    .map(([label, value]) => `<li>${escapeHtml(label)}: <b>${value}</b></li>`)
    .join("");
  return `<ul class="stats">${items}</ul>`;
}

export function renderError(error: ErrorPayload): string {
  const parts: string[] = [`<b>${escapeHtml(error.error)}</b>`];
  if (error.feature) {
    parts.push(`feature ${escapeHtml(error.feature)}`);
  }
  if (error.field) {
    parts.push(`field ${escapeHtml(error.field)}`);
  }
  if (error.line !== undefined && error.column !== undefined) {
    parts.push(`line ${error.line}, column ${error.column}`);
  }
  if (error.message) {
    parts.push(escapeHtml(error.message));
  }
  return `<div class="error">${parts.join(" — ")}</div>`;
}
