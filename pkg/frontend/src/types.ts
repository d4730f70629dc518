/** Payload shapes of the knowledge-map HTTP service. */

export interface Term {
  type: "uri" | "literal" | "bnode";
  value: string;
  datatype?: string;
  "xml:lang"?: string;
}

export type Binding = Record<string, Term>;

export interface ResultsJson {
  head: { vars: string[] };
  results: { bindings: Binding[] };
}

export interface BrowseRow {
  subject: Term;
  predicate: Term;
  object: Term;
}

export interface BrowsePayload {
  iri: string;
  subject_of: BrowseRow[];
  object_of: BrowseRow[];
}

/** Model IRIs grouped by task kind. */
export type ModelsPayload = Record<string, string[]>;

export interface HealthPayload {
  status: string;
  triples: number;
}

export interface StatsPayload {
  axioms: number;
  logical_axioms: number;
  declaration_axioms: number;
  classes: number;
  object_properties: number;
  data_properties: number;
  individuals: number;
  triples: number;
}

/** Error body returned by the service on non-2xx responses. */
export interface ErrorPayload {
  error: string;
  message?: string;
  line?: number;
  column?: number;
  feature?: string;
  field?: string;
  violations?: string[];
}
