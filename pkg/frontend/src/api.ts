/** Typed client for the campaign JSON API. fetch is injectable so tests
 * can run against a scripted server. */

import { Rect } from "./coords.js";

export interface Suggestion {
  label: string;
  concept: string | null;
  matched_label: string;
}

export interface FieldSpec {
  id: string;
  name: string | null;
  instruction: string | null;
  type: "autocomplete-text" | "radio" | "checkbox" | "text";
  scope: "region" | "whole-object";
  values?: string[];
  subset?: { scheme: string; seed: string; size: number };
}

export interface DomainSummary {
  id: string;
  display: string | null;
  tagline: string | null;
  brand_images: string[];
  assignment_mode: string;
  subdomains: string[];
}

export interface DomainDetail extends DomainSummary {
  default_language: string;
  parent: string | null;
  fields: FieldSpec[];
  expertise_topics: { concept: string; label: string | null }[];
  tree: { domain: string; depth: number; object_count: number; display: string | null }[];
}

export interface ImageInfo {
  location: string;
  width: number;
  height: number;
}

export interface Task {
  object: string;
  title: string | null;
  image: ImageInfo | null;
  annotator_count: number;
  score: number | null;
}

export interface ObjectView {
  id: string;
  title: string | null;
  description: string | null;
  creator: string | null;
  image: ImageInfo | null;
  subjects: { concept: string; label: string | null }[];
  annotation_count: number;
  domains: string[];
}

export interface BodyPayload {
  kind: "concept" | "text";
  concept?: string;
  text?: string;
  entered_text?: string;
}

export interface AnnotationView {
  id: string;
  object: string;
  field: string;
  body: BodyPayload & { label?: string | null };
  region: Rect | null;
  user: string;
  created_at: string;
  status: string;
}

export interface SearchHit {
  object: string;
  path_length: number;
  matched_label: string;
  title: string | null;
}

export interface SearchResponse {
  query: string;
  clusters: { key: string; hits: SearchHit[] }[];
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

type Query = Record<string, string | number | undefined>;

export class ApiClient {
  token: string | null = null;

  constructor(
    private base: string = "/api",
    private fetchFn: typeof fetch = (...args) => fetch(...args),
  ) {}

  private async request<T>(method: string, path: string, query?: Query, body?: unknown): Promise<T> {
    const params = new URLSearchParams();
    for (const [key, value] of Object.entries(query ?? {})) {
      if (value !== undefined) params.set(key, String(value));
    }
    const qs = params.toString();
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["content-type"] = "application/json";
    if (this.token) headers["authorization"] = `Bearer ${this.token}`;
    const response = await this.fetchFn(`${this.base}${path}${qs ? `?${qs}` : ""}`, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    if (!response.ok) {
      let code = "error";
      let message = text || response.statusText;
      try {
        const parsed = JSON.parse(text);
        code = parsed.code ?? code;
        message = parsed.message ?? message;
      } catch {
        // non-JSON error body; keep the raw text
      }
      throw new ApiError(response.status, code, message);
    }
    const type = response.headers.get("content-type") ?? "";
    return (type.includes("json") ? JSON.parse(text) : text) as T;
  }

  async register(login: string, displayName: string, credential: string, language?: string) {
    return this.request<{ user: string; login: string }>("POST", "/users/register", undefined, {
      login,
      display_name: displayName,
      credential,
      language,
    });
  }

  async login(login: string, credential: string): Promise<string> {
    const got = await this.request<{ token: string }>("POST", "/login", undefined, { login, credential });
    this.token = got.token;
    return got.token;
  }

  domains(lang?: string) {
    return this.request<{ domains: DomainSummary[] }>("GET", "/domains", { lang });
  }

  domain(id: string, lang?: string) {
    return this.request<DomainDetail>("GET", `/domains/${encodeURIComponent(id)}`, { lang });
  }

  tasksNext(domain: string, opts: { mode?: string; n?: number; lang?: string } = {}) {
    return this.request<{ domain: string; mode: string; tasks: Task[] }>("GET", "/tasks/next", {
      domain,
      ...opts,
    });
  }

  objectView(id: string, lang?: string) {
    return this.request<ObjectView>("GET", `/objects/${id}`, { lang });
  }

  annotationsOn(object: string, lang?: string) {
    return this.request<{ annotations: AnnotationView[] }>("GET", "/annotations", { object, lang });
  }

  submitAnnotation(payload: {
    domain: string;
    object: string;
    field: string;
    body: BodyPayload;
    region?: Rect;
  }) {
    return this.request<AnnotationView>("POST", "/annotations", undefined, payload);
  }

  autocomplete(domain: string, field: string, q: string, opts: { lang?: string; limit?: number } = {}) {
    return this.request<{ suggestions: Suggestion[] }>("GET", "/autocomplete", {
      domain,
      field,
      q,
      ...opts,
    });
  }

  search(q: string, opts: { lang?: string; domain?: string } = {}) {
    return this.request<SearchResponse>("GET", "/search", { q, ...opts });
  }

  setExpertise(domain: string, levels: Record<string, number>) {
    return this.request<{ user: string; expertise: Record<string, number> }>(
      "POST",
      "/expertise",
      undefined,
      { domain, levels },
    );
  }
}
