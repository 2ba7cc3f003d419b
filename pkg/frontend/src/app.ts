/** Single-page client: session, domain picker with sub-domains and
 * expertise sliders, task strip, annotation page with region drawing,
 * and search. Talks to the JSON API only; renders straight to the DOM.
 */

import { ApiClient, ApiError, DomainDetail, FieldSpec, ImageInfo, ObjectView, Task } from "./api.js";
import { AutocompleteField } from "./autocomplete.js";
import { Rect, rectToDisplay } from "./coords.js";
import { RegionDraft } from "./regions.js";
import { StringKey, t } from "./i18n.js";

const MAX_DISPLAY_WIDTH = 640;

interface AppState {
  api: ApiClient;
  lang: string;
  login: string | null;
  domain: string | null;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  node.append(...children);
  return node;
}

function msg(state: AppState, key: StringKey): string {
  return t(state.lang, key);
}

// -- session ------------------------------------------------------------------

function loginView(state: AppState, refresh: () => void): HTMLElement {
  const loginInput = el("input", { name: "login", placeholder: msg(state, "loginName") });
  const displayInput = el("input", { name: "display", placeholder: msg(state, "displayName") });
  const credentialInput = el("input", { name: "credential", type: "password", placeholder: msg(state, "credential") });
  const error = el("div", { class: "error" });

  const act = async (registerFirst: boolean) => {
    error.textContent = "";
    try {
      if (registerFirst) {
        await state.api.register(loginInput.value, displayInput.value || loginInput.value, credentialInput.value, state.lang);
      }
      await state.api.login(loginInput.value, credentialInput.value);
      state.login = loginInput.value;
      location.hash = "#/domains";
      refresh();
    } catch (failure) {
      error.textContent = failure instanceof ApiError ? failure.message : String(failure);
    }
  };

  const loginButton = el("button", {}, msg(state, "login"));
  loginButton.addEventListener("click", () => void act(false));
  const registerButton = el("button", {}, msg(state, "register"));
  registerButton.addEventListener("click", () => void act(true));

  return el(
    "section",
    { class: "login" },
    el("h1", {}, msg(state, "appTitle")),
    loginInput,
    displayInput,
    credentialInput,
    el("div", {}, loginButton, registerButton),
    error,
  );
}

// -- domain picker --------------------------------------------------------------

async function domainsView(state: AppState): Promise<HTMLElement> {
  const { domains } = await state.api.domains(state.lang);
  const cards = domains.map((domain) => {
    const card = el(
      "article",
      { class: "domain-card" },
      el("h2", {}, domain.display ?? domain.id),
      el("p", { class: "tagline" }, domain.tagline ?? ""),
    );
    for (const image of domain.brand_images.slice(0, 1)) {
      card.prepend(el("img", { src: image, alt: domain.display ?? domain.id }));
    }
    card.addEventListener("click", () => {
      location.hash = `#/domain/${encodeURIComponent(domain.id)}`;
    });
    return card;
  });
  return el("section", { class: "domains" }, el("h1", {}, msg(state, "domains")), ...cards);
}

function expertiseForm(state: AppState, detail: DomainDetail): HTMLElement {
  const sliders = new Map<string, HTMLInputElement>();
  const rows = detail.expertise_topics.map((topic) => {
    const slider = el("input", { type: "range", min: "1", max: "5", value: "3" });
    sliders.set(topic.concept, slider);
    return el("label", { class: "expertise-row" }, topic.label ?? topic.concept, slider);
  });
  const save = el("button", {}, msg(state, "saveExpertise"));
  const status = el("span", { class: "status" });
  save.addEventListener("click", () => {
    const levels: Record<string, number> = {};
    sliders.forEach((slider, concept) => {
      levels[concept] = Number(slider.value);
    });
    state.api
      .setExpertise(detail.id, levels)
      .then(() => (status.textContent = "✓"))
      .catch((failure) => (status.textContent = failure instanceof ApiError ? failure.message : String(failure)));
  });
  return el("form", { class: "expertise" }, el("p", {}, msg(state, "expertiseIntro")), ...rows, save, status);
}

async function domainView(state: AppState, id: string): Promise<HTMLElement> {
  const detail = await state.api.domain(id, state.lang);
  state.domain = id;
  const section = el(
    "section",
    { class: "domain" },
    el("h1", {}, detail.display ?? detail.id),
    el("p", { class: "tagline" }, detail.tagline ?? ""),
  );

  if (detail.tree.length > 1) {
    const list = el("ul", { class: "subdomain-tree" });
    for (const node of detail.tree) {
      const label = `${node.display ?? node.domain} (${node.object_count} ${msg(state, "objectsWaiting")})`;
      const link = el("a", { href: `#/domain/${encodeURIComponent(node.domain)}` }, label);
      const item = el("li", { style: `margin-left: ${node.depth}em` }, link);
      list.appendChild(item);
    }
    section.append(el("h2", {}, msg(state, "pickSubdomain")), list);
  }

  if (detail.assignment_mode === "recommendation" && detail.expertise_topics.length > 0) {
    section.append(expertiseForm(state, detail));
  }

  const tasksButton = el("button", {}, msg(state, "nextTasks"));
  const strip = el("div", { class: "task-strip" });
  tasksButton.addEventListener("click", () => {
    state.api
      .tasksNext(id, { lang: state.lang, n: 6 })
      .then(({ tasks }) => renderTasks(state, strip, tasks))
      .catch((failure) => (strip.textContent = failure instanceof ApiError ? failure.message : String(failure)));
  });
  section.append(tasksButton, strip);
  return section;
}

function renderTasks(state: AppState, strip: HTMLElement, tasks: Task[]): void {
  strip.textContent = "";
  for (const task of tasks) {
    const card = el("article", { class: "task-card" }, el("h3", {}, task.title ?? task.object));
    if (task.image) card.prepend(el("img", { src: task.image.location, alt: task.title ?? "" }));
    const go = el("button", {}, msg(state, "annotate"));
    go.addEventListener("click", () => {
      location.hash = `#/annotate/${encodeURIComponent(task.object)}`;
    });
    card.append(go);
    strip.append(card);
  }
}

// -- annotation page --------------------------------------------------------------

function displayScale(image: ImageInfo): number {
  return Math.min(1, MAX_DISPLAY_WIDTH / image.width);
}

interface RegionState {
  draft: RegionDraft;
  committed: Rect | null; // native pixels, clamped
}

function imagePane(image: ImageInfo, region: RegionState): HTMLElement {
  const scale = displayScale(image);
  const pane = el("div", {
    class: "image-pane",
    style: `position: relative; width: ${Math.round(image.width * scale)}px; height: ${Math.round(image.height * scale)}px`,
  });
  pane.append(el("img", { src: image.location, draggable: "false", style: "width: 100%; height: 100%" }));
  const overlay = el("div", { class: "region-overlay", style: "position: absolute; display: none" });
  pane.append(overlay);

  const toLocal = (event: MouseEvent) => {
    const bounds = pane.getBoundingClientRect();
    return { x: Math.round(event.clientX - bounds.left), y: Math.round(event.clientY - bounds.top) };
  };
  const paint = () => {
    const shown = region.committed
      ? rectToDisplay(region.committed, scale)
      : region.draft.displayRect();
    if (!shown) {
      overlay.style.display = "none";
      return;
    }
    overlay.style.display = "block";
    overlay.style.left = `${shown.x}px`;
    overlay.style.top = `${shown.y}px`;
    overlay.style.width = `${shown.w}px`;
    overlay.style.height = `${shown.h}px`;
  };

  pane.addEventListener("mousedown", (event) => {
    region.committed = null;
    region.draft.begin(toLocal(event));
    paint();
  });
  pane.addEventListener("mousemove", (event) => {
    if (!region.draft.active) return;
    region.draft.drag(toLocal(event));
    paint();
  });
  pane.addEventListener("mouseup", (event) => {
    region.draft.drag(toLocal(event));
    region.committed = region.draft.finish(scale, image);
    paint();
  });
  return pane;
}

function fieldEditor(
  state: AppState,
  domain: string,
  object: ObjectView,
  spec: FieldSpec,
  region: RegionState,
  onSubmitted: () => void,
): HTMLElement {
  const wrap = el("div", { class: `field field-${spec.type}` }, el("h3", {}, spec.name ?? spec.id));
  if (spec.instruction) wrap.append(el("p", { class: "instruction" }, spec.instruction));
  const error = el("div", { class: "field-error" });

  let readBody: () => { kind: "concept" | "text"; concept?: string; text?: string; entered_text?: string } | null;
  let clear: () => void;

  if (spec.type === "autocomplete-text") {
    const input = el("input", { type: "text" });
    wrap.append(input);
    const field = new AutocompleteField(input, async (q, limit) => {
      const { suggestions } = await state.api.autocomplete(domain, spec.id, q, { lang: state.lang, limit });
      return suggestions;
    });
    readBody = () => field.commit();
    clear = () => field.reset();
  } else if (spec.type === "radio" || spec.type === "checkbox") {
    const inputs: HTMLInputElement[] = [];
    for (const value of spec.values ?? []) {
      const input = el("input", { type: spec.type === "radio" ? "radio" : "checkbox", name: spec.id, value });
      inputs.push(input);
      wrap.append(el("label", {}, input, value));
    }
    readBody = () => {
      const picked = inputs.find((input) => input.checked);
      return picked ? { kind: "text", text: picked.value, entered_text: picked.value } : null;
    };
    clear = () => inputs.forEach((input) => (input.checked = false));
  } else {
    const area = el("textarea", {});
    wrap.append(area);
    readBody = () => (area.value.trim() ? { kind: "text", text: area.value, entered_text: area.value } : null);
    clear = () => (area.value = "");
  }

  const submit = el("button", {}, msg(state, "submit"));
  submit.addEventListener("click", () => {
    error.textContent = "";
    const body = readBody();
    if (!body) return;
    if (spec.scope === "region" && region.committed === null) {
      error.textContent = msg(state, "regionRequired");
      return;
    }
    state.api
      .submitAnnotation({
        domain,
        object: object.id,
        field: spec.id,
        body,
        region: spec.scope === "region" ? region.committed ?? undefined : undefined,
      })
      .then(() => {
        clear();
        region.committed = null;
        onSubmitted();
      })
      .catch((failure) => {
        error.textContent = failure instanceof ApiError ? failure.message : String(failure);
      });
  });
  wrap.append(submit, error);
  return wrap;
}

async function annotateView(state: AppState, objectId: string): Promise<HTMLElement> {
  const object = await state.api.objectView(objectId, state.lang);
  const domain = state.domain ?? object.domains[0];
  const detail = await state.api.domain(domain, state.lang);

  const section = el(
    "section",
    { class: "annotate" },
    el("h1", {}, object.title ?? object.id),
    el("p", { class: "hint" }, msg(state, "drawHint")),
  );
  const region: RegionState = { draft: new RegionDraft(), committed: null };
  if (object.image) section.append(imagePane(object.image, region));

  const prior = el("ul", { class: "prior" });
  const refreshPrior = () => {
    state.api
      .annotationsOn(object.id, state.lang)
      .then(({ annotations }) => {
        prior.textContent = "";
        for (const annotation of annotations) {
          const label = annotation.body.label ?? annotation.body.entered_text ?? "";
          prior.append(el("li", {}, `${annotation.field}: ${label} (${annotation.user}, ${annotation.status})`));
        }
      })
      .catch(() => undefined);
  };
  refreshPrior();

  const fields = el("div", { class: "fields" });
  for (const spec of detail.fields) {
    fields.append(fieldEditor(state, domain, object, spec, region, refreshPrior));
  }
  section.append(fields, el("h2", {}, msg(state, "priorAnnotations")), prior);
  return section;
}

// -- search ------------------------------------------------------------------------

function searchView(state: AppState): HTMLElement {
  const input = el("input", { type: "search", placeholder: msg(state, "searchPlaceholder") });
  const results = el("div", { class: "results" });
  const run = () => {
    state.api
      .search(input.value, { lang: state.lang })
      .then((found) => {
        results.textContent = "";
        if (found.clusters.length === 0) {
          results.append(el("p", {}, msg(state, "noResults")));
          return;
        }
        for (const cluster of found.clusters) {
          const list = el("ul", {});
          for (const hit of cluster.hits) {
            const link = el("a", { href: `#/annotate/${encodeURIComponent(hit.object)}` }, hit.title ?? hit.object);
            list.append(el("li", {}, link));
          }
          results.append(el("h3", {}, cluster.key), list);
        }
      })
      .catch((failure) => (results.textContent = failure instanceof ApiError ? failure.message : String(failure)));
  };
  input.addEventListener("change", run);
  const button = el("button", {}, msg(state, "search"));
  button.addEventListener("click", run);
  return el("section", { class: "search" }, input, button, results);
}

// -- router -------------------------------------------------------------------------

export function startApp(root: HTMLElement, api: ApiClient = new ApiClient()): void {
  const state: AppState = { api, lang: navigator.language.split("-")[0] || "en", login: null, domain: null };

  const render = () => {
    const [, route, argument] = location.hash.split("/");
    const place = (view: HTMLElement) => {
      root.textContent = "";
      root.append(view);
    };
    if (!state.api.token) {
      place(loginView(state, render));
      return;
    }
    if (route === "domain" && argument) {
      void domainView(state, decodeURIComponent(argument)).then(place);
    } else if (route === "annotate" && argument) {
      void annotateView(state, decodeURIComponent(argument)).then(place);
    } else if (route === "search") {
      place(searchView(state));
    } else {
      void domainsView(state).then(place);
    }
  };

  window.addEventListener("hashchange", render);
  render();
}
