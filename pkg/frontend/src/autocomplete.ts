/** Autocomplete field controller: debounced lookups, a keyboard-and-mouse
 * dropdown, and a commit step that yields either a concept body (entry
 * chosen from the dropdown) or a text body (free text).
 *
 * Concepts are never fabricated client-side: the only place a concept IRI
 * can enter the field state is a suggestion object returned by the server.
 * Overlapping requests resolve last-write-wins; a failed lookup degrades
 * the field to plain text entry.
 */

import { BodyPayload, Suggestion } from "./api.js";

export type SuggestionSource = (q: string, limit: number) => Promise<Suggestion[]>;

export interface AutocompleteOptions {
  debounceMs?: number;
  limit?: number;
}

export class AutocompleteField {
  readonly list: HTMLUListElement;
  private suggestions: Suggestion[] = [];
  private chosen: Suggestion | null = null;
  private typedBeforeChoice = "";
  private highlighted = -1;
  private seq = 0;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private degradedFlag = false;
  private readonly debounceMs: number;
  private readonly limit: number;

  constructor(
    private readonly input: HTMLInputElement,
    private readonly source: SuggestionSource,
    options: AutocompleteOptions = {},
  ) {
    this.debounceMs = options.debounceMs ?? 150;
    this.limit = options.limit ?? 10;
    this.list = this.input.ownerDocument.createElement("ul");
    this.list.className = "autocomplete-list";
    this.list.setAttribute("role", "listbox");
    this.list.hidden = true;
    this.input.insertAdjacentElement("afterend", this.list);

    this.input.addEventListener("input", () => this.onInput());
    this.input.addEventListener("keydown", (event) => this.onKeydown(event));
  }

  get degraded(): boolean {
    return this.degradedFlag;
  }

  /** Labels currently shown, in dropdown order. */
  visibleLabels(): string[] {
    return this.list.hidden ? [] : this.suggestions.map((s) => s.label);
  }

  private onInput(): void {
    this.chosen = null; // edited text no longer corresponds to a concept
    const q = this.input.value.trim();
    if (this.timer !== null) clearTimeout(this.timer);
    if (!q) {
      this.seq += 1; // outrace any in-flight lookup
      this.render([]);
      return;
    }
    this.timer = setTimeout(() => void this.lookup(q), this.debounceMs);
  }

  private async lookup(q: string): Promise<void> {
    this.seq += 1;
    const mine = this.seq;
    let found: Suggestion[];
    try {
      found = await this.source(q, this.limit);
    } catch {
      if (mine === this.seq) {
        this.degradedFlag = true;
        this.render([]);
      }
      return;
    }
    if (mine !== this.seq) return; // a newer query owns the dropdown
    this.degradedFlag = false;
    this.render(found);
  }

  private render(found: Suggestion[]): void {
    this.suggestions = found;
    this.highlighted = -1;
    this.list.textContent = "";
    this.list.hidden = found.length === 0;
    found.forEach((suggestion, index) => {
      const item = this.input.ownerDocument.createElement("li");
      item.setAttribute("role", "option");
      item.textContent = suggestion.label;
      item.addEventListener("mousedown", (event) => {
        event.preventDefault();
        this.select(index);
      });
      this.list.appendChild(item);
    });
  }

  private onKeydown(event: KeyboardEvent): void {
    if (event.key === "Escape") {
      // declining the dropdown means a later commit stores plain text
      this.chosen = null;
      this.hide();
      return;
    }
    if (this.list.hidden || this.suggestions.length === 0) return;
    if (event.key === "ArrowDown" || event.key === "ArrowUp") {
      event.preventDefault();
      const step = event.key === "ArrowDown" ? 1 : -1;
      const count = this.suggestions.length;
      this.highlighted = (this.highlighted + step + count) % count;
      this.list.querySelectorAll("li").forEach((item, index) => {
        item.classList.toggle("highlighted", index === this.highlighted);
      });
    } else if (event.key === "Enter" && this.highlighted >= 0) {
      event.preventDefault();
      this.select(this.highlighted);
    }
  }

  private select(index: number): void {
    const suggestion = this.suggestions[index];
    if (!suggestion) return;
    this.typedBeforeChoice = this.input.value;
    this.chosen = suggestion;
    this.input.value = suggestion.label;
    this.hide();
  }

  private hide(): void {
    this.list.hidden = true;
    this.highlighted = -1;
  }

  /** Field state for submission. Null when the input is empty. */
  commit(): BodyPayload | null {
    const value = this.input.value.trim();
    if (this.chosen && this.chosen.concept !== null) {
      return {
        kind: "concept",
        concept: this.chosen.concept,
        entered_text: this.typedBeforeChoice || this.chosen.label,
      };
    }
    if (!value) return null;
    return { kind: "text", text: value, entered_text: value };
  }

  reset(): void {
    this.input.value = "";
    this.chosen = null;
    this.typedBeforeChoice = "";
    this.render([]);
  }
}
