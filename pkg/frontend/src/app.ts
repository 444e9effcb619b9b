/** Shell: three pages behind nav tabs, with the whole view state mirrored in
 * the URL. Back and forward therefore walk through earlier views, and any
 * URL can be pasted to reproduce one.
 */

import { FetchJson } from "./api.js";
import { AggregatesPage } from "./aggregates.js";
import { CorrelationsPage } from "./correlations.js";
import { el } from "./dom.js";
import { MapPage } from "./map.js";
import { decode, encode, Page, PAGES, ViewState } from "./state.js";

export class App {
  state: ViewState;
  private readonly sections: Record<Page, HTMLElement>;
  private readonly pages: {
    map: MapPage;
    aggregates: AggregatesPage;
    correlations: CorrelationsPage;
  };
  private readonly tabs = new Map<Page, HTMLButtonElement>();

  constructor(root: HTMLElement, base = "", doFetch?: FetchJson) {
    this.state = decode(window.location.search);

    const nav = el("nav", { class: "tabs" });
    for (const page of PAGES) {
      const tab = el("button", { type: "button", class: `tab tab-${page}` }, page);
      tab.addEventListener("click", () => this.apply({ page }));
      this.tabs.set(page, tab);
      nav.append(tab);
    }

    this.sections = {
      map: el("section", { class: "page page-map" }),
      aggregates: el("section", { class: "page page-aggregates" }),
      correlations: el("section", { class: "page page-correlations" }),
    };
    const onState = (patch: Partial<ViewState>): void => this.apply(patch);
    this.pages = {
      map: new MapPage(this.sections.map, base, doFetch, onState),
      aggregates: new AggregatesPage(this.sections.aggregates, base, doFetch, onState),
      correlations: new CorrelationsPage(this.sections.correlations, base, doFetch, onState),
    };
    root.append(nav, this.sections.map, this.sections.aggregates, this.sections.correlations);

    window.addEventListener("popstate", () => {
      this.state = decode(window.location.search);
      void this.render();
    });
  }

  apply(patch: Partial<ViewState>): void {
    this.state = { ...this.state, ...patch };
    const query = encode(this.state);
    window.history.pushState(null, "", query === "" ? window.location.pathname : `?${query}`);
    void this.render();
  }

  async render(): Promise<void> {
    for (const page of PAGES) {
      this.sections[page].hidden = page !== this.state.page;
      this.tabs.get(page)?.classList.toggle("active", page === this.state.page);
    }
    await this.pages[this.state.page].update(this.state);
  }
}
