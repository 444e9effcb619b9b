/** Correlations page: neighborhood-level Pearson coefficients for the chosen
 * crime measure against census factors, shown for the city and the westside
 * side by side. Coefficients arrive computed from the API; an undefined one
 * (count below the minimum, or zero variance) arrives as null and is shown
 * as "n/a" rather than hidden. The API's methodological caveat is rendered
 * verbatim and is always visible.
 */

import { api, CorrelationsBody, FetchJson, isAbort, MetaBody, RequestLanes } from "./api.js";
import { clear, el, option } from "./dom.js";
import { OnState, ViewState } from "./state.js";

export const MEASURES: readonly { value: string; label: string }[] = Object.freeze([
  { value: "violent_pct", label: "% violent crime" },
  { value: "total_per_1000", label: "all crimes per 1,000 residents" },
  { value: "category_per_1000:violent", label: "violent crimes per 1,000" },
  { value: "category_per_1000:theft", label: "thefts per 1,000" },
  { value: "category_per_1000:drugs_alcohol", label: "drug and alcohol crimes per 1,000" },
  { value: "category_per_1000:sex_crime", label: "sex crimes per 1,000" },
  { value: "category_per_1000:other", label: "other crimes per 1,000" },
]);

export function formatR(r: number | null): string {
  return r === null ? "n/a" : r.toFixed(3);
}

export class CorrelationsPage {
  readonly root: HTMLElement;
  private readonly base: string;
  private readonly lanes: RequestLanes;
  private readonly onState: OnState;
  private readonly lastUrl = new Map<string, string>();
  private readonly banner: HTMLElement;
  private readonly caveat: HTMLElement;
  private readonly content: HTMLElement;
  private meta: MetaBody | null = null;
  private cityBody: CorrelationsBody | null = null;
  private westsideBody: CorrelationsBody | null = null;

  private measureSelect!: HTMLSelectElement;
  private groupSelect!: HTMLSelectElement;

  constructor(root: HTMLElement, base: string, doFetch?: FetchJson, onState: OnState = () => {}) {
    this.root = root;
    this.base = base;
    this.lanes = new RequestLanes(doFetch);
    this.onState = onState;
    this.banner = el("div", { class: "banner", hidden: "" });
    this.caveat = el("p", { class: "caveat" });
    this.content = el("div", { class: "correlation-tables" });
    root.append(this.buildControls(), this.banner, this.caveat, this.content);
  }

  private buildControls(): HTMLElement {
    this.measureSelect = el("select", { class: "measure" });
    for (const measure of MEASURES) this.measureSelect.append(option(measure.value, measure.label));
    this.measureSelect.addEventListener("change", () => this.onState({ measure: this.measureSelect.value }));

    this.groupSelect = el("select", { class: "factor-group" });
    this.rebuildGroupOptions();
    this.groupSelect.addEventListener("change", () => {
      const group = this.groupSelect.value;
      const all = this.meta?.factors ?? [];
      this.onState({
        factors: group === "" ? "" : all.filter((name) => name.startsWith(`${group}.`)).join(","),
      });
    });

    return el(
      "div",
      { class: "correlation-controls" },
      el("label", {}, "measure ", this.measureSelect),
      el("label", {}, "factor group ", this.groupSelect),
    );
  }

  // factor groups are the prefixes of the snapshot's factor names
  private rebuildGroupOptions(): void {
    const selected = this.groupSelect.value;
    clear(this.groupSelect);
    this.groupSelect.append(option("", "all factor groups"));
    const groups: string[] = [];
    for (const name of this.meta?.factors ?? []) {
      const group = name.includes(".") ? name.split(".", 1)[0] : name;
      if (!groups.includes(group)) groups.push(group);
    }
    for (const group of groups) this.groupSelect.append(option(group, group));
    this.groupSelect.value = selected;
  }

  private syncControls(s: ViewState): void {
    this.measureSelect.value = s.measure;
    const group = s.factors === "" ? "" : (s.factors.split(",")[0] ?? "").split(".", 1)[0];
    this.groupSelect.value = group;
  }

  async update(state: ViewState): Promise<void> {
    const errors: string[] = [];
    const fetchInto = async <T>(lane: string, url: string, assign: (body: T) => void): Promise<void> => {
      if (this.lastUrl.get(lane) === url) return;
      try {
        assign(await this.lanes.get<T>(lane, url));
        this.lastUrl.set(lane, url);
      } catch (error) {
        if (isAbort(error)) return;
        errors.push(`${lane}: ${(error as Error).message}`);
      }
    };

    await Promise.all([
      fetchInto<MetaBody>("meta", api.meta(this.base), (body) => {
        this.meta = body;
        this.rebuildGroupOptions();
      }),
      fetchInto<CorrelationsBody>(
        "corr-city",
        api.correlations(this.base, { measure: state.measure, scope: "city", factors: state.factors }),
        (body) => {
          this.cityBody = body;
        },
      ),
      fetchInto<CorrelationsBody>(
        "corr-westside",
        api.correlations(this.base, { measure: state.measure, scope: "westside", factors: state.factors }),
        (body) => {
          this.westsideBody = body;
        },
      ),
    ]);

    if (errors.length > 0) {
      this.banner.textContent = errors.join("; ");
      this.banner.hidden = false;
    } else {
      this.banner.hidden = true;
    }
    this.syncControls(state);
    this.draw();
  }

  private draw(): void {
    const caveatText = this.cityBody?.caveat ?? this.westsideBody?.caveat ?? "";
    this.caveat.textContent = caveatText;
    clear(this.content);
    if (this.cityBody === null && this.westsideBody === null) {
      this.content.append(el("p", { class: "placeholder" }, "no correlations loaded yet"));
      return;
    }

    const westByFactor = new Map<string, { r: number | null; n: number; excluded: number }>();
    for (const row of this.westsideBody?.results ?? []) westByFactor.set(row.factor, row);

    const rows: HTMLElement[] = [
      el(
        "tr",
        {},
        el("th", {}, "factor"),
        el("th", {}, "city r"),
        el("th", {}, "westside r"),
        el("th", {}, "n (city / westside)"),
      ),
    ];
    const seen = new Set<string>();
    const cityRows = this.cityBody?.results ?? [];
    for (const row of cityRows) {
      seen.add(row.factor);
      const west = westByFactor.get(row.factor);
      rows.push(
        el(
          "tr",
          { "data-factor": row.factor },
          el("td", {}, row.factor),
          this.valueCell(row.r, "city-r"),
          this.valueCell(west === undefined ? null : west.r, "westside-r"),
          el("td", { class: "sample" }, `${row.n} / ${west === undefined ? 0 : west.n}`),
        ),
      );
    }
    for (const [factor, west] of westByFactor) {
      if (seen.has(factor)) continue;
      rows.push(
        el(
          "tr",
          { "data-factor": factor },
          el("td", {}, factor),
          this.valueCell(null, "city-r"),
          this.valueCell(west.r, "westside-r"),
          el("td", { class: "sample" }, `0 / ${west.n}`),
        ),
      );
    }
    this.content.append(el("table", { class: "correlations" }, ...rows));
  }

  // bar width is presentation; the displayed number is the API's r verbatim
  private valueCell(r: number | null, cls: string): HTMLElement {
    const cell = el("td", { class: cls });
    if (r !== null) {
      const width = Math.abs(r) * 50;
      cell.append(
        el("i", {
          class: r < 0 ? "r-bar negative" : "r-bar positive",
          style: `width:${width.toFixed(1)}%`,
        }),
      );
    }
    cell.append(el("span", { class: "r-value" }, formatR(r)));
    return cell;
  }
}
