/** Aggregates page: a time series chart for the selected scope against the
 * city, per-NPU bars with westside NPUs picked out, and a type-share table
 * juxtaposing the scope with the city. All numbers shown come straight from
 * response fields; the client only formats and scales bars for display.
 */

import {
  api,
  FetchJson,
  isAbort,
  MetaBody,
  NpusBody,
  RequestLanes,
  TimeseriesBody,
  TypeShareBody,
} from "./api.js";
import { clear, el, option, svg } from "./dom.js";
import { Dataset, DATASETS, Granularity, GRANULARITIES, OnState, ViewState } from "./state.js";

export function formatValue(value: number): string {
  return Number.isInteger(value) ? String(value) : value.toFixed(2);
}

const CHART_W = 640;
const CHART_H = 240;
const CHART_PAD = 28;

export class AggregatesPage {
  readonly root: HTMLElement;
  private readonly base: string;
  private readonly lanes: RequestLanes;
  private readonly onState: OnState;
  private readonly lastUrl = new Map<string, string>();
  private readonly banner: HTMLElement;
  private readonly charts: HTMLElement;
  private meta: MetaBody | null = null;
  private series: TimeseriesBody | null = null;
  private npus: NpusBody | null = null;
  private scopeShare: TypeShareBody | null = null;
  private cityShare: TypeShareBody | null = null;

  private datasetSelect!: HTMLSelectElement;
  private scopeSelect!: HTMLSelectElement;
  private granularitySelect!: HTMLSelectElement;
  private fromInput!: HTMLInputElement;
  private toInput!: HTMLInputElement;
  private perCapitaBox!: HTMLInputElement;
  private fineBox!: HTMLInputElement;

  constructor(root: HTMLElement, base: string, doFetch?: FetchJson, onState: OnState = () => {}) {
    this.root = root;
    this.base = base;
    this.lanes = new RequestLanes(doFetch);
    this.onState = onState;
    this.banner = el("div", { class: "banner", hidden: "" });
    this.charts = el("div", { class: "charts" });
    root.append(this.buildControls(), this.banner, this.charts);
  }

  private buildControls(): HTMLElement {
    this.datasetSelect = el("select", { class: "dataset" });
    for (const dataset of DATASETS) this.datasetSelect.append(option(dataset, dataset));
    this.datasetSelect.addEventListener("change", () =>
      this.onState({ dataset: this.datasetSelect.value as Dataset }),
    );

    this.scopeSelect = el("select", { class: "scope" });
    this.rebuildScopeOptions();
    this.scopeSelect.addEventListener("change", () => this.onState({ scope: this.scopeSelect.value }));

    this.granularitySelect = el("select", { class: "granularity" });
    for (const granularity of GRANULARITIES) this.granularitySelect.append(option(granularity, granularity));
    this.granularitySelect.addEventListener("change", () =>
      this.onState({ granularity: this.granularitySelect.value as Granularity }),
    );

    this.fromInput = el("input", { type: "date", class: "from" });
    this.fromInput.addEventListener("change", () => this.onState({ from: this.fromInput.value }));
    this.toInput = el("input", { type: "date", class: "to" });
    this.toInput.addEventListener("change", () => this.onState({ to: this.toInput.value }));

    this.perCapitaBox = el("input", { type: "checkbox", class: "per-capita" });
    this.perCapitaBox.addEventListener("change", () => this.onState({ perCapita: this.perCapitaBox.checked }));
    this.fineBox = el("input", { type: "checkbox", class: "fine" });
    this.fineBox.addEventListener("change", () => this.onState({ fine: this.fineBox.checked }));

    return el(
      "div",
      { class: "aggregate-controls" },
      el("label", {}, "dataset ", this.datasetSelect),
      el("label", {}, "scope ", this.scopeSelect),
      el("label", {}, "granularity ", this.granularitySelect),
      el("label", {}, "from ", this.fromInput),
      el("label", {}, "to ", this.toInput),
      el("label", { class: "toggle" }, this.perCapitaBox, "per 1,000 residents"),
      el("label", { class: "toggle" }, this.fineBox, "fine UCR types"),
    );
  }

  // city and westside are always offered; NPUs appear once metadata loads
  private rebuildScopeOptions(): void {
    const selected = this.scopeSelect.value;
    clear(this.scopeSelect);
    this.scopeSelect.append(option("city", "City"), option("westside", "Westside"));
    if (this.meta !== null) {
      for (const id of this.meta.npus) this.scopeSelect.append(option(`npu:${id}`, id));
    }
    this.scopeSelect.value = selected;
  }

  private syncControls(s: ViewState): void {
    this.datasetSelect.value = s.dataset;
    this.scopeSelect.value = s.scope;
    this.granularitySelect.value = s.granularity;
    this.fromInput.value = s.from;
    this.toInput.value = s.to;
    this.perCapitaBox.checked = s.perCapita;
    this.fineBox.checked = s.fine;
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

    const jobs: Promise<void>[] = [
      fetchInto<MetaBody>("meta", api.meta(this.base), (body) => {
        this.meta = body;
        this.rebuildScopeOptions();
      }),
      fetchInto<TimeseriesBody>(
        "timeseries",
        api.timeseries(this.base, {
          dataset: state.dataset,
          scope: state.scope,
          granularity: state.granularity,
          from: state.from,
          to: state.to,
        }),
        (body) => {
          this.series = body;
        },
      ),
      fetchInto<NpusBody>(
        "npus",
        api.npus(this.base, { dataset: state.dataset, from: state.from, to: state.to, perCapita: state.perCapita }),
        (body) => {
          this.npus = body;
        },
      ),
      fetchInto<TypeShareBody>(
        "share-scope",
        api.typeShare(this.base, { dataset: state.dataset, scope: state.scope, fine: state.fine }),
        (body) => {
          this.scopeShare = body;
        },
      ),
    ];
    if (state.scope !== "city") {
      jobs.push(
        fetchInto<TypeShareBody>(
          "share-city",
          api.typeShare(this.base, { dataset: state.dataset, scope: "city", fine: state.fine }),
          (body) => {
            this.cityShare = body;
          },
        ),
      );
    }
    await Promise.all(jobs);
    if (state.scope === "city") this.cityShare = this.scopeShare;

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
    clear(this.charts);
    if (this.series !== null) this.charts.append(this.seriesChart(this.series));
    if (this.npus !== null) this.charts.append(this.npuChart(this.npus));
    if (this.scopeShare !== null && this.cityShare !== null) {
      this.charts.append(this.shareTable(this.scopeShare, this.cityShare));
    }
  }

  private seriesChart(body: TimeseriesBody): HTMLElement {
    const cityPoints = body.city_series.points;
    const indexByLabel = new Map(cityPoints.map(([label], index) => [label, index]));
    let peak = 0;
    for (const [, value] of cityPoints) if (value > peak) peak = value;
    for (const [, value] of body.scope_series.points) if (value > peak) peak = value;

    const xAt = (index: number): number =>
      CHART_PAD + (cityPoints.length <= 1 ? 0 : (index * (CHART_W - 2 * CHART_PAD)) / (cityPoints.length - 1));
    const yAt = (value: number): number =>
      CHART_H - CHART_PAD - (peak === 0 ? 0 : (value * (CHART_H - 2 * CHART_PAD)) / peak);
    const line = (points: [string, number][], cls: string): SVGElement =>
      svg("polyline", {
        class: cls,
        fill: "none",
        points: points
          .filter(([label]) => indexByLabel.has(label))
          .map(([label, value]) => `${xAt(indexByLabel.get(label)!).toFixed(1)},${yAt(value).toFixed(1)}`)
          .join(" "),
      });

    const image = svg("svg", { viewBox: `0 0 ${CHART_W} ${CHART_H}`, class: "series-chart" });
    image.append(line(cityPoints, "city-series"));
    image.append(line(body.scope_series.points, "scope-series"));
    if (cityPoints.length > 0) {
      image.append(svg("text", { x: String(CHART_PAD), y: String(CHART_H - 8), class: "axis" }, cityPoints[0][0]));
      image.append(
        svg(
          "text",
          { x: String(CHART_W - CHART_PAD), y: String(CHART_H - 8), "text-anchor": "end", class: "axis" },
          cityPoints[cityPoints.length - 1][0],
        ),
      );
    }
    const caption = el(
      "p",
      { class: "series-caption" },
      `${body.scope} total ${formatValue(body.scope_series.total)}, ` +
        `city total ${formatValue(body.city_series.total)}, by ${body.scope_series.granularity}`,
    );
    return el("section", { class: "chart timeseries" }, el("h3", {}, `${body.dataset} over time`), image, caption);
  }

  private npuChart(body: NpusBody): HTMLElement {
    let peak = 0;
    for (const row of body.npus) if (row.value > peak) peak = row.value;
    const bars = el("div", { class: "npu-bars" });
    for (const row of body.npus) {
      const width = peak === 0 ? 0 : (row.value / peak) * 100;
      bars.append(
        el(
          "div",
          { class: row.westside ? "bar-row westside" : "bar-row" },
          el("span", { class: "npu-name" }, row.npu),
          el("i", { class: "bar", style: `width:${width.toFixed(1)}%` }),
          el("span", { class: "value" }, formatValue(row.value)),
        ),
      );
    }
    const unit = body.per_capita ? "per 1,000 residents" : "count";
    return el("section", { class: "chart npus" }, el("h3", {}, `${body.dataset} by NPU (${unit})`), bars);
  }

  private shareTable(scopeBody: TypeShareBody, cityBody: TypeShareBody): HTMLElement {
    const cityByType = new Map(cityBody.shares);
    const rows: HTMLElement[] = [
      el("tr", {}, el("th", {}, "type"), el("th", {}, scopeBody.scope), el("th", {}, "city")),
    ];
    for (const [name, pct] of scopeBody.shares) {
      const cityPct = cityByType.get(name);
      rows.push(
        el(
          "tr",
          { "data-type": name },
          el("td", {}, name),
          el("td", { class: "scope-share" }, `${pct.toFixed(1)}%`),
          el("td", { class: "city-share" }, cityPct === undefined ? "n/a" : `${cityPct.toFixed(1)}%`),
        ),
      );
    }
    return el(
      "section",
      { class: "chart shares" },
      el("h3", {}, `${scopeBody.dataset} type share`),
      el("table", { class: "type-share" }, ...rows),
    );
  }
}
