/** Map page: crime heat map hexes, violation cluster pins, and asset pins
 * over NPU outlines. Each layer is fetched on its own request lane and only
 * when its URL actually changed; a failed layer keeps its last good data and
 * reports the failure in a banner.
 */

import {
  api,
  AssetsBody,
  FetchJson,
  HexesBody,
  isAbort,
  RegionsBody,
  RequestLanes,
  ViolationsMapBody,
} from "./api.js";
import { clear, el, svg } from "./dom.js";
import { colorForClass, LEGEND } from "./legend.js";
import { OnState, ViewState } from "./state.js";

export type LayerName = "regions" | "hexes" | "violations" | "assets";

export interface MapRequests {
  regions: string;
  hexes: string | null;
  violations: string | null;
  assets: string | null;
}

/** The URLs the map needs for a state; null means the layer is switched off. */
export function mapRequests(base: string, s: ViewState): MapRequests {
  return {
    regions: api.regions(base, { kind: "npu" }),
    hexes: s.hexesOn
      ? api.hexes(base, { span: s.span, categories: s.categories, ucr: s.ucr, hexSize: s.hexSize })
      : null,
    violations: s.violationsOn ? api.violationsMap(base, { span: s.span, zoom: s.zoom }) : null,
    assets: s.assetsOn ? api.assets(base, { kinds: s.assetKinds }) : null,
  };
}

export function renderLegend(): HTMLElement {
  const box = el("div", { class: "legend" }, el("strong", {}, "crimes per hex"));
  for (const entry of LEGEND) {
    box.append(
      el(
        "span",
        { class: "legend-entry" },
        el("i", { class: "swatch", style: `background:${entry.color}` }),
        entry.label,
      ),
    );
  }
  return box;
}

interface Bounds {
  minLon: number;
  minLat: number;
  maxLon: number;
  maxLat: number;
}

const WIDTH = 960;
const HEIGHT = 720;
const PAD = 14;

export class MapPage {
  readonly root: HTMLElement;
  private readonly base: string;
  private readonly lanes: RequestLanes;
  private readonly onState: OnState;
  private readonly lastUrl = new Map<LayerName, string>();
  private readonly banner: HTMLElement;
  private readonly canvas: HTMLElement;
  private regionsData: RegionsBody | null = null;
  private hexesData: HexesBody | null = null;
  private violationsData: ViolationsMapBody | null = null;
  private assetsData: AssetsBody | null = null;
  private state: ViewState | null = null;

  private hexesBox!: HTMLInputElement;
  private violationsBox!: HTMLInputElement;
  private assetsBox!: HTMLInputElement;
  private spanInput!: HTMLInputElement;
  private categoriesInput!: HTMLInputElement;
  private ucrInput!: HTMLInputElement;
  private kindsInput!: HTMLInputElement;
  private zoomLabel!: HTMLElement;

  constructor(root: HTMLElement, base: string, doFetch?: FetchJson, onState: OnState = () => {}) {
    this.root = root;
    this.base = base;
    this.lanes = new RequestLanes(doFetch);
    this.onState = onState;
    this.banner = el("div", { class: "banner", hidden: "" });
    this.canvas = el("div", { class: "map-canvas" });
    root.append(this.buildControls(), this.banner, this.canvas, renderLegend());
  }

  private buildControls(): HTMLElement {
    const toggle = (label: string, cls: string, patch: (checked: boolean) => Partial<ViewState>): HTMLElement => {
      const box = el("input", { type: "checkbox", class: cls });
      box.addEventListener("change", () => this.onState(patch(box.checked)));
      if (cls === "layer-hexes") this.hexesBox = box;
      if (cls === "layer-violations") this.violationsBox = box;
      if (cls === "layer-assets") this.assetsBox = box;
      return el("label", { class: "toggle" }, box, label);
    };

    const textInput = (cls: string, placeholder: string, patch: (value: string) => Partial<ViewState>): HTMLInputElement => {
      const input = el("input", { type: "text", class: cls, placeholder });
      input.addEventListener("change", () => this.onState(patch(input.value.trim())));
      return input;
    };

    this.spanInput = textInput("span", "all | YYYY | YYYY-MM", (value) => ({ span: value === "" ? "all" : value }));
    this.categoriesInput = textInput("categories", "categories, comma separated", (value) => ({
      categories: value,
      ucr: value === "" ? this.state?.ucr ?? "" : "",
    }));
    this.ucrInput = textInput("ucr", "UCR codes, comma separated", (value) => ({
      ucr: value,
      categories: value === "" ? this.state?.categories ?? "" : "",
    }));
    this.kindsInput = textInput("asset-kinds", "asset kinds", (value) => ({ assetKinds: value }));

    this.zoomLabel = el("span", { class: "zoom-level" });
    const zoomOut = el("button", { type: "button", class: "zoom-out" }, "-");
    const zoomIn = el("button", { type: "button", class: "zoom-in" }, "+");
    zoomOut.addEventListener("click", () => this.bumpZoom(-1));
    zoomIn.addEventListener("click", () => this.bumpZoom(1));

    return el(
      "div",
      { class: "map-controls" },
      toggle("heat map", "layer-hexes", (checked) => ({ hexesOn: checked })),
      toggle("violations", "layer-violations", (checked) => ({ violationsOn: checked })),
      toggle("assets", "layer-assets", (checked) => ({ assetsOn: checked })),
      el("label", {}, "span ", this.spanInput),
      el("label", {}, "categories ", this.categoriesInput),
      el("label", {}, "ucr ", this.ucrInput),
      el("label", {}, "kinds ", this.kindsInput),
      el("span", { class: "zoom" }, zoomOut, this.zoomLabel, zoomIn),
    );
  }

  private bumpZoom(delta: number): void {
    const zoom = this.state ? this.state.zoom : 12;
    const next = Math.min(22, Math.max(0, zoom + delta));
    if (next !== zoom) this.onState({ zoom: next });
  }

  private syncControls(s: ViewState): void {
    this.hexesBox.checked = s.hexesOn;
    this.violationsBox.checked = s.violationsOn;
    this.assetsBox.checked = s.assetsOn;
    this.spanInput.value = s.span;
    this.categoriesInput.value = s.categories;
    this.ucrInput.value = s.ucr;
    this.kindsInput.value = s.assetKinds;
    this.zoomLabel.textContent = ` z${s.zoom} `;
  }

  async update(state: ViewState): Promise<void> {
    this.state = state;
    this.syncControls(state);
    const wanted = mapRequests(this.base, state);
    const errors: string[] = [];

    const refresh = async <T>(
      layer: LayerName,
      url: string | null,
      assign: (body: T | null) => void,
    ): Promise<void> => {
      if (url === null) {
        assign(null);
        this.lastUrl.delete(layer);
        return;
      }
      if (this.lastUrl.get(layer) === url) return;
      try {
        assign(await this.lanes.get<T>(layer, url));
        this.lastUrl.set(layer, url);
      } catch (error) {
        if (isAbort(error)) return; // superseded by a newer request
        errors.push(`${layer}: ${(error as Error).message}`);
      }
    };

    await Promise.all([
      refresh<RegionsBody>("regions", wanted.regions, (body) => {
        if (body !== null) this.regionsData = body;
      }),
      refresh<HexesBody>("hexes", wanted.hexes, (body) => {
        this.hexesData = body;
      }),
      refresh<ViolationsMapBody>("violations", wanted.violations, (body) => {
        this.violationsData = body;
      }),
      refresh<AssetsBody>("assets", wanted.assets, (body) => {
        this.assetsData = body;
      }),
    ]);

    if (errors.length > 0) {
      this.banner.textContent = errors.join("; ");
      this.banner.hidden = false;
    } else {
      this.banner.hidden = true;
    }
    this.draw();
  }

  private bounds(): Bounds | null {
    let minLon = Infinity;
    let minLat = Infinity;
    let maxLon = -Infinity;
    let maxLat = -Infinity;
    const point = (lon: number, lat: number): void => {
      if (lon < minLon) minLon = lon;
      if (lon > maxLon) maxLon = lon;
      if (lat < minLat) minLat = lat;
      if (lat > maxLat) maxLat = lat;
    };
    if (this.regionsData) {
      for (const feature of this.regionsData.features) {
        for (const ring of feature.geometry.coordinates) {
          for (const [lon, lat] of ring) point(lon, lat);
        }
      }
    }
    if (this.hexesData) {
      for (const feature of this.hexesData.features) {
        for (const [lon, lat] of feature.geometry.coordinates[0]) point(lon, lat);
      }
    }
    if (this.violationsData) {
      for (const cluster of this.violationsData.clusters) point(cluster.lon, cluster.lat);
    }
    if (this.assetsData) {
      for (const asset of this.assetsData.assets) point(asset.lon, asset.lat);
    }
    if (minLon > maxLon) return null;
    return { minLon, minLat, maxLon, maxLat };
  }

  private draw(): void {
    clear(this.canvas);
    const box = this.bounds();
    if (box === null) {
      this.canvas.append(el("p", { class: "placeholder" }, "nothing to draw yet"));
      return;
    }
    const sx = (WIDTH - 2 * PAD) / (box.maxLon - box.minLon || 1);
    const sy = (HEIGHT - 2 * PAD) / (box.maxLat - box.minLat || 1);
    const px = (lon: number): number => PAD + (lon - box.minLon) * sx;
    const py = (lat: number): number => HEIGHT - PAD - (lat - box.minLat) * sy;
    const ringPoints = (ring: number[][]): string =>
      ring.map(([lon, lat]) => `${px(lon).toFixed(1)},${py(lat).toFixed(1)}`).join(" ");

    const image = svg("svg", { viewBox: `0 0 ${WIDTH} ${HEIGHT}`, class: "map-svg", role: "img" });

    if (this.hexesData) {
      for (const feature of this.hexesData.features) {
        const props = feature.properties;
        const cell = svg("polygon", {
          points: ringPoints(feature.geometry.coordinates[0]),
          fill: colorForClass(props.color_class),
          class: "hex",
          "data-count": String(props.count),
          "data-class": String(props.color_class),
        });
        cell.append(svg("title", {}, `${props.count} crimes`));
        image.append(cell);
      }
    }

    if (this.regionsData) {
      for (const feature of this.regionsData.features) {
        for (const ring of feature.geometry.coordinates) {
          image.append(
            svg("polygon", {
              points: ringPoints(ring),
              class: "region-outline",
              fill: "none",
              "data-id": feature.properties.id,
            }),
          );
        }
      }
    }

    if (this.violationsData) {
      for (const cluster of this.violationsData.clusters) {
        const cx = px(cluster.lon);
        const cy = py(cluster.lat);
        // radius is presentation only; the number shown is the API count
        const radius = 8 + Math.min(16, 2 * Math.sqrt(cluster.count));
        const pin = svg("g", { class: "cluster", "data-count": String(cluster.count) });
        pin.append(svg("circle", { cx: cx.toFixed(1), cy: cy.toFixed(1), r: radius.toFixed(1) }));
        pin.append(
          svg(
            "text",
            { x: cx.toFixed(1), y: cy.toFixed(1), "text-anchor": "middle", dy: "0.35em" },
            String(cluster.count),
          ),
        );
        image.append(pin);
      }
    }

    if (this.assetsData) {
      for (const asset of this.assetsData.assets) {
        const pin = svg("circle", {
          cx: px(asset.lon).toFixed(1),
          cy: py(asset.lat).toFixed(1),
          r: "5",
          class: "asset",
          "data-id": asset.id,
          "data-kind": asset.kind,
        });
        const details = Object.entries(asset.details)
          .map(([key, value]) => `${key}: ${value}`)
          .join("\n");
        // <title> renders as the native mouseover tooltip
        pin.append(svg("title", {}, details === "" ? asset.name : `${asset.name}\n${details}`));
        image.append(pin);
      }
    }

    this.canvas.append(image);
  }
}
