/** All UI state lives in the URL query string, so every view is a shareable
 * link. encode() writes keys in a fixed order and omits defaults; decode()
 * accepts arbitrary input and falls back field by field. For any state the
 * UI can reach, encode(decode(encode(s))) equals encode(s).
 */

export type Page = "map" | "aggregates" | "correlations";
export type Dataset = "crimes" | "violations" | "both";
export type Granularity = "year" | "quarter" | "month" | "week" | "weekday" | "day";

export const PAGES: readonly Page[] = ["map", "aggregates", "correlations"];
export const DATASETS: readonly Dataset[] = ["crimes", "violations", "both"];
export const GRANULARITIES: readonly Granularity[] = ["year", "quarter", "month", "week", "weekday", "day"];

/** Pages report user edits as partial state patches; the app owns merging. */
export type OnState = (patch: Partial<ViewState>) => void;

export interface ViewState {
  page: Page;
  // map page
  span: string; // "all" | "YYYY" | "YYYY-MM"
  categories: string; // comma list of coarse categories, "" = all crimes
  ucr: string; // comma list of UCR codes; non-empty wins over categories
  hexSize: string; // hex edge length in meters, "" = server default
  zoom: number; // cluster zoom level, 0..22
  hexesOn: boolean;
  violationsOn: boolean;
  assetsOn: boolean;
  assetKinds: string; // comma list, "" = every kind
  // aggregates page
  dataset: Dataset;
  scope: string; // "city" | "westside" | "npu:<id>"
  granularity: Granularity;
  from: string; // ISO date or ""
  to: string;
  perCapita: boolean;
  fine: boolean;
  // correlations page
  measure: string;
  factors: string; // comma list, "" = every factor
}

export const DEFAULTS: Readonly<ViewState> = Object.freeze({
  page: "map" as Page,
  span: "all",
  categories: "",
  ucr: "",
  hexSize: "",
  zoom: 12,
  hexesOn: true,
  violationsOn: false,
  assetsOn: false,
  assetKinds: "",
  dataset: "crimes" as Dataset,
  scope: "city",
  granularity: "month" as Granularity,
  from: "",
  to: "",
  perCapita: false,
  fine: false,
  measure: "violent_pct",
  factors: "",
});

const SPAN_RE = /^(all|\d{4}(-\d{2})?)$/;
const DATE_RE = /^\d{4}-\d{2}-\d{2}$/;
const HEX_SIZE_RE = /^\d+(\.\d+)?$/;
const SCOPE_RE = /^(city|westside|npu:[^,&=?\s]+)$/;

function encodeValue(value: string): string {
  return encodeURIComponent(value).replace(/%2C/gi, ",").replace(/%3A/gi, ":");
}

function layersValue(s: ViewState): string {
  const names: string[] = [];
  if (s.hexesOn) names.push("hexes");
  if (s.violationsOn) names.push("violations");
  if (s.assetsOn) names.push("assets");
  // "none" keeps an all-off state distinguishable from an omitted key
  return names.length > 0 ? names.join(",") : "none";
}

export function encode(s: ViewState): string {
  const parts: string[] = [];
  const put = (key: string, value: string, omit: string): void => {
    if (value !== omit) parts.push(`${key}=${encodeValue(value)}`);
  };
  put("page", s.page, DEFAULTS.page);
  put("span", s.span, DEFAULTS.span);
  put("categories", s.categories, "");
  put("ucr", s.ucr, "");
  put("hex_size", s.hexSize, "");
  put("zoom", String(s.zoom), String(DEFAULTS.zoom));
  put("layers", layersValue(s), "hexes");
  put("asset_kinds", s.assetKinds, "");
  put("dataset", s.dataset, DEFAULTS.dataset);
  put("scope", s.scope, DEFAULTS.scope);
  put("granularity", s.granularity, DEFAULTS.granularity);
  put("from", s.from, "");
  put("to", s.to, "");
  put("per_capita", s.perCapita ? "true" : "false", "false");
  put("fine", s.fine ? "true" : "false", "false");
  put("measure", s.measure, DEFAULTS.measure);
  put("factors", s.factors, "");
  return parts.join("&");
}

function pick<T extends string>(raw: string | null, allowed: readonly T[], fallback: T): T {
  return raw !== null && (allowed as readonly string[]).includes(raw) ? (raw as T) : fallback;
}

export function decode(queryString: string): ViewState {
  const q = new URLSearchParams(queryString.startsWith("?") ? queryString.slice(1) : queryString);
  const text = (key: string): string => q.get(key) ?? "";
  const matching = (key: string, re: RegExp, fallback: string): string => {
    const raw = q.get(key);
    return raw !== null && re.test(raw) ? raw : fallback;
  };

  const zoomRaw = Number(q.get("zoom") ?? DEFAULTS.zoom);
  const zoom = Number.isInteger(zoomRaw) && zoomRaw >= 0 && zoomRaw <= 22 ? zoomRaw : DEFAULTS.zoom;

  let hexesOn = DEFAULTS.hexesOn;
  let violationsOn = DEFAULTS.violationsOn;
  let assetsOn = DEFAULTS.assetsOn;
  const layersRaw = q.get("layers");
  if (layersRaw !== null) {
    const names = new Set(layersRaw.split(",").filter((name) => name !== ""));
    hexesOn = names.has("hexes");
    violationsOn = names.has("violations");
    assetsOn = names.has("assets");
  }

  return {
    page: pick(q.get("page"), PAGES, DEFAULTS.page),
    span: matching("span", SPAN_RE, DEFAULTS.span),
    categories: text("categories"),
    ucr: text("ucr"),
    hexSize: matching("hex_size", HEX_SIZE_RE, ""),
    zoom,
    hexesOn,
    violationsOn,
    assetsOn,
    assetKinds: text("asset_kinds"),
    dataset: pick(q.get("dataset"), DATASETS, DEFAULTS.dataset),
    scope: matching("scope", SCOPE_RE, DEFAULTS.scope),
    granularity: pick(q.get("granularity"), GRANULARITIES, DEFAULTS.granularity),
    from: matching("from", DATE_RE, ""),
    to: matching("to", DATE_RE, ""),
    perCapita: q.get("per_capita") === "true",
    fine: q.get("fine") === "true",
    measure: q.get("measure") ?? DEFAULTS.measure,
    factors: text("factors"),
  };
}
