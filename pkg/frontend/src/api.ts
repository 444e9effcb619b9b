/** URL builders, response shapes, and fetch plumbing for the dashboard API.
 *
 * Every number the UI displays arrives pre-computed in one of these response
 * bodies. The client formats and draws; it never aggregates, bins, or
 * correlates records itself.
 */

export type Params = Record<string, string>;

// Commas and colons are safe in query values and far easier to read in a
// shared link than %2C / %3A, so they are restored after encoding.
function encodeValue(value: string): string {
  return encodeURIComponent(value).replace(/%2C/gi, ",").replace(/%3A/gi, ":");
}

function queryString(params: Params): string {
  const parts: string[] = [];
  for (const [key, value] of Object.entries(params)) {
    if (value === "") continue;
    parts.push(`${key}=${encodeValue(value)}`);
  }
  return parts.length > 0 ? `?${parts.join("&")}` : "";
}

export function buildUrl(base: string, path: string, params: Params = {}): string {
  return `${base}${path}${queryString(params)}`;
}

export const api = {
  meta(base: string): string {
    return buildUrl(base, "/api/meta");
  },

  timeseries(
    base: string,
    p: { dataset: string; scope: string; granularity: string; from?: string; to?: string },
  ): string {
    return buildUrl(base, "/api/aggregate/timeseries", {
      dataset: p.dataset,
      scope: p.scope,
      granularity: p.granularity,
      from: p.from ?? "",
      to: p.to ?? "",
    });
  },

  npus(base: string, p: { dataset: string; from?: string; to?: string; perCapita?: boolean }): string {
    return buildUrl(base, "/api/aggregate/npus", {
      dataset: p.dataset,
      from: p.from ?? "",
      to: p.to ?? "",
      per_capita: p.perCapita ? "true" : "",
    });
  },

  typeShare(base: string, p: { dataset: string; scope: string; fine?: boolean }): string {
    return buildUrl(base, "/api/aggregate/type-share", {
      dataset: p.dataset,
      scope: p.scope,
      fine: p.fine ? "true" : "",
    });
  },

  correlations(base: string, p: { measure: string; scope: string; factors?: string }): string {
    return buildUrl(base, "/api/correlations", {
      measure: p.measure,
      scope: p.scope,
      factors: p.factors ?? "",
    });
  },

  hexes(base: string, p: { span?: string; categories?: string; ucr?: string; hexSize?: string }): string {
    return buildUrl(base, "/api/map/hexes", {
      span: p.span && p.span !== "all" ? p.span : "",
      // explicit UCR codes win; the server rejects both filters at once
      categories: p.ucr ? "" : (p.categories ?? ""),
      ucr: p.ucr ?? "",
      hex_size: p.hexSize ?? "",
    });
  },

  violationsMap(base: string, p: { span?: string; zoom: number }): string {
    return buildUrl(base, "/api/map/violations", {
      span: p.span && p.span !== "all" ? p.span : "",
      zoom: String(p.zoom),
    });
  },

  assets(base: string, p: { kinds?: string } = {}): string {
    return buildUrl(base, "/api/map/assets", { kinds: p.kinds ?? "" });
  },

  regions(base: string, p: { kind?: string } = {}): string {
    return buildUrl(base, "/api/regions", { kind: p.kind ?? "" });
  },
};

export interface MetaBody {
  format_version: number;
  built_at: string;
  counts: { crimes: number; violations: number; assets: number; census: number; regions: number };
  npus: string[];
  neighborhoods: string[];
  factors: string[];
  date_ranges: { crimes: [string, string] | null; violations: [string, string] | null };
}

export interface SeriesDoc {
  granularity: string;
  points: [string, number][];
  total: number;
}

export interface TimeseriesBody {
  dataset: string;
  scope: string;
  scope_series: SeriesDoc;
  city_series: SeriesDoc;
}

export interface NpuRow {
  npu: string;
  value: number;
  westside: boolean;
}

export interface NpusBody {
  dataset: string;
  per_capita: boolean;
  npus: NpuRow[];
}

export interface TypeShareBody {
  dataset: string;
  scope: string;
  shares: [string, number][];
}

export interface CorrelationRow {
  factor: string;
  r: number | null;
  n: number;
  excluded: number;
}

export interface CorrelationsBody {
  measure: string;
  scope: string;
  caveat: string;
  results: CorrelationRow[];
}

export interface HexFeature {
  type: "Feature";
  properties: { q: number; r: number; count: number; color_class: number };
  geometry: { type: "Polygon"; coordinates: number[][][] };
}

export interface HexesBody {
  type: "FeatureCollection";
  features: HexFeature[];
}

export interface ClusterDoc {
  lat: number;
  lon: number;
  count: number;
  member_ids?: string[];
}

export interface ViolationsMapBody {
  span: string;
  zoom: number;
  clusters: ClusterDoc[];
}

export interface AssetDoc {
  id: string;
  kind: string;
  name: string;
  lat: number;
  lon: number;
  details: Record<string, string>;
}

export interface AssetsBody {
  assets: AssetDoc[];
}

export interface RegionFeature {
  type: "Feature";
  properties: { id: string; kind: string; name: string; population: number };
  geometry: { type: "Polygon"; coordinates: number[][][] };
}

export interface RegionsBody {
  type: "FeatureCollection";
  features: RegionFeature[];
}

export type FetchJson = (url: string, signal?: AbortSignal) => Promise<unknown>;

/** GET a JSON body, turning the API's error envelope into a thrown Error. */
export const fetchJson: FetchJson = async (url, signal) => {
  const response = await fetch(url, { signal });
  if (!response.ok) {
    let message = `request failed (${response.status})`;
    try {
      const body = (await response.json()) as { error?: { message?: string } };
      if (body.error?.message) message = body.error.message;
    } catch {
      // not a JSON envelope, keep the generic message
    }
    throw new Error(message);
  }
  return response.json();
};

/** At most one request in flight per lane; a newer call aborts the older. */
export class RequestLanes {
  private readonly inflight = new Map<string, AbortController>();
  private readonly doFetch: FetchJson;

  constructor(doFetch: FetchJson = fetchJson) {
    this.doFetch = doFetch;
  }

  async get<T>(lane: string, url: string): Promise<T> {
    this.inflight.get(lane)?.abort();
    const controller = new AbortController();
    this.inflight.set(lane, controller);
    try {
      return (await this.doFetch(url, controller.signal)) as T;
    } finally {
      if (this.inflight.get(lane) === controller) this.inflight.delete(lane);
    }
  }
}

export function isAbort(error: unknown): boolean {
  return error instanceof Error && error.name === "AbortError";
}
