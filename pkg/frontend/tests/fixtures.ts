/** Canned API bodies and a recording fetch stub shared by the page tests.
 * Shapes mirror the live endpoints; the numbers are small and hand-picked so
 * assertions can check exact passthrough.
 */

import {
  AssetsBody,
  CorrelationsBody,
  FetchJson,
  HexesBody,
  MetaBody,
  NpusBody,
  RegionsBody,
  TimeseriesBody,
  TypeShareBody,
  ViolationsMapBody,
} from "../src/api.js";

export const META: MetaBody = {
  format_version: 1,
  built_at: "2026-08-17T00:00:00+00:00",
  counts: { crimes: 120, violations: 40, assets: 3, census: 16, regions: 20 },
  npus: ["NPU-A", "NPU-K", "NPU-L", "NPU-T"],
  neighborhoods: ["English Avenue", "Vine City"],
  factors: ["economic.median_income", "economic.poverty_rate", "housing.pct_vacant"],
  date_ranges: { crimes: ["2008-01-03", "2015-12-28"], violations: ["2011-02-01", "2015-11-30"] },
};

function ring(lonW: number, latS: number, lonE: number, latN: number): number[][] {
  return [
    [lonW, latS],
    [lonE, latS],
    [lonE, latN],
    [lonW, latN],
    [lonW, latS],
  ];
}

export const REGIONS: RegionsBody = {
  type: "FeatureCollection",
  features: [
    {
      type: "Feature",
      properties: { id: "NPU-K", kind: "npu", name: "NPU-K", population: 8000 },
      geometry: { type: "Polygon", coordinates: [ring(-84.46, 33.74, -84.41, 33.78)] },
    },
    {
      type: "Feature",
      properties: { id: "NPU-L", kind: "npu", name: "NPU-L", population: 6000 },
      geometry: { type: "Polygon", coordinates: [ring(-84.41, 33.74, -84.36, 33.78)] },
    },
  ],
};

export const HEXES: HexesBody = {
  type: "FeatureCollection",
  features: [
    {
      type: "Feature",
      properties: { q: 10, r: -3, count: 3, color_class: 2 },
      geometry: { type: "Polygon", coordinates: [ring(-84.45, 33.75, -84.448, 33.752)] },
    },
    {
      type: "Feature",
      properties: { q: 11, r: -3, count: 150, color_class: 4 },
      geometry: { type: "Polygon", coordinates: [ring(-84.44, 33.75, -84.438, 33.752)] },
    },
  ],
};

export const VIOLATIONS: ViolationsMapBody = {
  span: "all",
  zoom: 12,
  clusters: [
    { lat: 33.75, lon: -84.44, count: 17, member_ids: ["v1", "v2"] },
    { lat: 33.76, lon: -84.39, count: 2 },
  ],
};

// same 19 violations regrouped into smaller cells one zoom level in
export const VIOLATIONS_Z13: ViolationsMapBody = {
  span: "all",
  zoom: 13,
  clusters: [
    { lat: 33.749, lon: -84.442, count: 10 },
    { lat: 33.752, lon: -84.438, count: 7 },
    { lat: 33.76, lon: -84.39, count: 2 },
  ],
};

export const ASSETS: AssetsBody = {
  assets: [
    {
      id: "s1",
      kind: "school",
      name: "Washington High",
      lat: 33.755,
      lon: -84.43,
      details: { level: "High", status: "open" },
    },
  ],
};

export const TIMESERIES: TimeseriesBody = {
  dataset: "crimes",
  scope: "westside",
  scope_series: {
    granularity: "year",
    points: [
      ["2013", 40],
      ["2014", 44],
      ["2015", 36],
    ],
    total: 120,
  },
  city_series: {
    granularity: "year",
    points: [
      ["2013", 300],
      ["2014", 320],
      ["2015", 280],
    ],
    total: 900,
  },
};

export const NPUS: NpusBody = {
  dataset: "crimes",
  per_capita: false,
  npus: [
    { npu: "NPU-A", value: 120, westside: false },
    { npu: "NPU-K", value: 80, westside: true },
    { npu: "NPU-L", value: 66, westside: true },
    { npu: "NPU-T", value: 50, westside: true },
  ],
};

export const SHARE_WESTSIDE: TypeShareBody = {
  dataset: "crimes",
  scope: "westside",
  shares: [
    ["theft", 52.5],
    ["violent", 20.0],
    ["drugs_alcohol", 15.5],
    ["sex_crime", 2.0],
    ["other", 10.0],
  ],
};

export const SHARE_CITY: TypeShareBody = {
  dataset: "crimes",
  scope: "city",
  shares: [
    ["theft", 58.1],
    ["violent", 14.2],
    ["drugs_alcohol", 11.7],
    ["sex_crime", 1.4],
    ["other", 14.6],
  ],
};

export const CAVEAT = "correlation does not necessarily imply causation";

export const CORR_CITY: CorrelationsBody = {
  measure: "violent_pct",
  scope: "city",
  caveat: CAVEAT,
  results: [
    { factor: "economic.median_income", r: -0.713, n: 14, excluded: 2 },
    { factor: "economic.poverty_rate", r: 0.642, n: 14, excluded: 2 },
    { factor: "housing.pct_vacant", r: null, n: 1, excluded: 15 },
  ],
};

export const CORR_WESTSIDE: CorrelationsBody = {
  measure: "violent_pct",
  scope: "westside",
  caveat: CAVEAT,
  results: [
    { factor: "economic.median_income", r: -0.488, n: 6, excluded: 1 },
    { factor: "economic.poverty_rate", r: 0.505, n: 6, excluded: 1 },
    { factor: "housing.pct_vacant", r: null, n: 0, excluded: 7 },
  ],
};

export interface Stub {
  calls: string[];
  fetchJson: FetchJson;
  fail: Set<string>; // paths that should reject
}

export function stubApi(): Stub {
  const calls: string[] = [];
  const fail = new Set<string>();
  const route = (url: string): unknown => {
    const path = url.split("?")[0];
    switch (path) {
      case "/api/meta":
        return META;
      case "/api/regions":
        return REGIONS;
      case "/api/map/hexes":
        return HEXES;
      case "/api/map/violations":
        return url.includes("zoom=13") ? VIOLATIONS_Z13 : VIOLATIONS;
      case "/api/map/assets":
        return ASSETS;
      case "/api/aggregate/timeseries":
        return TIMESERIES;
      case "/api/aggregate/npus":
        return NPUS;
      case "/api/aggregate/type-share":
        return url.includes("scope=city") ? SHARE_CITY : SHARE_WESTSIDE;
      case "/api/correlations":
        return url.includes("scope=westside") ? CORR_WESTSIDE : CORR_CITY;
      default:
        throw new Error(`no stub for ${url}`);
    }
  };
  const fetchJson: FetchJson = (url) => {
    calls.push(url);
    if (fail.has(url.split("?")[0])) return Promise.reject(new Error("boom"));
    try {
      return Promise.resolve(route(url));
    } catch (error) {
      return Promise.reject(error as Error);
    }
  };
  return { calls, fetchJson, fail };
}
