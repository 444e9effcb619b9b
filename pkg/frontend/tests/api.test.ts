import { describe, expect, it } from "vitest";
import { api, buildUrl, RequestLanes } from "../src/api.js";

describe("buildUrl", () => {
  it("joins params in declaration order and skips empty values", () => {
    expect(buildUrl("", "/api/meta")).toBe("/api/meta");
    expect(buildUrl("http://x", "/api/map/hexes", { span: "2014", categories: "", ucr: "0640" })).toBe(
      "http://x/api/map/hexes?span=2014&ucr=0640",
    );
  });

  it("keeps commas and colons readable but escapes the rest", () => {
    expect(buildUrl("", "/p", { a: "x,y", b: "npu:K", c: "a b&c=d" })).toBe("/p?a=x,y&b=npu:K&c=a%20b%26c%3Dd");
  });
});

describe("api builders", () => {
  it("builds every endpoint the dashboard uses", () => {
    expect(api.meta("")).toBe("/api/meta");
    expect(api.timeseries("", { dataset: "crimes", scope: "westside", granularity: "month" })).toBe(
      "/api/aggregate/timeseries?dataset=crimes&scope=westside&granularity=month",
    );
    expect(
      api.timeseries("", {
        dataset: "both",
        scope: "npu:NPU-K",
        granularity: "week",
        from: "2012-01-01",
        to: "2014-12-31",
      }),
    ).toBe("/api/aggregate/timeseries?dataset=both&scope=npu:NPU-K&granularity=week&from=2012-01-01&to=2014-12-31");
    expect(api.npus("", { dataset: "both", perCapita: true })).toBe(
      "/api/aggregate/npus?dataset=both&per_capita=true",
    );
    expect(api.typeShare("", { dataset: "crimes", scope: "city", fine: true })).toBe(
      "/api/aggregate/type-share?dataset=crimes&scope=city&fine=true",
    );
    expect(api.correlations("", { measure: "violent_pct", scope: "westside", factors: "economic.poverty_rate" })).toBe(
      "/api/correlations?measure=violent_pct&scope=westside&factors=economic.poverty_rate",
    );
    expect(api.hexes("", { span: "all", categories: "violent,theft" })).toBe(
      "/api/map/hexes?categories=violent,theft",
    );
    expect(api.hexes("", { span: "2014-07", hexSize: "250" })).toBe("/api/map/hexes?span=2014-07&hex_size=250");
    expect(api.violationsMap("", { span: "2013", zoom: 9 })).toBe("/api/map/violations?span=2013&zoom=9");
    expect(api.assets("", { kinds: "school,park" })).toBe("/api/map/assets?kinds=school,park");
    expect(api.assets("")).toBe("/api/map/assets");
    expect(api.regions("", { kind: "npu" })).toBe("/api/regions?kind=npu");
  });

  it("lets explicit UCR codes win over coarse categories", () => {
    expect(api.hexes("", { span: "2014", categories: "violent", ucr: "0640" })).toBe(
      "/api/map/hexes?span=2014&ucr=0640",
    );
  });
});

describe("RequestLanes", () => {
  it("aborts the in-flight request when the same lane is reused", async () => {
    const seen: { url: string; signal: AbortSignal | undefined }[] = [];
    const lanes = new RequestLanes((url, signal) => {
      seen.push({ url, signal });
      if (url === "/slow") return new Promise(() => {}); // hangs until aborted
      return Promise.resolve({ ok: true });
    });
    const hanging = lanes.get("hexes", "/slow");
    const result = await lanes.get("hexes", "/fast");
    expect(seen.map((s) => s.url)).toEqual(["/slow", "/fast"]);
    expect(seen[0].signal?.aborted).toBe(true);
    expect(seen[1].signal?.aborted).toBe(false);
    expect(result).toEqual({ ok: true });
    void hanging; // never settles; pages treat aborted fetches as superseded
  });

  it("leaves other lanes alone", async () => {
    const abortedUrls: string[] = [];
    const lanes = new RequestLanes((url, signal) => {
      signal?.addEventListener("abort", () => abortedUrls.push(url));
      return Promise.resolve(url);
    });
    await lanes.get("hexes", "/a");
    await lanes.get("violations", "/b");
    await lanes.get("assets", "/c");
    expect(abortedUrls).toEqual([]);
  });
});
