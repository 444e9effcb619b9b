import { beforeEach, describe, expect, it } from "vitest";
import { AggregatesPage, formatValue } from "../src/aggregates.js";
import { DEFAULTS, ViewState } from "../src/state.js";
import { NPUS, stubApi } from "./fixtures.js";

function freshRoot(): HTMLElement {
  const root = document.createElement("div");
  document.body.append(root);
  return root;
}

beforeEach(() => {
  document.body.innerHTML = "";
});

const WESTSIDE_STATE: ViewState = {
  ...DEFAULTS,
  page: "aggregates",
  scope: "westside",
  granularity: "week",
  dataset: "both",
  from: "2012-01-01",
  to: "2014-12-31",
  perCapita: true,
};

describe("AggregatesPage", () => {
  it("offers exactly six granularities, the westside scope, and three datasets", async () => {
    const stub = stubApi();
    const page = new AggregatesPage(freshRoot(), "", stub.fetchJson);
    await page.update({ ...DEFAULTS, page: "aggregates" });

    const values = (selector: string): (string | null)[] =>
      [...page.root.querySelectorAll(`${selector} option`)].map((opt) => opt.getAttribute("value"));

    const granularities = values("select.granularity");
    expect(granularities).toEqual(["year", "quarter", "month", "week", "weekday", "day"]);
    expect(granularities.length).toBe(6);

    const scopes = values("select.scope");
    expect(scopes.slice(0, 2)).toEqual(["city", "westside"]);
    expect(scopes.slice(2)).toEqual(["npu:NPU-A", "npu:NPU-K", "npu:NPU-L", "npu:NPU-T"]);
    const westsideOption = page.root.querySelector('select.scope option[value="westside"]');
    expect(westsideOption?.textContent).toBe("Westside");

    expect(values("select.dataset")).toEqual(["crimes", "violations", "both"]);
  });

  it("requests the four aggregate bodies with the state's parameters", async () => {
    const stub = stubApi();
    const page = new AggregatesPage(freshRoot(), "", stub.fetchJson);
    await page.update(WESTSIDE_STATE);
    expect(stub.calls).toEqual([
      "/api/meta",
      "/api/aggregate/timeseries?dataset=both&scope=westside&granularity=week&from=2012-01-01&to=2014-12-31",
      "/api/aggregate/npus?dataset=both&from=2012-01-01&to=2014-12-31&per_capita=true",
      "/api/aggregate/type-share?dataset=both&scope=westside",
      "/api/aggregate/type-share?dataset=both&scope=city",
    ]);

    // an identical update re-fetches nothing
    stub.calls.length = 0;
    await page.update(WESTSIDE_STATE);
    expect(stub.calls).toEqual([]);
  });

  it("shows series totals, NPU bars with westside picked out, and the share table verbatim", async () => {
    const stub = stubApi();
    const page = new AggregatesPage(freshRoot(), "", stub.fetchJson);
    await page.update(WESTSIDE_STATE);

    expect(page.root.querySelector("polyline.scope-series")).not.toBeNull();
    expect(page.root.querySelector("polyline.city-series")).not.toBeNull();
    const caption = page.root.querySelector(".series-caption");
    expect(caption?.textContent).toContain("westside total 120");
    expect(caption?.textContent).toContain("city total 900");

    const rows = [...page.root.querySelectorAll(".npu-bars .bar-row")];
    expect(rows.length).toBe(NPUS.npus.length);
    expect(rows.map((row) => row.querySelector(".value")?.textContent)).toEqual(["120", "80", "66", "50"]);
    const westsideRows = page.root.querySelectorAll(".npu-bars .bar-row.westside");
    expect(westsideRows.length).toBe(3);

    const theftRow = page.root.querySelector('table.type-share tr[data-type="theft"]');
    expect(theftRow?.querySelector(".scope-share")?.textContent).toBe("52.5%");
    expect(theftRow?.querySelector(".city-share")?.textContent).toBe("58.1%");
  });

  it("reports control edits as state patches", async () => {
    const stub = stubApi();
    const patches: Array<Partial<ViewState>> = [];
    const page = new AggregatesPage(freshRoot(), "", stub.fetchJson, (patch) => patches.push(patch));
    await page.update({ ...DEFAULTS, page: "aggregates" });

    const perCapita = page.root.querySelector("input.per-capita") as HTMLInputElement;
    perCapita.checked = true;
    perCapita.dispatchEvent(new Event("change"));
    expect(patches.pop()).toEqual({ perCapita: true });

    const granularity = page.root.querySelector("select.granularity") as HTMLSelectElement;
    granularity.value = "weekday";
    granularity.dispatchEvent(new Event("change"));
    expect(patches.pop()).toEqual({ granularity: "weekday" });

    const scope = page.root.querySelector("select.scope") as HTMLSelectElement;
    scope.value = "npu:NPU-K";
    scope.dispatchEvent(new Event("change"));
    expect(patches.pop()).toEqual({ scope: "npu:NPU-K" });
  });

  it("keeps checkbox and select values in line with the state", async () => {
    const stub = stubApi();
    const page = new AggregatesPage(freshRoot(), "", stub.fetchJson);
    await page.update(WESTSIDE_STATE);
    expect((page.root.querySelector("select.scope") as HTMLSelectElement).value).toBe("westside");
    expect((page.root.querySelector("select.granularity") as HTMLSelectElement).value).toBe("week");
    expect((page.root.querySelector("input.per-capita") as HTMLInputElement).checked).toBe(true);
    expect((page.root.querySelector("input.from") as HTMLInputElement).value).toBe("2012-01-01");
  });
});

describe("formatValue", () => {
  it("prints integers bare and floats to two places", () => {
    expect(formatValue(120)).toBe("120");
    expect(formatValue(3.14159)).toBe("3.14");
  });
});
