import { beforeEach, describe, expect, it } from "vitest";
import { CorrelationsPage, formatR, MEASURES } from "../src/correlations.js";
import { DEFAULTS, ViewState } from "../src/state.js";
import { CAVEAT, stubApi } from "./fixtures.js";

function freshRoot(): HTMLElement {
  const root = document.createElement("div");
  document.body.append(root);
  return root;
}

beforeEach(() => {
  document.body.innerHTML = "";
});

const CORR_STATE: ViewState = { ...DEFAULTS, page: "correlations" };

describe("formatR", () => {
  it("renders undefined coefficients as n/a instead of hiding them", () => {
    expect(formatR(null)).toBe("n/a");
    expect(formatR(0.8)).toBe("0.800");
    expect(formatR(-0.713)).toBe("-0.713");
    expect(formatR(1)).toBe("1.000");
  });
});

describe("CorrelationsPage", () => {
  it("fetches city and westside side by side", async () => {
    const stub = stubApi();
    const page = new CorrelationsPage(freshRoot(), "", stub.fetchJson);
    await page.update(CORR_STATE);
    expect(stub.calls).toEqual([
      "/api/meta",
      "/api/correlations?measure=violent_pct&scope=city",
      "/api/correlations?measure=violent_pct&scope=westside",
    ]);
  });

  it("always displays the API's caveat verbatim", async () => {
    const stub = stubApi();
    const page = new CorrelationsPage(freshRoot(), "", stub.fetchJson);
    await page.update(CORR_STATE);
    const caveat = page.root.querySelector(".caveat") as HTMLElement;
    expect(caveat.textContent).toBe(CAVEAT);
    expect(caveat.hidden).toBe(false);

    // still visible after every later interaction
    await page.update({ ...CORR_STATE, measure: "total_per_1000" });
    expect((page.root.querySelector(".caveat") as HTMLElement).textContent).toBe(CAVEAT);
  });

  it("shows both coefficients per factor and n/a for undefined ones", async () => {
    const stub = stubApi();
    const page = new CorrelationsPage(freshRoot(), "", stub.fetchJson);
    await page.update(CORR_STATE);

    const income = page.root.querySelector('tr[data-factor="economic.median_income"]');
    expect(income?.querySelector(".city-r .r-value")?.textContent).toBe("-0.713");
    expect(income?.querySelector(".westside-r .r-value")?.textContent).toBe("-0.488");

    const vacancy = page.root.querySelector('tr[data-factor="housing.pct_vacant"]');
    expect(vacancy).not.toBeNull();
    expect(vacancy?.querySelector(".city-r .r-value")?.textContent).toBe("n/a");
    expect(vacancy?.querySelector(".westside-r .r-value")?.textContent).toBe("n/a");
    expect(vacancy?.querySelector(".city-r .r-bar")).toBeNull();
  });

  it("re-requests both scopes when the measure changes", async () => {
    const stub = stubApi();
    const page = new CorrelationsPage(freshRoot(), "", stub.fetchJson);
    await page.update(CORR_STATE);
    stub.calls.length = 0;
    await page.update({ ...CORR_STATE, measure: "category_per_1000:theft" });
    expect(stub.calls).toEqual([
      "/api/correlations?measure=category_per_1000:theft&scope=city",
      "/api/correlations?measure=category_per_1000:theft&scope=westside",
    ]);
  });

  it("offers the measure grammar and factor groups from the metadata", async () => {
    const stub = stubApi();
    const patches: Array<Partial<ViewState>> = [];
    const page = new CorrelationsPage(freshRoot(), "", stub.fetchJson, (patch) => patches.push(patch));
    await page.update(CORR_STATE);

    const measureValues = [...page.root.querySelectorAll("select.measure option")].map((opt) =>
      opt.getAttribute("value"),
    );
    expect(measureValues).toEqual(MEASURES.map((measure) => measure.value));
    expect(measureValues).toContain("violent_pct");
    expect(measureValues).toContain("total_per_1000");
    expect(measureValues).toContain("category_per_1000:theft");

    const groupValues = [...page.root.querySelectorAll("select.factor-group option")].map((opt) =>
      opt.getAttribute("value"),
    );
    expect(groupValues).toEqual(["", "economic", "housing"]);

    const groupSelect = page.root.querySelector("select.factor-group") as HTMLSelectElement;
    groupSelect.value = "economic";
    groupSelect.dispatchEvent(new Event("change"));
    expect(patches.pop()).toEqual({ factors: "economic.median_income,economic.poverty_rate" });
  });
});
