import { beforeEach, describe, expect, it } from "vitest";
import { App } from "../src/app.js";
import { stubApi } from "./fixtures.js";

function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

beforeEach(() => {
  document.body.innerHTML = "";
  window.history.replaceState(null, "", "/");
});

describe("App", () => {
  it("mirrors the state in the URL and routes pages", async () => {
    const stub = stubApi();
    const root = document.createElement("div");
    document.body.append(root);
    const app = new App(root, "", stub.fetchJson);
    await app.render();

    expect(window.location.search).toBe("");
    const sections = {
      map: root.querySelector(".page-map") as HTMLElement,
      aggregates: root.querySelector(".page-aggregates") as HTMLElement,
      correlations: root.querySelector(".page-correlations") as HTMLElement,
    };
    expect(sections.map.hidden).toBe(false);
    expect(sections.aggregates.hidden).toBe(true);

    app.apply({ page: "correlations" });
    await flush();
    expect(window.location.search).toBe("?page=correlations");
    expect(sections.map.hidden).toBe(true);
    expect(sections.correlations.hidden).toBe(false);

    // browser navigation: a popstate re-reads the URL
    window.history.replaceState(null, "", "/?page=aggregates&scope=westside");
    window.dispatchEvent(new PopStateEvent("popstate"));
    await flush();
    expect(app.state.page).toBe("aggregates");
    expect(app.state.scope).toBe("westside");
    expect(sections.aggregates.hidden).toBe(false);
    expect(sections.correlations.hidden).toBe(true);
  });

  it("applies patches from page controls and re-renders", async () => {
    const stub = stubApi();
    const root = document.createElement("div");
    document.body.append(root);
    const app = new App(root, "", stub.fetchJson);
    await app.render();

    const violationsBox = root.querySelector("input.layer-violations") as HTMLInputElement;
    violationsBox.checked = true;
    violationsBox.dispatchEvent(new Event("change"));
    await flush();
    expect(app.state.violationsOn).toBe(true);
    expect(window.location.search).toBe("?layers=hexes,violations");
    expect(stub.calls).toContain("/api/map/violations?zoom=12");
  });
});
