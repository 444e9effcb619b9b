import { App } from "./app.js";

// Same-origin deployment by default: the dist/ tree is served by any static
// file server behind the same host as the API. Set window.SAFETY_DASH_API to
// point somewhere else (the API must then allow that origin via --cors).
const root = document.getElementById("app");
if (root !== null) {
  const base = (window as unknown as { SAFETY_DASH_API?: string }).SAFETY_DASH_API ?? "";
  const app = new App(root, base);
  void app.render();
}
