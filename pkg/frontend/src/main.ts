import { ApiClient } from "./api.js";
import { App } from "./app.js";

window.addEventListener("DOMContentLoaded", () => {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app mount point");
  const api = new ApiClient(
    (url, init) => window.fetch(url, init),
    window.localStorage,
  );
  const app = new App(root, api);
  void app.start().catch((err) => {
    root.innerHTML = `<p class="boot-error">Could not load the course: ${String(err)}</p>`;
  });
});
