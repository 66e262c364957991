/** View glue: renders the active view into #app and reacts to state. */

import * as api from "./api";
import { refreshDocuments, renderDashboard } from "./dashboard";
import { renderDetail } from "./detail";
import { renderOverview } from "./overview";
import { Store } from "./state";

export function createApp(host: HTMLElement): Store {
  const store = new Store();

  async function render(): Promise<void> {
    const view = store.state.view;
    host.textContent = "";
    const nav = document.createElement("nav");
    const home = document.createElement("a");
    home.href = "#";
    home.textContent = "Dashboard";
    home.addEventListener("click", (event) => {
      event.preventDefault();
      store.update((s) => {
        s.view = { name: "dashboard" };
      });
    });
    nav.appendChild(home);
    host.appendChild(nav);

    if (view.name === "dashboard") {
      host.appendChild(renderDashboard(store));
      return;
    }

    const info = store.state.jobs.get(view.jobId);
    if (!info || !info.result) {
      const missing = document.createElement("p");
      missing.textContent = "Analysis not loaded.";
      host.appendChild(missing);
      return;
    }
    if (view.name === "overview") {
      const query = await api.getDocument(info.result.query_doc_id);
      host.appendChild(renderOverview(store, view.jobId, info.result, query.text));
      return;
    }
    const candidate = info.result.candidates.find((c) => c.doc_id === view.candidateId);
    if (!candidate) {
      const missing = document.createElement("p");
      missing.textContent = "Comparison not found in this analysis.";
      host.appendChild(missing);
      return;
    }
    const [query, other] = await Promise.all([
      api.getDocument(info.result.query_doc_id),
      api.getDocument(candidate.doc_id),
    ]);
    host.appendChild(
      renderDetail(store, view.jobId, info.result, candidate, query.text, other.text)
    );
  }

  store.subscribe(() => {
    void render();
  });
  void refreshDocuments(store).then(render);
  return store;
}
