/** Dashboard: paginated document table with search, upload, per-document
 * analyses, and the new-analysis dialog (method checkboxes plus scope
 * selection including the pairwise collusion mode). */

import * as api from "./api";
import type { Store } from "./state";
import type { DocumentSummary } from "./types";
import { METHOD_GROUPS } from "./types";

export const PAGE_SIZE = 10;

export function matchesSearch(doc: DocumentSummary, query: string): boolean {
  const needle = query.trim().toLowerCase();
  if (!needle) return true;
  const haystack = [doc.title, String(doc.year ?? ""), ...doc.authors]
    .join(" ")
    .toLowerCase();
  return haystack.includes(needle);
}

export function renderDashboard(store: Store): HTMLElement {
  const root = document.createElement("div");
  root.className = "dashboard";
  let page = 0;
  let search = "";

  const toolbar = document.createElement("div");
  toolbar.className = "toolbar";

  const searchBox = document.createElement("input");
  searchBox.type = "search";
  searchBox.placeholder = "Search authors, title, or year";
  searchBox.className = "search-box";
  searchBox.addEventListener("input", () => {
    search = searchBox.value;
    page = 0;
    renderTable();
  });

  const uploadInput = document.createElement("input");
  uploadInput.type = "file";
  uploadInput.accept = "application/json";
  uploadInput.style.display = "none";
  uploadInput.addEventListener("change", async () => {
    const file = uploadInput.files?.[0];
    if (!file) return;
    try {
      await api.uploadDocument(await file.text());
      store.update((s) => void s);
      await refreshDocuments(store);
      renderTable();
    } catch (error) {
      showError(root, `Upload failed: ${(error as Error).message}`);
    }
  });
  const uploadButton = document.createElement("button");
  uploadButton.textContent = "Upload document";
  uploadButton.className = "upload-button";
  uploadButton.addEventListener("click", () => uploadInput.click());

  toolbar.append(searchBox, uploadButton, uploadInput);
  root.appendChild(toolbar);

  const tableHost = document.createElement("div");
  root.appendChild(tableHost);

  function renderTable(): void {
    tableHost.textContent = "";
    const docs = store.state.documents.filter((d) => matchesSearch(d, search));
    const pages = Math.max(1, Math.ceil(docs.length / PAGE_SIZE));
    page = Math.min(page, pages - 1);
    const visible = docs.slice(page * PAGE_SIZE, (page + 1) * PAGE_SIZE);

    const table = document.createElement("table");
    table.className = "doc-table";
    const head = document.createElement("tr");
    for (const label of ["Title", "Authors", "Year", "Status", "Actions"]) {
      const th = document.createElement("th");
      th.textContent = label;
      head.appendChild(th);
    }
    table.appendChild(head);

    for (const doc of visible) {
      const row = document.createElement("tr");
      row.className = "doc-row";
      row.dataset.docId = doc.doc_id;

      const title = document.createElement("td");
      title.textContent = doc.title || doc.doc_id;
      const authors = document.createElement("td");
      authors.textContent = doc.authors.join(", ");
      const year = document.createElement("td");
      year.textContent = doc.year === null ? "" : String(doc.year);

      const status = document.createElement("td");
      status.className = "doc-status";
      const jobIds = store.state.jobsByDoc.get(doc.doc_id) ?? [];
      if (jobIds.length > 0) {
        const icon = document.createElement("span");
        icon.className = "status-has-results";
        icon.textContent = "≡"; // analyses available
        icon.title = `${jobIds.length} analyses`;
        status.appendChild(icon);
        if (jobIds.some((id) => !store.state.seenJobs.has(id))) {
          const unseen = document.createElement("span");
          unseen.className = "status-unseen";
          unseen.textContent = "●"; // unseen results
          status.appendChild(unseen);
        }
      }

      const actions = document.createElement("td");
      const analyzeButton = document.createElement("button");
      analyzeButton.textContent = "+";
      analyzeButton.title = "Start a new analysis";
      analyzeButton.className = "start-analysis";
      analyzeButton.addEventListener("click", () =>
        openAnalysisDialog(root, store, doc, renderTable)
      );
      const deleteButton = document.createElement("button");
      deleteButton.textContent = "✕";
      deleteButton.title = "Delete document";
      deleteButton.className = "delete-doc";
      deleteButton.addEventListener("click", async () => {
        try {
          await api.deleteDocument(doc.doc_id);
          await refreshDocuments(store);
          renderTable();
        } catch (error) {
          showError(root, `Delete failed: ${(error as Error).message}`);
        }
      });
      actions.append(analyzeButton, deleteButton);

      row.append(title, authors, year, status, actions);
      table.appendChild(row);

      for (const jobId of jobIds) {
        const info = store.state.jobs.get(jobId);
        if (!info) continue;
        const jobRow = document.createElement("tr");
        jobRow.className = "analysis-row";
        const cell = document.createElement("td");
        cell.colSpan = 5;
        const link = document.createElement("a");
        link.href = "#";
        link.className = "analysis-link";
        link.dataset.jobId = jobId;
        const mark = info.status === "done" ? "✓" : info.status;
        const count = info.result ? info.result.candidates.length : 0;
        link.textContent = `${mark} ${info.methods.join(", ")} — ${count} similar documents`;
        link.addEventListener("click", (event) => {
          event.preventDefault();
          store.update((s) => {
            s.seenJobs.add(jobId);
            s.view = { name: "overview", jobId };
          });
        });
        cell.appendChild(link);
        jobRow.appendChild(cell);
        table.appendChild(jobRow);
      }
    }
    tableHost.appendChild(table);

    const pager = document.createElement("div");
    pager.className = "pager";
    const prev = document.createElement("button");
    prev.textContent = "‹ prev";
    prev.disabled = page === 0;
    prev.addEventListener("click", () => {
      page -= 1;
      renderTable();
    });
    const label = document.createElement("span");
    label.textContent = `page ${page + 1} / ${pages}`;
    const next = document.createElement("button");
    next.textContent = "next ›";
    next.disabled = page >= pages - 1;
    next.addEventListener("click", () => {
      page += 1;
      renderTable();
    });
    pager.append(prev, label, next);
    tableHost.appendChild(pager);
  }

  renderTable();
  return root;
}

export async function refreshDocuments(store: Store): Promise<void> {
  const docs = await api.listDocuments();
  store.update((s) => {
    s.documents = docs;
  });
}

function showError(root: HTMLElement, message: string): void {
  let banner = root.querySelector(".error-banner") as HTMLElement | null;
  if (!banner) {
    banner = document.createElement("div");
    banner.className = "error-banner";
    root.prepend(banner);
  }
  banner.textContent = message;
}

export function openAnalysisDialog(
  host: HTMLElement,
  store: Store,
  doc: DocumentSummary,
  onDone: () => void
): HTMLElement {
  const dialog = document.createElement("div");
  dialog.className = "analysis-dialog";

  const heading = document.createElement("h3");
  heading.textContent = `New analysis — ${doc.title || doc.doc_id}`;
  dialog.appendChild(heading);

  const methodList = document.createElement("div");
  methodList.className = "method-checkboxes";
  const checkboxes: HTMLInputElement[] = [];
  for (const [group, methods] of Object.entries(METHOD_GROUPS)) {
    const column = document.createElement("fieldset");
    const legend = document.createElement("legend");
    legend.textContent = group;
    column.appendChild(legend);
    for (const method of methods) {
      const label = document.createElement("label");
      const box = document.createElement("input");
      box.type = "checkbox";
      box.value = method;
      box.className = "method-box";
      box.addEventListener("change", updateSubmit);
      checkboxes.push(box);
      label.append(box, document.createTextNode(` ${method}`));
      column.appendChild(label);
    }
    methodList.appendChild(column);
  }
  dialog.appendChild(methodList);

  const scope = document.createElement("div");
  scope.className = "scope-picker";
  const fullRadio = radio("scope", "full_collection", "Search matches in the collection", true);
  const explicitRadio = radio("scope", "explicit", "Compare against selected documents");
  scope.append(fullRadio.label, explicitRadio.label);

  const docPicker = document.createElement("div");
  docPicker.className = "collusion-picker";
  docPicker.style.display = "none";
  for (const other of store.state.documents) {
    if (other.doc_id === doc.doc_id) continue;
    const label = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.value = other.doc_id;
    box.className = "collusion-box";
    label.append(box, document.createTextNode(` ${other.title || other.doc_id}`));
    docPicker.appendChild(label);
  }
  scope.appendChild(docPicker);
  const toggle = () => {
    docPicker.style.display = explicitRadio.input.checked ? "" : "none";
  };
  fullRadio.input.addEventListener("change", toggle);
  explicitRadio.input.addEventListener("change", toggle);
  dialog.appendChild(scope);

  const submit = document.createElement("button");
  submit.textContent = "Start analysis";
  submit.className = "submit-analysis";
  submit.disabled = true;
  dialog.appendChild(submit);

  function updateSubmit(): void {
    submit.disabled = !checkboxes.some((b) => b.checked);
  }

  submit.addEventListener("click", async () => {
    const methods = checkboxes.filter((b) => b.checked).map((b) => b.value);
    const explicit = explicitRadio.input.checked;
    const docIds = Array.from(
      docPicker.querySelectorAll<HTMLInputElement>(".collusion-box:checked")
    ).map((b) => b.value);
    try {
      const started = await api.startAnalysis({
        doc_id: doc.doc_id,
        methods,
        scope: explicit ? { type: "explicit", doc_ids: docIds } : { type: "full_collection" },
      });
      dialog.remove();
      const info = await api.pollAnalysis(started.job_id);
      store.recordJob(info);
      onDone();
    } catch (error) {
      showError(dialog, `Analysis failed: ${(error as Error).message}`);
    }
  });

  host.appendChild(dialog);
  return dialog;
}

function radio(
  name: string,
  value: string,
  text: string,
  checked = false
): { label: HTMLLabelElement; input: HTMLInputElement } {
  const label = document.createElement("label");
  const input = document.createElement("input");
  input.type = "radio";
  input.name = name;
  input.value = value;
  input.checked = checked;
  label.append(input, document.createTextNode(` ${text}`));
  return { label, input };
}
