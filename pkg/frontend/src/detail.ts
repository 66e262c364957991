/** Detailed analysis view: side-by-side comparison with a central match
 * view, viewport shading, click-to-align, filters by feature type, method
 * (up to five), and minimum match length, plus a similar-documents switcher.
 * All filter state is client-side; numbers shown come verbatim from the
 * analysis payload. */

import { alignPanels, domMetrics, type PanelMetrics } from "./align";
import {
  MAX_ACTIVE_METHODS,
  defaultFilters,
  maxLengths,
  visibleItems,
  type FilterState,
  type VisibleItem,
} from "./filters";
import { createViewportShade, renderMatchView, updateViewportShade } from "./matchview";
import type { Store } from "./state";
import type { AnalysisResult, CandidateAnalysis, FeatureType } from "./types";
import { renderTextPanel } from "./textpanel";

const MATCH_VIEW_HEIGHT = 240;

export interface DetailDeps {
  metrics?: PanelMetrics;
}

export function renderDetail(
  store: Store,
  jobId: string,
  result: AnalysisResult,
  candidate: CandidateAnalysis,
  queryText: string,
  candidateText: string,
  deps: DetailDeps = {}
): HTMLElement {
  const metrics = deps.metrics ?? domMetrics;
  const root = document.createElement("div");
  root.className = "detail";
  const filters: FilterState = defaultFilters(result.methods);
  const sliderMax = maxLengths(candidate);

  const controls = document.createElement("div");
  controls.className = "detail-controls";
  root.appendChild(controls);

  const body = document.createElement("div");
  body.className = "detail-body";
  root.appendChild(body);

  function rerender(): void {
    body.textContent = "";
    const items = visibleItems(candidate, filters);

    const onClick = (visible: VisibleItem) => {
      alignPanels(
        leftPanel,
        rightPanel,
        visible.item.a_rel,
        visible.item.b_rel,
        metrics
      );
      leftPanel.dispatchEvent(new Event("scroll"));
    };

    const leftPanel = renderTextPanel(queryText, items, {
      colorBy: "match",
      side: "a",
      onHighlightClick: onClick,
    });
    leftPanel.classList.add("detail-left");
    const rightPanel = renderTextPanel(candidateText, items, {
      colorBy: "match",
      side: "b",
      onHighlightClick: onClick,
    });
    rightPanel.classList.add("detail-right");

    const center = document.createElement("div");
    center.className = "detail-center";
    const view = renderMatchView(items, {
      colorBy: "match",
      height: MATCH_VIEW_HEIGHT,
      onMatchClick: onClick,
    });
    const shade = createViewportShade(MATCH_VIEW_HEIGHT);
    view.appendChild(shade);
    center.appendChild(view);

    leftPanel.addEventListener("scroll", () =>
      updateViewportShade(shade, leftPanel, MATCH_VIEW_HEIGHT)
    );

    body.append(leftPanel, center, rightPanel);
  }

  renderControls(controls, store, jobId, result, candidate, filters, sliderMax, rerender);
  rerender();
  return root;
}

function renderControls(
  host: HTMLElement,
  store: Store,
  jobId: string,
  result: AnalysisResult,
  candidate: CandidateAnalysis,
  filters: FilterState,
  sliderMax: FilterState["minLength"],
  rerender: () => void
): void {
  const typeBar = document.createElement("fieldset");
  typeBar.className = "type-filter";
  const legend = document.createElement("legend");
  legend.textContent = "feature types";
  typeBar.appendChild(legend);
  for (const type of ["text", "citation", "math", "image"] as FeatureType[]) {
    const label = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = filters.types.has(type);
    box.className = "type-box";
    box.value = type;
    box.addEventListener("change", () => {
      if (box.checked) filters.types.add(type);
      else filters.types.delete(type);
      rerender();
    });
    label.append(box, document.createTextNode(` ${type}`));
    typeBar.appendChild(label);
  }
  host.appendChild(typeBar);

  const methodBar = document.createElement("fieldset");
  methodBar.className = "method-filter";
  const mLegend = document.createElement("legend");
  mLegend.textContent = `methods (up to ${MAX_ACTIVE_METHODS})`;
  methodBar.appendChild(mLegend);
  const boxes: HTMLInputElement[] = [];
  for (const method of result.methods) {
    const label = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.value = method;
    box.className = "method-filter-box";
    box.checked = filters.methods.has(method);
    box.addEventListener("change", () => {
      if (box.checked) {
        if (filters.methods.size >= MAX_ACTIVE_METHODS) {
          box.checked = false;
          return;
        }
        filters.methods.add(method);
      } else {
        filters.methods.delete(method);
      }
      rerender();
    });
    boxes.push(box);
    label.append(box, document.createTextNode(` ${method}`));
    methodBar.appendChild(label);
  }
  host.appendChild(methodBar);

  const sliders = document.createElement("div");
  sliders.className = "length-sliders";
  const sliderFor = (unit: keyof FilterState["minLength"], text: string) => {
    const wrap = document.createElement("label");
    wrap.className = "length-slider";
    const slider = document.createElement("input");
    slider.type = "range";
    slider.min = "0";
    slider.max = String(Math.max(1, sliderMax[unit] + 1));
    slider.value = "0";
    slider.dataset.unit = unit;
    const value = document.createElement("span");
    value.textContent = "0";
    slider.addEventListener("input", () => {
      filters.minLength[unit] = Number(slider.value);
      value.textContent = slider.value;
      rerender();
    });
    wrap.append(document.createTextNode(`min ${text} `), slider, value);
    return wrap;
  };
  sliders.append(
    sliderFor("char", "text length"),
    sliderFor("citation", "citation run"),
    sliderFor("identifier", "identifier run")
  );
  host.appendChild(sliders);

  const switcher = document.createElement("details");
  switcher.className = "similar-documents";
  const summary = document.createElement("summary");
  summary.textContent = "Similar documents";
  switcher.appendChild(summary);
  const table = document.createElement("table");
  const head = document.createElement("tr");
  for (const label of ["Document title", "Total matches"]) {
    const th = document.createElement("th");
    th.textContent = label;
    head.appendChild(th);
  }
  table.appendChild(head);
  for (const other of result.candidates) {
    const row = document.createElement("tr");
    row.className = "similar-doc-row";
    row.dataset.docId = other.doc_id;
    if (other.doc_id === candidate.doc_id) row.classList.add("current");
    const title = document.createElement("td");
    const link = document.createElement("a");
    link.href = "#";
    link.textContent = other.title || other.doc_id;
    link.addEventListener("click", (event) => {
      event.preventDefault();
      store.update((s) => {
        s.view = { name: "detail", jobId, candidateId: other.doc_id };
      });
    });
    title.appendChild(link);
    const count = document.createElement("td");
    count.textContent = String(other.match_count);
    row.append(title, count);
    table.appendChild(row);
  }
  switcher.appendChild(table);
  host.appendChild(switcher);
}
