/** Scrollable full-text panel with a highlight rail: every visible evidence
 * item renders exactly one positioned highlight element, so the rendered
 * highlight count always equals the filtered evidence count. */

import { TYPE_COLORS, matchColor } from "./colors";
import type { VisibleItem } from "./filters";
import { featureTypeOf } from "./types";

export interface TextPanelOptions {
  colorBy: "type" | "match";
  side: "a" | "b";
  onHighlightClick?: (item: VisibleItem) => void;
}

export function renderTextPanel(
  text: string,
  items: VisibleItem[],
  options: TextPanelOptions
): HTMLElement {
  const panel = document.createElement("div");
  panel.className = "text-panel";

  const body = document.createElement("pre");
  body.className = "text-panel-body";
  body.textContent = text;
  panel.appendChild(body);

  const rail = document.createElement("div");
  rail.className = "highlight-rail";
  for (const visible of items) {
    const rel = options.side === "a" ? visible.item.a_rel : visible.item.b_rel;
    const el = document.createElement("span");
    el.className = "highlight";
    el.dataset.matchIndex = String(visible.matchIndex);
    el.dataset.method = visible.method;
    el.dataset.unit = visible.item.unit;
    el.style.top = `${(rel[0] * 100).toFixed(3)}%`;
    el.style.height = `${Math.max(0.4, (rel[1] - rel[0]) * 100).toFixed(3)}%`;
    el.style.background =
      options.colorBy === "type"
        ? TYPE_COLORS[featureTypeOf(visible.item.unit)]
        : matchColor(visible.matchIndex);
    if (visible.item.label) el.title = visible.item.label;
    if (options.onHighlightClick) {
      el.addEventListener("click", () => options.onHighlightClick!(visible));
    }
    rail.appendChild(el);
  }
  panel.appendChild(rail);
  return panel;
}
