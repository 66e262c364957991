/** Match views: two vertical panels (input document left, comparison right)
 * with feature marks placed at their relative document positions and
 * connector lines between matched features. Similar features in the same
 * order appear as parallel lines. */

import { TYPE_COLORS, matchColor } from "./colors";
import type { VisibleItem } from "./filters";
import { featureTypeOf } from "./types";

export interface MatchViewOptions {
  /** "type": one color per feature type (overview); "match": a different
   * color for each feature match (detail view). */
  colorBy: "type" | "match";
  height?: number;
  onMatchClick?: (item: VisibleItem) => void;
}

const SVG_NS = "http://www.w3.org/2000/svg";

export function renderMatchView(items: VisibleItem[], options: MatchViewOptions): SVGSVGElement {
  const height = options.height ?? 160;
  const width = 120;
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("class", "match-view");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("width", String(width));
  svg.setAttribute("height", String(height));

  for (const x of [8, width - 8]) {
    const rail = document.createElementNS(SVG_NS, "rect");
    rail.setAttribute("x", String(x - 3));
    rail.setAttribute("y", "0");
    rail.setAttribute("width", "6");
    rail.setAttribute("height", String(height));
    rail.setAttribute("class", "match-view-rail");
    svg.appendChild(rail);
  }

  for (const visible of items) {
    const color =
      options.colorBy === "type"
        ? TYPE_COLORS[featureTypeOf(visible.item.unit)]
        : matchColor(visible.matchIndex);
    const aMid = ((visible.item.a_rel[0] + visible.item.a_rel[1]) / 2) * height;
    const bMid = ((visible.item.b_rel[0] + visible.item.b_rel[1]) / 2) * height;

    const group = document.createElementNS(SVG_NS, "g");
    group.setAttribute("class", "match-line");
    group.setAttribute("data-match-index", String(visible.matchIndex));
    group.setAttribute("data-method", visible.method);
    group.setAttribute("data-unit", visible.item.unit);

    const markA = featureMark(8, visible.item.a_rel, height, color);
    const markB = featureMark(112, visible.item.b_rel, height, color);
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", "11");
    line.setAttribute("y1", String(aMid));
    line.setAttribute("x2", "109");
    line.setAttribute("y2", String(bMid));
    line.setAttribute("stroke", color);
    line.setAttribute("stroke-width", "1.5");
    group.append(markA, line, markB);
    if (options.onMatchClick) {
      group.addEventListener("click", () => options.onMatchClick!(visible));
    }
    svg.appendChild(group);
  }
  return svg;
}

function featureMark(
  x: number,
  rel: [number, number],
  height: number,
  color: string
): SVGRectElement {
  const mark = document.createElementNS(SVG_NS, "rect");
  const top = rel[0] * height;
  const size = Math.max(2, (rel[1] - rel[0]) * height);
  mark.setAttribute("x", String(x - 3));
  mark.setAttribute("y", String(top));
  mark.setAttribute("width", "6");
  mark.setAttribute("height", String(size));
  mark.setAttribute("fill", color);
  return mark;
}

/** Darker band over the central match view marking the text currently inside
 * a full-text panel's viewport. */
export function updateViewportShade(
  shade: SVGRectElement,
  panel: HTMLElement,
  viewHeight: number
): void {
  const content = panel.scrollHeight || 1;
  const top = (panel.scrollTop / content) * viewHeight;
  const size = (panel.clientHeight / content) * viewHeight;
  shade.setAttribute("y", String(top));
  shade.setAttribute("height", String(Math.max(2, size)));
}

export function createViewportShade(height: number): SVGRectElement {
  const shade = document.createElementNS(SVG_NS, "rect");
  shade.setAttribute("class", "viewport-shade");
  shade.setAttribute("x", "0");
  shade.setAttribute("y", "0");
  shade.setAttribute("width", "120");
  shade.setAttribute("height", String(height));
  return shade;
}
