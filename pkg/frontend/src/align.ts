/** Click-to-align: scroll both full-text panels so a match's spans sit in
 * view. Geometry comes through PanelMetrics so the math stays testable
 * without browser layout. */

export interface PanelMetrics {
  viewportHeight(panel: HTMLElement): number;
  contentHeight(panel: HTMLElement): number;
}

export const domMetrics: PanelMetrics = {
  viewportHeight: (panel) => panel.clientHeight,
  contentHeight: (panel) => panel.scrollHeight,
};

/** Scroll offset centering a span of [top, top+height) inside the viewport,
 * clamped to the scrollable range. The span ends up fully visible whenever
 * it fits the viewport. */
export function computeScrollTop(
  spanTop: number,
  spanHeight: number,
  viewportHeight: number,
  contentHeight: number
): number {
  const centered = spanTop + spanHeight / 2 - viewportHeight / 2;
  const maxScroll = Math.max(0, contentHeight - viewportHeight);
  return Math.min(Math.max(0, centered), maxScroll);
}

/** Span pixel geometry of a relative [start, end] position within a panel. */
export function spanGeometry(
  rel: [number, number],
  contentHeight: number
): { top: number; height: number } {
  const top = rel[0] * contentHeight;
  const height = Math.max(1, (rel[1] - rel[0]) * contentHeight);
  return { top, height };
}

export function alignPanels(
  left: HTMLElement,
  right: HTMLElement,
  leftRel: [number, number],
  rightRel: [number, number],
  metrics: PanelMetrics = domMetrics
): void {
  for (const [panel, rel] of [
    [left, leftRel],
    [right, rightRel],
  ] as const) {
    const content = metrics.contentHeight(panel);
    const viewport = metrics.viewportHeight(panel);
    const { top, height } = spanGeometry(rel, content);
    panel.scrollTop = computeScrollTop(top, height, viewport, content);
  }
}
