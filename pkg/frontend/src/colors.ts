/** Color assignment: one fixed hue per feature type in overview match views,
 * a distinct color per match in the detail view. */

import type { FeatureType } from "./types";

export const TYPE_COLORS: Record<FeatureType, string> = {
  text: "#e6a23c",
  citation: "#4a90d9",
  math: "#50a14f",
  image: "#c678dd",
};

const DETAIL_PALETTE = [
  "#e45649",
  "#4a90d9",
  "#50a14f",
  "#c678dd",
  "#e6a23c",
  "#2aa1a8",
  "#d4619b",
  "#8a7af0",
  "#a0892c",
  "#5ab0f0",
];

export function matchColor(matchIndex: number): string {
  return DETAIL_PALETTE[matchIndex % DETAIL_PALETTE.length];
}
