/** Pure evidence filtering: what the detail view shows is a pure function of
 * the analysis JSON and the filter state. The UI never computes scores. */

import type { CandidateAnalysis, EvidenceItem, FeatureType } from "./types";
import { featureTypeOf } from "./types";

export interface FilterState {
  /** Enabled feature types (text/citation/math/image). */
  types: Set<FeatureType>;
  /** Enabled detection methods; the detail view caps this at five. */
  methods: Set<string>;
  /** Minimum match length (end - start) per evidence unit. */
  minLength: { char: number; citation: number; identifier: number; image: number };
}

export const MAX_ACTIVE_METHODS = 5;

export function defaultFilters(methods: string[]): FilterState {
  return {
    types: new Set<FeatureType>(["text", "citation", "math", "image"]),
    methods: new Set(methods.slice(0, MAX_ACTIVE_METHODS)),
    minLength: { char: 0, citation: 0, identifier: 0, image: 0 },
  };
}

export interface VisibleItem {
  method: string;
  item: EvidenceItem;
  /** Index of the item within the full filtered list (stable match id). */
  matchIndex: number;
}

export function itemLength(item: EvidenceItem): number {
  return item.a_end - item.a_start;
}

export function itemPasses(method: string, item: EvidenceItem, state: FilterState): boolean {
  if (!state.methods.has(method)) return false;
  if (!state.types.has(featureTypeOf(item.unit))) return false;
  return itemLength(item) >= state.minLength[item.unit];
}

/** Every evidence item of the candidate passing the active filters, in
 * method order then item order; matchIndex is stable for coloring/alignment. */
export function visibleItems(candidate: CandidateAnalysis, state: FilterState): VisibleItem[] {
  const out: VisibleItem[] = [];
  for (const score of candidate.scores) {
    for (const item of score.evidence) {
      if (itemPasses(score.method, item, state)) {
        out.push({ method: score.method, item, matchIndex: out.length });
      }
    }
  }
  return out;
}

export function highlightCount(candidate: CandidateAnalysis, state: FilterState): number {
  return visibleItems(candidate, state).length;
}

/** Longest match length present in a candidate, per unit; drives the slider
 * ranges. */
export function maxLengths(candidate: CandidateAnalysis): FilterState["minLength"] {
  const out = { char: 0, citation: 0, identifier: 0, image: 0 };
  for (const score of candidate.scores) {
    for (const item of score.evidence) {
      out[item.unit] = Math.max(out[item.unit], itemLength(item));
    }
  }
  return out;
}
