/** DTOs mirroring the detection service's JSON payloads. */

export type EvidenceUnit = "char" | "citation" | "identifier" | "image";

/** Feature classes shown to reviewers; derived from the evidence unit. */
export type FeatureType = "text" | "citation" | "math" | "image";

export interface EvidenceItem {
  unit: EvidenceUnit;
  a_start: number;
  a_end: number;
  b_start: number;
  b_end: number;
  /** Relative [start, end] position of the match in each document (0..1). */
  a_rel: [number, number];
  b_rel: [number, number];
  label: string | null;
}

export interface MethodScore {
  method: string;
  score: number | null;
  raw: number | null;
  flagged: boolean;
  error: string | null;
  evidence: EvidenceItem[];
}

export interface CandidateAnalysis {
  doc_id: string;
  title: string;
  authors: string[];
  year: number | null;
  match_count: number;
  scores: MethodScore[];
}

export interface AnalysisResult {
  format_version: string;
  query_doc_id: string;
  methods: string[];
  candidates: CandidateAnalysis[];
}

export interface DocumentSummary {
  doc_id: string;
  title: string;
  authors: string[];
  year: number | null;
}

export interface DocumentRecord extends DocumentSummary {
  text: string;
  [key: string]: unknown;
}

export type JobStatus = "queued" | "running" | "done" | "failed";

export interface AnalysisJobInfo {
  job_id: string;
  status: JobStatus;
  query_doc_id: string;
  methods: string[];
  scope: { type: string; doc_ids: string[] | null };
  result?: AnalysisResult;
  error?: string;
}

export const ALL_METHODS = [
  "bc_abs",
  "bc_rel",
  "lccs",
  "lccs_distinct",
  "max_gct",
  "cc_bcn",
  "cc_bpn",
  "histo",
  "lcis",
  "git",
  "sherlock",
  "encoplot",
  "substrings",
  "phash",
  "ngram_tm",
  "pos_tm",
  "ratio_hash",
] as const;

export const METHOD_GROUPS: Record<string, string[]> = {
  citation: ["bc_abs", "bc_rel", "lccs", "lccs_distinct", "max_gct", "cc_bcn", "cc_bpn"],
  math: ["histo", "lcis", "git"],
  text: ["sherlock", "encoplot", "substrings"],
  image: ["phash", "ngram_tm", "pos_tm", "ratio_hash"],
};

export function featureTypeOf(unit: EvidenceUnit): FeatureType {
  switch (unit) {
    case "char":
      return "text";
    case "citation":
      return "citation";
    case "identifier":
      return "math";
    case "image":
      return "image";
  }
}
