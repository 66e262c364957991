import golden from "./fixtures/golden_analysis.json";
import documents from "./fixtures/golden_documents.json";
import type { AnalysisResult, CandidateAnalysis, DocumentRecord } from "../src/types";

export const goldenResult = golden as unknown as AnalysisResult;
export const goldenDocuments = documents as unknown as Record<string, DocumentRecord>;

export function candidateById(docId: string): CandidateAnalysis {
  const found = goldenResult.candidates.find((c) => c.doc_id === docId);
  if (!found) throw new Error(`no candidate ${docId} in the golden fixture`);
  return found;
}

export function topCandidate(): CandidateAnalysis {
  return goldenResult.candidates[0];
}

export function totalEvidence(candidate: CandidateAnalysis): number {
  return candidate.scores.reduce((acc, s) => acc + s.evidence.length, 0);
}
