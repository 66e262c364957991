/** Thin fetch wrappers over the detection service; the UI talks to the
 * backend exclusively through these. */

import type {
  AnalysisJobInfo,
  CandidateAnalysis,
  DocumentRecord,
  DocumentSummary,
} from "./types";

const BASE = "";

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(`${BASE}${path}`, init);
  if (!response.ok) {
    let detail = `${response.status}`;
    try {
      const body = await response.json();
      if (body && body.error) detail = `${body.error}`;
    } catch {
      /* keep the status code */
    }
    throw new Error(detail);
  }
  return (await response.json()) as T;
}

export function listDocuments(): Promise<DocumentSummary[]> {
  return request<DocumentSummary[]>("/documents");
}

export function getDocument(docId: string): Promise<DocumentRecord> {
  return request<DocumentRecord>(`/documents/${encodeURIComponent(docId)}`);
}

export async function uploadDocument(payload: string): Promise<{ doc_id: string }> {
  return request<{ doc_id: string }>("/documents", {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: payload,
  });
}

export function deleteDocument(docId: string): Promise<{ deleted: string }> {
  return request<{ deleted: string }>(`/documents/${encodeURIComponent(docId)}`, {
    method: "DELETE",
  });
}

export interface AnalysisRequest {
  doc_id: string;
  methods: string[];
  scope: { type: "full_collection" } | { type: "explicit"; doc_ids: string[] };
}

export function startAnalysis(
  body: AnalysisRequest
): Promise<{ job_id: string; status: string; cache_hit: boolean }> {
  return request("/analyses", {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  });
}

export function getAnalysis(jobId: string): Promise<AnalysisJobInfo> {
  return request<AnalysisJobInfo>(`/analyses/${encodeURIComponent(jobId)}`);
}

export function getComparison(
  jobId: string,
  docId: string
): Promise<{ query_doc_id: string; comparison: CandidateAnalysis }> {
  return request(
    `/analyses/${encodeURIComponent(jobId)}/comparisons/${encodeURIComponent(docId)}`
  );
}

/** Poll a job until it leaves the queued/running states. */
export async function pollAnalysis(
  jobId: string,
  intervalMs = 500,
  timeoutMs = 120_000
): Promise<AnalysisJobInfo> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    const info = await getAnalysis(jobId);
    if (info.status === "done" || info.status === "failed") return info;
    if (Date.now() > deadline) throw new Error("analysis polling timed out");
    await new Promise((resolve) => setTimeout(resolve, intervalMs));
  }
}
