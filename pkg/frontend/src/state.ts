/** Minimal app state: current view, cached results, seen-jobs tracking. */

import type { AnalysisJobInfo, DocumentSummary } from "./types";

export type View =
  | { name: "dashboard" }
  | { name: "overview"; jobId: string }
  | { name: "detail"; jobId: string; candidateId: string };

export interface AppState {
  documents: DocumentSummary[];
  /** job_id -> finished job info (normalized result cache). */
  jobs: Map<string, AnalysisJobInfo>;
  /** doc_id -> job ids started for that document, newest first. */
  jobsByDoc: Map<string, string[]>;
  seenJobs: Set<string>;
  view: View;
}

export function initialState(): AppState {
  return {
    documents: [],
    jobs: new Map(),
    jobsByDoc: new Map(),
    seenJobs: new Set(),
    view: { name: "dashboard" },
  };
}

type Listener = (state: AppState) => void;

export class Store {
  state: AppState = initialState();
  private listeners: Listener[] = [];

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  update(mutate: (state: AppState) => void): void {
    mutate(this.state);
    for (const listener of this.listeners) listener(this.state);
  }

  recordJob(info: AnalysisJobInfo): void {
    this.update((s) => {
      s.jobs.set(info.job_id, info);
      const list = s.jobsByDoc.get(info.query_doc_id) ?? [];
      if (!list.includes(info.job_id)) list.unshift(info.job_id);
      s.jobsByDoc.set(info.query_doc_id, list);
    });
  }
}
