/** Results overview: the input document's full text on the left, ranked
 * result summaries with per-method match views on the right. One preview is
 * active at a time; it highlights the features of the input document that
 * match the active comparison document. */

import type { Store } from "./state";
import type { AnalysisResult, CandidateAnalysis } from "./types";
import { defaultFilters, visibleItems } from "./filters";
import { renderMatchView } from "./matchview";
import { renderTextPanel } from "./textpanel";

export function renderOverview(
  store: Store,
  jobId: string,
  result: AnalysisResult,
  queryText: string
): HTMLElement {
  const root = document.createElement("div");
  root.className = "overview";
  let activeCandidate: string | null = null;

  const left = document.createElement("div");
  left.className = "overview-left";
  const right = document.createElement("div");
  right.className = "overview-right";
  root.append(left, right);

  function renderLeft(): void {
    left.textContent = "";
    const heading = document.createElement("h3");
    heading.textContent = `Input document: ${result.query_doc_id}`;
    left.appendChild(heading);
    const candidate = result.candidates.find((c) => c.doc_id === activeCandidate);
    const items = candidate
      ? visibleItems(candidate, defaultFilters(result.methods))
      : [];
    const panel = renderTextPanel(queryText, items, { colorBy: "type", side: "a" });
    panel.classList.add("query-panel");
    left.appendChild(panel);
  }

  if (result.candidates.length === 0) {
    const empty = document.createElement("p");
    empty.className = "empty-results";
    empty.textContent = "No similar documents were found for this analysis.";
    right.appendChild(empty);
  }

  for (const candidate of result.candidates) {
    right.appendChild(renderSummary(store, jobId, result, candidate, (docId) => {
      activeCandidate = activeCandidate === docId ? null : docId;
      renderLeft();
      right
        .querySelectorAll(".result-summary")
        .forEach((el) =>
          el.classList.toggle(
            "active",
            (el as HTMLElement).dataset.docId === activeCandidate
          )
        );
    }));
  }

  renderLeft();
  return root;
}

function renderSummary(
  store: Store,
  jobId: string,
  result: AnalysisResult,
  candidate: CandidateAnalysis,
  onPreview: (docId: string) => void
): HTMLElement {
  const summary = document.createElement("div");
  summary.className = "result-summary";
  summary.dataset.docId = candidate.doc_id;

  const heading = document.createElement("h4");
  heading.textContent = candidate.title || candidate.doc_id;
  summary.appendChild(heading);

  const meta = document.createElement("p");
  meta.className = "summary-meta";
  const year = candidate.year === null ? "" : ` (${candidate.year})`;
  meta.textContent = `${candidate.authors.join(", ")}${year} — ${candidate.match_count} matches`;
  summary.appendChild(meta);

  const scores = document.createElement("ul");
  scores.className = "summary-scores";
  for (const score of candidate.scores) {
    const entry = document.createElement("li");
    entry.dataset.method = score.method;
    const value =
      score.error !== null ? "n/a" : score.score === null ? "–" : String(score.score);
    entry.textContent = `${score.method}: ${value}${score.flagged ? " ⚠" : ""}`;
    scores.appendChild(entry);
  }
  summary.appendChild(scores);

  const filters = defaultFilters(result.methods);
  const views = document.createElement("div");
  views.className = "summary-match-views";
  for (const score of candidate.scores) {
    const holder = document.createElement("figure");
    holder.className = "summary-view";
    holder.dataset.method = score.method;
    const items = visibleItems(
      { ...candidate, scores: [score] },
      { ...filters, methods: new Set([score.method]) }
    );
    holder.appendChild(renderMatchView(items, { colorBy: "type", height: 120 }));
    const caption = document.createElement("figcaption");
    caption.textContent = score.method;
    holder.appendChild(caption);
    views.appendChild(holder);
  }
  summary.appendChild(views);

  const controls = document.createElement("div");
  const preview = document.createElement("button");
  preview.className = "preview-toggle";
  preview.textContent = "Preview matches";
  preview.addEventListener("click", () => onPreview(candidate.doc_id));
  const open = document.createElement("button");
  open.className = "open-detail";
  open.textContent = "Compare side by side";
  open.addEventListener("click", () => {
    store.update((s) => {
      s.view = { name: "detail", jobId, candidateId: candidate.doc_id };
    });
  });
  controls.append(preview, open);
  summary.appendChild(controls);
  return summary;
}
