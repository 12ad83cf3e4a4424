/**
 * Pure HTML builders for the problem screen.
 *
 * Everything here returns strings, so the layout is testable without a
 * browser.  The generated-code region is rendered as a plain <pre> with
 * no form control anywhere in it: code is read-only by construction, and
 * the only way to change it is to edit the prompt and resubmit.
 */

import { canSubmit, type ProblemViewState } from "./state.js";
import type { FirstFailure, HistoryEntry } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/**
 * Make whitespace visible: spaces as middle dots, tabs as arrows, line
 * breaks as a return mark.  Students otherwise cannot see why
 * "8.17 " differs from "8.17".
 */
export function visibleWhitespace(text: string): string {
  return text
    .replace(/ /g, "·")
    .replace(/\t/g, "⇥")
    .replace(/\n/g, "⏎\n");
}

export const INSTRUCTIONS =
  "Study the visual example of what the program must do, then finish the " +
  "prompt so the language model can generate a correct solution. The code " +
  "cannot be edited: if a test fails, revise your prompt and submit again.";

export function renderProblem(state: ProblemViewState): string {
  const problem = state.problem;
  if (!problem) {
    return `<main class="problem"><p class="loading">Loading problem…</p></main>`;
  }
  return `
<main class="problem">
  <header class="problem-header">
    <h1>${escapeHtml(problem.title)}${state.solved ? ' <span class="solved-badge">solved</span>' : ""}</h1>
    <nav class="problem-nav">
      <button id="nav-prev" ${problem.prev_problem_id ? "" : "disabled"}>&larr; Back</button>
      <button id="nav-next" class="${state.solved ? "emphasized" : ""}"
        ${problem.next_problem_id ? "" : "disabled"}>Next &rarr;</button>
    </nav>
  </header>
  <p class="instructions">${escapeHtml(INSTRUCTIONS)}</p>
  ${renderAssets(problem.assets)}
  <section class="prompt-editor">
    <span class="scaffold-prefix">${escapeHtml(problem.scaffold.prefix)}</span>
    <textarea id="draft" placeholder="…finish the prompt here"
      ${state.busy ? "disabled" : ""}>${escapeHtml(state.draftText)}</textarea>
    <button id="submit" class="submit" ${canSubmit(state) ? "" : "disabled"}>
      ${state.busy ? "Generating &amp; testing…" : "Submit prompt"}
    </button>
  </section>
  ${state.banner ? renderBanner(state.banner.kind, state.banner.message) : ""}
  ${renderOutcome(state)}
  ${renderHistory(state.history)}
</main>`;
}

function renderAssets(urls: string[]): string {
  const images = urls
    .map((url) => `<img src="${escapeHtml(url)}" alt="" class="problem-visual">`)
    .join("\n");
  return `<section class="visuals">${images}</section>`;
}

function renderBanner(kind: "prompt" | "transient", message: string): string {
  const hint =
    kind === "prompt"
      ? "Adjust your prompt and try again."
      : "The service had a hiccup; your prompt is unchanged. Try again shortly.";
  return `<aside class="banner banner-${kind}">
  <strong>${escapeHtml(message)}</strong> ${escapeHtml(hint)}
  ${kind === "transient" ? '<button id="retry">Retry</button>' : ""}
</aside>`;
}

function renderOutcome(state: ProblemViewState): string {
  const response = state.lastResponse;
  if (!response) return "";
  const code = renderCodePanel(response.generated_code) + renderOtherGenerations(state);
  if (response.passed_all) {
    return `${code}
<section class="outcome outcome-pass">
  <p class="success">All tests passed. Nicely prompted!
  ${response.next_problem_id ? "Continue with <strong>Next</strong>." : "That was the last problem in this course."}</p>
</section>`;
  }
  return `${code}
${response.first_failure ? renderFirstFailure(response.first_failure) : ""}`;
}

/** Only the accepted generation is shown as "the" code; any other raw
 * generations from the same submission sit behind a disclosure. */
export function renderOtherGenerations(state: ProblemViewState): string {
  const current = state.lastResponse;
  if (!current) return "";
  const entry = state.history.find((h) => h.submission_id === current.submission_id);
  if (!entry || entry.responses.length <= 1) return "";
  const others = entry.responses
    .slice(1)
    .map(
      (r, i) => `<h3>generation ${i + 2}</h3>
<pre class="code-display">${escapeHtml(r.raw_text)}</pre>`,
    )
    .join("\n");
  return `<details class="other-generations">
  <summary>Other generations (${entry.responses.length - 1})</summary>
  ${others}
</details>`;
}

export function renderCodePanel(code: string): string {
  return `<section class="generated-code" aria-label="generated code (read-only)">
  <h2>Generated code <span class="readonly-note">read-only</span></h2>
  <pre class="code-display">${escapeHtml(code)}</pre>
</section>`;
}

export function renderFirstFailure(failure: FirstFailure): string {
  return `<section class="outcome outcome-fail">
  <h2>First failing test (#${failure.test_index})</h2>
  <table class="failure-detail">
    <tr><th>input</th><td><pre>${escapeHtml(visibleWhitespace(failure.stdin_or_call))}</pre></td></tr>
    <tr><th>expected</th><td><pre>${escapeHtml(visibleWhitespace(failure.expected))}</pre></td></tr>
    <tr><th>actual</th><td><pre>${escapeHtml(visibleWhitespace(failure.actual))}</pre></td></tr>
  </table>
</section>`;
}

export function renderHistory(entries: HistoryEntry[]): string {
  if (entries.length === 0) return "";
  const rows = entries
    .map(
      (entry) => `<li class="${entry.outcome.passed_all ? "passed" : "failed"}">
  <span class="attempt-no">#${entry.submission_index}</span>
  <span class="attempt-text">${escapeHtml(entry.student_text)}</span>
  <span class="attempt-result">${entry.outcome.passed_all ? "passed" : "failed"}</span>
</li>`,
    )
    .join("\n");
  return `<section class="history">
  <h2>Your attempts</h2>
  <ol>${rows}</ol>
</section>`;
}
