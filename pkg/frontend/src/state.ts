/**
 * View state for one problem screen, with pure transitions.
 *
 * The gating invariant lives here: the submit control is enabled exactly
 * when the draft is non-empty after trimming and no request is in
 * flight.  Keeping transitions pure keeps them testable without a DOM.
 */

import { ApiRequestError } from "./api.js";
import type { HistoryEntry, ProblemPayload, SubmitResponse } from "./types.js";

export interface BannerMessage {
  kind: "prompt" | "transient";
  message: string;
}

export interface ProblemViewState {
  problem: ProblemPayload | null;
  draftText: string;
  busy: boolean;
  solved: boolean;
  lastResponse: SubmitResponse | null;
  history: HistoryEntry[];
  banner: BannerMessage | null;
}

export function initialState(): ProblemViewState {
  return {
    problem: null,
    draftText: "",
    busy: false,
    solved: false,
    lastResponse: null,
    history: [],
    banner: null,
  };
}

/** Submit is enabled iff a problem is loaded, the draft has content, and
 * no submission is already in flight. */
export function canSubmit(state: ProblemViewState): boolean {
  return state.problem !== null && state.draftText.trim().length > 0 && !state.busy;
}

export function problemLoaded(
  state: ProblemViewState,
  problem: ProblemPayload,
): ProblemViewState {
  return {
    ...initialState(),
    problem,
    solved: problem.solved,
  };
}

export function draftChanged(state: ProblemViewState, text: string): ProblemViewState {
  return { ...state, draftText: text };
}

export function submitStarted(state: ProblemViewState): ProblemViewState {
  return { ...state, busy: true, banner: null };
}

export function submitSucceeded(
  state: ProblemViewState,
  response: SubmitResponse,
): ProblemViewState {
  return {
    ...state,
    busy: false,
    lastResponse: response,
    solved: state.solved || response.passed_all,
  };
}

export function submitFailed(state: ProblemViewState, error: unknown): ProblemViewState {
  const banner: BannerMessage =
    error instanceof ApiRequestError && error.isCallerFault
      ? { kind: "prompt", message: error.message }
      : { kind: "transient", message: messageOf(error) };
  return { ...state, busy: false, banner };
}

/** Replaying stored history restores solved state and the latest outcome
 * after a page reload. */
export function historyRestored(
  state: ProblemViewState,
  entries: HistoryEntry[],
): ProblemViewState {
  const ordered = [...entries].sort((a, b) => a.submission_index - b.submission_index);
  const solved = state.solved || ordered.some((e) => e.outcome.passed_all);
  return { ...state, history: ordered, solved };
}

function messageOf(error: unknown): string {
  if (error instanceof Error) return error.message;
  return String(error);
}
