/**
 * View state for one problem screen, with pure transitions.
 *
 * The gating invariant lives here: the submit control is enabled exactly
 * when the draft is non-empty after trimming and no request is in
 * flight.  Keeping transitions pure keeps them testable without a DOM.
 */
import { ApiRequestError } from "./api.js";
export function initialState() {
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
export function canSubmit(state) {
    return state.problem !== null && state.draftText.trim().length > 0 && !state.busy;
}
export function problemLoaded(state, problem) {
    return {
        ...initialState(),
        problem,
        solved: problem.solved,
    };
}
export function draftChanged(state, text) {
    return { ...state, draftText: text };
}
export function submitStarted(state) {
    return { ...state, busy: true, banner: null };
}
export function submitSucceeded(state, response) {
    return {
        ...state,
        busy: false,
        lastResponse: response,
        solved: state.solved || response.passed_all,
    };
}
export function submitFailed(state, error) {
    const banner = error instanceof ApiRequestError && error.isCallerFault
        ? { kind: "prompt", message: error.message }
        : { kind: "transient", message: messageOf(error) };
    return { ...state, busy: false, banner };
}
/** Replaying stored history restores solved state and the latest outcome
 * after a page reload. */
export function historyRestored(state, entries) {
    const ordered = [...entries].sort((a, b) => a.submission_index - b.submission_index);
    const solved = state.solved || ordered.some((e) => e.outcome.passed_all);
    return { ...state, history: ordered, solved };
}
function messageOf(error) {
    if (error instanceof Error)
        return error.message;
    return String(error);
}
