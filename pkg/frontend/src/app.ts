/**
 * App shell: binds the pure state/render layers to the DOM and the API.
 *
 * One submission at a time: the busy flag is flipped before the request
 * goes out and every entry point re-checks the gating invariant, so a
 * double-click or Enter mash cannot start a second request.
 */

import { ApiClient } from "./api.js";
import {
  canSubmit,
  draftChanged,
  historyRestored,
  initialState,
  problemLoaded,
  submitFailed,
  submitStarted,
  submitSucceeded,
  type ProblemViewState,
} from "./state.js";
import { renderProblem } from "./render.js";

export class App {
  private state: ProblemViewState = initialState();
  private courseId = "";

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
  ) {}

  async start(): Promise<void> {
    const [courseId, problemId] = await this.resolveLocation();
    await this.loadProblem(courseId, problemId);
  }

  private async resolveLocation(): Promise<[string, string]> {
    const fragment = window.location.hash.replace(/^#\/?/, "");
    const [courseId, problemId] = fragment.split("/");
    if (courseId && problemId) return [courseId, problemId];
    const courses = await this.api.listCourses();
    if (courses.length === 0 || courses[0].problem_ids.length === 0) {
      throw new Error("no courses are configured on this server");
    }
    return [courses[0].id, courses[0].problem_ids[0]];
  }

  async loadProblem(courseId: string, problemId: string): Promise<void> {
    this.courseId = courseId;
    window.location.hash = `#/${courseId}/${problemId}`;
    this.state = initialState();
    this.paint();

    const problem = await this.api.getProblem(courseId, problemId);
    this.state = problemLoaded(this.state, problem);
    this.paint();

    // restoring history keeps solved state across reloads
    const history = await this.api.history(courseId, problemId);
    this.state = historyRestored(this.state, history);
    this.paint();
  }

  private async submit(): Promise<void> {
    if (!canSubmit(this.state) || !this.state.problem) return;
    const problem = this.state.problem;
    const draft = this.state.draftText;
    this.state = submitStarted(this.state);
    this.paint();
    try {
      const response = await this.api.submit(this.courseId, problem.id, draft);
      this.state = submitSucceeded(this.state, response);
      const history = await this.api.history(this.courseId, problem.id);
      this.state = historyRestored(this.state, history);
    } catch (error) {
      this.state = submitFailed(this.state, error);
    }
    this.paint();
  }

  private paint(): void {
    this.root.innerHTML = renderProblem(this.state);
    this.bind();
  }

  private bind(): void {
    const draft = this.root.querySelector<HTMLTextAreaElement>("#draft");
    draft?.addEventListener("input", () => {
      this.state = draftChanged(this.state, draft.value);
      const button = this.root.querySelector<HTMLButtonElement>("#submit");
      if (button) button.disabled = !canSubmit(this.state);
    });
    draft?.addEventListener("keydown", (event) => {
      if (event.key === "Enter" && (event.ctrlKey || event.metaKey)) {
        event.preventDefault();
        void this.submit();
      }
    });
    this.root
      .querySelector("#submit")
      ?.addEventListener("click", () => void this.submit());
    this.root.querySelector("#retry")?.addEventListener("click", () => void this.submit());

    // a failed asset fetch leaves a retryable placeholder, not a broken image
    this.root.querySelectorAll<HTMLImageElement>("img.problem-visual").forEach((img) => {
      img.addEventListener("error", () => {
        const placeholder = document.createElement("button");
        placeholder.className = "asset-retry";
        placeholder.textContent = "Visual failed to load. Retry";
        placeholder.addEventListener("click", () => {
          img.src = `${img.src.split("?")[0]}?retry=${Date.now()}`;
          placeholder.replaceWith(img);
        });
        img.replaceWith(placeholder);
      });
    });

    const problem = this.state.problem;
    if (!problem) return;
    if (problem.prev_problem_id) {
      this.root
        .querySelector("#nav-prev")
        ?.addEventListener("click", () =>
          void this.loadProblem(this.courseId, problem.prev_problem_id as string),
        );
    }
    if (problem.next_problem_id) {
      this.root
        .querySelector("#nav-next")
        ?.addEventListener("click", () =>
          void this.loadProblem(this.courseId, problem.next_problem_id as string),
        );
    }
  }
}
