/**
 * Typed client for the promptbench API.
 *
 * The fetch function and token storage are injectable so tests can run
 * without a browser.  The anonymous session token is created lazily on
 * first use and kept in storage, so a page reload keeps the same
 * identity and can restore attempt history.
 */

import type {
  CourseListing,
  HistoryEntry,
  ProblemPayload,
  SubmitResponse,
} from "./types.js";

export const SESSION_STORAGE_KEY = "promptbench-session";

export interface KeyValueStore {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** Error carrying the server's {error, message} body and HTTP status. */
export class ApiRequestError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }

  /** Caller faults are fixable by editing the prompt; the rest are transient. */
  get isCallerFault(): boolean {
    return this.status >= 400 && this.status < 500;
  }
}

export class ApiClient {
  private token: string | null = null;

  constructor(
    private readonly fetchFn: FetchLike,
    private readonly storage: KeyValueStore,
    private readonly baseUrl = "",
  ) {}

  async sessionToken(): Promise<string> {
    if (this.token) return this.token;
    const stored = this.storage.getItem(SESSION_STORAGE_KEY);
    if (stored) {
      this.token = stored;
      return stored;
    }
    const body = await this.request<{ session_token: string }>("POST", "/api/sessions");
    this.token = body.session_token;
    this.storage.setItem(SESSION_STORAGE_KEY, this.token);
    return this.token;
  }

  async listCourses(): Promise<CourseListing[]> {
    return this.request<CourseListing[]>("GET", "/api/courses");
  }

  async getProblem(courseId: string, problemId: string): Promise<ProblemPayload> {
    const token = await this.sessionToken();
    return this.request<ProblemPayload>(
      "GET",
      `/api/problems/${courseId}/${problemId}?session=${encodeURIComponent(token)}`,
    );
  }

  async submit(
    courseId: string,
    problemId: string,
    studentText: string,
  ): Promise<SubmitResponse> {
    const token = await this.sessionToken();
    return this.request<SubmitResponse>(
      "POST",
      `/api/problems/${courseId}/${problemId}/submissions`,
      { session_token: token, student_text: studentText },
    );
  }

  async history(courseId: string, problemId: string): Promise<HistoryEntry[]> {
    const token = await this.sessionToken();
    return this.request<HistoryEntry[]>(
      "GET",
      `/api/problems/${courseId}/${problemId}/submissions?session=${encodeURIComponent(token)}`,
    );
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, init);
    } catch (err) {
      throw new ApiRequestError(0, "network", `network failure: ${String(err)}`);
    }
    if (!response.ok) {
      let code = "error";
      let message = `HTTP ${response.status}`;
      try {
        const parsed = (await response.json()) as { error?: string; message?: string };
        code = parsed.error ?? code;
        message = parsed.message ?? message;
      } catch {
        // non-JSON error body; keep the fallback message
      }
      throw new ApiRequestError(response.status, code, message);
    }
    return (await response.json()) as T;
  }
}
