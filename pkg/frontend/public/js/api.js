/**
 * Typed client for the promptbench API.
 *
 * The fetch function and token storage are injectable so tests can run
 * without a browser.  The anonymous session token is created lazily on
 * first use and kept in storage, so a page reload keeps the same
 * identity and can restore attempt history.
 */
export const SESSION_STORAGE_KEY = "promptbench-session";
/** Error carrying the server's {error, message} body and HTTP status. */
export class ApiRequestError extends Error {
    constructor(status, code, message) {
        super(message);
        this.status = status;
        this.code = code;
    }
    /** Caller faults are fixable by editing the prompt; the rest are transient. */
    get isCallerFault() {
        return this.status >= 400 && this.status < 500;
    }
}
export class ApiClient {
    constructor(fetchFn, storage, baseUrl = "") {
        this.fetchFn = fetchFn;
        this.storage = storage;
        this.baseUrl = baseUrl;
        this.token = null;
    }
    async sessionToken() {
        if (this.token)
            return this.token;
        const stored = this.storage.getItem(SESSION_STORAGE_KEY);
        if (stored) {
            this.token = stored;
            return stored;
        }
        const body = await this.request("POST", "/api/sessions");
        this.token = body.session_token;
        this.storage.setItem(SESSION_STORAGE_KEY, this.token);
        return this.token;
    }
    async listCourses() {
        return this.request("GET", "/api/courses");
    }
    async getProblem(courseId, problemId) {
        const token = await this.sessionToken();
        return this.request("GET", `/api/problems/${courseId}/${problemId}?session=${encodeURIComponent(token)}`);
    }
    async submit(courseId, problemId, studentText) {
        const token = await this.sessionToken();
        return this.request("POST", `/api/problems/${courseId}/${problemId}/submissions`, { session_token: token, student_text: studentText });
    }
    async history(courseId, problemId) {
        const token = await this.sessionToken();
        return this.request("GET", `/api/problems/${courseId}/${problemId}/submissions?session=${encodeURIComponent(token)}`);
    }
    async request(method, path, body) {
        const init = { method };
        if (body !== undefined) {
            init.headers = { "Content-Type": "application/json" };
            init.body = JSON.stringify(body);
        }
        let response;
        try {
            response = await this.fetchFn(this.baseUrl + path, init);
        }
        catch (err) {
            throw new ApiRequestError(0, "network", `network failure: ${String(err)}`);
        }
        if (!response.ok) {
            let code = "error";
            let message = `HTTP ${response.status}`;
            try {
                const parsed = (await response.json());
                code = parsed.error ?? code;
                message = parsed.message ?? message;
            }
            catch {
                // non-JSON error body; keep the fallback message
            }
            throw new ApiRequestError(response.status, code, message);
        }
        return (await response.json());
    }
}
