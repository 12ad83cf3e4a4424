import { describe, expect, it } from "vitest";

import {
  escapeHtml,
  renderCodePanel,
  renderFirstFailure,
  renderProblem,
  visibleWhitespace,
} from "../src/render.js";
import {
  draftChanged,
  initialState,
  problemLoaded,
  submitStarted,
  submitSucceeded,
} from "../src/state.js";
import type { ProblemPayload, SubmitResponse } from "../src/types.js";

const FIRST_PROBLEM: ProblemPayload = {
  id: "hello",
  course_id: "cs1-week2",
  title: "Greet by name",
  scaffold: { kind: "program", prefix: "Write a Python program that" },
  exercise_language: "python",
  assets: ["/assets/cs1-week2/hello/demo.gif"],
  prev_problem_id: null,
  next_problem_id: "ages",
  solved: false,
};

const FAILING: SubmitResponse = {
  submission_id: "s1",
  submission_index: 1,
  generated_code: "print(sum(nums) / 5)",
  passed_all: false,
  first_failure: {
    test_index: 1,
    stdin_or_call: "8.0 9.5 7.5 6.0 9.0\n",
    expected: "8.17",
    actual: "8.0",
  },
  next_problem_id: null,
};

const PASSING: SubmitResponse = {
  ...FAILING,
  passed_all: true,
  first_failure: null,
  generated_code: "print(round(total / 3, 2))",
};

function loadedState(draft = "") {
  const state = problemLoaded(initialState(), FIRST_PROBLEM);
  return draft ? draftChanged(state, draft) : state;
}

describe("code display is read-only", () => {
  it("renders code in a pre with no editing affordance", () => {
    const html = renderCodePanel("name = input()\nprint('Hello', name)");
    expect(html).toContain("<pre");
    expect(html).not.toContain("<textarea");
    expect(html).not.toContain("contenteditable");
    expect(html).not.toContain("<input");
  });

  it("escapes markup inside generated code", () => {
    const html = renderCodePanel("print('<script>')");
    expect(html).toContain("&lt;script&gt;");
    expect(html).not.toContain("<script>");
  });

  it("full failing view has exactly one form control: the prompt field", () => {
    const state = submitSucceeded(submitStarted(loadedState("averages them")), FAILING);
    const html = renderProblem(state);
    expect(html.match(/<textarea/g)).toHaveLength(1);
    const codeSection = html.slice(html.indexOf('<section class="generated-code"'));
    expect(codeSection).not.toContain("<textarea");
    expect(codeSection).not.toContain("contenteditable");
  });
});

describe("first failing test panel", () => {
  it("shows input, expected and actual with whitespace marks", () => {
    const html = renderFirstFailure(FAILING.first_failure!);
    expect(html).toContain("First failing test (#1)");
    expect(html).toContain("8.0·9.5·7.5·6.0·9.0⏎");
    expect(html).toContain("8.17");
    expect(html).toContain("8.0");
    expect(html).toContain("expected");
    expect(html).toContain("actual");
  });

  it("appears in the failing view", () => {
    const state = submitSucceeded(submitStarted(loadedState("averages them")), FAILING);
    const html = renderProblem(state);
    expect(html).toContain("outcome-fail");
    expect(html).not.toContain("outcome-pass");
  });
});

describe("success view", () => {
  it("shows the success message and emphasizes Next", () => {
    const state = submitSucceeded(submitStarted(loadedState("greets the user")), PASSING);
    const html = renderProblem(state);
    expect(html).toContain("All tests passed");
    expect(html).toContain('id="nav-next" class="emphasized"');
    expect(html).toContain("solved-badge");
  });
});

describe("controls", () => {
  it("disables Back on the first problem", () => {
    const html = renderProblem(loadedState());
    expect(html).toMatch(/id="nav-prev" disabled/);
    expect(html).not.toMatch(/id="nav-next" class="" disabled/);
  });

  it("disables submit for an empty draft and enables it with text", () => {
    expect(renderProblem(loadedState())).toMatch(/id="submit"[^>]*disabled/);
    expect(renderProblem(loadedState("asks for a name"))).not.toMatch(
      /id="submit"[^>]*disabled/,
    );
  });

  it("disables submit and the draft while busy", () => {
    const busy = submitStarted(loadedState("asks for a name"));
    const html = renderProblem(busy);
    expect(html).toMatch(/id="submit"[^>]*disabled/);
    expect(html).toMatch(/<textarea id="draft"[^>]*disabled/);
    expect(html).toContain("Generating");
  });

  it("renders the scaffold prefix outside the editable field", () => {
    const html = renderProblem(loadedState());
    expect(html).toContain(
      '<span class="scaffold-prefix">Write a Python program that</span>',
    );
    expect(html.indexOf("scaffold-prefix")).toBeLessThan(html.indexOf("<textarea"));
  });

  it("shows the visual asset", () => {
    const html = renderProblem(loadedState());
    expect(html).toContain('<img src="/assets/cs1-week2/hello/demo.gif"');
  });
});

describe("helpers", () => {
  it("escapeHtml neutralizes markup", () => {
    expect(escapeHtml('<b a="c">&')).toBe("&lt;b a=&quot;c&quot;&gt;&amp;");
  });

  it("visibleWhitespace marks spaces, tabs and newlines", () => {
    expect(visibleWhitespace("a b\tc\nd")).toBe("a·b⇥c⏎\nd");
  });
});

describe("other generations", () => {
  it("stays hidden for single-variant submissions", () => {
    let state = submitSucceeded(submitStarted(loadedState("x")), PASSING);
    state = {
      ...state,
      history: [
        {
          submission_id: PASSING.submission_id,
          submission_index: 1,
          student_text: "x",
          extracted_source: "code",
          rejected_generations: 0,
          responses: [{ raw_text: "only one", model_id: "m", variant_index: 0, latency_ms: 1 }],
          outcome: { passed_all: true, first_failure: null, verdicts: [] },
          created_at: 1,
        },
      ],
    };
    expect(renderProblem(state)).not.toContain("other-generations");
  });

  it("offers an expandable section when extra generations exist", () => {
    let state = submitSucceeded(submitStarted(loadedState("x")), PASSING);
    state = {
      ...state,
      history: [
        {
          submission_id: PASSING.submission_id,
          submission_index: 1,
          student_text: "x",
          extracted_source: "code",
          rejected_generations: 1,
          responses: [
            { raw_text: "rejected one", model_id: "m", variant_index: 0, latency_ms: 1 },
            { raw_text: "accepted", model_id: "m", variant_index: 0, latency_ms: 1 },
          ],
          outcome: { passed_all: true, first_failure: null, verdicts: [] },
          created_at: 1,
        },
      ],
    };
    const html = renderProblem(state);
    expect(html).toContain("<details class=\"other-generations\"");
    expect(html).toContain("Other generations (1)");
    expect(html).toContain("accepted");
  });
});
