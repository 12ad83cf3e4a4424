/** Payload shapes of the promptbench HTTP API. */

export interface ScaffoldInfo {
  kind: "program" | "function";
  prefix: string;
}

export interface ProblemPayload {
  id: string;
  course_id: string;
  title: string;
  scaffold: ScaffoldInfo;
  exercise_language: string;
  assets: string[];
  prev_problem_id: string | null;
  next_problem_id: string | null;
  solved: boolean;
}

export interface CourseListing {
  id: string;
  title: string;
  problem_ids: string[];
}

export interface FirstFailure {
  test_index: number;
  stdin_or_call: string;
  expected: string;
  actual: string;
}

export interface SubmitResponse {
  submission_id: string;
  submission_index: number;
  generated_code: string;
  passed_all: boolean;
  first_failure: FirstFailure | null;
  next_problem_id: string | null;
}

export interface HistoryVerdict {
  test_index: number;
  passed: boolean;
  actual: string;
  expected: string;
  outcome_class: string;
}

export interface HistoryEntry {
  submission_id: string;
  submission_index: number;
  student_text: string;
  extracted_source: string;
  rejected_generations: number;
  responses: { raw_text: string; model_id: string; variant_index: number; latency_ms: number }[];
  outcome: {
    passed_all: boolean;
    first_failure: number | null;
    verdicts: HistoryVerdict[];
  };
  created_at: number;
}
