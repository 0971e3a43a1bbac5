// Typed client for the tutor service. Every rendering decision downstream
// uses the payloads verbatim: finals, traces, grades and gate states all
// come from the service, never from the browser.

export interface BothScripts {
  iast: string;
  deva: string;
}

export interface ModuleSummaryEntry {
  id: string;
  title: string;
  lambda_range: [number, number] | null;
  rules: number;
  unlock_threshold: number;
}

export interface LessonRule {
  lambda: number;
  ref: string;
  text_iast: string;
  text_deva: string;
  gloss: string;
  optional: boolean;
  scope: string;
  category: string;
}

export interface LessonItemProse {
  prose: string;
}

export type LessonItem = LessonRule | LessonItemProse;

export interface WorkedExample {
  left: BothScripts;
  right: BothScripts;
  hints: string[];
  suppress: string[];
  finals: BothScripts[];
  lambdas: number[][];
  carried_forward: boolean;
}

export interface ModuleDetail {
  id: string;
  title: string;
  lambda_range: [number, number] | null;
  unlock_threshold: number;
  lesson_items: LessonItem[];
  examples: WorkedExample[];
}

export interface TraceStep {
  lambda: number;
  ref: string;
  rule: BothScripts;
  gloss: string;
  before: BothScripts;
  after: BothScripts;
  optional: boolean;
}

export interface JoinResult {
  final: BothScripts;
  trace: TraceStep[];
  explain: string[];
}

export interface QuizQuestion {
  index: number;
  kind: string;
  prompt: string;
  choices: string[];
  rubric: string;
  module: string;
}

export interface QuizStart {
  session: string;
  module: string;
  seed: number;
  questions: QuizQuestion[];
}

export interface AnswerResult {
  index: number;
  score: number;
  feedback: string;
  answer_key: string[];
  answered: number;
  total: number;
  quiz_score?: number;
  progress?: ProgressSummary;
}

export interface ProgressRow {
  module: string;
  title: string;
  best: number;
  attempts: number;
  completedAt: number | null;
  state: "locked" | "available" | "completed";
}

export interface ProgressSummary {
  user: string;
  modules: ProgressRow[];
  finalExam: number | null;
  threshold: number;
}

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const res = await fetch(path, {
    headers: { "content-type": "application/json" },
    ...init,
  });
  const body = await res.json().catch(() => ({}));
  if (!res.ok) {
    throw new ApiError(res.status, (body as any).detail ?? res.statusText);
  }
  return body as T;
}

export const api = {
  modules: () => request<{ modules: ModuleSummaryEntry[] }>("/api/modules"),
  module: (id: string) => request<ModuleDetail>(`/api/modules/${id}`),
  rule: (selector: string | number) => request<any>(`/api/rules/${selector}`),
  join: (left: string, right: string, hints: string[] = [], suppress: string[] = []) =>
    request<{ results: JoinResult[] }>("/api/join", {
      method: "POST",
      body: JSON.stringify({ left, right, hints, suppress }),
    }),
  startQuiz: (moduleId: string, user: string, seed?: number) =>
    request<QuizStart>(`/api/quiz/${moduleId}/start`, {
      method: "POST",
      body: JSON.stringify(seed === undefined ? { user } : { user, seed }),
    }),
  answer: (session: string, index: number, answer: string) =>
    request<AnswerResult>(`/api/quiz/${session}/answer`, {
      method: "POST",
      body: JSON.stringify({ index, answer }),
    }),
  progress: (user: string) => request<ProgressSummary>(`/api/progress/${user}`),
};
