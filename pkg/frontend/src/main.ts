// Application wiring: routes between the course map, lessons, quizzes and
// the sandbox; all data comes from the service client.

import { api, ApiError, JoinResult, ProgressSummary, QuizStart } from "./api.js";
import { TraceStepper } from "./stepper.js";
import {
  renderFeedback,
  renderGateScreen,
  renderJoinResults,
  renderLesson,
  renderModuleMap,
  renderQuestion,
  renderQuizDone,
  renderSandbox,
  renderStepper,
  Script,
  validateSandbox,
} from "./views.js";

const root = document.getElementById("app") as HTMLElement;
const state = {
  user: localStorage.getItem("sandhitutor.user") ?? "student",
  script: (localStorage.getItem("sandhitutor.script") ?? "both") as Script,
  progress: null as ProgressSummary | null,
  ranges: new Map<string, [number, number]>(),
  results: [] as JoinResult[],
  stepper: null as TraceStepper | null,
  quiz: null as QuizStart | null,
  quizIndex: 0,
  quizAnswered: 0,
};

function setScript(script: Script) {
  state.script = script;
  localStorage.setItem("sandhitutor.script", script);
  document.body.dataset.script = script;
}

async function refreshProgress(): Promise<ProgressSummary> {
  state.progress = await api.progress(state.user);
  return state.progress;
}

async function showMap() {
  const progress = await refreshProgress();
  root.innerHTML = renderModuleMap(progress) + renderSandbox();
  wireSandbox();
  root.querySelectorAll<HTMLButtonElement>("[data-module]").forEach((btn) => {
    btn.addEventListener("click", () => showLesson(btn.dataset.module as string));
  });
}

async function showLesson(moduleId: string) {
  const progress = state.progress ?? (await refreshProgress());
  if (moduleId === "FINAL") {
    return startQuiz("FINAL");
  }
  const row = progress.modules.find((m) => m.module === moduleId);
  if (row && row.state === "locked") {
    root.innerHTML = renderGateScreen(moduleId, progress);
    wireNav();
    return;
  }
  const mod = await api.module(moduleId);
  root.innerHTML = renderLesson(mod, state.script, state.ranges);
  wireNav();
  root.querySelectorAll<HTMLElement>(".origin[data-module]").forEach((a) => {
    a.addEventListener("click", (e) => {
      e.preventDefault();
      showLesson(a.dataset.module as string);
    });
  });
  const quizBtn = root.querySelector<HTMLButtonElement>("[data-quiz]");
  quizBtn?.addEventListener("click", () => startQuiz(moduleId));
}

async function startQuiz(moduleId: string) {
  try {
    state.quiz = await api.startQuiz(moduleId, state.user);
  } catch (err) {
    if (err instanceof ApiError && err.status === 409) {
      const progress = state.progress ?? (await refreshProgress());
      root.innerHTML = renderGateScreen(moduleId, progress);
      wireNav();
      return;
    }
    throw err;
  }
  state.quizIndex = 0;
  state.quizAnswered = 0;
  showQuestion();
}

function showQuestion() {
  const quiz = state.quiz as QuizStart;
  const q = quiz.questions[state.quizIndex];
  root.innerHTML =
    `<section class="quiz"><h2>Test — ${quiz.module}</h2>` +
    renderQuestion(q, quiz.questions.length) +
    `</section>`;
  const submit = (answer: string) => submitAnswer(answer);
  root.querySelectorAll<HTMLButtonElement>(".choice").forEach((btn) =>
    btn.addEventListener("click", () => submit(btn.dataset.choice as string))
  );
  const input = root.querySelector<HTMLInputElement>("#answer");
  const button = root.querySelector<HTMLButtonElement>("#submit-answer");
  button?.addEventListener("click", () => submit(input?.value ?? ""));
  input?.addEventListener("keydown", (e) => {
    if (e.key === "Enter") submit(input.value);
  });
  input?.focus();
}

async function submitAnswer(answer: string) {
  const quiz = state.quiz as QuizStart;
  if (!answer.trim()) return;
  const res = await api.answer(quiz.session, state.quizIndex, answer);
  state.quizAnswered = res.answered;
  const section = root.querySelector(".quiz") as HTMLElement;
  section.insertAdjacentHTML("beforeend", renderFeedback(res.score, res.feedback));
  const next = root.querySelector<HTMLButtonElement>("#next-question");
  next?.addEventListener("click", async () => {
    if (res.quiz_score !== undefined) {
      if (res.progress) state.progress = res.progress;
      root.innerHTML = renderQuizDone(res.quiz_score, quiz.module);
      wireNav();
      return;
    }
    state.quizIndex += 1;
    showQuestion();
  });
}

function wireNav() {
  root.querySelectorAll<HTMLButtonElement>("[data-nav=map]").forEach((btn) =>
    btn.addEventListener("click", () => showMap())
  );
}

function wireSandbox() {
  const leftInput = root.querySelector<HTMLInputElement>("#left");
  const rightInput = root.querySelector<HTMLInputElement>("#right");
  const dual = root.querySelector<HTMLInputElement>("#opt-dual");
  const nodbl = root.querySelector<HTMLInputElement>("#opt-nodoubling");
  const errorBox = root.querySelector<HTMLElement>("#sandbox-error");
  const resultsBox = root.querySelector<HTMLElement>("#join-results");
  const stepperBox = root.querySelector<HTMLElement>("#stepper");
  const joinBtn = root.querySelector<HTMLButtonElement>("#do-join");

  joinBtn?.addEventListener("click", async () => {
    const left = leftInput?.value.trim() ?? "";
    const right = rightInput?.value.trim() ?? "";
    const problem = validateSandbox(left, right);
    if (errorBox) {
      errorBox.hidden = problem === null;
      errorBox.textContent = problem ?? "";
    }
    if (problem) return;   // inline validation: no request leaves the page
    const hints = dual?.checked ? ["dual-number"] : [];
    const suppress = nodbl?.checked ? ["doubling"] : [];
    try {
      const res = await api.join(left, right, hints, suppress);
      state.results = res.results;
      if (resultsBox) {
        resultsBox.innerHTML = renderJoinResults(res.results, state.script);
        resultsBox.querySelectorAll<HTMLButtonElement>("[data-result]").forEach((btn) =>
          btn.addEventListener("click", () =>
            openStepper(parseInt(btn.dataset.result as string, 10)))
        );
      }
      if (stepperBox) stepperBox.innerHTML = "";
    } catch (err) {
      if (errorBox && err instanceof ApiError) {
        errorBox.hidden = false;
        errorBox.textContent = err.message;
      }
    }
  });

  function openStepper(i: number) {
    const result = state.results[i];
    state.stepper = new TraceStepper(result.trace);
    drawStepper(result);
  }

  function drawStepper(result: JoinResult) {
    if (!stepperBox || !state.stepper) return;
    stepperBox.innerHTML = renderStepper(state.stepper, result.final, state.script);
    stepperBox.querySelector("#step-prev")?.addEventListener("click", () => {
      state.stepper?.prev();
      drawStepper(result);
    });
    stepperBox.querySelector("#step-next")?.addEventListener("click", () => {
      state.stepper?.next();
      drawStepper(result);
    });
  }
}

function wireHeader() {
  const userInput = document.getElementById("user") as HTMLInputElement;
  userInput.value = state.user;
  userInput.addEventListener("change", () => {
    state.user = userInput.value.trim() || "student";
    localStorage.setItem("sandhitutor.user", state.user);
    showMap();
  });
  (document.getElementById("script-toggle") as HTMLSelectElement).addEventListener(
    "change",
    (e) => {
      setScript((e.target as HTMLSelectElement).value as Script);
      showMap();
    }
  );
}

async function boot() {
  setScript(state.script);
  wireHeader();
  const mods = await api.modules();
  for (const m of mods.modules) {
    if (m.lambda_range) state.ranges.set(m.id, m.lambda_range);
  }
  await showMap();
}

boot().catch((err) => {
  root.innerHTML = `<p class="error">Cannot reach the tutor service: ${err}</p>`;
});
