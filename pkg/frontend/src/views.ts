// Pure render functions: state in, HTML string out. Event wiring lives in
// main.ts; keeping these pure keeps them testable without a browser.

import {
  BothScripts,
  JoinResult,
  LessonItem,
  LessonRule,
  ModuleDetail,
  ProgressRow,
  ProgressSummary,
  QuizQuestion,
  TraceStep,
  WorkedExample,
} from "./api.js";
import { TraceStepper } from "./stepper.js";

export type Script = "iast" | "deva" | "both";

export function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function scripted(text: BothScripts, script: Script): string {
  if (script === "iast") return esc(text.iast);
  if (script === "deva") return esc(text.deva || text.iast);
  return `${esc(text.iast)} <span class="deva">${esc(text.deva)}</span>`;
}

// ---------------------------------------------------------------------------
// module map: a pure mirror of the progress payload — the browser never
// decides what is locked
// ---------------------------------------------------------------------------
export interface ModuleMapEntry {
  id: string;
  title: string;
  state: ProgressRow["state"];
  best: number;
}

export function moduleMapModel(progress: ProgressSummary): ModuleMapEntry[] {
  return progress.modules.map((row) => ({
    id: row.module,
    title: row.title,
    state: row.state,
    best: row.best,
  }));
}

export function renderModuleMap(progress: ProgressSummary): string {
  const cells = moduleMapModel(progress)
    .map(
      (m) => `
      <button class="module ${m.state}" data-module="${m.id}"
              ${m.state === "locked" ? "" : ""}>
        <span class="mid">${esc(m.id)}</span>
        <span class="mtitle">${esc(m.title)}</span>
        <span class="mscore">${m.state === "locked" ? "🔒" : (m.best * 100).toFixed(0) + "%"}</span>
      </button>`
    )
    .join("");
  const fin =
    progress.finalExam === null
      ? `<button class="module final" data-module="FINAL">
           <span class="mid">FINAL</span><span class="mtitle">Comprehensive exam</span>
           <span class="mscore">—</span></button>`
      : `<button class="module final completed" data-module="FINAL">
           <span class="mid">FINAL</span><span class="mtitle">Comprehensive exam</span>
           <span class="mscore">${(progress.finalExam * 100).toFixed(0)}%</span></button>`;
  return `<section class="module-map"><h2>Course map — ${esc(progress.user)}</h2>
    <div class="grid">${cells}${fin}</div>
    <p class="hint">Modules unlock when the previous one reaches
      ${(progress.threshold * 100).toFixed(0)}%.</p></section>`;
}

// ---------------------------------------------------------------------------
// lesson view
// ---------------------------------------------------------------------------
export function renderGateScreen(moduleId: string, progress: ProgressSummary): string {
  const idx = progress.modules.findIndex((m) => m.module === moduleId);
  const prev = idx > 0 ? progress.modules[idx - 1] : null;
  const need = prev
    ? `Finish <strong>${esc(prev.module)} — ${esc(prev.title)}</strong> with at least
       ${(progress.threshold * 100).toFixed(0)}% first.`
    : "";
  return `<section class="gate"><h2>${esc(moduleId)} is locked</h2><p>${need}</p>
    <button data-nav="map">Back to the course map</button></section>`;
}

function isRule(item: LessonItem): item is LessonRule {
  return (item as LessonRule).ref !== undefined;
}

export function originModule(
  ex: WorkedExample,
  ranges: Map<string, [number, number]>
): string | null {
  const flat = ex.lambdas.flat();
  if (!flat.length) return null;
  const first = Math.min(...flat);
  for (const [id, [lo, hi]] of ranges) {
    if (first >= lo && first <= hi) return id;
  }
  return null;
}

export function renderLesson(
  mod: ModuleDetail,
  script: Script,
  ranges: Map<string, [number, number]>
): string {
  const items = mod.lesson_items
    .map((item) => {
      if (isRule(item)) {
        const text: BothScripts = { iast: item.text_iast, deva: item.text_deva };
        return `<li class="rule">
          <span class="lam">λ=${item.lambda}</span>
          <span class="ref">${esc(item.ref)}</span>
          <span class="sutra">${scripted(text, script)}</span>
          <span class="flags">${item.optional ? "optional" : "mandatory"}, ${esc(item.scope)}</span>
          <p class="gloss">${esc(item.gloss)}</p></li>`;
      }
      return `<li class="prose">${esc(item.prose)}</li>`;
    })
    .join("");
  const examples = mod.examples
    .map((ex) => {
      const origin = ex.carried_forward ? originModule(ex, ranges) : null;
      const backlink = origin && origin !== mod.id
        ? ` <a href="#" class="origin" data-module="${origin}">carried forward from ${origin}</a>`
        : "";
      const opts = [
        ex.hints.length ? `hints: ${ex.hints.join(", ")}` : "",
        ex.suppress.length ? `suppressed: ${ex.suppress.join(", ")}` : "",
      ].filter(Boolean).join("; ");
      return `<li class="example${ex.carried_forward ? " carried" : ""}">
        ${scripted(ex.left, script)} + ${scripted(ex.right, script)}
        ${opts ? `<span class="opts">(${esc(opts)})</span>` : ""}
        → ${ex.finals.map((f) => scripted(f, script)).join(" · ")}${backlink}</li>`;
    })
    .join("");
  return `<section class="lesson"><h2>${esc(mod.id)} — ${esc(mod.title)}</h2>
    <ol class="items">${items}</ol>
    ${examples ? `<h3>Worked examples</h3><ul class="examples">${examples}</ul>` : ""}
    <p><button data-quiz="${mod.id}">Take the ${esc(mod.id)} test</button>
       <button data-nav="map">Back</button></p></section>`;
}

// ---------------------------------------------------------------------------
// quiz
// ---------------------------------------------------------------------------
export function renderQuestion(q: QuizQuestion, total: number): string {
  const choices = q.choices.length
    ? `<ol class="choices">${q.choices
        .map((c, i) => `<li><button class="choice" data-choice="${esc(c)}">${esc(c)}</button></li>`)
        .join("")}</ol>`
    : `<input id="answer" autocomplete="off" autocapitalize="off" spellcheck="false">
       <button id="submit-answer">Submit</button>`;
  return `<div class="question">
    <p class="qmeta">${q.index + 1} / ${total} · ${esc(q.kind)}</p>
    <p class="prompt">${esc(q.prompt)}</p>
    ${choices}
    <p class="rubric">${esc(q.rubric)}</p></div>`;
}

export function renderFeedback(score: number, feedback: string): string {
  const cls = score >= 1 ? "good" : score > 0 ? "partial" : "bad";
  return `<div class="feedback ${cls}">
    <p class="score">score: ${(score * 100).toFixed(0)}%</p>
    <pre>${esc(feedback)}</pre>
    <button id="next-question">Continue</button></div>`;
}

export function renderQuizDone(score: number, moduleId: string): string {
  return `<div class="quiz-done"><h3>${esc(moduleId)} finished</h3>
    <p>Test score: ${(score * 100).toFixed(0)}%</p>
    <button data-nav="map">Back to the course map</button></div>`;
}

// ---------------------------------------------------------------------------
// sandbox + stepper
// ---------------------------------------------------------------------------
export function validateSandbox(left: string, right: string): string | null {
  if (!left.trim()) return "Enter at least the first word.";
  if (/[+]/.test(left) || /[+]/.test(right)) return "Enter plain words without '+'.";
  return null;
}

export function renderSandbox(): string {
  return `<section class="sandbox"><h2>Sandbox: join two words</h2>
    <div class="joinform">
      <input id="left" placeholder="first word (IAST)" autocapitalize="off">
      <span>+</span>
      <input id="right" placeholder="second word" autocapitalize="off">
      <label><input type="checkbox" id="opt-dual"> dual-number</label>
      <label><input type="checkbox" id="opt-nodoubling" checked> exclude doubling</label>
      <button id="do-join">Join</button>
    </div>
    <p id="sandbox-error" class="error" hidden></p>
    <div id="join-results"></div>
    <div id="stepper"></div></section>`;
}

export function renderJoinResults(results: JoinResult[], script: Script): string {
  if (!results.length) return "<p>No results.</p>";
  return `<ul class="finals">${results
    .map(
      (r, i) => `<li><button class="final" data-result="${i}">
        ${scripted(r.final, script)}</button>
        <span class="steps">${r.trace.length} step${r.trace.length === 1 ? "" : "s"}</span></li>`
    )
    .join("")}</ul>`;
}

export function renderStepper(
  stepper: TraceStepper,
  final: BothScripts,
  script: Script
): string {
  if (!stepper.length) {
    return `<div class="trace"><p>${scripted(final, script)} — unchanged
      (no rule applied).</p></div>`;
  }
  const s = stepper.current() as TraceStep;
  return `<div class="trace">
    <p class="pos">step ${stepper.cursor + 1} of ${stepper.length}
       — toward ${scripted(final, script)}</p>
    <p class="rule"><span class="lam">λ=${s.lambda}</span>
      <span class="ref">${esc(s.ref)}</span>
      <span class="sutra">${scripted(s.rule, script)}</span>
      ${s.optional ? '<span class="opt">optional</span>' : ""}</p>
    <p class="gloss">${esc(s.gloss)}</p>
    <p class="delta">${scripted(s.before, script)} → ${scripted(s.after, script)}</p>
    <p class="nav">
      <button id="step-prev" ${stepper.atStart() ? "disabled" : ""}>◀ previous</button>
      <button id="step-next" ${stepper.atEnd() ? "disabled" : ""}>next ▶</button>
    </p></div>`;
}
