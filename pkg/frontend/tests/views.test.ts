import { describe, expect, it } from "vitest";

import { TraceStepper } from "../src/stepper.js";
import {
  renderGateScreen,
  renderJoinResults,
  renderLesson,
  renderModuleMap,
  renderStepper,
  validateSandbox,
} from "../src/views.js";
import { fixture } from "./helpers.js";

const ranges = new Map<string, [number, number]>(
  fixture("modules").modules
    .filter((m: any) => m.lambda_range)
    .map((m: any) => [m.id, m.lambda_range])
);

describe("sandbox validation", () => {
  it("rejects empty input before any request is made", () => {
    expect(validateSandbox("", "iva")).toBeTruthy();
    expect(validateSandbox("  ", "")).toBeTruthy();
    expect(validateSandbox("ramā", "iva")).toBeNull();
  });

  it("rejects junction characters", () => {
    expect(validateSandbox("a+b", "c")).toBeTruthy();
  });
});

describe("stepper bounds", () => {
  const trace = fixture("join_mrt_mayam").results[1].trace;

  it("clamps the cursor at both ends", () => {
    const s = new TraceStepper(trace);
    expect(s.prev()!.lambda).toBe(42);   // already at the start
    s.next();
    expect(s.next()!.lambda).toBe(86);   // clamped at the end
    expect(s.cursor).toBe(1);
  });

  it("rejects out-of-order traces", () => {
    const bad = [trace[1], trace[0]];
    expect(() => new TraceStepper(bad)).toThrow();
  });

  it("tolerates the empty trace", () => {
    const s = new TraceStepper([]);
    expect(s.current()).toBeNull();
    expect(s.atEnd()).toBe(true);
  });
});

describe("rendering", () => {
  it("module map marks locked modules and shows scores", () => {
    const html = renderModuleMap(fixture("progress_fresh"));
    expect(html).toContain('data-module="P1"');
    expect(html).toContain("locked");
    expect((html.match(/data-module=/g) ?? []).length).toBe(17); // 16 + FINAL
  });

  it("gate screen names the prerequisite module", () => {
    const html = renderGateScreen("M7", fixture("progress_fresh"));
    expect(html).toContain("M7 is locked");
    expect(html).toContain("M6");
  });

  it("lesson shows Devanagari sutra text and carried-forward backlinks", () => {
    const html = renderLesson(fixture("module_M7"), "both", ranges);
    expect(html).toContain("deva");
    expect(html).toContain("carried forward from");
    expect(html).toContain("8.3.19");
  });

  it("join results render every final and the stepper walks them", () => {
    const results = fixture("join_mrt_mayam").results;
    const listHtml = renderJoinResults(results, "iast");
    expect(listHtml).toContain("mṛn mayam");
    expect(listHtml).toContain("mṛd mayam");
    const stepper = new TraceStepper(results[1].trace);
    const html = renderStepper(stepper, results[1].final, "iast");
    expect(html).toContain("λ=42");
    expect(html).toContain("8.2.39");
    stepper.next();
    const html2 = renderStepper(stepper, results[1].final, "iast");
    expect(html2).toContain("λ=86");
    expect(html2).toContain("8.4.45");
  });
});
