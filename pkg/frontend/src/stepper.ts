// Derivation stepper view-model: an ordered walk over the applied rules of
// one result. Steps always display in ascending ordinal order and the
// cursor stays in bounds.

import { TraceStep } from "./api.js";

export class TraceStepper {
  readonly steps: TraceStep[];
  private cursor_ = 0;

  constructor(steps: TraceStep[]) {
    const sorted = [...steps].sort((a, b) => a.lambda - b.lambda);
    for (let i = 0; i < steps.length; i++) {
      if (steps[i].lambda !== sorted[i].lambda) {
        throw new Error("trace is not in ascending ordinal order");
      }
    }
    this.steps = steps;
  }

  get cursor(): number {
    return this.cursor_;
  }

  get length(): number {
    return this.steps.length;
  }

  current(): TraceStep | null {
    return this.steps.length ? this.steps[this.cursor_] : null;
  }

  next(): TraceStep | null {
    if (this.cursor_ < this.steps.length - 1) {
      this.cursor_ += 1;
    }
    return this.current();
  }

  prev(): TraceStep | null {
    if (this.cursor_ > 0) {
      this.cursor_ -= 1;
    }
    return this.current();
  }

  atStart(): boolean {
    return this.cursor_ === 0;
  }

  atEnd(): boolean {
    return this.steps.length === 0 || this.cursor_ === this.steps.length - 1;
  }

  lambdas(): number[] {
    return this.steps.map((s) => s.lambda);
  }
}
