// ============================================================
// Trace playback.
//
// Steps an avatar through the server-produced trace. The client never
// recomputes positions, health, or outcomes: it only indexes into the
// state list the gateway returned.
// ============================================================

import type { TraceResponse, TraceState } from "./types.js";

export class TracePlayback {
  readonly trace: TraceResponse;
  private index = 0;

  constructor(trace: TraceResponse) {
    this.trace = trace;
  }

  get stepCount(): number {
    return this.trace.actions.length;
  }

  /** Zero-based index of the currently displayed state. */
  get position(): number {
    return this.index;
  }

  get atEnd(): boolean {
    return this.index >= this.trace.states.length - 1;
  }

  current(): TraceState {
    const state = this.trace.states[this.index];
    if (state === undefined) {
      throw new Error(`no trace state at index ${this.index}`);
    }
    return state;
  }

  /** Action that produced the current state, if any. */
  lastAction(): string | null {
    return this.index === 0 ? null : this.trace.actions[this.index - 1] ?? null;
  }

  stepForward(): TraceState {
    if (!this.atEnd) {
      this.index += 1;
    }
    return this.current();
  }

  stepBack(): TraceState {
    if (this.index > 0) {
      this.index -= 1;
    }
    return this.current();
  }

  rewind(): TraceState {
    this.index = 0;
    return this.current();
  }

  /** Advance to the final state, returning every state visited. */
  playToEnd(): TraceState[] {
    const visited: TraceState[] = [this.current()];
    while (!this.atEnd) {
      visited.push(this.stepForward());
    }
    return visited;
  }

  /** Outcome banner text, shown once playback reaches the final state. */
  banner(): string | null {
    if (!this.atEnd) {
      return null;
    }
    return this.trace.outcome.success
      ? "Success"
      : `Failure (${this.trace.outcome.reason ?? "unknown"})`;
  }
}
