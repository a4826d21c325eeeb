// ============================================================
// Hint panel state machine.
//
// Maintains the hint transcript for one tutoring session. Each reply
// carries the stage badge (1/2/3) issued by the server; a 409
// STALE_SESSION response flips the panel into a "maze changed — start
// a new session" prompt instead of appending a hint.
// ============================================================

import { ApiRequestError, createSession, requestHint } from "./api.js";
import type { HintResponse } from "./types.js";

export interface HintEntry {
  /** Stage badge shown next to the reply: 1, 2, or 3. */
  badge: number;
  kind: HintResponse["kind"];
  text: string;
}

export class HintPanel {
  readonly mazeId: string;
  sessionId: string | null = null;
  transcript: HintEntry[] = [];
  /** True after a STALE_SESSION rejection until a new session starts. */
  stalePrompt = false;
  lastError: ApiRequestError | null = null;
  private inFlight = false;

  constructor(mazeId: string) {
    this.mazeId = mazeId;
  }

  /** Open a session for the maze's current snapshot, clearing the panel. */
  async startSession(): Promise<void> {
    const session = await createSession(this.mazeId);
    this.sessionId = session.session_id;
    this.transcript = [];
    this.stalePrompt = false;
    this.lastError = null;
  }

  /**
   * "Ask for a hint" button. Appends the next staged reply, or raises
   * the stale prompt when the maze has been edited since the session
   * opened. Returns the new entry, or null when no hint was issued.
   */
  async askHint(): Promise<HintEntry | null> {
    if (this.inFlight || this.sessionId === null || this.stalePrompt) {
      return null;
    }
    this.inFlight = true;
    try {
      const hint = await requestHint(this.sessionId);
      const entry: HintEntry = {
        badge: hint.stage,
        kind: hint.kind,
        text: hint.rendered_text,
      };
      this.transcript.push(entry);
      this.lastError = null;
      return entry;
    } catch (error) {
      if (error instanceof ApiRequestError) {
        if (error.code === "STALE_SESSION") {
          this.stalePrompt = true;
        }
        this.lastError = error;
        return null;
      }
      throw error;
    } finally {
      this.inFlight = false;
    }
  }

  /** Badges in the order the server issued them. */
  badges(): number[] {
    return this.transcript.map((entry) => entry.badge);
  }
}
