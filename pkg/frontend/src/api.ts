// ============================================================
// Typed fetch wrappers over the gateway HTTP API.
//
// The UI performs no game computation of its own: every number it
// displays comes back through one of these calls.
// ============================================================

import type {
  ApiErrorShape,
  ChatResponse,
  DesignCheckResponse,
  HintResponse,
  MazeDoc,
  SessionResponse,
  SolveHighResponse,
  SolveLowResponse,
  TraceResponse,
} from "./types.js";

let API_BASE = "";

/** Point the client at a gateway instance (e.g. "http://127.0.0.1:8000"). */
export function setApiBase(base: string): void {
  API_BASE = base.replace(/\/$/, "");
}

export function getApiBase(): string {
  return API_BASE;
}

/** Error carrying the gateway's ApiError body {status, code, message, detail}. */
export class ApiRequestError extends Error {
  readonly status: number;
  readonly code: string;
  readonly detail: unknown;

  constructor(body: ApiErrorShape) {
    super(body.message);
    this.name = "ApiRequestError";
    this.status = body.status;
    this.code = body.code;
    this.detail = body.detail;
  }
}

async function request(path: string, init?: RequestInit): Promise<Response> {
  const response = await fetch(`${API_BASE}${path}`, init);
  if (!response.ok) {
    let body: ApiErrorShape;
    try {
      body = (await response.json()) as ApiErrorShape;
    } catch {
      body = {
        status: response.status,
        code: "UNKNOWN",
        message: response.statusText,
        detail: null,
      };
    }
    throw new ApiRequestError(body);
  }
  return response;
}

async function requestJson<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await request(path, init);
  return (await response.json()) as T;
}

// ------------------------------------------------------------
// Mazes
// ------------------------------------------------------------

/** Upload a maze document; resolves to the server's canonical echo. */
export async function putMaze(mazeId: string, doc: MazeDoc): Promise<MazeDoc> {
  const response = await request(`/mazes/${mazeId}`, {
    method: "PUT",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(doc),
  });
  return (await response.json()) as MazeDoc;
}

export async function getMaze(mazeId: string): Promise<MazeDoc> {
  return requestJson<MazeDoc>(`/mazes/${mazeId}`);
}

export async function validateMaze(mazeId: string): Promise<{ valid: boolean }> {
  return requestJson<{ valid: boolean }>(`/mazes/${mazeId}/validate`, {
    method: "POST",
  });
}

export async function designCheck(mazeId: string): Promise<DesignCheckResponse> {
  return requestJson<DesignCheckResponse>(`/mazes/${mazeId}/design-check`, {
    method: "POST",
  });
}

export async function solveLow(mazeId: string): Promise<SolveLowResponse> {
  return requestJson<SolveLowResponse>(`/mazes/${mazeId}/solve?mode=low`, {
    method: "POST",
  });
}

export async function solveHigh(mazeId: string): Promise<SolveHighResponse> {
  return requestJson<SolveHighResponse>(`/mazes/${mazeId}/solve?mode=high`, {
    method: "POST",
  });
}

/** Run program text against a stored maze; returns the full trace. */
export async function executeProgram(
  mazeId: string,
  program: string,
): Promise<TraceResponse> {
  return requestJson<TraceResponse>(`/mazes/${mazeId}/execute`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ program }),
  });
}

// ------------------------------------------------------------
// Sessions
// ------------------------------------------------------------

export async function createSession(mazeId: string): Promise<SessionResponse> {
  return requestJson<SessionResponse>(`/sessions`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ maze_id: mazeId }),
  });
}

export async function requestHint(sessionId: string): Promise<HintResponse> {
  return requestJson<HintResponse>(`/sessions/${sessionId}/hint`, {
    method: "POST",
  });
}

export async function sendChat(
  sessionId: string,
  text: string,
): Promise<ChatResponse> {
  return requestJson<ChatResponse>(`/sessions/${sessionId}/chat`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ text }),
  });
}
