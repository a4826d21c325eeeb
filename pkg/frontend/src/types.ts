// ============================================================
// Shared types mirroring the gateway's JSON wire format.
// ============================================================

export type DirectionCode = "N" | "E" | "S" | "W";

export type MonsterKind = "bat" | "ghost" | "skeleton_archer" | "dragon";

export interface Cell {
  x: number;
  y: number;
}

export interface StartCell extends Cell {
  dir: DirectionCode;
}

export interface MonsterCell extends Cell {
  kind: MonsterKind;
}

export interface MazeConfig {
  initial_health?: number;
  heart_heal?: number;
  damage_overrides?: Partial<Record<MonsterKind, number>>;
}

/** Client mirror of the server's maze document. */
export interface MazeDoc {
  width: number;
  height: number;
  start: StartCell;
  goal: Cell;
  obstacles?: Cell[];
  gems?: Cell[];
  hearts?: Cell[];
  monsters?: MonsterCell[];
  config?: MazeConfig;
}

// ------------------------------------------------------------
// Responses
// ------------------------------------------------------------

export interface ApiErrorShape {
  status: number;
  code: string;
  message: string;
  detail: unknown;
}

export interface TraceState {
  x: number;
  y: number;
  dir: DirectionCode;
  health: number;
  gems_collected: number;
  hearts_collected: number;
  monsters_defeated: number;
  steps_taken: number;
}

export interface TraceOutcome {
  success: boolean;
  reason: string | null;
}

export interface TraceResponse {
  outcome: TraceOutcome;
  actions: string[];
  states: TraceState[];
  fuel_used: number;
}

export interface SolveLowResponse {
  mode: "low";
  actions: string[];
  explored: number;
}

export interface SolveHighResponse {
  mode: "high";
  program: string;
  block_count: number;
  exec_steps: number;
  trace_equivalent: boolean;
}

export interface DesignCheckItem {
  name: string;
  passed: boolean;
  detail: string;
}

export interface DesignCheckResponse {
  passed: boolean;
  checks: DesignCheckItem[];
  witness_path_length: number | null;
  witness_health_margin: number | null;
}

export interface SessionResponse {
  session_id: string;
  maze_id: string;
  stage: number;
}

export interface HintResponse {
  stage: number;
  kind: "steps" | "transformation" | "program";
  content: unknown;
  rendered_text: string;
}

export interface ChatToolCallResult {
  name: string;
  result: unknown;
}

export interface ChatResponse {
  role: string;
  text: string;
  fallback: boolean;
  tool_calls: ChatToolCallResult[];
}
