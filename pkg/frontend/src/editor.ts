// ============================================================
// Grid editor state.
//
// The editor only manipulates the maze *document* (cell placement);
// every rule judgement — validity, solvability, damage — belongs to
// the server. After each successful PUT the mirror is replaced by the
// server's canonical echo, never by an optimistic local guess.
// ============================================================

import { ApiRequestError, putMaze } from "./api.js";
import type { Cell, MazeDoc, MonsterKind } from "./types.js";

export type PaletteTool =
  | "obstacle"
  | "gem"
  | "heart"
  | "bat"
  | "ghost"
  | "skeleton_archer"
  | "dragon"
  | "start"
  | "goal"
  | "erase";

export const PALETTE_TOOLS: readonly PaletteTool[] = [
  "obstacle",
  "gem",
  "heart",
  "bat",
  "ghost",
  "skeleton_archer",
  "dragon",
  "start",
  "goal",
  "erase",
];

const MONSTER_TOOLS: ReadonlySet<string> = new Set([
  "bat",
  "ghost",
  "skeleton_archer",
  "dragon",
]);

export function emptyMazeDoc(width: number, height: number): MazeDoc {
  return {
    width,
    height,
    start: { x: 0, y: 0, dir: "E" },
    goal: { x: width - 1, y: height - 1 },
    obstacles: [],
    gems: [],
    hearts: [],
    monsters: [],
  };
}

function without(cells: Cell[] | undefined, x: number, y: number): Cell[] {
  return (cells ?? []).filter((c) => c.x !== x || c.y !== y);
}

/**
 * Apply a palette tool to a cell, returning a new document.
 *
 * Placement clears whatever occupied the cell first (one entity per
 * cell); anything subtler — gems on the goal, caps, start/goal overlap —
 * is left for the server to accept or reject on commit.
 */
export function applyTool(
  doc: MazeDoc,
  tool: PaletteTool,
  x: number,
  y: number,
): MazeDoc {
  if (x < 0 || y < 0 || x >= doc.width || y >= doc.height) {
    return doc;
  }
  const next: MazeDoc = {
    ...doc,
    obstacles: without(doc.obstacles, x, y),
    gems: without(doc.gems, x, y),
    hearts: without(doc.hearts, x, y),
    monsters: (doc.monsters ?? []).filter((m) => m.x !== x || m.y !== y),
  };
  switch (tool) {
    case "erase":
      break;
    case "obstacle":
      next.obstacles = [...(next.obstacles ?? []), { x, y }];
      break;
    case "gem":
      next.gems = [...(next.gems ?? []), { x, y }];
      break;
    case "heart":
      next.hearts = [...(next.hearts ?? []), { x, y }];
      break;
    case "start":
      next.start = { x, y, dir: doc.start.dir };
      break;
    case "goal":
      next.goal = { x, y };
      break;
    default:
      next.monsters = [
        ...(next.monsters ?? []),
        { x, y, kind: tool as MonsterKind },
      ];
  }
  return next;
}

export function isMonsterTool(tool: PaletteTool): boolean {
  return MONSTER_TOOLS.has(tool);
}

/**
 * Editor panel: draft document, selected tool, one in-flight commit at
 * a time, and the last server rejection for inline display.
 */
export class EditorPanel {
  readonly mazeId: string;
  doc: MazeDoc;
  tool: PaletteTool = "obstacle";
  lastError: ApiRequestError | null = null;
  /** Bumped on every acknowledged PUT so dependents can re-sync. */
  revision = 0;
  private inFlight = false;

  constructor(mazeId: string, doc: MazeDoc) {
    this.mazeId = mazeId;
    this.doc = doc;
  }

  selectTool(tool: PaletteTool): void {
    this.tool = tool;
  }

  clickCell(x: number, y: number): void {
    this.doc = applyTool(this.doc, this.tool, x, y);
  }

  /**
   * Push the draft to the server. On success the mirror becomes the
   * canonical echo; on rejection the draft is kept for correction and
   * the ApiError is exposed verbatim.
   */
  async commit(): Promise<boolean> {
    if (this.inFlight) {
      return false;
    }
    this.inFlight = true;
    try {
      this.doc = await putMaze(this.mazeId, this.doc);
      this.lastError = null;
      this.revision += 1;
      return true;
    } catch (error) {
      if (error instanceof ApiRequestError) {
        this.lastError = error;
        return false;
      }
      throw error;
    } finally {
      this.inFlight = false;
    }
  }
}
