// ============================================================
// 2D top-down grid rendering.
//
// Pure string -> HTML helpers so rendering stays testable without a
// browser; main.ts attaches the output and wires events. The avatar
// and health bar are drawn from server trace states only.
// ============================================================

import type { MazeDoc, TraceState } from "./types.js";

const ARROWS: Record<string, string> = { N: "↑", E: "→", S: "↓", W: "←" };

const MONSTER_GLYPHS: Record<string, string> = {
  bat: "B",
  ghost: "G",
  skeleton_archer: "K",
  dragon: "D",
};

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

interface CellView {
  cls: string;
  glyph: string;
  title: string;
}

function cellView(doc: MazeDoc, x: number, y: number): CellView {
  if (doc.obstacles?.some((c) => c.x === x && c.y === y)) {
    return { cls: "obstacle", glyph: "#", title: "obstacle" };
  }
  const monster = doc.monsters?.find((m) => m.x === x && m.y === y);
  if (monster) {
    return {
      cls: `monster monster-${monster.kind}`,
      glyph: MONSTER_GLYPHS[monster.kind] ?? "?",
      title: monster.kind,
    };
  }
  if (doc.gems?.some((c) => c.x === x && c.y === y)) {
    return { cls: "gem", glyph: "◆", title: "gem" };
  }
  if (doc.hearts?.some((c) => c.x === x && c.y === y)) {
    return { cls: "heart", glyph: "♥", title: "heart" };
  }
  if (doc.goal.x === x && doc.goal.y === y) {
    return { cls: "goal", glyph: "⚑", title: "goal" };
  }
  if (doc.start.x === x && doc.start.y === y) {
    return { cls: "start", glyph: ARROWS[doc.start.dir] ?? "S", title: "start" };
  }
  return { cls: "floor", glyph: "", title: "" };
}

/**
 * Render the maze as an HTML table. When a trace state is supplied the
 * avatar is overlaid at the position/orientation the server reported.
 */
export function renderGridHtml(doc: MazeDoc, avatar?: TraceState): string {
  const rows: string[] = [];
  for (let y = 0; y < doc.height; y += 1) {
    const cells: string[] = [];
    for (let x = 0; x < doc.width; x += 1) {
      const view = cellView(doc, x, y);
      let cls = view.cls;
      let glyph = view.glyph;
      if (avatar && avatar.x === x && avatar.y === y) {
        cls += " avatar";
        glyph = ARROWS[avatar.dir] ?? "@";
      }
      cells.push(
        `<td class="cell ${cls}" data-x="${x}" data-y="${y}"` +
          ` title="${escapeHtml(view.title)}">${glyph}</td>`,
      );
    }
    rows.push(`<tr>${cells.join("")}</tr>`);
  }
  return `<table class="maze-grid">${rows.join("")}</table>`;
}

/**
 * Health bar for the current trace state. Width percentage and label
 * come straight from the server's health values.
 */
export function renderHealthBarHtml(health: number, initialHealth: number): string {
  const clamped = Math.max(0, Math.min(health, initialHealth));
  const percent = initialHealth > 0 ? (clamped / initialHealth) * 100 : 0;
  return (
    `<div class="health-bar" data-health="${health}">` +
    `<div class="health-fill" style="width: ${percent}%"></div>` +
    `<span class="health-label">${health} / ${initialHealth}</span>` +
    `</div>`
  );
}

/** Outcome banner markup (Success / Failure(reason)). */
export function renderBannerHtml(banner: string | null): string {
  if (banner === null) {
    return "";
  }
  const cls = banner === "Success" ? "banner-success" : "banner-failure";
  return `<div class="banner ${cls}">${escapeHtml(banner)}</div>`;
}
