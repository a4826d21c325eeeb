// ============================================================
// Browser entry point: wires the editor, playback, and hint panels
// to the DOM. All state transitions live in the imported modules.
// ============================================================

import {
  ApiRequestError,
  designCheck,
  executeProgram,
  setApiBase,
} from "./api.js";
import { EditorPanel, PALETTE_TOOLS, emptyMazeDoc } from "./editor.js";
import { renderBannerHtml, renderGridHtml, renderHealthBarHtml } from "./grid.js";
import { HintPanel } from "./hints.js";
import { TracePlayback } from "./playback.js";

const MAZE_ID = "workbench";
const PLAYBACK_TICK_MS = 350;

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (el === null) {
    throw new Error(`missing element #${id}`);
  }
  return el as T;
}

function describeError(error: unknown): string {
  if (error instanceof ApiRequestError) {
    const detail = error.detail ? ` — ${JSON.stringify(error.detail)}` : "";
    return `${error.code}: ${error.message}${detail}`;
  }
  return String(error);
}

function main(): void {
  setApiBase(window.location.origin);

  const editor = new EditorPanel(MAZE_ID, emptyMazeDoc(8, 8));
  const hints = new HintPanel(MAZE_ID);
  let playback: TracePlayback | null = null;
  let playTimer: number | null = null;

  const gridHost = byId<HTMLDivElement>("grid");
  const paletteHost = byId<HTMLDivElement>("palette");
  const editorError = byId<HTMLDivElement>("editor-error");
  const programInput = byId<HTMLTextAreaElement>("program");
  const runButton = byId<HTMLButtonElement>("run");
  const stepButton = byId<HTMLButtonElement>("step");
  const statusHost = byId<HTMLDivElement>("run-status");
  const checkButton = byId<HTMLButtonElement>("design-check");
  const checkHost = byId<HTMLDivElement>("design-report");
  const hintButton = byId<HTMLButtonElement>("ask-hint");
  const hintHost = byId<HTMLDivElement>("hint-transcript");

  function renderGrid(): void {
    const avatar = playback?.current();
    gridHost.innerHTML = renderGridHtml(editor.doc, avatar);
    for (const cell of gridHost.querySelectorAll<HTMLTableCellElement>("td.cell")) {
      cell.addEventListener("click", () => {
        editor.clickCell(Number(cell.dataset.x), Number(cell.dataset.y));
        stopPlayback();
        void commitEdit();
      });
    }
  }

  function renderStatus(): void {
    if (playback === null) {
      statusHost.innerHTML = "";
      return;
    }
    const state = playback.current();
    const initial = editor.doc.config?.initial_health ?? 100;
    statusHost.innerHTML =
      `<span class="step-counter">step ${state.steps_taken}` +
      ` / ${playback.stepCount}</span>` +
      renderHealthBarHtml(state.health, initial) +
      renderBannerHtml(playback.banner());
  }

  function renderHints(): void {
    const entries = hints.transcript
      .map(
        (entry) =>
          `<div class="hint-entry"><span class="badge badge-${entry.badge}">` +
          `${entry.badge}</span><pre>${entry.text}</pre></div>`,
      )
      .join("");
    const prompt = hints.stalePrompt
      ? `<div class="stale-prompt">The maze changed — start a new hint session.` +
        `<button id="restart-session">New session</button></div>`
      : "";
    hintHost.innerHTML = entries + prompt;
    const restart = document.getElementById("restart-session");
    restart?.addEventListener("click", () => {
      void hints.startSession().then(renderHints);
    });
  }

  function stopPlayback(): void {
    if (playTimer !== null) {
      window.clearInterval(playTimer);
      playTimer = null;
    }
    playback = null;
    renderStatus();
  }

  async function commitEdit(): Promise<void> {
    const ok = await editor.commit();
    editorError.textContent = ok ? "" : describeError(editor.lastError);
    renderGrid();
  }

  for (const tool of PALETTE_TOOLS) {
    const button = document.createElement("button");
    button.textContent = tool.replace("_", " ");
    button.className = "tool";
    button.addEventListener("click", () => {
      editor.selectTool(tool);
      for (const other of paletteHost.querySelectorAll("button")) {
        other.classList.toggle("selected", other === button);
      }
    });
    paletteHost.appendChild(button);
  }

  runButton.addEventListener("click", () => {
    stopPlayback();
    void executeProgram(MAZE_ID, programInput.value)
      .then((trace) => {
        playback = new TracePlayback(trace);
        renderGrid();
        renderStatus();
        playTimer = window.setInterval(() => {
          if (playback === null || playback.atEnd) {
            if (playTimer !== null) {
              window.clearInterval(playTimer);
              playTimer = null;
            }
            return;
          }
          playback.stepForward();
          renderGrid();
          renderStatus();
        }, PLAYBACK_TICK_MS);
      })
      .catch((error) => {
        statusHost.innerHTML = `<div class="banner banner-failure">${describeError(error)}</div>`;
      });
  });

  stepButton.addEventListener("click", () => {
    if (playback !== null) {
      playback.stepForward();
      renderGrid();
      renderStatus();
    }
  });

  checkButton.addEventListener("click", () => {
    void designCheck(MAZE_ID)
      .then((report) => {
        checkHost.innerHTML = report.checks
          .map(
            (c) =>
              `<div class="check ${c.passed ? "pass" : "fail"}">` +
              `[${c.passed ? "PASS" : "FAIL"}] ${c.name}: ${c.detail}</div>`,
          )
          .join("");
      })
      .catch((error) => {
        checkHost.textContent = describeError(error);
      });
  });

  hintButton.addEventListener("click", () => {
    const ready =
      hints.sessionId !== null ? Promise.resolve() : hints.startSession();
    void ready
      .then(() => hints.askHint())
      .then(renderHints)
      .catch((error) => {
        hintHost.textContent = describeError(error);
      });
  });

  void commitEdit().then(() => hints.startSession());
}

main();
