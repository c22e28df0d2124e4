// DOM rendering. One render(root, state) pass rebuilds the kiosk screen from
// DisplayState; nothing is kept in the DOM that is not in the state.
// Every interactive element carries the `touch` class, whose CSS enforces the
// minimum font and touch-target tokens.

import { MASK_GLYPH, buildWeeklyTable, formatCount, formatDuration } from "./format.js";
import type { StageName, WeeklyReport } from "./protocol.js";
import { STAGES } from "./protocol.js";
import type { DisplayState } from "./state.js";
import { progressCircles } from "./state.js";
import { STAGE_LABELS, stageSvg } from "./stages.js";
import type { PromptView } from "./prompt.js";

export interface Controls {
  onPauseToggle: () => void;
  onMaskToggle: () => void;
  onPromptDecide: (accept: boolean, value?: number) => void;
  onShowWeekly: () => void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, className?: string, text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function button(label: string, onClick: () => void, extra = ""): HTMLButtonElement {
  const b = el("button", `touch ${extra}`.trim(), label);
  b.addEventListener("click", onClick);
  return b;
}

export function renderStagePanel(state: DisplayState): HTMLElement {
  const panel = el("section", "stage-panel");
  for (const stage of STAGES) {
    const card = el("div", "stage-card");
    card.dataset.stage = stage;
    card.innerHTML = stageSvg(stage);
    card.appendChild(el("div", "stage-label", STAGE_LABELS[stage]));
    if (state.stage === stage) {
      card.classList.add("active");
    }
    panel.appendChild(card);
  }
  return panel;
}

export function renderProgress(state: DisplayState): HTMLElement {
  const panel = el("section", "progress-panel");
  const circles = progressCircles(state);
  const headline = state.masked
    ? `Today's doubles: ${MASK_GLYPH}`
    : `Today's doubles: ${formatCount(state.today.d, false)} of ${state.goalG}`;
  panel.appendChild(el("h2", "progress-headline", headline));
  if (circles !== null) {
    const row = el("div", "circles");
    for (const filled of circles) {
      row.appendChild(el("span", filled ? "circle filled" : "circle"));
    }
    panel.appendChild(row);
  }
  const counts = el("div", "counts");
  counts.appendChild(el("span", "count singles",
    `Singles today: ${formatCount(state.today.s, state.masked)}`));
  counts.appendChild(el("span", "count lifts",
    `Lifts: ${formatCount(state.today.s_cb, state.masked)} single / ` +
    `${formatCount(state.today.d_cb, state.masked)} double`));
  panel.appendChild(counts);
  if (state.lastRep && !state.lastRep.masked) {
    panel.appendChild(el("div", "rep-flash",
      `Logged a ${state.lastRep.repType} (${formatDuration(state.lastRep.durationS)} s)`));
  }
  return panel;
}

export function renderBadges(state: DisplayState): HTMLElement {
  const badges = el("div", "badges");
  if (state.paused) badges.appendChild(el("span", "badge paused", "Paused"));
  if (state.masked) badges.appendChild(el("span", "badge masked", "Counts hidden"));
  for (const peripheral of state.quietSensors) {
    badges.appendChild(el("span", "badge quiet", `sensor quiet: ${peripheral}`));
  }
  return badges;
}

export function renderWeekly(report: WeeklyReport | null): HTMLElement {
  const panel = el("section", "weekly-panel");
  panel.appendChild(el("h2", undefined, "Weekly summary"));
  if (report === null) {
    panel.appendChild(el("p", "empty", "No data yet"));
    return panel;
  }
  const table = buildWeeklyTable(report);
  panel.appendChild(el("p", "weekly-title", table.title));
  const t = el("table", "weekly-table");
  const thead = el("thead");
  const headRow = el("tr");
  for (const h of table.header) headRow.appendChild(el("th", undefined, h));
  thead.appendChild(headRow);
  t.appendChild(thead);
  const tbody = el("tbody");
  for (const row of [...table.rows, table.totalRow]) {
    const tr = el("tr");
    for (const cell of row) tr.appendChild(el("td", undefined, cell));
    tbody.appendChild(tr);
  }
  t.appendChild(tbody);
  panel.appendChild(t);
  panel.appendChild(el("p", "adherence", `Adherence: ${table.adherence}`));
  panel.appendChild(el("p", "mean-double", `Mean double time: ${table.meanDouble} s`));
  const cbTable = el("table", "canband-table");
  const cbBody = el("tbody");
  for (const { label, value } of table.canband) {
    const tr = el("tr");
    tr.appendChild(el("td", undefined, label));
    tr.appendChild(el("td", "value", value));
    cbBody.appendChild(tr);
  }
  cbTable.appendChild(cbBody);
  panel.appendChild(el("h3", undefined, "Can band"));
  panel.appendChild(cbTable);
  return panel;
}

export function renderPrompt(view: PromptView, controls: Controls): HTMLElement | null {
  if (!view.open) return null;
  const overlay = el("div", "modal-overlay");
  const dialog = el("div", "prompt-dialog");
  dialog.setAttribute("role", "dialog");
  dialog.appendChild(el("p", "prompt-message", view.message));
  if (view.notice) {
    dialog.appendChild(el("p", "prompt-notice", view.notice));
  }
  const value = el("input", "touch goal-value") as HTMLInputElement;
  value.type = "number";
  value.min = "1";
  value.placeholder = "or pick a target";
  const buttons = el("div", "prompt-buttons");
  buttons.appendChild(button("Yes, raise my goal", () => {
    const chosen = value.value ? Number(value.value) : undefined;
    controls.onPromptDecide(true, chosen);
  }, "accept"));
  buttons.appendChild(button("Keep my current goal", () => {
    controls.onPromptDecide(false);
  }, "decline"));
  dialog.appendChild(value);
  dialog.appendChild(buttons);
  overlay.appendChild(dialog);
  return overlay;
}

export function render(
  root: HTMLElement, state: DisplayState, prompt: PromptView, controls: Controls,
  showWeekly: boolean,
): void {
  root.textContent = "";
  root.appendChild(renderBadges(state));
  root.appendChild(renderStagePanel(state));
  root.appendChild(renderProgress(state));
  if (showWeekly) {
    root.appendChild(renderWeekly(state.weekly));
  }
  const bar = el("div", "control-bar");
  bar.appendChild(button(state.paused ? "Resume" : "Pause", controls.onPauseToggle, "pause-toggle"));
  bar.appendChild(button(state.masked ? "Show counts" : "Hide counts", controls.onMaskToggle, "mask-toggle"));
  bar.appendChild(button(showWeekly ? "Back" : "Weekly summary", controls.onShowWeekly, "weekly-toggle"));
  root.appendChild(bar);
  const overlay = renderPrompt(prompt, controls);
  if (overlay) {
    root.appendChild(overlay);  // single-screen kiosk: at most this one modal
  }
}
