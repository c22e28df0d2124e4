// @vitest-environment jsdom
import { describe, expect, test } from "vitest";

import { render, renderStagePanel } from "../src/render.js";
import { applyEvent, applySnapshot, initialState } from "../src/state.js";
import type { DisplayState } from "../src/state.js";
import type { Snapshot } from "../src/protocol.js";

const CONTROLS = {
  onPauseToggle: () => {},
  onMaskToggle: () => {},
  onPromptDecide: () => {},
  onShowWeekly: () => {},
};

function maskedState(): DisplayState {
  const snapshot: Snapshot = {
    session: {
      mode: "masked+active",
      stage: "seated",
      goal_g: 3,
      today: { s: null, d: null, s_cb: null, d_cb: null },
      masked: true,
      paused: false,
      pending_prompt: null,
      stations: [],
      next_event_seq: 0,
      date: "2026-01-05",
      mean_double_time_s: null,
      symmetry_last: null,
    },
    weekly: null,
    feedback: null,
  };
  return applySnapshot(initialState(), snapshot);
}

function mount(state: DisplayState, promptOpen = false): HTMLElement {
  const root = document.createElement("main");
  const prompt = promptOpen
    ? { open: true as const, message: "Raise?", notice: null, busy: false }
    : { open: false as const };
  render(root, state, prompt, CONTROLS, false);
  return root;
}

describe("stage panel", () => {
  test("exactly one of five pictograms highlighted", () => {
    let state = initialState();
    state = applyEvent(state, { seq: 0, kind: "stage_changed", at: 1, payload: { stage: "rising" } });
    const panel = renderStagePanel(state);
    expect(panel.querySelectorAll(".stage-card")).toHaveLength(5);
    const active = panel.querySelectorAll(".stage-card.active");
    expect(active).toHaveLength(1);
    expect((active[0] as HTMLElement).dataset.stage).toBe("rising");
  });

  test("unknown stage leaves the panel neutral", () => {
    let state = initialState();
    state = applyEvent(state, { seq: 0, kind: "stage_changed", at: 1, payload: { stage: "???" } });
    const panel = renderStagePanel(state);
    expect(panel.querySelectorAll(".stage-card.active")).toHaveLength(0);
  });
});

describe("masked display", () => {
  test("no numeric counts and no circles anywhere", () => {
    const root = mount(maskedState());
    const progress = root.querySelector(".progress-panel") as HTMLElement;
    expect(progress.querySelectorAll(".circle")).toHaveLength(0);
    expect(progress.textContent).not.toMatch(/\d/);
    expect(root.querySelector(".badge.masked")?.textContent).toContain("hidden");
  });

  test("unmasked display shows counts and circles", () => {
    let state = initialState();
    state = { ...state, goalG: 3, today: { s: 2, d: 1, s_cb: 0, d_cb: 0 }, masked: false };
    const root = mount(state);
    expect(root.querySelectorAll(".circle")).toHaveLength(3);
    expect(root.querySelectorAll(".circle.filled")).toHaveLength(1);
    expect(root.querySelector(".counts")?.textContent).toContain("2");
  });
});

describe("accessibility tokens", () => {
  test("every interactive element carries the touch class", () => {
    const root = mount(maskedState(), true);
    const interactive = root.querySelectorAll("button, input");
    expect(interactive.length).toBeGreaterThan(0);
    for (const node of interactive) {
      expect(node.classList.contains("touch")).toBe(true);
    }
  });

  test("stylesheet pins the minimum font and touch-target tokens", async () => {
    const fs = await import("node:fs");
    const path = await import("node:path");
    const css = fs.readFileSync(path.join(__dirname, "..", "src", "style.css"), "utf-8");
    expect(css).toMatch(/--min-font-size:\s*2[0-9]px/);
    expect(css).toMatch(/--touch-target:\s*(4[8-9]|[5-9][0-9])px/);
    expect(css).toMatch(/\.touch\s*{[^}]*min-height:\s*var\(--touch-target\)/s);
    expect(css).toMatch(/\.touch\s*{[^}]*font-size:\s*var\(--min-font-size\)/s);
  });
});

describe("kiosk constraints", () => {
  test("at most one modal at a time", () => {
    const root = mount(maskedState(), true);
    expect(root.querySelectorAll(".modal-overlay")).toHaveLength(1);
    expect(root.querySelectorAll("[role=dialog]")).toHaveLength(1);
  });

  test("quiet sensor banner appears from sensor status", () => {
    let state = initialState();
    state = applyEvent(state, {
      seq: 0, kind: "sensor_status", at: 1,
      payload: { peripheral: "can_band:0", old: "active", new: "stale" },
    });
    const root = mount(state);
    expect(root.querySelector(".badge.quiet")?.textContent).toContain("can_band:0");
  });
});
