import { describe, expect, test } from "vitest";

import { PromptController } from "../src/prompt.js";

const OFFER = {
  kind: "increase_offer" as const,
  n: 4,
  message: "Raise your goal?",
};

describe("prompt dialog", () => {
  test("accept emits exactly one command", () => {
    const c = new PromptController();
    c.show(OFFER);
    expect(c.decide(true)).toEqual({ type: "command", command: "accept_goal" });
    // double-tap while awaiting the hub: swallowed client-side
    expect(c.decide(true)).toBeNull();
    expect(c.decide(false)).toBeNull();
  });

  test("user value rides along on accept", () => {
    const c = new PromptController();
    c.show(OFFER);
    expect(c.decide(true, 6)).toEqual({
      type: "command", command: "accept_goal", value: 6,
    });
  });

  test("decline emits the keep-goal command", () => {
    const c = new PromptController();
    c.show(OFFER);
    expect(c.decide(false)).toEqual({ type: "command", command: "decline_goal" });
  });

  test("ack dismisses the dialog", () => {
    const c = new PromptController();
    c.show(OFFER);
    c.decide(false);
    c.onAck();
    expect(c.view()).toEqual({ open: false });
    expect(c.decide(true)).toBeNull();  // nothing left to decide
  });

  test("rejection reopens with an error notice and allows a retry", () => {
    const c = new PromptController();
    c.show(OFFER);
    c.decide(true, 2);
    c.onError("new target must exceed the current goal 3");
    const view = c.view();
    expect(view.open).toBe(true);
    if (view.open) {
      expect(view.notice).toContain("exceed");
      expect(view.busy).toBe(false);
    }
    expect(c.decide(true, 9)).toEqual({
      type: "command", command: "accept_goal", value: 9,
    });
  });

  test("no dialog without a prompt", () => {
    const c = new PromptController();
    expect(c.view()).toEqual({ open: false });
    expect(c.decide(true)).toBeNull();
  });
});
