// Kiosk bootstrap: connect the hub channel, fold messages into DisplayState,
// and re-render on every change.

import { HubSocket } from "./client.js";
import type { CommandMessage, WeeklyReport } from "./protocol.js";
import { PromptController } from "./prompt.js";
import { render } from "./render.js";
import { applyEvent, applySession, applySnapshot, initialState } from "./state.js";

const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app mount point");
}

let state = initialState();
let showWeekly = false;
const prompts = new PromptController();

const socket = new HubSocket(`ws://${location.host}/ws`, {
  lastSeq: () => state.lastSeq,
  onSnapshot: (snapshot) => {
    state = applySnapshot(state, snapshot);
    prompts.show(state.pendingPrompt);
    paint();
  },
  onEvent: (event) => {
    state = applyEvent(state, event);
    if (event.kind === "goal_prompt") {
      prompts.show(state.pendingPrompt);
    }
    paint();
  },
  onAck: (ack) => {
    state = applySession(state, ack.session);
    if (ack.command === "accept_goal" || ack.command === "decline_goal") {
      prompts.onAck();
    }
    paint();
  },
  onError: (err) => {
    if (err.command === "accept_goal" || err.command === "decline_goal") {
      prompts.onError(err.message);
    } else {
      console.error("[hub]", err.command, err.message);
    }
    paint();
  },
  onDisconnect: () => {
    state = { ...state, quietSensors: [...new Set([...state.quietSensors, "hub link"])] };
    paint();
  },
});

function send(command: CommandMessage): void {
  socket.send(command);
}

async function refreshWeekly(): Promise<void> {
  try {
    const resp = await fetch("/report");
    if (resp.ok) {
      state = { ...state, weekly: (await resp.json()) as WeeklyReport };
      paint();
    }
  } catch (e) {
    console.error("[hub] weekly refresh failed", e);
  }
}

function paint(): void {
  render(root!, state, prompts.view(), {
    onPauseToggle: () => send({ type: "command", command: state.paused ? "resume" : "pause" }),
    onMaskToggle: () => send({ type: "command", command: state.masked ? "mask_off" : "mask_on" }),
    onPromptDecide: (accept, value) => {
      const command = prompts.decide(accept, value);
      if (command) {
        send(command);
      }
      paint();
    },
    onShowWeekly: () => {
      showWeekly = !showWeekly;
      if (showWeekly) {
        void refreshWeekly();
      }
      paint();
    },
  }, showWeekly);
}

paint();
socket.connect();
