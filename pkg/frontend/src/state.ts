// Display state and its pure reducer. The UI holds no other state, so
// reloading the page and replaying events from the last seen seq reproduces
// the identical DisplayState.

import type {
  HubEvent,
  PendingPrompt,
  SessionSnapshot,
  Snapshot,
  StageName,
  TodayCounts,
  WeeklyReport,
} from "./protocol.js";
import { STAGES } from "./protocol.js";

export interface RepFlash {
  repType: string;
  kind: string;
  durationS: number;
  masked: boolean;
}

export interface DisplayState {
  stage: StageName | "unknown";
  goalG: number;
  today: TodayCounts;
  masked: boolean;
  paused: boolean;
  pendingPrompt: PendingPrompt | null;
  quietSensors: string[];       // peripherals currently stale or departed
  weekly: WeeklyReport | null;
  lastRep: RepFlash | null;
  lastSeq: number;              // resubscribe point after a reload
  errors: string[];
}

const EMPTY_COUNTS: TodayCounts = { s: null, d: null, s_cb: null, d_cb: null };

export function initialState(): DisplayState {
  return {
    stage: "seated",
    goalG: 1,
    today: { ...EMPTY_COUNTS },
    masked: false,
    paused: false,
    pendingPrompt: null,
    quietSensors: [],
    weekly: null,
    lastRep: null,
    lastSeq: -1,
    errors: [],
  };
}

function asStage(name: unknown): StageName | "unknown" {
  return STAGES.includes(name as StageName) ? (name as StageName) : "unknown";
}

export function applySnapshot(state: DisplayState, snapshot: Snapshot): DisplayState {
  const session = snapshot.session;
  return {
    ...state,
    stage: asStage(session.stage),
    goalG: session.goal_g,
    today: { ...session.today },
    masked: session.masked,
    paused: session.paused,
    pendingPrompt: session.pending_prompt,
    quietSensors: session.stations
      .filter((st) => st.status !== "active")
      .map((st) => st.peripheral),
    weekly: snapshot.weekly,
    lastSeq: session.next_event_seq - 1,
  };
}

export function applySession(state: DisplayState, session: SessionSnapshot): DisplayState {
  return {
    ...state,
    goalG: session.goal_g,
    today: { ...session.today },
    masked: session.masked,
    paused: session.paused,
    pendingPrompt: session.pending_prompt,
  };
}

export function applyEvent(state: DisplayState, event: HubEvent): DisplayState {
  if (event.seq <= state.lastSeq) {
    return state;  // replay overlap after a resubscribe
  }
  const next: DisplayState = { ...state, lastSeq: event.seq };
  const p = event.payload;
  switch (event.kind) {
    case "stage_changed": {
      const stage = asStage(p["stage"]);
      if (stage === "unknown") {
        next.errors = [...state.errors, `unknown stage '${String(p["stage"])}'`];
      }
      next.stage = stage;
      break;
    }
    case "repetition_logged": {
      const masked = Boolean(p["masked"]);
      next.lastRep = {
        repType: String(p["rep_type"]),
        kind: String(p["kind"]),
        durationS: Number(p["duration_s"]),
        masked,
      };
      next.masked = masked;
      if (!masked && p["today"]) {
        next.today = { ...(p["today"] as TodayCounts) };
        next.goalG = Number(p["goal_g"]);
      }
      break;
    }
    case "goal_prompt": {
      const kind = String(p["kind"]);
      if (kind === "increase_offer") {
        next.pendingPrompt = {
          kind: "increase_offer",
          n: Number(p["n"]),
          message: String(p["message"]),
        };
      } else {
        next.pendingPrompt = null;
        next.lastRep = null;
      }
      break;
    }
    case "sensor_status": {
      const peripheral = String(p["peripheral"]);
      const quiet = new Set(state.quietSensors);
      if (p["new"] === "active") {
        quiet.delete(peripheral);
      } else {
        quiet.add(peripheral);
      }
      next.quietSensors = [...quiet].sort();
      break;
    }
    case "daily_rollover":
      next.today = { s: 0, d: 0, s_cb: 0, d_cb: 0 };
      break;
  }
  return next;
}

// Progress circles: one per goal unit, filled for each double done today.
// Masked sessions show no circles at all.
export function progressCircles(state: DisplayState): boolean[] | null {
  if (state.masked || state.today.d == null) {
    return null;
  }
  const total = Math.max(state.goalG, state.today.d);
  return Array.from({ length: total }, (_, i) => i < (state.today.d ?? 0));
}
