// Message and payload shapes of the hub's UI channel (docs/ui-messages.md).

export type StageName = "seated" | "rising" | "standing" | "lowering" | "complete";

export const STAGES: readonly StageName[] = [
  "seated", "rising", "standing", "lowering", "complete",
];

export interface TodayCounts {
  s: number | null;
  d: number | null;
  s_cb: number | null;
  d_cb: number | null;
}

export interface PendingPrompt {
  kind: "increase_offer" | "motivation";
  n: number;
  message: string;
}

export interface SessionSnapshot {
  mode: string;
  stage: string;
  goal_g: number;
  today: TodayCounts;
  masked: boolean;
  paused: boolean;
  pending_prompt: PendingPrompt | null;
  stations: { peripheral: string; status: string }[];
  next_event_seq: number;
  date: string;
  mean_double_time_s: number | null;
  symmetry_last: number | null;
}

export interface CanBandWeekly {
  s_cb: number;
  d_cb_count: number;
  mean_t_cb_s: number | null;
  mean_distance_m: number | null;
  grip_avg_n: number | null;
  grip_peak_n: number | null;
}

export interface WeeklyReport {
  week_ending: string;
  goal_g: number;
  days: { date: string; d: number; s: number; met_goal: boolean }[];
  total_d: number;
  total_s: number;
  adherence_met: number;
  adherence_of: number;
  mean_double_time_s: number | null;
  canband: CanBandWeekly;
}

export interface Snapshot {
  session: SessionSnapshot;
  weekly: WeeklyReport | null;
  feedback: unknown;
}

export interface HubEvent {
  seq: number;
  kind: "stage_changed" | "repetition_logged" | "goal_prompt" | "sensor_status" | "daily_rollover";
  at: number;
  payload: Record<string, unknown>;
}

export type ServerMessage =
  | { type: "hello"; snapshot: Snapshot }
  | { type: "event"; event: HubEvent }
  | { type: "ack"; command: string; session: SessionSnapshot }
  | { type: "error"; command?: string; message: string };

export type CommandName =
  | "pause" | "resume" | "mask_on" | "mask_off"
  | "accept_goal" | "decline_goal" | "recalibrate";

export interface CommandMessage {
  type: "command";
  command: CommandName;
  value?: number;
}
