// Display formatting. The duration/distance/grip rules mirror the hub CLI's
// report renderer exactly, so weekly table values byte-match `repsense report`.

import type { WeeklyReport } from "./protocol.js";

export const MASK_GLYPH = "–";  // en dash: the neutral "no number" glyph

export function formatDuration(value: number | null | undefined): string {
  return value == null ? "-" : value.toFixed(2);
}

export function formatDistance(value: number | null | undefined): string {
  return value == null ? "-" : value.toFixed(2);
}

export function formatGrip(value: number | null | undefined): string {
  return value == null ? "-" : value.toFixed(1);
}

export function formatCount(value: number | null | undefined, masked: boolean): string {
  if (masked || value == null) return MASK_GLYPH;
  return String(value);
}

export interface WeeklyTable {
  title: string;
  header: string[];
  rows: string[][];          // one row per day: [date, doubles, singles, met]
  totalRow: string[];
  adherence: string;
  meanDouble: string;        // formatted seconds
  canband: { label: string; value: string }[];
}

export function buildWeeklyTable(report: WeeklyReport): WeeklyTable {
  const rows = report.days.map((day) => [
    day.date,
    String(day.d),
    String(day.s),
    day.met_goal ? "yes" : "no",
  ]);
  const cb = report.canband;
  return {
    title: `Week ending ${report.week_ending}  (daily double goal G=${report.goal_g})`,
    header: ["date", "doubles", "singles", "met"],
    rows,
    totalRow: ["total", String(report.total_d), String(report.total_s), ""],
    adherence: `${report.adherence_met}/${report.adherence_of} days met goal`,
    meanDouble: formatDuration(report.mean_double_time_s),
    canband: [
      { label: "singles", value: String(cb.s_cb) },
      { label: "doubles", value: String(cb.d_cb_count) },
      { label: "mean double (s)", value: formatDuration(cb.mean_t_cb_s) },
      { label: "distance (m)", value: formatDistance(cb.mean_distance_m) },
      { label: "grip avg (N)", value: formatGrip(cb.grip_avg_n) },
      { label: "grip peak (N)", value: formatGrip(cb.grip_peak_n) },
    ],
  };
}

// Text twin of the CLI table, used by the conformance test to compare bytes.
export function renderReportText(report: WeeklyReport): string {
  const pad = (s: string, width: number) => s.padStart(width);
  const lines: string[] = [
    buildWeeklyTable(report).title,
    "",
    `${"date".padEnd(12)}${pad("doubles", 8)}${pad("singles", 8)}  met`,
  ];
  for (const day of report.days) {
    lines.push(
      `${day.date.padEnd(12)}${pad(String(day.d), 8)}${pad(String(day.s), 8)}` +
      `  ${day.met_goal ? "yes" : "no"}`,
    );
  }
  lines.push(`${"total".padEnd(12)}${pad(String(report.total_d), 8)}${pad(String(report.total_s), 8)}`);
  lines.push("");
  lines.push(`adherence: ${report.adherence_met}/${report.adherence_of} days met goal`);
  lines.push(`mean double time: ${formatDuration(report.mean_double_time_s)} s`);
  const cb = report.canband;
  lines.push(
    "can band: " +
    `singles ${cb.s_cb}  doubles ${cb.d_cb_count}  ` +
    `mean double ${formatDuration(cb.mean_t_cb_s)} s  ` +
    `distance ${formatDistance(cb.mean_distance_m)} m  ` +
    `grip avg ${formatGrip(cb.grip_avg_n)} N  ` +
    `grip peak ${formatGrip(cb.grip_peak_n)} N`,
  );
  return lines.join("\n") + "\n";
}
