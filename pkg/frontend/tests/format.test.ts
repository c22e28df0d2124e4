import { describe, expect, test } from "vitest";

import {
  MASK_GLYPH,
  buildWeeklyTable,
  formatCount,
  formatDuration,
  formatGrip,
} from "../src/format.js";
import type { WeeklyReport } from "../src/protocol.js";

function emptyWeek(): WeeklyReport {
  return {
    week_ending: "2026-01-11",
    goal_g: 1,
    days: Array.from({ length: 7 }, (_, i) => ({
      date: `2026-01-0${5 + i}`.slice(0, 10),
      d: 0, s: 0, met_goal: false,
    })),
    total_d: 0,
    total_s: 0,
    adherence_met: 0,
    adherence_of: 7,
    mean_double_time_s: null,
    canband: {
      s_cb: 0, d_cb_count: 0, mean_t_cb_s: null, mean_distance_m: null,
      grip_avg_n: null, grip_peak_n: null,
    },
  };
}

describe("formatting rules", () => {
  test("durations render with two decimals, grip with one", () => {
    expect(formatDuration(12.903)).toBe("12.90");
    expect(formatGrip(17.46)).toBe("17.5");
    expect(formatDuration(null)).toBe("-");
    expect(formatGrip(null)).toBe("-");
  });

  test("masked counts become the neutral glyph", () => {
    expect(formatCount(5, true)).toBe(MASK_GLYPH);
    expect(formatCount(null, false)).toBe(MASK_GLYPH);
    expect(formatCount(5, false)).toBe("5");
  });
});

describe("weekly table", () => {
  test("empty week renders zeroed without crashing", () => {
    const table = buildWeeklyTable(emptyWeek());
    expect(table.rows).toHaveLength(7);
    for (const row of table.rows) {
      expect(row[1]).toBe("0");
      expect(row[3]).toBe("no");
    }
    expect(table.totalRow).toEqual(["total", "0", "0", ""]);
    expect(table.meanDouble).toBe("-");
    expect(table.adherence).toBe("0/7 days met goal");
  });

  test("full week carries per-day values and adherence", () => {
    const report = emptyWeek();
    report.days[1] = { date: "2026-01-06", d: 2, s: 1, met_goal: true };
    report.total_d = 2;
    report.total_s = 1;
    report.adherence_met = 1;
    report.mean_double_time_s = 12.9;
    report.canband.grip_peak_n = 19.53;
    const table = buildWeeklyTable(report);
    expect(table.rows[1]).toEqual(["2026-01-06", "2", "1", "yes"]);
    expect(table.meanDouble).toBe("12.90");
    expect(table.canband.find((c) => c.label.startsWith("grip peak"))?.value).toBe("19.5");
  });
});
