// Conformance against the hub CLI: the weekly table the UI renders must carry
// byte-identical values to `repsense report` for the same store. Requires the
// python package to be installed (see the repo README).

import { execFileSync } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, test } from "vitest";

import { buildWeeklyTable, renderReportText } from "../src/format.js";
import type { WeeklyReport } from "../src/protocol.js";

const REPO_ROOT = join(__dirname, "..", "..");
const PYTHON = process.env.PYTHON ?? "python3";

let storeDir: string;
let cliText: string;
let report: WeeklyReport;

function cli(...args: string[]): string {
  return execFileSync(PYTHON, ["-m", "repsense.cli", ...args], {
    cwd: REPO_ROOT,
    encoding: "utf-8",
  });
}

beforeAll(() => {
  storeDir = mkdtempSync(join(tmpdir(), "repsense-ui-"));
  cli("simulate", "--scenario", join(REPO_ROOT, "scenarios", "mixed_day.scn"),
      "--store", storeDir, "--seed", "3");
  cli("simulate", "--scenario", join(REPO_ROOT, "scenarios", "clean_double.scn"),
      "--store", storeDir, "--seed", "4", "--start", "2026-01-07T15:00");
  cliText = cli("report", "--store", storeDir, "--week", "2026-01-11", "--goal", "1");
  report = JSON.parse(
    cli("report", "--store", storeDir, "--week", "2026-01-11", "--goal", "1", "--json"),
  ) as WeeklyReport;
});

afterAll(() => {
  rmSync(storeDir, { recursive: true, force: true });
});

describe("weekly summary conformance", () => {
  test("rendered text twin matches the CLI table byte for byte", () => {
    expect(renderReportText(report)).toBe(cliText);
  });

  test("table cells match the CLI's day rows exactly", () => {
    const table = buildWeeklyTable(report);
    const lines = cliText.split("\n");
    for (const [i, row] of table.rows.entries()) {
      const cliRow = lines[3 + i]!;  // skip title, blank, header
      const cells = cliRow.trim().split(/\s+/);
      expect(cells).toEqual(row.filter((c) => c !== ""));
    }
    const totalCells = lines[3 + table.rows.length]!.trim().split(/\s+/);
    expect(totalCells).toEqual(table.totalRow.filter((c) => c !== ""));
  });

  test("adherence and quality footers agree", () => {
    const table = buildWeeklyTable(report);
    expect(cliText).toContain(`adherence: ${table.adherence}`);
    expect(cliText).toContain(`mean double time: ${table.meanDouble} s`);
    const grip = table.canband.find((c) => c.label.startsWith("grip peak"))!;
    expect(cliText).toContain(`grip peak ${grip.value} N`);
  });

  test("fixture week carries real activity", () => {
    expect(report.total_d).toBeGreaterThan(0);
    expect(report.canband.d_cb_count).toBeGreaterThan(0);
    expect(report.days.some((d) => d.met_goal)).toBe(true);
  });
});
