/**
 * Independent F1 implementation over exhaustive pair universes.
 *
 * Deliberately re-derived from the evaluation rules rather than ported from
 * the producer, so agreement between the two is a genuine cross-check:
 * a pair is positive when its score is strictly above the threshold, unscored
 * pairs count as 0, and an all-empty universe scores a vacuous 1.
 */

import { writeFileSync } from "node:fs";

import { keyPair } from "./dataset.js";

/** pairKey -> score in [0, 1]. */
export type ScoreMap = ReadonlyMap<number, number>;

export interface Counts {
  tp: number;
  fp: number;
  fn: number;
}

export function f1FromCounts(tp: number, fp: number, fn: number): number {
  const denom = 2 * tp + fp + fn;
  return denom === 0 ? 1.0 : (2 * tp) / denom;
}

export function pairCounts(
  scores: ScoreMap,
  truthKeys: ReadonlySet<number>,
  threshold: number,
  pivot: number | null = null,
): Counts {
  if (!(threshold >= 0 && threshold <= 1)) {
    throw new RangeError(`threshold must be in [0, 1], got ${threshold}`);
  }
  const onPivot = (key: number): boolean => {
    if (pivot === null) return true;
    const [u, v] = keyPair(key);
    return u === pivot || v === pivot;
  };
  let tp = 0;
  let fp = 0;
  let fn = 0;
  for (const [key, score] of scores) {
    if (!(score > threshold) || !onPivot(key)) continue;
    if (truthKeys.has(key)) {
      tp += 1;
    } else {
      fp += 1;
    }
  }
  for (const key of truthKeys) {
    if (!onPivot(key)) continue;
    const score = scores.get(key) ?? 0;
    if (!(score > threshold)) fn += 1;
  }
  return { tp, fp, fn };
}

export interface TimestepScore {
  readonly t: number;
  readonly f1: number;
  readonly isChangePoint: boolean;
}

export interface Report {
  readonly rows: readonly TimestepScore[];
  readonly tp: number;
  readonly fp: number;
  readonly fn: number;
}

export function meanAll(report: Report): number {
  let sum = 0;
  for (const row of report.rows) sum += row.f1;
  return sum / report.rows.length;
}

export function meanChangePoints(report: Report): number | null {
  const scores = report.rows.filter((r) => r.isChangePoint).map((r) => r.f1);
  if (scores.length === 0) return null;
  return scores.reduce((a, b) => a + b, 0) / scores.length;
}

/** Same line-oriented format the producer writes. */
export function writeMetricsReport(report: Report, path: string): void {
  const lines = ["t,f1,is_changepoint"];
  for (const { t, f1, isChangePoint } of report.rows) {
    lines.push(`${t},${f1.toFixed(12)},${isChangePoint ? 1 : 0}`);
  }
  lines.push(`# mean_all,${meanAll(report).toFixed(12)}`);
  const cp = meanChangePoints(report);
  lines.push(cp === null ? "# mean_changepoints,NA" : `# mean_changepoints,${cp.toFixed(12)}`);
  lines.push(`# evaluated,${report.rows.length}`);
  lines.push(`# tp,${report.tp}`);
  lines.push(`# fp,${report.fp}`);
  lines.push(`# fn,${report.fn}`);
  writeFileSync(path, lines.join("\n") + "\n", "utf-8");
}

export interface ParsedReport {
  rows: TimestepScore[];
  footer: Record<string, string>;
}

export function parseMetricsReport(content: string): ParsedReport {
  const lines = content.split("\n");
  if (lines[0] !== "t,f1,is_changepoint") {
    throw new Error(`bad report header ${JSON.stringify(lines[0])}`);
  }
  const rows: TimestepScore[] = [];
  const footer: Record<string, string> = {};
  for (const line of lines.slice(1)) {
    if (line === "" || line === undefined) continue;
    if (line.startsWith("#")) {
      const body = line.slice(1).trim();
      const comma = body.indexOf(",");
      footer[body.slice(0, comma)] = body.slice(comma + 1);
      continue;
    }
    const [t, f1, cp] = line.split(",");
    rows.push({ t: Number(t), f1: Number(f1), isChangePoint: cp === "1" });
  }
  return { rows, footer };
}
